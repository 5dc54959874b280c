"""Clauser-Horne probabilities and the CH parameter S.

The CH combination used here is built from unnormalized coincidence
probabilities, so detector losses divide out of the ratio and no fair
sampling assumption is needed:

    S = [P(ta, tb) - P(ta, tb') + P(ta', tb) + P(ta', tb')
         - P(ta', inf) - P(inf, tb)] / P(inf, inf),

where P(x, inf) = p11 + p12, P(inf, y) = p11 + p21 and P(inf, inf) is the
sum of all four p_ij (independent of both splitter angles).  Note which
marginals enter: the primed a-side angle and the unprimed b-side angle.
Any objective local theory requires S <= 0; with aligned plates the
canonical splitter angles below reach S = (sqrt(2) - 1) / 2 for every
orientation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .azimuthal import StepIndex, wrap_angle
from .coincidence import ExperimentSettings, amplitude_matrix

CANONICAL_THETAS = (0.0, math.pi / 4.0, math.pi / 8.0, 3.0 * math.pi / 8.0)
MAX_CH_VIOLATION = (math.sqrt(2.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ChSettings:
    """One CH experiment: two splitter angles per side plus fixed plates."""

    theta_a: float
    theta_a_prime: float
    theta_b: float
    theta_b_prime: float
    alpha: float
    beta: float
    step_index: StepIndex

    def __post_init__(self) -> None:
        for name in ("theta_a", "theta_a_prime", "theta_b", "theta_b_prime"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        object.__setattr__(self, "alpha", wrap_angle(self.alpha))
        object.__setattr__(self, "beta", wrap_angle(self.beta))

    def theta_pairs(self) -> tuple[tuple[float, float], ...]:
        """The four (theta_a-choice, theta_b-choice) runs, in protocol order."""
        return (
            (self.theta_a, self.theta_b),
            (self.theta_a, self.theta_b_prime),
            (self.theta_a_prime, self.theta_b),
            (self.theta_a_prime, self.theta_b_prime),
        )

    def experiment(self, theta_a: float, theta_b: float) -> ExperimentSettings:
        return ExperimentSettings(
            alpha=self.alpha,
            beta=self.beta,
            theta_a=theta_a,
            theta_b=theta_b,
            step_index=self.step_index,
        )


@dataclass(frozen=True)
class ChResult:
    """The six CH probabilities and the parameter S they combine into."""

    s: float
    p_joint: tuple[float, float, float, float]
    p_marg_a: float
    p_marg_b: float
    p_total: float

    def __post_init__(self) -> None:
        if not self.p_total > 0.0:
            raise ValueError("total coincidence probability must be positive")
        stored = (*self.p_joint, self.p_marg_a, self.p_marg_b)
        if any(p < 0.0 for p in stored):
            raise ValueError("probabilities must be nonnegative")


def ch_from_probabilities(
    p_ab: float,
    p_ab_prime: float,
    p_a_prime_b: float,
    p_a_prime_b_prime: float,
    p_marg_a_prime: float,
    p_marg_b: float,
    p_total: float,
) -> float:
    """The CH combination; invariant under a common rescaling of all terms."""
    return (
        p_ab - p_ab_prime + p_a_prime_b + p_a_prime_b_prime - p_marg_a_prime - p_marg_b
    ) / p_total


def marginal_probabilities(
    settings: ExperimentSettings, amplitude_fn=amplitude_matrix
) -> tuple[float, float, float]:
    """(P(theta_a, inf), P(inf, theta_b), P(inf, inf)) for one setting."""
    p = amplitude_fn(settings).p
    return (
        float(p[0, 0] + p[0, 1]),
        float(p[0, 0] + p[1, 0]),
        float(p.sum()),
    )


def ch_parameter(cfg: ChSettings, amplitude_fn=amplitude_matrix) -> ChResult:
    """Evaluate the six CH probabilities and S for one experiment.

    `amplitude_fn` selects the closed-form path (default) or the quadrature
    oracle; the two must agree.
    """
    mats = [amplitude_fn(cfg.experiment(ta, tb)).p for ta, tb in cfg.theta_pairs()]
    p_joint = tuple(float(m[0, 0]) for m in mats)
    p_marg_a = float(mats[2][0, 0] + mats[2][0, 1])  # theta_a' run; independent of theta_b
    p_marg_b = float(mats[0][0, 0] + mats[0][1, 0])  # theta_b run; independent of theta_a
    p_total = float(mats[0].sum())
    s = ch_from_probabilities(*p_joint, p_marg_a, p_marg_b, p_total)
    return ChResult(s=s, p_joint=p_joint, p_marg_a=p_marg_a, p_marg_b=p_marg_b, p_total=p_total)


def canonical_settings(alpha: float, step_index: StepIndex = StepIndex(0.5)) -> ChSettings:
    """Aligned-plate experiment at the maximally violating splitter angles."""
    return ChSettings(*CANONICAL_THETAS, alpha=alpha, beta=alpha, step_index=step_index)


def ch_violated(result: ChResult) -> tuple[bool, float]:
    """(violated, margin): local realism is violated iff S > 0; margin is S."""
    return result.s > 0.0, result.s
