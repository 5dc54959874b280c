"""Finite-statistics simulation of CH counting runs.

Each run repeats one (theta_a-choice, theta_b-choice) setting for a fixed
number of trials.  A trial yields one of five outcomes: a coincidence in arm
pair (i, j) with probability eta_a * eta_b * p_ij / p_total, or no
coincidence with probability 1 - eta_a * eta_b (uniform per-arm detection
efficiencies, applied as a single thinning of coincidences; a uniform
efficiency cancels in the CH ratio, which is the point of using
unnormalized probabilities).  Counts are drawn as one multinomial per run,
which is distribution-identical to independent per-trial draws and
bit-reproducible for a given seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chtest import ChSettings, ch_from_probabilities
from .coincidence import ExperimentSettings, amplitude_matrix

RNG_ALGORITHM = "numpy.random.Generator(PCG64) seeded with SeedSequence([seed, run_index])"

RUN_LABELS = ("ab", "ab'", "a'b", "a'b'")


class InsufficientStatisticsError(ValueError):
    """No coincidences observed across the pooled runs; S is undefined."""


@dataclass(frozen=True)
class McConfig:
    """Trial count, per-arm detection efficiencies, and the RNG seed."""

    trials: int
    efficiency_a: float = 1.0
    efficiency_b: float = 1.0
    seed: int = 0

    def __post_init__(self) -> None:
        if int(self.trials) != self.trials or self.trials < 1:
            raise ValueError(f"trials must be a positive integer, got {self.trials!r}")
        object.__setattr__(self, "trials", int(self.trials))
        for name in ("efficiency_a", "efficiency_b"):
            eta = getattr(self, name)
            if not 0.0 < eta <= 1.0:
                raise ValueError(f"{name} must lie in (0, 1], got {eta!r}")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed!r}")
        object.__setattr__(self, "seed", int(self.seed))


@dataclass(frozen=True)
class CountRecord:
    """Coincidence counts N_ij for one run, plus the no-coincidence count."""

    setting_label: str
    n: np.ndarray
    trials: int
    no_coincidence: int

    def __post_init__(self) -> None:
        n = np.asarray(self.n, dtype=np.int64)
        if n.shape != (2, 2) or np.any(n < 0):
            raise ValueError("n must be a 2x2 matrix of nonnegative counts")
        object.__setattr__(self, "n", n)
        if int(n.sum()) + self.no_coincidence != self.trials:
            raise ValueError("counts plus no-coincidence outcomes must equal trials")


@dataclass(frozen=True)
class ChEstimate:
    """Estimated CH parameter with a first-order delta-method standard error."""

    s_hat: float
    stderr: float
    terms: dict[str, float]

    def __post_init__(self) -> None:
        if not self.stderr >= 0.0:
            raise ValueError("stderr must be nonnegative")


def _outcome_probabilities(settings: ExperimentSettings, mc: McConfig) -> np.ndarray:
    p = amplitude_matrix(settings).p
    eta = mc.efficiency_a * mc.efficiency_b
    coinc = eta * (p.ravel() / p.sum())
    probs = np.append(coinc, max(0.0, 1.0 - coinc.sum()))
    return probs / probs.sum()


def sample_run(
    settings: ExperimentSettings, mc: McConfig, setting_label: str = "ab", stream: int = 0
) -> CountRecord:
    """Simulate one counting run; deterministic for a given (seed, stream).

    `stream` is the sub-stream index, so multi-run protocols can draw
    independent reproducible streams from one seed.
    """
    rng = np.random.default_rng([mc.seed, stream])
    counts = rng.multinomial(mc.trials, _outcome_probabilities(settings, mc))
    return CountRecord(
        setting_label=setting_label,
        n=counts[:4].reshape(2, 2),
        trials=mc.trials,
        no_coincidence=int(counts[4]),
    )


def simulate_ch_runs(cfg: ChSettings, mc: McConfig) -> list[CountRecord]:
    """The four CH setting runs, in protocol order, on independent sub-streams."""
    return [
        sample_run(cfg.experiment(ta, tb), mc, setting_label=label, stream=k)
        for k, (label, (ta, tb)) in enumerate(zip(RUN_LABELS, cfg.theta_pairs()))
    ]


def frequency(rec: CountRecord) -> np.ndarray:
    """Coincidence frequencies F_ij = N_ij / trials."""
    if rec.trials < 1:
        raise ValueError("frequencies require at least one trial")
    return rec.n / rec.trials


# Weight of each run's count cells in the CH numerator: joint terms use the
# matching run's (1,1) cell; the a'-marginal pools runs 3 and 4, the
# b-marginal pools runs 1 and 3.
_NUMERATOR_WEIGHTS = np.array(
    [
        [[0.5, 0.0], [-0.5, 0.0]],
        [[-1.0, 0.0], [0.0, 0.0]],
        [[0.0, -0.5], [-0.5, 0.0]],
        [[0.5, -0.5], [0.0, 0.0]],
    ]
)


def estimate_S(runs: list[CountRecord]) -> ChEstimate:
    """Estimate S from the four CH runs (protocol order: ab, ab', a'b, a'b').

    Joint terms come from the matching run, marginals are pooled over the
    runs sharing that angle, and the total pools all four.  The standard
    error propagates each run's multinomial covariance through the ratio to
    first order.
    """
    if len(runs) != 4:
        raise ValueError(f"expected the four CH runs, got {len(runs)}")
    trials = runs[0].trials
    if any(r.trials != trials for r in runs):
        raise ValueError("all four runs must share the same trial count")
    if sum(int(r.n.sum()) for r in runs) == 0:
        raise InsufficientStatisticsError("no coincidences in any run; cannot estimate S")

    f = [frequency(r) for r in runs]
    terms = {
        "p_ab": float(f[0][0, 0]),
        "p_ab_prime": float(f[1][0, 0]),
        "p_a_prime_b": float(f[2][0, 0]),
        "p_a_prime_b_prime": float(f[3][0, 0]),
        "p_a_prime_inf": float((f[2][0, 0] + f[2][0, 1] + f[3][0, 0] + f[3][0, 1]) / 2.0),
        "p_inf_b": float((f[0][0, 0] + f[0][1, 0] + f[2][0, 0] + f[2][1, 0]) / 2.0),
        "p_inf_inf": float(sum(fr.sum() for fr in f) / 4.0),
    }
    s_hat = ch_from_probabilities(
        terms["p_ab"],
        terms["p_ab_prime"],
        terms["p_a_prime_b"],
        terms["p_a_prime_b_prime"],
        terms["p_a_prime_inf"],
        terms["p_inf_b"],
        terms["p_inf_inf"],
    )

    # S = (w.n)/(v.n) with v = 1/4 on every coincidence cell, so
    # dS/dn_c = (w_c - S/4)/(v.n); per-run multinomial covariance then gives
    # Var(S) = sum_runs N*(E[u^2] - E[u]^2) / (v.n)^2 with u = w - S/4.
    pooled = sum(int(r.n.sum()) for r in runs) / 4.0
    var = 0.0
    for w, rec in zip(_NUMERATOR_WEIGHTS, runs):
        u = np.append((w - s_hat / 4.0).ravel(), 0.0)
        phat = np.append(rec.n.ravel(), rec.no_coincidence) / trials
        var += trials * (float(np.sum(u * u * phat)) - float(np.sum(u * phat)) ** 2)
    stderr = math.sqrt(max(0.0, var)) / pooled
    return ChEstimate(s_hat=s_hat, stderr=stderr, terms=terms)
