"""Analytic-vs-quadrature validation suites.

Each suite compares a closed-form path against its independent numerical
oracle over a fixed-seed random sweep and reports the worst discrepancy.
The sign suite additionally evaluates the conjugate-phase overlap variant
and passes only if that variant *fails* against the oracle, recording the
adjudication numbers in its detail string.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .azimuthal import (
    TAU,
    StepIndex,
    overlap_integral,
    overlap_integral_opposite_phase,
    overlap_integral_quadrature,
)
from .coincidence import (
    ExperimentSettings,
    amplitude_matrix,
    amplitude_matrix_quadrature,
    closed_form_probabilities,
)

SUITE_NAMES = ("azimuthal", "coincidence", "appendix-a", "sign-check")

_SEED = 20240913


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    detail: str = ""


def _random_half_integer(rng) -> StepIndex:
    return StepIndex.half_integer(int(rng.integers(0, 4)))


def run_azimuthal_suite(
    samples: int = 500, tolerance: float = 1e-9, closed_form=overlap_integral
) -> SuiteResult:
    """Closed-form plate overlap against direct quadrature."""
    rng = np.random.default_rng(_SEED)
    worst = 0.0
    for _ in range(samples):
        mu, nu = rng.uniform(0.0, TAU, size=2)
        step = _random_half_integer(rng)
        err = abs(closed_form(mu, nu, step) - overlap_integral_quadrature(mu, nu, step))
        worst = max(worst, err)
    return SuiteResult(
        name="azimuthal",
        passed=worst <= tolerance,
        max_error=worst,
        tolerance=tolerance,
        detail=f"{samples} random orientation pairs, half-integer step indices",
    )


def run_coincidence_suite(
    samples: int = 200, tolerance: float = 1e-8, overlap=overlap_integral
) -> SuiteResult:
    """Closed-form coincidence amplitudes against azimuthal quadrature."""
    rng = np.random.default_rng(_SEED + 1)
    worst = 0.0
    for k in range(samples):
        aux = tuple(rng.uniform(0.0, TAU, size=4)) if k % 2 else (0.0, 0.0, 0.0, 0.0)
        settings = ExperimentSettings(
            alpha=rng.uniform(0.0, TAU),
            beta=rng.uniform(0.0, TAU),
            theta_a=rng.uniform(0.0, TAU),
            theta_b=rng.uniform(0.0, TAU),
            step_index=_random_half_integer(rng),
            aux_phases=aux,
        )
        c_closed = amplitude_matrix(settings, overlap=overlap).c
        c_quad = amplitude_matrix_quadrature(settings).c
        worst = max(worst, float(np.max(np.abs(c_closed - c_quad))))
    return SuiteResult(
        name="coincidence",
        passed=worst <= tolerance,
        max_error=worst,
        tolerance=tolerance,
        detail=f"{samples} random settings, auxiliary phases on half of them",
    )


def run_closed_form_suite(samples: int = 500, tolerance: float = 1e-8) -> SuiteResult:
    """Closed-form probability sums against quadrature p-sums, relative error."""
    rng = np.random.default_rng(_SEED + 2)
    worst = 0.0
    for _ in range(samples):
        delta = rng.uniform(-np.pi, np.pi)
        beta = rng.uniform(0.0, TAU)
        settings = ExperimentSettings(
            alpha=beta + delta,
            beta=beta,
            theta_a=rng.uniform(0.0, TAU),
            theta_b=rng.uniform(0.0, TAU),
            step_index=StepIndex.half_integer(int(rng.integers(0, 3))),
        )
        closed = closed_form_probabilities(settings.delta(), settings.theta_a, settings.theta_b)
        p = amplitude_matrix_quadrature(settings).p
        quad = (
            float(p[0, 0]),
            float(p[0, 0] + p[0, 1]),
            float(p[0, 0] + p[1, 0]),
            float(p.sum()),
        )
        scale = quad[3]
        for c, q in zip(closed, quad):
            worst = max(worst, abs(c - q) / max(abs(q), 1e-9 * scale))
    return SuiteResult(
        name="appendix-a",
        passed=worst <= tolerance,
        max_error=worst,
        tolerance=tolerance,
        detail=f"{samples} random (delta, theta_a, theta_b) triples, l in 0..2",
    )


def run_sign_suite(
    samples: int = 500, tolerance: float = 1e-9, closed_form=overlap_integral
) -> SuiteResult:
    """Adjudicate the overlap phase sign against the quadrature oracle.

    Passes only if the primary closed form agrees with quadrature AND the
    conjugate-phase variant disagrees badly, proving the oracle would catch
    a flipped sign.
    """
    rng = np.random.default_rng(_SEED + 3)
    worst_primary = 0.0
    worst_flipped = 0.0
    for _ in range(samples):
        mu, nu = rng.uniform(0.0, TAU, size=2)
        step = _random_half_integer(rng)
        oracle = overlap_integral_quadrature(mu, nu, step)
        worst_primary = max(worst_primary, abs(closed_form(mu, nu, step) - oracle))
        worst_flipped = max(
            worst_flipped, abs(overlap_integral_opposite_phase(mu, nu, step) - oracle)
        )
    passed = worst_primary <= tolerance and worst_flipped > 1e-3
    return SuiteResult(
        name="sign-check",
        passed=passed,
        max_error=worst_primary,
        tolerance=tolerance,
        detail=(
            f"primary-sign max error {worst_primary:.3e}; "
            f"conjugate-phase variant max error {worst_flipped:.3e} (must be large)"
        ),
    )


def run_suites(names=None) -> list[SuiteResult]:
    """Run the named suites (all of them by default), in canonical order."""
    selected = SUITE_NAMES if names is None else tuple(names)
    unknown = [n for n in selected if n not in SUITE_NAMES]
    if unknown:
        raise ValueError(f"unknown suites {unknown}; available: {', '.join(SUITE_NAMES)}")
    runners = {
        "azimuthal": run_azimuthal_suite,
        "coincidence": run_coincidence_suite,
        "appendix-a": run_closed_form_suite,
        "sign-check": run_sign_suite,
    }
    return [runners[name]() for name in SUITE_NAMES if name in selected]
