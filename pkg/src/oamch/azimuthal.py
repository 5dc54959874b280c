"""Spiral-phase-plate phase profiles and the azimuthal overlap integral.

A spiral phase plate (SPP) whose edge dislocation sits at orientation chi
multiplies a transmitted field by the unit-modulus factor exp(i*f(chi, phi))
with, for step index L (phase shift per unit angle),

    f(chi, phi) = L*(phi - chi)            for phi >= chi,
    f(chi, phi) = L*(phi - chi) + 2*pi*L   for phi <  chi,

i.e. a linear azimuthal ramp with a 2*pi*L jump across the dislocation.
Every interference quantity downstream reduces to the full-turn overlap of
two such profiles,

    I(mu, nu, L) = integral_0^{2 pi} exp(i*(f(mu, phi) - f(nu, phi))) dphi,

whose closed form for canonical mu >= nu is

    I = exp(-i*L*(mu - nu)) * (2*pi - (mu - nu)*(1 - exp(i*2*pi*L))),

with conjugate symmetry under swapping mu and nu.  For half-integer
L = l + 1/2 this collapses to 2*pi*exp(-i*L*(mu - nu))*(1 - |mu - nu|/pi),
which vanishes at |mu - nu| = pi: plate states a half-turn apart are
orthogonal.  The sign of the leading phase factor is adjudicated against
direct piecewise Gauss-Legendre quadrature (`overlap_integral_quadrature`);
the conjugate-phase variant is retained only so the validation suite can
demonstrate that it disagrees with the numerical oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

TAU = 2.0 * math.pi


@dataclass(frozen=True)
class StepIndex:
    """Phase shift per unit azimuthal angle of a spiral phase plate.

    `half_integer_l` is the nonnegative integer l with value = l + 1/2 when
    the step index is exactly half-integer, else None.  Half-integer plates
    are the ones that make orientations a half-turn apart orthogonal, and
    are required by the closed-form coincidence probabilities.
    """

    value: float
    half_integer_l: int | None = field(init=False, default=None)

    def __post_init__(self) -> None:
        v = float(self.value)
        if not math.isfinite(v) or v <= 0.0:
            raise ValueError(f"step index must be finite and positive, got {self.value!r}")
        object.__setattr__(self, "value", v)
        l = round(v - 0.5)
        if l >= 0 and v == l + 0.5:
            object.__setattr__(self, "half_integer_l", int(l))

    @classmethod
    def half_integer(cls, l: int) -> "StepIndex":
        if l != int(l) or l < 0:
            raise ValueError(f"l must be a nonnegative integer, got {l!r}")
        return cls(int(l) + 0.5)

    @property
    def is_half_integer(self) -> bool:
        return self.half_integer_l is not None


def wrap_angle(raw: float) -> float:
    """Reduce an angle in radians to the canonical interval [0, 2*pi)."""
    x = float(raw)
    if not math.isfinite(x):
        raise ValueError(f"angle must be finite, got {raw!r}")
    r = math.fmod(x, TAU)
    if r < 0.0:
        r += TAU
    if r >= TAU:  # fmod is exact but the += above can round up to 2*pi
        r = 0.0
    return r


def wrap_signed(raw: float) -> float:
    """Reduce an angle in radians to the signed interval (-pi, pi]."""
    r = wrap_angle(raw)
    return r - TAU if r > math.pi else r


def _wrap_array(phi) -> np.ndarray:
    ph = np.asarray(phi, dtype=float)
    if not np.all(np.isfinite(ph)):
        raise ValueError("azimuth angles must be finite")
    ph = np.mod(ph, TAU)
    return np.where(ph >= TAU, 0.0, ph)


def spp_phase(chi: float, phi, step_index: StepIndex):
    """Unit-modulus transmission factor of a plate oriented at chi.

    Accepts a scalar or array azimuth phi.  On the dislocation itself
    (phi == chi exactly) the phi >= chi branch wins, so the factor stays
    unit-modulus everywhere.
    """
    c = wrap_angle(chi)
    ph = _wrap_array(phi)
    ell = step_index.value
    exponent = ell * (ph - c) + (TAU * ell) * (ph < c)
    out = np.exp(1j * exponent)
    return complex(out) if np.ndim(out) == 0 else out


def overlap_integral(mu: float, nu: float, step_index: StepIndex) -> complex:
    """Closed form of the full-turn overlap of two plate phase profiles.

    Conjugate-symmetric by construction: the mu < nu branch returns the
    conjugate of the swapped call.
    """
    m = wrap_angle(mu)
    n = wrap_angle(nu)
    if m < n:
        return overlap_integral(n, m, step_index).conjugate()
    ell = step_index.value
    d = m - n
    return cmath.exp(-1j * ell * d) * (TAU - d * (1.0 - cmath.exp(1j * TAU * ell)))


def overlap_integral_opposite_phase(mu: float, nu: float, step_index: StepIndex) -> complex:
    """Variant of `overlap_integral` with the leading phase factor conjugated.

    Not a valid overlap: kept only for the sign-adjudication suite, which
    shows this variant disagrees with direct quadrature while the primary
    closed form agrees.  Do not use for physics.
    """
    m = wrap_angle(mu)
    n = wrap_angle(nu)
    if m < n:
        return overlap_integral_opposite_phase(n, m, step_index).conjugate()
    ell = step_index.value
    d = m - n
    return cmath.exp(1j * ell * d) * (TAU - d * (1.0 - cmath.exp(1j * TAU * ell)))


_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_segments(cut_points, order: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights over [0, 2*pi) split at cut_points.

    The cuts are wrapped into [0, 2*pi); every returned node is interior to
    a segment, so integrands that are smooth between dislocations are seen
    as smooth everywhere.
    """
    if order not in _GAUSS_CACHE:
        _GAUSS_CACHE[order] = np.polynomial.legendre.leggauss(order)
    base_x, base_w = _GAUSS_CACHE[order]
    cuts = sorted({0.0, TAU} | {wrap_angle(c) for c in cut_points})
    nodes = []
    weights = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a <= 0.0:
            continue
        half = 0.5 * (b - a)
        nodes.append(half * base_x + 0.5 * (a + b))
        weights.append(half * base_w)
    return np.concatenate(nodes), np.concatenate(weights)


def overlap_integral_quadrature(
    mu: float, nu: float, step_index: StepIndex, order: int = 64
) -> complex:
    """Numerical oracle for `overlap_integral`.

    Integrates exp(i*(f(mu, phi) - f(nu, phi))) directly, splitting [0, 2*pi)
    at the two dislocation angles so each Gauss-Legendre panel sees a smooth
    integrand.  Absolute error is far below 1e-10.
    """
    m = wrap_angle(mu)
    n = wrap_angle(nu)
    x, w = gauss_segments((m, n), order=order)
    vals = spp_phase(m, x, step_index) * np.conjugate(spp_phase(n, x, step_index))
    return complex(np.sum(w * vals))


def spp_state_overlap(a: float, b: float, step_index: StepIndex) -> complex:
    """Normalized overlap of the fiber-mode states prepared by two plates.

    The radial mode factor is common to both states and cancels, leaving the
    azimuthal overlap divided by the full turn.  Equals 1 at a == b and 0 for
    orientations a half-turn apart when the step index is half-integer.
    """
    return overlap_integral(a, b, step_index) / TAU
