"""Single-photon Mach-Zehnder analyzer with a spiral-plate pair in its arms.

Each analyzer holds one plate per internal arm, the second fixed a half-turn
from the first, followed by a variable output splitter with transmission
cos(theta) and reflection i*sin(theta).  The net effect on the two-arm
amplitude vector is the splitter matrix (optionally carrying one
azimuth-independent phase per arm) acting on the plate-phase vector
(e^{i f(chi, phi)}, e^{i f(chi+pi, phi)})/sqrt(2); the mirror and input
splitter bookkeeping collapses into that matrix plus the per-channel factors
applied at the coincidence level.  The complementary plates used on the
second photon imprint the negated azimuthal phase, so there the exponents
are conjugated.  Each photon's analyzer carries its own independent splitter
angle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .azimuthal import StepIndex, spp_phase, wrap_angle

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MzConfig:
    """One analyzer: plate pair, output-splitter angle, auxiliary phases.

    The second plate orientation is always plate_orientation + pi and is
    never set independently.  conjugate_plates selects the complementary
    plates (negated azimuthal phase) used on the second photon.
    """

    plate_orientation: float
    theta: float
    step_index: StepIndex
    aux_phase_1: float = 0.0
    aux_phase_2: float = 0.0
    conjugate_plates: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "plate_orientation", wrap_angle(self.plate_orientation))
        object.__setattr__(self, "theta", wrap_angle(self.theta))
        for name in ("aux_phase_1", "aux_phase_2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def second_plate_orientation(self) -> float:
        return wrap_angle(self.plate_orientation + math.pi)


def rotation_matrix(theta: float) -> np.ndarray:
    """Real 2x2 rotation through theta, as a complex array."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=complex)


def mz_unitary(theta: float, aux_phase_1: float = 0.0, aux_phase_2: float = 0.0) -> np.ndarray:
    """Output-splitter transfer matrix with per-arm azimuth-independent phases.

    Reduces to `rotation_matrix` when both phases vanish.
    """
    c, s = math.cos(theta), math.sin(theta)
    p1 = cmath.exp(1j * aux_phase_1)
    p2 = cmath.exp(1j * aux_phase_2)
    return np.array([[p1 * c, -p2 * s], [p1 * s, p2 * c]])


def arm_amplitude(cfg: MzConfig, arm: int, phi):
    """Azimuthal amplitude in output arm 1 or 2 of one analyzer.

    Accepts a scalar or array azimuth phi.  The two arm amplitudes always
    satisfy |A1|^2 + |A2|^2 = 1: a unitary applied to a unit-norm vector.
    """
    if arm not in (1, 2):
        raise ValueError(f"arm must be 1 or 2, got {arm!r}")
    e1 = spp_phase(cfg.plate_orientation, phi, cfg.step_index)
    e2 = spp_phase(cfg.second_plate_orientation, phi, cfg.step_index)
    if cfg.conjugate_plates:
        e1 = np.conjugate(e1)
        e2 = np.conjugate(e2)
    u = mz_unitary(cfg.theta, cfg.aux_phase_1, cfg.aux_phase_2)
    out = (u[arm - 1, 0] * e1 + u[arm - 1, 1] * e2) / _SQRT2
    return complex(out) if np.ndim(out) == 0 else out
