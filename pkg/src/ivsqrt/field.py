"""Field configuration of the inverse-square-root level-crossing model.

The laser field has constant Rabi frequency ``U0`` and detuning
``Delta0 + Delta1 / sqrt(t)`` for ``t > 0``.  Everything in this module is a
closed-form function of the triple (U0, Delta0, Delta1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ConventionError, DomainError


@dataclass(frozen=True)
class FieldConfig:
    U0: float
    Delta0: float
    Delta1: float

    def __post_init__(self):
        for name in ("U0", "Delta0", "Delta1"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if not self.U0 > 0:
            raise DomainError("U0 must be positive")


@dataclass(frozen=True)
class DerivedParams:
    t0: Optional[float]
    Lambda: float
    R: float
    lambda1: float
    lambda2: float
    nu0: float
    xi0: float
    nu: complex
    xi: complex
    C1: Optional[float]


def detuning(t: float, cfg: FieldConfig) -> float:
    if not t > 0:
        raise DomainError("detuning is defined for t > 0 only")
    return cfg.Delta0 + cfg.Delta1 / math.sqrt(t)


def phase(t: float, cfg: FieldConfig) -> float:
    """Antiderivative of the detuning with phase(0) = 0."""
    if t < 0:
        raise DomainError("phase is defined for t >= 0 only")
    return cfg.Delta0 * t + 2 * cfg.Delta1 * math.sqrt(t)


def crossing_time(cfg: FieldConfig) -> Optional[float]:
    """Time of the resonance crossing, or None for a non-crossing field."""
    if cfg.Delta0 * cfg.Delta1 < 0:
        return cfg.Delta1**2 / cfg.Delta0**2
    return None


def lz_slope(cfg: FieldConfig) -> float:
    """Slope of the detuning at the crossing, Delta0^3 / (2 Delta1^2)."""
    if cfg.Delta1 == 0:
        raise DomainError("no crossing slope for Delta1 = 0")
    return cfg.Delta0**3 / (2 * cfg.Delta1**2)


def lz_parameter(cfg: FieldConfig) -> float:
    """Effective Landau-Zener parameter U0^2 Delta1^2 / (4 Delta0^3).

    Negative when Delta0 < 0; callers wanting a magnitude take ``abs``.
    """
    if cfg.Delta0 == 0:
        raise DomainError("Landau-Zener parameter needs Delta0 != 0")
    return cfg.U0**2 * cfg.Delta1**2 / (4 * cfg.Delta0**3)


def quasi_energies(cfg: FieldConfig) -> tuple[float, float, float]:
    """Return (lambda1, lambda2, R) with lambda_{1,2} = Delta0/2 +- R."""
    R = math.hypot(cfg.Delta0 / 2, cfg.U0)
    half = cfg.Delta0 / 2
    # lambda1 * lambda2 = -U0^2 gives the small root without cancellation
    if half >= 0:
        lam1 = half + R
        lam2 = -cfg.U0**2 / lam1
    else:
        lam2 = half - R
        lam1 = -cfg.U0**2 / lam2
    return lam1, lam2, R


def dimensionless_params(cfg: FieldConfig) -> tuple[float, float, complex, complex]:
    """Return (nu0, xi0, nu, xi) with nu = i nu0 and xi = (1 - i) xi0."""
    _, _, R = quasi_energies(cfg)
    nu0 = cfg.U0**2 * cfg.Delta1**2 / (4 * R**3)
    xi0 = cfg.Delta0 * cfg.Delta1 / (4 * R**1.5)
    return nu0, xi0, 1j * nu0, (1 - 1j) * xi0


def c1_from_asymptote(cfg: FieldConfig) -> float:
    """Normalization of the pure first quasi-energy solution, from the
    large-t moduli of a1 and a2."""
    lam1, _, R = quasi_energies(cfg)
    return cfg.U0 / math.hypot(cfg.U0, lam1) * math.exp(
        -math.pi * cfg.Delta1**2 * cfg.U0**2 / (16 * R**3))


def c1_from_controls(nu0: float, xi0: float, branch: str = "solution") -> float:
    """Same normalization written through the control parameters (nu0, xi0).

    ``branch="principal"`` takes the positive root of ``nu0 + xi0^2``;
    ``branch="solution"`` takes the root of sign ``-sign(xi0)``, the one
    that matches the first quasi-energy solution when Delta0 > 0 (both
    readings coincide for xi0 < 0).
    """
    root = math.sqrt(nu0 + xi0**2)
    if branch == "solution" and xi0 > 0:
        root = -root
    elif branch not in ("solution", "principal"):
        raise ValueError(f"unknown branch {branch!r}")
    return math.exp(-math.pi * nu0 / 4) / math.sqrt(2) * math.sqrt(1 + xi0 / root)


def c1_normalization(cfg: FieldConfig) -> float:
    """Scattering normalization C1 (requires Delta0 > 0)."""
    if not cfg.Delta0 > 0:
        raise ConventionError("C1 is defined for Delta0 > 0")
    return c1_from_asymptote(cfg)


def derived_params(cfg: FieldConfig) -> DerivedParams:
    lam1, lam2, R = quasi_energies(cfg)
    nu0, xi0, nu, xi = dimensionless_params(cfg)
    return DerivedParams(
        t0=crossing_time(cfg),
        Lambda=lz_parameter(cfg) if cfg.Delta0 != 0 else math.nan,
        R=R,
        lambda1=lam1,
        lambda2=lam2,
        nu0=nu0,
        xi0=xi0,
        nu=nu,
        xi=xi,
        C1=c1_normalization(cfg) if cfg.Delta0 > 0 else None,
    )
