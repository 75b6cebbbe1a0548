"""Closed-form solutions of the two-state problem for the inverse-square-root field.

Two representations of the fundamental solutions are provided:

* the Hermite-pair form ``exp(alpha0 sqrt(t) + alpha2 t / 2) (A H_m(y) + H_{m-1}(y))``
  with ``m = -alpha/epsilon`` and ``y = S sqrt(-epsilon/2) (sqrt(t) + delta/epsilon)``;
* the quasi-energy form, labelled by one of the two large-t quasi-energies
  ``lambda_{1,2} = Delta0/2 +- R``.

Both are instances of one shape, ``exp(p1 s + p2 s^2) (ca H_m(y) + cb H_{m-1}(y))``
with ``s = sqrt(t)`` and ``y = k (s + sigma)``; :class:`_HermiteExp` evaluates it
together with its first two derivatives using only ``dH_m/dy = 2 m H_{m-1}``
and the Hermite equation.

Branch pairing, resolved numerically (see :func:`branch_pairing`): the
lambda2 solution is the Hermite-pair form with the minus sign in the
exponents and S = +1; the lambda1 solution is the same form with the plus
sign and S = +1.  The minus-sign, S = -1 solution is a mixture of both.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConventionError, DomainError, SingularMatch
from .field import (
    FieldConfig,
    c1_normalization,
    dimensionless_params,
    phase,
    quasi_energies,
)
from .specfun import (
    DEFAULT_POLICY,
    EvalPolicy,
    erfc_complex,
    hermite_h,
    hermite_pair,
    recip_gamma,
)

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class AmplitudePair:
    a1: complex
    a2: complex

    @property
    def norm(self) -> float:
        return abs(self.a1) ** 2 + abs(self.a2) ** 2


@dataclass(frozen=True)
class SolutionCoefficients:
    C1: complex
    C2: complex

    def __add__(self, other: "SolutionCoefficients") -> "SolutionCoefficients":
        return SolutionCoefficients(self.C1 + other.C1, self.C2 + other.C2)


@dataclass(frozen=True)
class FundamentalParams:
    alpha0: complex
    alpha1: complex
    alpha2: complex
    gamma: complex
    delta: complex
    epsilon: complex
    alpha: complex
    q: complex
    A: complex
    S: int
    y_scale: complex
    y_shift: complex
    alpha_sign: int = -1

    @property
    def order(self) -> complex:
        return -self.alpha / self.epsilon


@dataclass(frozen=True)
class _HermiteExp:
    p1: complex
    p2: complex
    k: complex
    sigma: complex
    mu: complex
    ca: complex
    cb: complex

    def in_s(self, s: float, policy: EvalPolicy):
        """Value and first two s-derivatives."""
        y = self.k * (s + self.sigma)
        h0, dh0 = hermite_pair(self.mu, y, policy)
        h1, dh1 = hermite_pair(self.mu - 1, y, policy)
        g = self.ca * h0 + self.cb * h1
        gp = self.ca * dh0 + self.cb * dh1
        gpp = 2 * y * gp - 2 * self.mu * self.ca * h0 - 2 * (self.mu - 1) * self.cb * h1
        lin = self.p1 + 2 * self.p2 * s
        e = cmath.exp(self.p1 * s + self.p2 * s * s)
        k = self.k
        f = e * g
        fs = e * (lin * g + k * gp)
        fss = e * ((lin * lin + 2 * self.p2) * g + 2 * lin * k * gp + k * k * gpp)
        return f, fs, fss

    def in_t(self, t: float, policy: EvalPolicy):
        """Value, d/dt and d^2/dt^2; at t = 0 the first derivative is the
        finite limit and the second is NaN."""
        if t < 0:
            raise DomainError("solutions are defined for t >= 0")
        s = math.sqrt(t)
        f, fs, fss = self.in_s(s, policy)
        if s == 0:
            return f, fss / 2, complex(math.nan, math.nan)
        ft = fs / (2 * s)
        ftt = (fss - fs / s) / (4 * t)
        return f, ft, ftt


# ---------------------------------------------------------------------------
# Hermite-pair representation
# ---------------------------------------------------------------------------

def fundamental_params(cfg: FieldConfig, S: int, alpha_sign: int = -1) -> FundamentalParams:
    """Parameters of the Hermite-pair fundamental solution.

    ``alpha_sign = -1`` is the conventional choice for both exponents.
    """
    if S not in (1, -1) or alpha_sign not in (1, -1):
        raise ValueError("S and alpha_sign must be +1 or -1")
    if cfg.Delta1 == 0:
        raise DomainError("Hermite-pair form is degenerate for Delta1 = 0; use rabi_solution")
    d0, d1, u0 = cfg.Delta0, cfg.Delta1, cfg.U0
    root = math.sqrt(4 * u0**2 + d0**2)
    alpha0 = 1j * d1 * (1 + alpha_sign * d0 / root)
    alpha2 = 1j * (d0 + alpha_sign * root)
    delta = 2 * (alpha0 - 1j * d1)
    eps = 2 * (alpha2 - 1j * d0)
    alpha = alpha0 * (alpha0 - 2j * d1)
    q = alpha0
    y_scale = S * cmath.sqrt(-eps / 2)
    A = y_scale * (delta - q) / alpha
    return FundamentalParams(
        alpha0=alpha0, alpha1=0j, alpha2=alpha2, gamma=-1 + 0j, delta=delta,
        epsilon=eps, alpha=alpha, q=q, A=A, S=S, y_scale=y_scale,
        y_shift=delta / eps, alpha_sign=alpha_sign,
    )


def _hermite_form(params: FundamentalParams) -> _HermiteExp:
    return _HermiteExp(p1=params.alpha0, p2=params.alpha2 / 2, k=params.y_scale,
                       sigma=params.y_shift, mu=params.order, ca=params.A, cb=1)


def a2_fundamental_hermite(t: float, params: FundamentalParams,
                           policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Hermite-pair fundamental solution for a2 at time t >= 0."""
    return _hermite_form(params).in_t(t, policy)[0]


def hermite_solution_derivs(t: float, params: FundamentalParams,
                            policy: EvalPolicy = DEFAULT_POLICY):
    """(a2, da2/dt, d2a2/dt2) of the Hermite-pair fundamental solution."""
    return _hermite_form(params).in_t(t, policy)


# ---------------------------------------------------------------------------
# Quasi-energy representation
# ---------------------------------------------------------------------------

def _check_lambda(cfg: FieldConfig, lam: float) -> None:
    lam1, lam2, R = quasi_energies(cfg)
    if min(abs(lam - lam1), abs(lam - lam2)) > 1e-9 * max(R, 1.0):
        raise DomainError(f"lambda={lam} is not a quasi-energy of {cfg}")


def _quasienergy_form(cfg: FieldConfig, lam: float) -> _HermiteExp:
    _check_lambda(cfg, lam)
    if cfg.Delta1 == 0:
        raise DomainError("quasi-energy form has a 1/Delta1 factor; use rabi_solution")
    d0, d1, u0 = cfg.Delta0, cfg.Delta1, cfg.U0
    D = d0 - 2 * lam
    k = cmath.sqrt(1j * D)
    mu = -2j * d1**2 * u0**2 / D**3
    kappa = D / (d1 * (d0 - lam))
    # i sqrt(t) kappa dF/dt = i kappa k mu H_{mu-1}(y): the sqrt(t) cancels exactly.
    beta = 1j * kappa * k * mu
    return _HermiteExp(p1=1j * lam * d1 / (lam - d0 / 2), p2=1j * lam, k=k,
                       sigma=d1 * d0 / D**2, mu=mu, ca=1, cb=beta)


def a2_fundamental_quasienergy(t: float, cfg: FieldConfig, lam: float,
                               policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Fundamental solution labelled by the quasi-energy ``lam``."""
    return _quasienergy_form(cfg, lam).in_t(t, policy)[0]


def quasienergy_solution_derivs(t: float, cfg: FieldConfig, lam: float,
                                policy: EvalPolicy = DEFAULT_POLICY):
    return _quasienergy_form(cfg, lam).in_t(t, policy)


def quasienergy_literal(t: float, cfg: FieldConfig, lam: float,
                        policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """The quasi-energy form written term by term, F + g(t) dF/dt, for t > 0.

    Used as a cross-check of the simplified evaluation.
    """
    if not t > 0:
        raise DomainError("literal quasi-energy form needs t > 0")
    form = _quasienergy_form(cfg, lam)
    d0, d1 = cfg.Delta0, cfg.Delta1
    s = math.sqrt(t)
    y = form.k * (s + form.sigma)
    F, dF_dy = hermite_pair(form.mu, y, policy)
    dF_dt = dF_dy * form.k / (2 * s)
    pref = cmath.exp(1j * lam * (t + d1 * s / (lam - d0 / 2)))
    return pref * (F + 1j * s * (d0 - 2 * lam) / (d1 * (d0 - lam)) * dF_dt)


def branch_pairing(cfg: FieldConfig, times: Sequence[float] = tuple(np.linspace(0.5, 5, 10)),
                   policy: EvalPolicy = DEFAULT_POLICY) -> dict:
    """Match each quasi-energy solution to a Hermite-pair solution.

    For lambda1 and lambda2, every (alpha_sign, S) candidate is tried and the
    one whose pointwise ratio to the quasi-energy form is most nearly
    constant is kept.  Returns ``{"lambda1": (alpha_sign, S, factor, spread), ...}``.
    """
    lam1, lam2, _ = quasi_energies(cfg)
    out = {}
    for label, lam in (("lambda1", lam1), ("lambda2", lam2)):
        qe = np.array([a2_fundamental_quasienergy(t, cfg, lam, policy) for t in times])
        best = None
        for sign in (-1, 1):
            for S in (-1, 1):
                p = fundamental_params(cfg, S, sign)
                hf = np.array([a2_fundamental_hermite(t, p, policy) for t in times])
                ratio = hf / qe
                mean = ratio.mean()
                spread = float(np.max(np.abs(ratio - mean)) / abs(mean))
                if best is None or spread < best[3]:
                    best = (sign, S, complex(mean), spread)
        out[label] = best
    return out


# ---------------------------------------------------------------------------
# General solution, a1 and initial-value matching
# ---------------------------------------------------------------------------

def _rabi_derivs(t: float, coeffs: SolutionCoefficients, cfg: FieldConfig):
    lam1, lam2, _ = quasi_energies(cfg)
    e1 = cmath.exp(1j * lam1 * t)
    e2 = cmath.exp(1j * lam2 * t)
    a2 = coeffs.C1 * e1 + coeffs.C2 * e2
    d1 = 1j * lam1 * coeffs.C1 * e1 + 1j * lam2 * coeffs.C2 * e2
    d2 = -(lam1**2) * coeffs.C1 * e1 - lam2**2 * coeffs.C2 * e2
    return a2, d1, d2


def general_derivs(t: float, coeffs: SolutionCoefficients, cfg: FieldConfig,
                   policy: EvalPolicy = DEFAULT_POLICY):
    """(a2, da2/dt, d2a2/dt2) of C1 * [lambda1 solution] + C2 * [lambda2 solution]."""
    if cfg.Delta1 == 0:
        return _rabi_derivs(t, coeffs, cfg)
    lam1, lam2, _ = quasi_energies(cfg)
    out = [0j, 0j, 0j]
    for c, lam in ((coeffs.C1, lam1), (coeffs.C2, lam2)):
        if c == 0:
            continue
        vals = _quasienergy_form(cfg, lam).in_t(t, policy)
        for i in range(3):
            out[i] += c * vals[i]
    return tuple(out)


def a2_general(t: float, coeffs: SolutionCoefficients, cfg: FieldConfig,
               policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """General solution for a2; Delta1 = 0 is routed to the Rabi solution."""
    return general_derivs(t, coeffs, cfg, policy)[0]


def a1_from_a2(t: float, a2_deriv: complex, cfg: FieldConfig) -> complex:
    """a1 = i a2' / (U0 exp(i phase(t))) for t > 0."""
    if not t > 0:
        raise DomainError("a1_from_a2 needs t > 0; use limit_a1_at_zero")
    return 1j * a2_deriv / (cfg.U0 * cmath.exp(1j * phase(t, cfg)))


def limit_a1_at_zero(coeffs: SolutionCoefficients, cfg: FieldConfig,
                     policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """a1(0) from the finite t -> 0 limit of a2'(t)."""
    return 1j * general_derivs(0.0, coeffs, cfg, policy)[1] / cfg.U0


def amplitudes(t: float, coeffs: SolutionCoefficients, cfg: FieldConfig,
               policy: EvalPolicy = DEFAULT_POLICY) -> AmplitudePair:
    a2, d1, _ = general_derivs(t, coeffs, cfg, policy)
    if t == 0:
        a1 = 1j * d1 / cfg.U0
    else:
        a1 = a1_from_a2(t, d1, cfg)
    return AmplitudePair(a1, a2)


def trajectory(times: Sequence[float], coeffs: SolutionCoefficients, cfg: FieldConfig,
               policy: EvalPolicy = DEFAULT_POLICY) -> list[AmplitudePair]:
    return [amplitudes(float(t), coeffs, cfg, policy) for t in times]


def solve_ivp_coefficients(initial: AmplitudePair, cfg: FieldConfig,
                           policy: EvalPolicy = DEFAULT_POLICY,
                           check_norm: bool = True) -> SolutionCoefficients:
    """Coefficients (C1, C2) reproducing ``initial`` at t = 0.

    Matching uses a2(0) and the analytic limit of a2'(0) = -i U0 a1(0).
    """
    if check_norm and abs(initial.norm - 1) > 1e-10:
        raise DomainError("initial amplitudes must be normalized")
    basis = []
    for c in (SolutionCoefficients(1, 0), SolutionCoefficients(0, 1)):
        f, ft, _ = general_derivs(0.0, c, cfg, policy)
        basis.append((f, ft))
    m = np.array([[basis[0][0], basis[1][0]], [basis[0][1], basis[1][1]]], dtype=complex)
    cond = np.linalg.cond(m)
    if not cond < 1e12:
        raise SingularMatch(f"matching matrix condition number {cond:.3g}")
    rhs = np.array([initial.a2, -1j * cfg.U0 * initial.a1], dtype=complex)
    c1, c2 = np.linalg.solve(m, rhs)
    return SolutionCoefficients(complex(c1), complex(c2))


def rabi_solution(t: float, coeffs: SolutionCoefficients, U0: float,
                  Delta0: float) -> AmplitudePair:
    """Constant-detuning solution (Delta1 = 0)."""
    cfg = FieldConfig(U0, Delta0, 0.0)
    lam1, lam2, _ = quasi_energies(cfg)
    a2 = coeffs.C1 * cmath.exp(1j * lam1 * t) + coeffs.C2 * cmath.exp(1j * lam2 * t)
    a1 = (-coeffs.C1 * lam1 / U0 * cmath.exp(1j * (lam1 - Delta0) * t)
          - coeffs.C2 * lam2 / U0 * cmath.exp(1j * (lam2 - Delta0) * t))
    return AmplitudePair(a1, a2)


# ---------------------------------------------------------------------------
# Scattering quantities (Delta0 > 0)
# ---------------------------------------------------------------------------

class ScatteringAmplitude(NamedTuple):
    a2: complex
    p1: float
    p2: float


def _require_positive_delta0(cfg: FieldConfig) -> None:
    if not cfg.Delta0 > 0:
        raise ConventionError("scattering quantities are defined for Delta0 > 0")


def _branch_root(value: complex, reference: complex, branch: str) -> complex:
    """Square root of ``value``; the "solution" branch picks the root pointing
    away from ``reference`` (Re(root * conj(reference)) <= 0)."""
    root = cmath.sqrt(value)
    if branch == "solution":
        if (root * reference.conjugate()).real > 0:
            root = -root
    elif branch != "principal":
        raise ValueError(f"unknown branch {branch!r}")
    return root


def scattering_a2_at_zero(cfg: FieldConfig, root_branch: str = "solution",
                          policy: EvalPolicy = DEFAULT_POLICY) -> ScatteringAmplitude:
    """a2(0) for the solution ending purely in the first quasi-energy state.

    ``a2(0) = C1 (H_nu(xi) + (-xi + sqrt(xi^2 - 2 nu)) H_{nu-1}(xi))``.
    With ``root_branch="solution"`` the root is the one that reproduces the
    first quasi-energy solution at t = 0 for either sign of Delta1;
    ``"principal"`` takes the principal root (identical when Delta1 < 0).
    """
    _require_positive_delta0(cfg)
    _, _, nu, xi = dimensionless_params(cfg)
    c1 = c1_normalization(cfg)
    root = _branch_root(xi * xi - 2 * nu, xi, root_branch)
    a2 = c1 * (hermite_h(nu, xi, policy) + (-xi + root) * hermite_h(nu - 1, xi, policy))
    p2 = abs(a2) ** 2
    return ScatteringAmplitude(a2, 1 - p2, p2)


def approx_weak_field(cfg: FieldConfig, root_branch: str = "solution") -> complex:
    """Small-U0 approximation of a2(0) built on erfc."""
    _require_positive_delta0(cfg)
    _, _, _, xi = dimensionless_params(cfg)
    c1 = c1_normalization(cfg)
    root = _branch_root(xi * xi, xi, root_branch)
    return c1 * (1 + _SQRT_PI / 2 * (root - xi) * cmath.exp(xi * xi) * erfc_complex(xi))


def approx_strong_field(cfg: FieldConfig, root_branch: str = "solution") -> complex:
    """Large-U0 zero-order approximation of a2(0)."""
    _require_positive_delta0(cfg)
    _, xi0, nu, _ = dimensionless_params(cfg)
    c1 = c1_normalization(cfg)
    root = cmath.sqrt(-nu)
    if root_branch == "solution" and xi0 > 0:
        root = -root
    elif root_branch not in ("solution", "principal"):
        raise ValueError(f"unknown branch {root_branch!r}")
    bracket = (root / math.sqrt(2) * recip_gamma(1 - nu / 2)
               + recip_gamma((1 - nu) / 2))
    return c1 * _SQRT_PI * cmath.exp(nu * math.log(2.0)) * bracket


# ---------------------------------------------------------------------------
# Large-t asymptotes
# ---------------------------------------------------------------------------

def asymptote_phase(t: float, cfg: FieldConfig, branch: int) -> float:
    """Explicit large-t phase of the lambda1 (branch=1) or lambda2 (branch=2) solution."""
    lam1, lam2, R = quasi_energies(cfg)
    nu0 = cfg.U0**2 * cfg.Delta1**2 / (4 * R**3)
    s = math.sqrt(t)
    if branch == 1:
        return lam1 * t + cfg.Delta1 * lam1 / R * s + nu0 / 2 * math.log(8 * R * t)
    if branch == 2:
        return lam2 * t - cfg.Delta1 * lam2 / R * s - nu0 / 2 * math.log(2 * R * t)
    raise ValueError("branch must be 1 or 2")


def asymptote_prefactor(cfg: FieldConfig, branch: int = 1, multiplier: float = 1.0) -> float:
    """exp(multiplier * pi Delta1^2 U0^2 / (16 R^3)).

    ``multiplier=1`` is the verified value for both branches; ``multiplier=4``
    reproduces the alternative exponent sometimes quoted for the lambda2 branch.
    """
    if branch not in (1, 2):
        raise ValueError("branch must be 1 or 2")
    _, _, R = quasi_energies(cfg)
    return math.exp(multiplier * math.pi * cfg.Delta1**2 * cfg.U0**2 / (16 * R**3))


def stripped_asymptote(t: float, cfg: FieldConfig, branch: int, multiplier: float = 1.0,
                       policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Fundamental solution divided by its explicit asymptotic phase and prefactor."""
    lam1, lam2, _ = quasi_energies(cfg)
    lam = lam1 if branch == 1 else lam2
    val = a2_fundamental_quasienergy(t, cfg, lam, policy)
    return val * cmath.exp(-1j * asymptote_phase(t, cfg, branch)) / asymptote_prefactor(
        cfg, branch, multiplier)
