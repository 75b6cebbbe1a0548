"""Bi-confluent Heun reduction of the two-state problem and its Hermite-series solutions.

For field classes ``U = U0* z^k dz/dt`` and
``detuning = (d1/z + d0 + d2 z) dz/dt`` the amplitude
``a2 = z^alpha1 exp(alpha0 z + alpha2 z^2/2) u(z)`` turns the second-order
amplitude equation into the bi-confluent Heun equation

    u'' + (gamma/z + delta + epsilon z) u' + (alpha z - q)/z u = 0.

For ``epsilon != 0`` the solution expands as
``u = sum_n c_n H_{n + gamma - alpha/epsilon}(s0 (z + delta/epsilon))`` with a
three-term recurrence for ``c_n``.  Only the class ``k = 1`` is executable here;
the remaining classes enter the exact-solvability classification only.

Index bookkeeping for the terminating case ``gamma = -1``: term ``n = 0``
carries order ``-alpha/epsilon - 1`` and term ``n = 1`` order ``-alpha/epsilon``,
so with ``c0 = 1`` the coefficient ``c1`` equals the mixing coefficient ``A``
of the closed-form fundamental solution when ``s0 = +sqrt(-epsilon/2)``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import DegenerateRecurrence, DomainError, TruncationError, UnsupportedClass
from .field import FieldConfig
from .specfun import DEFAULT_POLICY, EvalPolicy, hermite_h

CLASS_INDICES = (Fraction(-1), Fraction(-1, 2), Fraction(0), Fraction(1, 2), Fraction(1))


@dataclass(frozen=True)
class ClassConfig:
    k: Fraction
    U0_star: complex
    d0: complex
    d1: complex
    d2: complex

    def __post_init__(self):
        object.__setattr__(self, "k", Fraction(self.k))
        if self.k not in CLASS_INDICES:
            raise UnsupportedClass(f"k must be one of -1, -1/2, 0, 1/2, 1, got {self.k}")

    def q_at_zero(self) -> complex:
        """Q(0) for Q(z) = U0*^2 z^(2k+2)."""
        return self.U0_star**2 if self.k == -1 else 0j


@dataclass(frozen=True)
class BiconfluentParams:
    gamma: complex
    delta: complex
    epsilon: complex
    alpha: complex
    q: complex
    alpha0: complex
    alpha1: complex
    alpha2: complex


@dataclass(frozen=True)
class HermiteSeries:
    coefficients: tuple[complex, ...]
    s0_sign: int
    shift: complex
    order_base: complex
    scale: complex

    def order(self, n: int) -> complex:
        return n + self.order_base


@dataclass(frozen=True)
class Classification:
    kind: str
    subtype: Optional[str]
    constraint_residual: complex


def model_class_config(cfg: FieldConfig) -> ClassConfig:
    """k = 1 class parameters that produce the inverse-square-root field with z = sqrt(t)."""
    return ClassConfig(k=Fraction(1), U0_star=2 * cfg.U0, d0=2 * cfg.Delta1, d1=0j,
                       d2=2 * cfg.Delta0)


def field_from_class(cc: ClassConfig) -> FieldConfig:
    """Inverse of :func:`model_class_config`; needs k = 1, d1 = 0 and real parameters."""
    if cc.k != 1 or cc.d1 != 0:
        raise UnsupportedClass("only the k = 1, d1 = 0 class maps to the inverse-square-root field")
    vals = [complex(v) for v in (cc.U0_star, cc.d2, cc.d0)]
    if any(abs(v.imag) > 1e-14 * max(1.0, abs(v)) for v in vals):
        raise DomainError("class parameters must be real for a physical field")
    return FieldConfig(vals[0].real / 2, vals[1].real / 2, vals[2].real / 2)


def class_field(cc: ClassConfig, t: float) -> tuple[complex, complex]:
    """(U(t), detuning(t)) of the class with z(t) = sqrt(t), for t > 0."""
    if not t > 0:
        raise DomainError("class field needs t > 0")
    z = t**0.5
    dz = 1 / (2 * z)
    k = float(cc.k)
    return cc.U0_star * z**k * dz, (cc.d1 / z + cc.d0 + cc.d2 * z) * dz


def biconfluent_params(cc: ClassConfig, alpha2_sign: int = -1,
                       alpha1_branch: str = "model") -> BiconfluentParams:
    """Heun parameters and pre-factor exponents for the k = 1 class.

    ``alpha1_branch="model"`` selects the root alpha1 = 0, ``"other"`` the root
    alpha1 = 2 + i d1.  ``alpha2_sign`` picks the root of the alpha2 quadratic
    (for real data, alpha2 = i (d2 +- sqrt(d2^2 + 4 U0*^2)) / 2).
    """
    if cc.k != 1:
        raise UnsupportedClass("only k = 1 is executable")
    if alpha2_sign not in (1, -1):
        raise ValueError("alpha2_sign must be +1 or -1")
    k = 1
    u2 = complex(cc.U0_star) ** 2
    # Q(z) = U0*^2 z^4: only the fourth derivative survives at the origin
    q0, q1, q2, q3, q4_over_24 = 0j, 0j, 0j, 0j, u2
    d0, d1, d2 = complex(cc.d0), complex(cc.d1), complex(cc.d2)

    if alpha1_branch == "model":
        alpha1 = 0j
    elif alpha1_branch == "other":
        alpha1 = 1 + k + 1j * d1
    else:
        raise ValueError(f"unknown alpha1 branch {alpha1_branch!r}")
    # this form keeps the root off the branch cut for real data
    alpha2 = 1j * (d2 + alpha2_sign * cmath.sqrt(d2 * d2 + 4 * q4_over_24)) / 2
    eps = 2 * alpha2 - 1j * d2
    if eps == 0:
        raise DomainError("epsilon vanishes; the Hermite expansion does not apply")
    alpha0 = (1j * alpha2 * d0 - q3 / 6) / eps

    gamma = 2 * alpha1 - 1j * d1 - k
    delta = 2 * alpha0 - 1j * d0
    alpha = (alpha0 * (alpha0 - 1j * d0) + alpha1 * (2 * alpha2 - 1j * d2)
             + alpha2 * (1 - k - 1j * d1) + q2 / 2)
    q = alpha0 * (k + 1j * d1) - alpha1 * (2 * alpha0 - 1j * d0) - q1
    return BiconfluentParams(gamma=gamma, delta=delta, epsilon=eps, alpha=alpha, q=q,
                             alpha0=alpha0, alpha1=alpha1, alpha2=alpha2)


def exponent_residuals(cc: ClassConfig, bp: BiconfluentParams) -> tuple[complex, complex, complex]:
    """Residuals of the three exponent equations (alpha0, alpha1, alpha2) for k = 1."""
    u2 = complex(cc.U0_star) ** 2
    r0 = bp.alpha0 * bp.epsilon - 1j * bp.alpha2 * cc.d0
    r1 = bp.alpha1**2 - bp.alpha1 * (2 + 1j * cc.d1) + cc.q_at_zero()
    r2 = bp.alpha2**2 - 1j * bp.alpha2 * cc.d2 + u2
    return r0, r1, r2


def _recurrence_terms(bp: BiconfluentParams, s0_sign: int):
    sq = cmath.sqrt(-bp.epsilon)
    sq2 = cmath.sqrt(-2 * bp.epsilon)
    g, e = bp.gamma, bp.epsilon

    def R(n):
        return 2**0.5 / sq * n * (-bp.alpha + (g + n) * e)

    def Q(n):
        return -s0_sign * (bp.q + (g + n) * bp.delta)

    def P(n):
        return (g + n) * e / sq2
    return R, Q, P


def hermite_series_coeffs(bp: BiconfluentParams, s0_sign: int, n_max: int) -> HermiteSeries:
    """Coefficients c_0..c_{n_max} of the Hermite-function expansion, c_0 = 1."""
    if s0_sign not in (1, -1):
        raise ValueError("s0_sign must be +1 or -1")
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    if bp.epsilon == 0:
        raise DomainError("the expansion needs epsilon != 0")
    R, Q, P = _recurrence_terms(bp, s0_sign)
    c = [1 + 0j]
    for n in range(1, n_max + 1):
        rhs = Q(n - 1) * c[n - 1] + (P(n - 2) * c[n - 2] if n >= 2 else 0)
        rn = R(n)
        if rn == 0:
            if abs(rhs) <= 1e-14 * max(abs(x) for x in c):
                # free coefficient; the terminating choice is zero
                c.append(0j)
                continue
            raise DegenerateRecurrence(f"R_{n} vanishes with a nonzero right-hand side")
        c.append(-rhs / rn)
    scale = s0_sign * cmath.sqrt(-bp.epsilon / 2)
    return HermiteSeries(coefficients=tuple(c), s0_sign=s0_sign,
                         shift=bp.delta / bp.epsilon,
                         order_base=bp.gamma - bp.alpha / bp.epsilon, scale=scale)


def recurrence_residuals(series: HermiteSeries, bp: BiconfluentParams) -> list[float]:
    """|R_n c_n + Q_{n-1} c_{n-1} + P_{n-2} c_{n-2}| relative to its terms, n >= 1."""
    R, Q, P = _recurrence_terms(bp, series.s0_sign)
    c = series.coefficients
    out = []
    for n in range(1, len(c)):
        terms = [R(n) * c[n], Q(n - 1) * c[n - 1]]
        if n >= 2:
            terms.append(P(n - 2) * c[n - 2])
        scale = sum(abs(x) for x in terms)
        out.append(abs(sum(terms)) / scale if scale else 0.0)
    return out


def _near_integer(x: complex, n: int, tol: float = 1e-10) -> bool:
    return abs(x - n) <= tol


def termination_check(bp: BiconfluentParams, N: int, tol: float = 1e-10) -> bool:
    """True when the expansion stops after term N (c_{N+1} = c_{N+2} = 0)."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if not _near_integer(bp.gamma, -N, tol):
        return False
    if N == 0:
        return abs(bp.q) <= tol * max(1.0, abs(bp.delta))
    if N == 1:
        terms = (bp.q * bp.q, bp.delta * bp.q, bp.alpha)
        scale = max(sum(abs(x) for x in terms), 1e-300)
        return abs(terms[0] - terms[1] + terms[2]) <= tol * scale
    series = hermite_series_coeffs(bp, 1, N + 2)
    c = series.coefficients
    ref = max(abs(x) for x in c[: N + 1])
    return abs(c[N + 1]) <= tol * ref and abs(c[N + 2]) <= tol * ref


def eliminated_exponent_residual(k: float, d1: complex, q_at_zero: complex,
                                 alpha1: complex) -> complex:
    """Residual of (gamma + k + i d1)(gamma - k - 2 - i d1) + 4 Q(0) with gamma
    built from alpha1; zero whenever alpha1 solves its quadratic."""
    gamma = 2 * alpha1 - 1j * d1 - k
    return (gamma + k + 1j * d1) * (gamma - k - 2 - 1j * d1) + 4 * q_at_zero


def exact_solvability_check(cc: ClassConfig, gamma: complex,
                            tol: float = 1e-12) -> Classification:
    """Classify a class/characteristic-exponent pair.

    * ``non-terminating``: gamma is not a non-positive integer, or the exponent
      equations cannot produce it.
    * ``exactly-solvable``: Q(0) = 0, d1 = 0 and (gamma + k)(gamma - k - 2) = 0;
      subtype ``confluent-hypergeometric`` (gamma = k = 0) or ``new-model``
      (gamma = -1, k = 1).
    * ``conditionally-integrable``: otherwise; ``constraint_residual`` is the
      amount by which the current parameters miss the required relation
      between the amplitude and the detuning parameter d1.
    """
    g = complex(gamma)
    n = round(-g.real)
    if not (n >= 0 and abs(g + n) <= tol):
        return Classification("non-terminating", None, complex("nan"))
    k = float(cc.k)
    d1 = complex(cc.d1)
    q0 = cc.q_at_zero()
    residual = (g + k + 1j * d1) * (g - k - 2 - 1j * d1) + 4 * q0
    if abs(q0) <= tol and abs(d1) <= tol:
        if abs((g + k) * (g - k - 2)) <= tol:
            subtype = "confluent-hypergeometric" if n == 0 else "new-model"
            return Classification("exactly-solvable", subtype, 0j)
        return Classification("non-terminating", None, residual)
    return Classification("conditionally-integrable", None, residual)


def hb_series_eval(series: HermiteSeries, bp: BiconfluentParams, z: complex,
                   policy: EvalPolicy = DEFAULT_POLICY, term_tol: float = 1e-12) -> complex:
    """Bi-confluent Heun function from its Hermite expansion.

    Trailing coefficients below ``term_tol`` relative to the largest are
    dropped; if any remain, the last term must be below ``policy.rel_tol`` of
    the sum or :class:`TruncationError` is raised.
    """
    c = list(series.coefficients)
    cmax = max(abs(x) for x in c)
    while len(c) > 1 and abs(c[-1]) <= term_tol * cmax:
        c.pop()
    terminated = len(c) < len(series.coefficients)
    y = series.scale * (z + series.shift)
    terms = [cn * hermite_h(series.order(n), y, policy) for n, cn in enumerate(c) if cn != 0]
    total = sum(terms)
    if not terminated and abs(terms[-1]) > policy.rel_tol * abs(total):
        raise TruncationError("series tail exceeds tolerance; increase n_max")
    return total


def heun_solution(series: HermiteSeries, bp: BiconfluentParams, z: complex,
                  policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """a2 = z^alpha1 exp(alpha0 z + alpha2 z^2/2) H_B(z)."""
    pre = cmath.exp(bp.alpha0 * z + bp.alpha2 * z * z / 2)
    if bp.alpha1 != 0:
        pre *= z**bp.alpha1
    return pre * hb_series_eval(series, bp, z, policy)
