"""Complex special functions: Gamma, erfc, Kummer M and Hermite functions.

Everything here works on Python ``complex`` scalars and uses principal
branches for every logarithm, power and square root.

Hermite functions of complex order are evaluated along one of three routes,
chosen from ``|z|**2``:

* ``series``: the two-Kummer representation, used near the origin where the
  Taylor series loses at most ``e**|z|**2`` in rounding;
* ``asymptotic``: the large-argument expansion (with the exponentially
  small companion term switched on for ``Re z < 0``), used above
  ``EvalPolicy.asymptotic_threshold``;
* ``continuation``: in between, the Hermite ODE is continued by local Taylor
  steps from whichever end of the ray is numerically stable.
"""
from __future__ import annotations

import cmath
import json
import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NoConvergence, ParameterPole, PoleError, SectorWarning

__all__ = [
    "EvalPolicy",
    "DEFAULT_POLICY",
    "gamma_complex",
    "recip_gamma",
    "erfc_complex",
    "faddeeva_w",
    "kummer_m",
    "hermite_h",
    "hermite_h_derivative",
    "hermite_h_both",
    "hermite_pair",
    "hermite_route",
]

_EPS = 2.0**-52
_SQRT_PI = math.sqrt(math.pi)

# |z|^2 below which the Kummer representation is used directly.
SERIES_RADIUS2 = 4.0
# Hard cap on asymptotic terms (divergent series).
ASYMPTOTIC_MAX_TERMS = 20
# Largest |z|^2 at which a continuation may start from the asymptotic expansion.
START_RADIUS2_CAP = 1.0e4


@dataclass(frozen=True)
class EvalPolicy:
    rel_tol: float = 1e-12
    max_terms: int = 1000
    asymptotic_threshold: float = 30.0

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_terms < 10:
            raise ValueError("max_terms must be >= 10")
        if not self.asymptotic_threshold > 0:
            raise ValueError("asymptotic_threshold must be positive")

    @classmethod
    def from_env(cls, var: str = "IVSQRT_EVAL_POLICY") -> "EvalPolicy":
        """Build a policy from a JSON object in the environment, e.g.
        ``IVSQRT_EVAL_POLICY='{"asymptotic_threshold": 40}'``."""
        raw = os.environ.get(var)
        if not raw:
            return cls()
        fields = json.loads(raw)
        return cls(**fields)


DEFAULT_POLICY = EvalPolicy()


def _is_nonpositive_integer(z: complex) -> bool:
    return z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real)


# ---------------------------------------------------------------------------
# Gamma
# ---------------------------------------------------------------------------

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos_log_gamma(z: complex) -> complex:
    # log Gamma(z) for Re z >= 0.5 (not necessarily the principal log-gamma branch)
    z = z - 1
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return 0.5 * math.log(2 * math.pi) + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def gamma_complex(z: complex) -> complex:
    """Euler Gamma function for complex ``z``.

    Lanczos approximation (g = 7, nine terms) for ``Re z >= 0.5`` and the
    reflection formula elsewhere. Raises :class:`PoleError` at non-positive
    integers; use :func:`recip_gamma` when the pole should read as ``1/Gamma = 0``.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma_complex(1 - z))
    return cmath.exp(_lanczos_log_gamma(z))


def recip_gamma(z: complex) -> complex:
    """1/Gamma(z); entire, exactly zero at 0, -1, -2, ..."""
    z = complex(z)
    if _is_nonpositive_integer(z):
        return 0j
    if z.real < 0.5:
        return cmath.sin(math.pi * z) * gamma_complex(1 - z) / math.pi
    return cmath.exp(-_lanczos_log_gamma(z))


# ---------------------------------------------------------------------------
# Complementary error function
# ---------------------------------------------------------------------------

def _weideman_coefficients(n: int) -> tuple[float, np.ndarray]:
    m = 2 * n
    m2 = 2 * m
    k = np.arange(-m + 1, m)
    ell = math.sqrt(n / math.sqrt(2))
    theta = k * math.pi / m
    t = ell * np.tan(theta / 2)
    f = np.exp(-t**2) * (ell**2 + t**2)
    f = np.concatenate(([0.0], f))
    a = np.real(np.fft.fft(np.fft.fftshift(f))) / m2
    return ell, a[1:n + 1][::-1].copy()


_W_L, _W_COEF = _weideman_coefficients(40)


def _faddeeva_upper(z: complex) -> complex:
    # Weideman's rational series, valid for Im z >= 0
    denom = _W_L - 1j * z
    zz = (_W_L + 1j * z) / denom
    p = 0j
    for c in _W_COEF:
        p = p * zz + c
    return 2 * p / denom**2 + (1 / _SQRT_PI) / denom


def faddeeva_w(z: complex) -> complex:
    """Faddeeva function w(z) = exp(-z^2) erfc(-iz)."""
    z = complex(z)
    if z.imag >= 0:
        return _faddeeva_upper(z)
    return 2 * cmath.exp(-z * z) - _faddeeva_upper(-z)


def _erf_taylor(z: complex) -> complex:
    z2 = z * z
    term = z
    total = z
    n = 0
    while True:
        n += 1
        term *= -z2 / n
        add = term / (2 * n + 1)
        total += add
        if abs(add) <= _EPS * abs(total):
            break
    return 2 / _SQRT_PI * total


def erfc_complex(z: complex) -> complex:
    """Complementary error function for complex argument.

    Maclaurin series of erf for ``|z| < 1``; otherwise the Faddeeva function
    via ``erfc(z) = exp(-z^2) w(iz)`` on ``Re z >= 0`` and the symmetry
    ``erfc(-z) = 2 - erfc(z)`` on the left half-plane.
    """
    z = complex(z)
    if abs(z) < 1.0:
        return 1 - _erf_taylor(z)
    if z.real >= 0:
        return cmath.exp(-z * z) * _faddeeva_upper(1j * z)
    return 2 - cmath.exp(-z * z) * _faddeeva_upper(-1j * z)


# ---------------------------------------------------------------------------
# Kummer confluent hypergeometric function
# ---------------------------------------------------------------------------

def _kummer_series(a: complex, b: complex, z: complex, policy: EvalPolicy) -> complex:
    term = 1 + 0j
    total = 1 + 0j
    for n in range(policy.max_terms):
        ratio = (a + n) / ((b + n) * (n + 1)) * z
        term *= ratio
        total += term
        if term == 0:
            return total
        if abs(term) <= _EPS * abs(total) and abs(ratio) < 0.5:
            return total
    if abs(term) > policy.rel_tol * abs(total):
        raise NoConvergence(
            f"Kummer series for a={a}, b={b}, z={z} not converged "
            f"after {policy.max_terms} terms"
        )
    return total


def kummer_m(a: complex, b: complex, z: complex,
             policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Confluent hypergeometric function M(a, b, z) by its Taylor series.

    For ``Re z < 0`` the Kummer transformation ``M(a,b,z) = e^z M(b-a,b,-z)``
    is applied first.
    """
    a, b, z = complex(a), complex(b), complex(z)
    if _is_nonpositive_integer(b):
        raise ParameterPole(f"M(a, b, z) undefined for b = {b.real:g}")
    if z == 0:
        return 1 + 0j
    if z.real < 0:
        return cmath.exp(z) * _kummer_series(b - a, b, -z, policy)
    return _kummer_series(a, b, z, policy)


# ---------------------------------------------------------------------------
# Hermite functions
# ---------------------------------------------------------------------------

def _hermite_kummer(nu: complex, z: complex, policy: EvalPolicy) -> complex:
    z2 = z * z
    pref = cmath.exp(nu * math.log(2.0)) * _SQRT_PI
    even = recip_gamma((1 - nu) / 2)
    odd = recip_gamma(-nu / 2)
    out = 0j
    if even != 0:
        out += kummer_m(-nu / 2, 0.5, z2, policy) * even
    if odd != 0:
        out -= 2 * z * kummer_m((1 - nu) / 2, 1.5, z2, policy) * odd
    return pref * out


def _asymptotic_sum(first_factor, z2x4: complex, cap: int):
    """Sum 1 + sum_s c_s / (4 z^2)^s with the smallest-term rule.

    ``first_factor(s)`` returns the ratio c_s / c_{s-1}.
    Returns (sum, magnitude of first omitted term).
    """
    term = 1 + 0j
    total = 1 + 0j
    for s in range(1, cap + 1):
        nxt = term * first_factor(s) / z2x4
        if nxt == 0:
            return total, 0.0
        if abs(nxt) >= abs(term):
            return total, abs(nxt)
        term = nxt
        total += term
        if abs(term) <= _EPS * abs(total):
            return total, 0.0
    return total, abs(term)


def _hermite_asymptotic(nu: complex, z: complex) -> tuple[complex, float]:
    w2 = 4 * z * z
    main_sum, main_err = _asymptotic_sum(
        lambda s: -(2 * s - 2 - nu) * (2 * s - 1 - nu) / s, w2, ASYMPTOTIC_MAX_TERMS)
    main_pref = cmath.exp(nu * cmath.log(2 * z))
    value = main_pref * main_sum
    err = abs(main_pref) * main_err
    if z.real < 0:
        rg = recip_gamma(-nu)
        if rg != 0:
            sign = 1.0 if cmath.phase(z) > 0 else -1.0
            rec_sum, rec_err = _asymptotic_sum(
                lambda s: (nu + 2 * s - 1) * (nu + 2 * s) / s, w2, ASYMPTOTIC_MAX_TERMS)
            rec_pref = -_SQRT_PI * rg * cmath.exp(
                sign * 1j * math.pi * nu + (-nu - 1) * cmath.log(z) + z * z)
            value += rec_pref * rec_sum
            err += abs(rec_pref) * rec_err
    return value, err / max(abs(value), 1e-300)


def _taylor_walk(nu: complex, z0: complex, w: complex, dw: complex,
                 z1: complex) -> tuple[complex, complex]:
    # Continue (w, w') of  w'' - 2 z w' + 2 nu w = 0  from z0 to z1 in straight steps.
    pos = z0
    while True:
        remaining = z1 - pos
        dist = abs(remaining)
        if dist == 0:
            return w, dw
        hmax = min(1.0, 1.0 / abs(pos)) if pos != 0 else 1.0
        last = dist <= hmax
        h = remaining if last else remaining / dist * hmax
        a_k, a_k1 = w, dw
        val = w + dw * h
        der = dw
        hk = h  # h**(k+1)
        quiet = 0
        k = 0
        while k < 400:
            a_k2 = (2 * pos * (k + 1) * a_k1 + 2 * (k - nu) * a_k) / ((k + 1) * (k + 2))
            dterm = (k + 2) * a_k2 * hk
            hk *= h
            vterm = a_k2 * hk
            val += vterm
            der += dterm
            if abs(vterm) <= _EPS * abs(val) and abs(dterm) <= _EPS * abs(der):
                quiet += 1
                if quiet >= 3:
                    break
            else:
                quiet = 0
            a_k, a_k1 = a_k1, a_k2
            k += 1
        w, dw = val, der
        pos = z1 if last else pos + h


def hermite_route(z: complex, policy: EvalPolicy = DEFAULT_POLICY) -> str:
    r = abs(z) ** 2
    thr = policy.asymptotic_threshold
    if r >= thr:
        return "asymptotic"
    if r <= SERIES_RADIUS2:
        return "series"
    return "continuation"


def _series_pair(nu, z, policy):
    h = _hermite_kummer(nu, z, policy)
    d = 0j if nu == 0 else 2 * nu * _hermite_kummer(nu - 1, z, policy)
    return h, d


def _asymptotic_pair(nu, z):
    h, e1 = _hermite_asymptotic(nu, z)
    if nu == 0:
        return h, 0j, e1
    hm, e2 = _hermite_asymptotic(nu - 1, z)
    return h, 2 * nu * hm, max(e1, e2)


def _accurate_start(nu, unit, r2, policy):
    # Move outward along the ray until the asymptotic expansion meets rel_tol.
    # The inward walk costs about |z|^2/2 steps, hence the cap.
    while True:
        za = unit * math.sqrt(r2)
        h, d, err = _asymptotic_pair(nu, za)
        if err <= policy.rel_tol or r2 >= START_RADIUS2_CAP:
            return za, h, d, err
        r2 = min(r2 * 1.25, START_RADIUS2_CAP)


def hermite_pair(nu: complex, z: complex,
                 policy: EvalPolicy = DEFAULT_POLICY) -> tuple[complex, complex]:
    """Return ``(H_nu(z), dH_nu/dz)`` for complex order and argument."""
    nu, z = complex(nu), complex(z)
    route = hermite_route(z, policy)
    if route == "series":
        return _series_pair(nu, z, policy)
    if route == "asymptotic":
        h, d, err = _asymptotic_pair(nu, z)
        if err <= policy.rel_tol:
            return h, d
    unit = z / abs(z)
    r2 = abs(z) ** 2
    # H is recessive for |arg z| < pi/4: walk inward from where the expansion is sharp.
    if abs(z.real) > abs(z.imag) and z.real > 0:
        za, h, d, err = _accurate_start(nu, unit, max(r2, policy.asymptotic_threshold), policy)
        if err > policy.rel_tol:
            warnings.warn(
                f"H_{nu}({z}): asymptotic start error {err:.1e} exceeds rel_tol",
                SectorWarning, stacklevel=2)
        return _taylor_walk(nu, za, h, d, z)
    zs = unit * math.sqrt(min(SERIES_RADIUS2, r2))
    h, d = _series_pair(nu, zs, policy)
    return _taylor_walk(nu, zs, h, d, z)


def hermite_h(nu: complex, z: complex, policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """Hermite function H_nu(z) of complex order and complex argument.

    Agrees with the Hermite polynomials for non-negative integer ``nu`` and
    satisfies ``H_{nu+1} = 2 z H_nu - 2 nu H_{nu-1}``.
    """
    return hermite_pair(nu, z, policy)[0]


def hermite_h_derivative(nu: complex, z: complex,
                         policy: EvalPolicy = DEFAULT_POLICY) -> complex:
    """dH_nu/dz, computed as ``2 nu H_{nu-1}(z)``."""
    nu = complex(nu)
    if nu == 0:
        return 0j
    return 2 * nu * hermite_h(nu - 1, z, policy)


def hermite_h_both(nu: complex, z: complex,
                   policy: EvalPolicy = DEFAULT_POLICY) -> tuple[complex, complex]:
    """Evaluate H_nu(z) by the near-origin route and by the asymptotic
    expansion, returning both so the crossover can be checked."""
    nu, z = complex(nu), complex(z)
    near_policy = EvalPolicy(policy.rel_tol, policy.max_terms,
                             max(policy.asymptotic_threshold, abs(z) ** 2 * 1.000001))
    near = hermite_pair(nu, z, near_policy)[0]
    far, _ = _hermite_asymptotic(nu, z)
    return near, far
