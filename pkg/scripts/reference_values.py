"""Regenerate the frozen reference values used by the test suite with mpmath.

Everything here is computed from first principles at 30 digits, independent
of the package: special functions from mpmath, the t = 0 amplitude from its
Hermite-function formula, and the Fig-1 trajectory by Taylor-series ODE
integration in s = sqrt(t).

    python scripts/reference_values.py
"""
import mpmath as mp


def special_functions():
    yield "gamma(1+i)", mp.gamma(1 + 1j)
    yield "gamma(-2.5+0.3i)", mp.gamma(-2.5 + 0.3j)
    yield "erfc(2-3i)", mp.erfc(2 - 3j)
    yield "erfc(-0.5+4.5i)", mp.erfc(-0.5 + 4.5j)
    yield "M(0.3+0.2i, 1.7, -6+2i)", mp.hyp1f1(0.3 + 0.2j, 1.7, -6 + 2j)
    for nu, z in [(0.3 + 0.1j, 0.7 - 0.2j), (-1.3 + 0.7j, 3 - 4j), (2.5, -5 + 1j)]:
        yield f"H_{nu}({z})", mp.hermite(nu, z)


def scattering(u0, d0, d1):
    """a2(0) of the first quasi-energy solution, normalized at t -> infinity."""
    u0, d0, d1 = mp.mpf(u0), mp.mpf(d0), mp.mpf(d1)
    R = mp.sqrt(d0**2 / 4 + u0**2)
    nu = 1j * u0**2 * d1**2 / (4 * R**3)
    xi = (1 - 1j) * d0 * d1 / (4 * R**1.5)
    lam1 = d0 / 2 + R
    c1 = u0 / mp.sqrt(u0**2 + lam1**2) * mp.exp(-mp.pi * d1**2 * u0**2 / (16 * R**3))
    r = mp.sqrt(xi**2 - 2 * nu)
    # the root that makes this the t = 0 value of the solution: Re(r conj(xi)) <= 0
    if mp.re(r * mp.conj(xi)) > 0:
        r = -r
    return c1, c1 * (mp.hermite(nu, xi) + (-xi + r) * mp.hermite(nu - 1, xi))


def fig1_trajectory(times=(1, 4)):
    """(a1, a2)(t) for U0 = 1, Delta0 = 4, Delta1 = -5 from the ground state."""
    def f(s, y):
        e = mp.exp(1j * (4 * s * s - 10 * s))
        return [-2j * s * y[1] / e, -2j * s * y[0] * e]
    sol = mp.odefun(f, 0, [mp.mpc(1), mp.mpc(0)])
    for t in times:
        yield t, sol(mp.sqrt(t))


def main():
    mp.mp.dps = 30
    for name, value in special_functions():
        print(f"{name} = {value}")
    for cfg in [(1, 4, -5), (1, 4, 4), (2, 3, 1.5)]:
        c1, a2 = scattering(*cfg)
        print(f"scattering {cfg}: C1 = {c1}, a2(0) = {a2}")
    mp.mp.dps = 20
    for t, (a1, a2) in fig1_trajectory():
        print(f"fig1 t = {t}: a1 = {a1}, a2 = {a2}")


if __name__ == "__main__":
    main()
