"""Large-t behaviour of the two quasi-energy solutions.

Prints |a2| of each branch against the asymptotic prefactor.  For the second
branch it also shows the prefactor with a 4 pi exponent, which is far off;
for the first branch it shows that the remaining deviation decays like
1/sqrt(t) (the scaled column settles to a constant).

    python scripts/asymptote_prefactor.py
"""
import math

from ivsqrt import closed_form as cf
from ivsqrt.field import FieldConfig, quasi_energies


def main(cfg=FieldConfig(1.0, 4.0, -5.0)):
    lam1, lam2, _ = quasi_energies(cfg)
    pre1 = cf.asymptote_prefactor(cfg, 1)
    pre2 = cf.asymptote_prefactor(cfg, 2)
    pre2_4pi = cf.asymptote_prefactor(cfg, 2, multiplier=4.0)
    print(f"{cfg}\nprefactors: branch 1 {pre1:.6f}, branch 2 {pre2:.6f} (4 pi: {pre2_4pi:.6f})")
    print(f"{'t':>8} {'|a2|/pre1 - 1':>14} {'x sqrt(t)':>10} {'|a2|/pre2 - 1':>14} "
          f"{'|a2|/pre2(4pi)':>14}")
    for t in (1e2, 1e3, 1e4, 1e5, 1e6, 1e8):
        d1 = abs(cf.a2_fundamental_quasienergy(t, cfg, lam1)) / pre1 - 1
        m2 = abs(cf.a2_fundamental_quasienergy(t, cfg, lam2))
        print(f"{t:8.0e} {d1:14.3e} {d1 * math.sqrt(t):10.4f} {m2 / pre2 - 1:14.3e} "
              f"{m2 / pre2_4pi:14.4f}")


if __name__ == "__main__":
    main()
