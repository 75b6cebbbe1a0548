"""Write the data behind figures 1-4 as CSV files.

    python scripts/reproduce_figures.py [--out figures] [--points 201] [--jobs 4]
"""
import argparse
from pathlib import Path

from ivsqrt import cli


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--out", default="figures")
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for fig in (1, 2, 3, 4):
        target = out / f"figure{fig}.csv"
        code = cli.main(["figure", str(fig), "--points", str(args.points),
                         "--jobs", str(args.jobs), "-o", str(target)])
        print(f"figure {fig}: {'ok' if code == 0 else f'exit {code}'} -> {target}")


if __name__ == "__main__":
    main()
