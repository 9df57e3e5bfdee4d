"""Growth table for the coefficient functionals: the alternating sum stays at
norm 1 while the plain sum grows like n/2.

    python scripts/dual_growth.py --n-max 12 --csv growth.csv
"""

import argparse
import sys

from qgbasis.cli import growth_csv
from qgbasis.dual import growth_table


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--csv")
    args = ap.parse_args()
    text = growth_csv(growth_table(args.n_max))
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)


if __name__ == "__main__":
    main()
