"""Empirical lower bounds for the quasi-greedy constant of the Lindenstrauss basis.

Runs an exhaustive sweep over small supports and a seeded random sweep over
larger ones, printing the worst ratio ||G_m a|| / ||a|| found and its witness.

    python scripts/best_constant_search.py --max-index 6 --trials 20000
"""

import argparse
from fractions import Fraction

from qgbasis.greedy import DYADIC_GRID, SearchConfig, qg_lower_bound_search
from qgbasis.vectors import format_rational


def show(label, rep):
    coeffs = ", ".join(f"{i}: {format_rational(c)}" for i, c in rep.coeffs.items())
    print(f"{label}: ratio {format_rational(rep.ratio)} (~{float(rep.ratio):.4f}), "
          f"m={rep.m}, A={rep.selection.sorted()}, a={{{coeffs}}}, "
          f"{rep.evaluated} selections checked")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-index", type=int, default=6)
    ap.add_argument("--random-max-index", type=int, default=30)
    ap.add_argument("--support", type=int, default=12)
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    small_grid = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2))
    show("exhaustive", qg_lower_bound_search(SearchConfig(
        max_index=args.max_index, support_size=args.max_index, grid=small_grid, exhaustive=True)))
    show("random", qg_lower_bound_search(SearchConfig(
        max_index=args.random_max_index, support_size=args.support, grid=DYADIC_GRID,
        trials=args.trials, seed=args.seed)))


if __name__ == "__main__":
    main()
