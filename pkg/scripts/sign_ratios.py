"""Sign-flip experiments: best constant-coefficient constants for small m, and
the level-alternating witness whose ratio grows linearly in n."""

import argparse

from qgbasis.greedy import conditionality_witness, ucc_constants
from qgbasis.vectors import format_rational


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m-max", type=int, default=14)
    ap.add_argument("--n-max", type=int, default=8)
    args = ap.parse_args()

    print("m  c_min  C_max")
    for m in range(1, args.m_max + 1):
        rep = ucc_constants(m)
        print(f"{m:<2} {format_rational(rep.c_min):>5}  {format_rational(rep.C_max)}")
    print()
    print("n  terms  ratio")
    for n in range(1, args.n_max + 1):
        w = conditionality_witness(n)
        print(f"{n:<2} {len(w.signs):>5}  {format_rational(w.ratio)}")


if __name__ == "__main__":
    main()
