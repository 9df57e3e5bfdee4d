"""Dense brute-force oracles, deliberately independent of the qgbasis package.

Vectors are plain Python lists of Fractions indexed from 0 (slot 0 is
coordinate 1).  Nothing here imports qgbasis.
"""

from fractions import Fraction
from itertools import combinations, product

HALF = Fraction(1, 2)


def dense_x(i, length):
    v = [Fraction(0)] * length
    v[i - 1] += 1
    v[2 * i] -= HALF  # coordinate 2i+1
    v[2 * i + 1] -= HALF  # coordinate 2i+2
    return v


def dense_combo(coeffs, length=None):
    """sum_i coeffs[i] * x_i as a dense list."""
    if length is None:
        length = 2 * max(coeffs, default=0) + 2
    out = [Fraction(0)] * length
    for i, c in coeffs.items():
        for j, val in enumerate(dense_x(i, length)):
            out[j] += Fraction(c) * val
    return out


def norm1(v):
    return sum((abs(t) for t in v), Fraction(0))


def combo_norm(coeffs):
    return norm1(dense_combo(coeffs)) if coeffs else Fraction(0)


def dense_y(i, length):
    """Dual representative: walk i -> i - (i//2 + 1) halving weights."""
    v = [Fraction(0)] * length
    w = Fraction(1)
    k = i
    while k > 0:
        v[k - 1] += w
        k = k - (k // 2 + 1)
        w /= 2
    return v


def brute_greedy_ratio(coeffs, m):
    """max over every m-subset A obeying the threshold rule of ||G_A|| / ||x||."""
    idx = sorted(coeffs)
    best = None
    for A in combinations(idx, m):
        rest = [k for k in idx if k not in A]
        if A and rest and min(abs(coeffs[i]) for i in A) < max(abs(coeffs[k]) for k in rest):
            continue
        r = combo_norm({i: coeffs[i] for i in A}) / combo_norm(coeffs)
        best = r if best is None else max(best, r)
    return best


def brute_ucc(m):
    base = combo_norm({i: 1 for i in range(1, m + 1)})
    ratios = []
    for signs in product((1, -1), repeat=m):
        ratios.append(combo_norm({i + 1: s for i, s in enumerate(signs)}) / base)
    return min(ratios), max(ratios)


def tree_level(i):
    """Depth of i in the binary tree rooted at {1, 2}, by counting."""
    lo, lvl = 1, 1
    while True:
        hi = lo + 2 ** lvl - 1
        if lo <= i <= hi:
            return lvl
        lo, lvl = hi + 1, lvl + 1


def level_weights(n):
    M = 2 ** (n + 1) - 2
    return {i: Fraction(2) / 2 ** tree_level(i) for i in range(1, M + 1)}


def level_sign_ratio(n):
    w = level_weights(n)
    num = combo_norm({i: (-1) ** tree_level(i) * c for i, c in w.items()})
    return num / combo_norm(w)
