"""The coefficient functionals x_i* and why they are not quasi-greedy.

x_i* lives in a quotient of l_infinity, so its norm is only bracketed:
any representative (such as y_i*) bounds it from above, and any nonzero
vector of span{x_i} bounds it from below via |<f, v>| / ||v||.

Two facts are checked for M = 2**(n+1) - 2:

* the alternating sum sum_{i<=M} (-1)**i y_i* has sup-norm 1;
* the plain sum pairs with z_n = sum_{i<=M} w_i x_i to 2n while
  ||z_n|| = 4, so ||sum_{i<=M} x_i*|| >= n/2.

Here ``w_i = 2**(1 - level(i))``: 1, 1, 1/2 (x4), 1/4 (x8), ...  Direct
expansion of z_n gives ``e_1 + e_2`` plus ``2**(n+1)`` coordinates equal to
``-2**-n`` on the children of the last level.  That is the form used here.
It differs from a closed form sometimes written with ``+2**-(n+1)`` tail
entries, and only the expanded form gives ||z_n|| = 4.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction

from .lindenstrauss import dual_vector, expand, expansion_norm, level
from .vectors import CoeffMap, SparseVec, format_rational, linear_combine, sup_norm

N_MAX_CAP = 12
EXACT_DUAL_CAP = 6


class EmptyWitnessList(ValueError):
    pass


class CapExceeded(ValueError):
    pass


def _check_n(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValueError(f"n must be a positive int, got {n!r}")
    return 2 ** (n + 1) - 2


@dataclass(frozen=True)
class GrowthRow:
    n: int
    M: int
    alt_norm: Fraction
    witness_norm: Fraction
    pairing: Fraction

    @property
    def lower_bound(self) -> Fraction:
        return self.pairing / self.witness_norm

    def as_record(self) -> dict[str, str | int]:
        return {
            "n": self.n,
            "M": self.M,
            "alt_norm": format_rational(self.alt_norm),
            "witness_norm": format_rational(self.witness_norm),
            "pairing": format_rational(self.pairing),
            "lower_bound": format_rational(self.lower_bound),
        }


def witness_weights(n: int) -> CoeffMap:
    size = _check_n(n)
    return CoeffMap((i, Fraction(2, 2 ** level(i))) for i in range(1, size + 1))


def z_vector(n: int) -> SparseVec:
    return expand(witness_weights(n))


def alternating_dual_norm(n: int) -> Fraction:
    size = _check_n(n)
    return sup_norm(linear_combine(((-1) ** i, dual_vector(i)) for i in range(1, size + 1)))


def dual_sum_lower_bound(n: int) -> GrowthRow:
    size = _check_n(n)
    weights = witness_weights(n)
    # <x_i*, z_n> = w_i by biorthogonality
    pairing = sum(weights.values(), Fraction(0))
    return GrowthRow(
        n=n,
        M=size,
        alt_norm=alternating_dual_norm(n),
        witness_norm=expansion_norm(weights),
        pairing=pairing,
    )


def growth_table(n_max: int) -> list[GrowthRow]:
    if not 1 <= n_max <= N_MAX_CAP:
        raise CapExceeded(f"n_max must lie in 1..{N_MAX_CAP}, got {n_max}")
    return [dual_sum_lower_bound(n) for n in range(1, n_max + 1)]


def dual_norm_upper(c: Mapping[int, Fraction]) -> Fraction:
    """sup-norm of the representative sum c_i y_i*; bounds ||sum c_i x_i*|| above."""
    return sup_norm(linear_combine((coef, dual_vector(i)) for i, coef in c.items()))


def dual_norm_lower(c: Mapping[int, Fraction], witnesses: Iterable[Mapping[int, Fraction]]) -> Fraction:
    """max over witnesses w of |sum_k c_k w_k| / ||sum_k w_k x_k||."""
    best = None
    for w in witnesses:
        norm = expansion_norm(w)
        if not norm:
            continue
        val = abs(sum((Fraction(c[k]) * w[k] for k in w if k in c), Fraction(0))) / norm
        best = val if best is None else max(best, val)
    if best is None:
        raise EmptyWitnessList("no nonzero witness supplied")
    return best


def default_witnesses(c: Mapping[int, Fraction]) -> list[CoeffMap]:
    """Single basis vectors on the support of ``c``, plus every level-halving
    witness whose index range fits inside the largest index of ``c``."""
    out = [CoeffMap({i: 1}) for i in sorted(c)]
    top = max(c, default=0)
    n = 1
    while 2 ** (n + 1) - 2 <= top:
        out.append(witness_weights(n))
        n += 1
    if not out:
        raise EmptyWitnessList("coefficient map is empty")
    return out


def exact_dual_norm(c: Mapping[int, Fraction], n: int) -> Fraction:
    """Norm of sum c_i x_i* as a functional on F_n = span{x_1..x_n}, exactly.

    Maximizes |sum c_i a_i| over ||sum a_i x_i||_1 <= 1 by visiting every
    vertex of that polytope.  A vertex direction has n - 1 independent
    coordinates of sum a_i x_i equal to zero, so it spans the kernel of
    those rows.  Capped at n <= 6.
    """
    import sympy

    if not 1 <= n <= EXACT_DUAL_CAP:
        raise CapExceeded(f"exact dual norm supports 1 <= n <= {EXACT_DUAL_CAP}")
    if any(i > n for i in c):
        raise ValueError(f"coefficients outside 1..{n}")
    coords = range(1, 2 * n + 3)
    rows = {
        j: [
            sympy.Integer(1) if j == i else sympy.Rational(-1, 2) if (j - 1) // 2 == i and j > 2 else 0
            for i in range(1, n + 1)
        ]
        for j in coords
    }
    best = Fraction(0)
    for picked in itertools.combinations(coords, n - 1):
        mat = sympy.Matrix([rows[j] for j in picked]) if picked else sympy.zeros(0, n)
        kernel = mat.nullspace() if picked else [sympy.eye(n)[:, k] for k in range(n)]
        if len(kernel) != 1:
            continue
        a = {i + 1: Fraction(int(v.p), int(v.q)) for i, v in enumerate(kernel[0]) if v != 0}
        val = abs(sum((Fraction(c.get(i, 0)) * t for i, t in a.items()), Fraction(0)))
        val /= expansion_norm(a)
        best = max(best, val)
    return best
