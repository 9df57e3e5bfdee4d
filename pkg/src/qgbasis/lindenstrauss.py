"""The Lindenstrauss basic sequence in l1 and its dual representatives.

``x_i = e_i - (e_{2i+1} + e_{2i+2}) / 2``.  Coordinates form a binary
forest: roots 1 and 2, and node ``i`` has children ``2i+1`` and ``2i+2``.

Notation clash: the letter alpha names two unrelated things in the source
material.  ``alpha_chain(i)`` is the index path used to build ``y_i*``,
while the scalar coefficients of ``sum a_i x_i`` live in a ``CoeffMap``.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from fractions import Fraction
from functools import lru_cache

from .vectors import CoeffMap, SparseVec, linear_combine, pair

HALF = Fraction(1, 2)


class NotInSpan(ValueError):
    """Raised when a vector is not in span{x_1, ..., x_N}."""


def _check_index(i: int, name: str = "i") -> None:
    if isinstance(i, bool) or not isinstance(i, int):
        raise TypeError(f"{name} must be an int, got {i!r}")
    if i < 1:
        raise ValueError(f"{name} must be >= 1, got {i}")


def basis_vector(i: int) -> SparseVec:
    _check_index(i)
    return SparseVec._trusted({i: Fraction(1), 2 * i + 1: -HALF, 2 * i + 2: -HALF})


def children(i: int) -> tuple[int, int]:
    _check_index(i)
    return 2 * i + 1, 2 * i + 2


def parent(j: int) -> int | None:
    """The unique i with x_i(j) = -1/2, or None for the roots 1 and 2."""
    _check_index(j, "j")
    if j <= 2:
        return None
    return (j - 1) // 2


@lru_cache(maxsize=4096)
def alpha_chain(i: int) -> tuple[int, ...]:
    """Strictly decreasing path i, i - ([i/2] + 1), ... while positive."""
    _check_index(i)
    chain = [i]
    while True:
        nxt = chain[-1] - (chain[-1] // 2 + 1)
        if nxt <= 0:
            return tuple(chain)
        chain.append(nxt)


@lru_cache(maxsize=4096)
def dual_vector(i: int) -> SparseVec:
    """Holub-Retherford representative y_i* in l_infinity."""
    return SparseVec._trusted(
        {k: Fraction(1, 2**j) for j, k in enumerate(alpha_chain(i))}
    )


def level(i: int) -> int:
    """Depth in the coordinate forest, counted by walking up to a root.

    Level l consists of the indices 2**l - 1 .. 2**(l+1) - 2.
    """
    _check_index(i)
    depth = 1
    while i > 2:
        i = (i - 1) // 2
        depth += 1
    return depth


def expand(a: Mapping[int, Fraction]) -> SparseVec:
    """Unit-vector coordinates of sum_i a_i x_i."""
    return linear_combine((c, basis_vector(i)) for i, c in a.items())


def analyze(v: Mapping[int, Fraction], n: int) -> CoeffMap:
    """Recover the coefficients of ``v`` in x_1..x_n, verifying the residual."""
    _check_index(n, "N")
    coeffs = CoeffMap((i, pair(dual_vector(i), v)) for i in range(1, n + 1))
    residual = linear_combine([(1, v), (-1, expand(coeffs))])
    if residual:
        raise NotInSpan(f"residual {residual!r} is nonzero; vector is not in span(x_1..x_{n})")
    return coeffs


def common_denominator(a: Mapping[int, Fraction]) -> int:
    """lcm of the denominators of the coefficients in ``a`` (1 when empty)."""
    return math.lcm(1, *(Fraction(c).denominator for c in a.values()))


def scaled_coeffs(a: Mapping[int, Fraction], scale: int) -> dict[int, int]:
    """Coefficients multiplied by ``scale``, which must clear all denominators."""
    out = {}
    for i, c in a.items():
        c = Fraction(c)
        out[i] = c.numerator * (scale // c.denominator)
    return out


def scaled_expansion(coeffs: Mapping[int, int]) -> dict[int, int]:
    """Twice the unit-vector coordinates of sum c_i x_i for integer c_i.

    Doubling keeps the halves integral.  Zero entries may remain.
    """
    acc: dict[int, int] = {}
    for i, c in coeffs.items():
        acc[i] = acc.get(i, 0) + 2 * c
        acc[2 * i + 1] = acc.get(2 * i + 1, 0) - c
        acc[2 * i + 2] = acc.get(2 * i + 2, 0) - c
    return acc


def expansion_norm(a: Mapping[int, Fraction]) -> Fraction:
    """l1 norm of sum a_i x_i, computed by exact expansion to unit-vector coordinates."""
    if not a:
        return Fraction(0)
    d = common_denominator(a)
    acc = scaled_expansion(scaled_coeffs(a, d))
    return Fraction(sum(abs(t) for t in acc.values()), 2 * d)


def partial_sum_norms(a: Mapping[int, Fraction]) -> list[Fraction]:
    """||sum_{i<=n} a_i x_i|| for n = 1 .. max index of ``a``.

    Monotonicity of the basis means this list never decreases.
    """
    if not a:
        return []
    d = common_denominator(a)
    ints = scaled_coeffs(a, d)
    acc: dict[int, int] = {}
    norm = 0
    out = []
    for n in range(1, max(a) + 1):
        c = ints.get(n, 0)
        if c:
            for j, dv in ((n, 2 * c), (2 * n + 1, -c), (2 * n + 2, -c)):
                old = acc.get(j, 0)
                acc[j] = old + dv
                norm += abs(old + dv) - abs(old)
        out.append(Fraction(norm, 2 * d))
    return out
