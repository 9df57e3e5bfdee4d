"""The l1-sum of the spaces F_n = span{x_1, ..., x_n} and its natural basis.

An element is a finite family of blocks; block ``n`` holds a coefficient
map supported in ``{1..n}``.  The norm is the sum of the block norms.
Global basis indices enumerate (block, inner) pairs as
(1,1), (2,1), (2,2), (3,1), ...
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from collections.abc import Iterable, Iterator, Mapping
from fractions import Fraction
from typing import NamedTuple

from .greedy import (
    SELECTION_CAP,
    GreedySelection,
    InvalidSelection,
    MTooLarge,
    greedy_sets,
    is_greedy_set,
    scan_selections,
)
from .lindenstrauss import expansion_norm
from .vectors import CoeffMap, vec_from_obj, vec_to_obj


class InnerIndexOutOfRange(ValueError):
    pass


class GlobalIndex(NamedTuple):
    block: int
    inner: int


def flatten(g: tuple[int, int]) -> int:
    block, inner = g
    if block < 1 or not 1 <= inner <= block:
        raise ValueError(f"malformed global index {tuple(g)}")
    return block * (block - 1) // 2 + inner


@lru_cache(maxsize=1 << 16)
def unflatten(k: int) -> GlobalIndex:
    if k < 1:
        raise ValueError(f"global index must be >= 1, got {k}")
    # largest n with n(n-1)/2 < k
    n = (1 + math.isqrt(8 * k - 7)) // 2
    while n * (n - 1) // 2 >= k:
        n -= 1
    while (n + 1) * n // 2 < k:
        n += 1
    return GlobalIndex(n, k - n * (n - 1) // 2)


class DSVec(Mapping):
    """Immutable mapping block index -> nonempty CoeffMap supported in {1..block}."""

    __slots__ = ("_blocks", "_mags")

    def __init__(self, blocks: Mapping[int, Mapping] | Iterable = ()):
        items = blocks.items() if isinstance(blocks, Mapping) else blocks
        out: dict[int, CoeffMap] = {}
        for n, coeffs in items:
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ValueError(f"block index must be a positive int, got {n!r}")
            coeffs = CoeffMap(coeffs)
            if coeffs and coeffs.max_index > n:
                raise InnerIndexOutOfRange(
                    f"block {n} holds inner index {coeffs.max_index} > {n}"
                )
            if coeffs:
                out[n] = coeffs
        self._blocks = dict(sorted(out.items()))
        self._mags = None

    def magnitudes(self) -> dict[int, dict[int, int]]:
        """Per-block coefficient moduli times one common denominator.

        Order-preserving integers, so threshold checks avoid Fraction compares.
        """
        if self._mags is None:
            d = math.lcm(1, *(c.denominator for b in self._blocks.values() for c in b.values()))
            self._mags = {
                n: {i: abs(c.numerator) * (d // c.denominator) for i, c in b.items()}
                for n, b in self._blocks.items()
            }
        return self._mags

    def __getitem__(self, n: int) -> CoeffMap:
        return self._blocks[n]

    def __iter__(self) -> Iterator[int]:
        return iter(self._blocks)

    def __len__(self) -> int:
        return len(self._blocks)

    def __eq__(self, other) -> bool:
        if isinstance(other, DSVec):
            return self._blocks == other._blocks
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._blocks.items()))

    def __repr__(self) -> str:
        return f"DSVec({self._blocks!r})"

    def flat(self) -> CoeffMap:
        """Coefficients indexed by flattened global index."""
        return CoeffMap(
            (flatten((n, i)), c) for n, blk in self._blocks.items() for i, c in blk.items()
        )

    @classmethod
    def from_flat(cls, flat: Mapping[int, Fraction]) -> DSVec:
        blocks: dict[int, dict[int, Fraction]] = {}
        for k, c in flat.items():
            n, i = unflatten(k)
            blocks.setdefault(n, {})[i] = c
        return cls(blocks)

    @property
    def support_size(self) -> int:
        return sum(len(b) for b in self._blocks.values())

    def to_obj(self) -> dict:
        return {str(n): vec_to_obj(b) for n, b in self._blocks.items()}

    @classmethod
    def from_obj(cls, obj: Mapping) -> DSVec:
        if not isinstance(obj, Mapping):
            raise ValueError("direct-sum vector must be a JSON object")
        blocks = {}
        for key, val in obj.items():
            if not key.isdigit() or int(key) < 1:
                raise ValueError(f"malformed block index {key!r}")
            blocks[int(key)] = vec_from_obj(val)
        return cls(blocks)

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), separators=(",", ":"))


def ds_norm(y: DSVec) -> Fraction:
    return sum((expansion_norm(b) for b in y.values()), Fraction(0))


def ds_greedy_sets(
    y: DSVec, m: int, cap: int = SELECTION_CAP
) -> tuple[GreedySelection, list[GreedySelection] | None]:
    """Global greedy sets as flattened indices.

    Flattening preserves (block, inner) order, so the canonical tie-break
    of the flat problem is smaller block first, then smaller inner index.
    """
    return greedy_sets(y.flat(), m, cap)


def ds_greedy(y: DSVec, m: int, selection: GreedySelection | None = None) -> DSVec:
    if m > y.support_size:
        raise MTooLarge(f"m={m} exceeds support size {y.support_size}")
    flat = y.flat()
    if selection is None:
        selection, _ = greedy_sets(flat, m, cap=0)
    elif len(selection.indices) != m or not is_greedy_set(flat, selection.indices):
        raise InvalidSelection(f"{selection.sorted()} is not a global greedy set of size {m}")
    return DSVec.from_flat({k: flat[k] for k in selection.indices})


def block_partition(selection: GreedySelection) -> dict[int, int]:
    """How many selected indices fall in each block: the k(i) of a split m = sum k(i)."""
    counts: dict[int, int] = {}
    for k in selection.indices:
        n = unflatten(k).block
        counts[n] = counts.get(n, 0) + 1
    return dict(sorted(counts.items()))


def block_restrictions_valid(y: DSVec, selection: GreedySelection) -> bool:
    """Each block's share of a global selection is a greedy set of that block."""
    per_block: dict[int, set[int]] = {n: set() for n in y}
    for k in selection.indices:
        n, i = unflatten(k)
        if n not in per_block:
            return False
        per_block[n].add(i)
    mags = y.magnitudes()
    return all(is_greedy_set(y[n], chosen, mags[n]) for n, chosen in per_block.items())


def ds_qg_check(y: DSVec, m: int, selection: GreedySelection | None = None) -> Fraction:
    """||G_m y|| / ||y|| in the direct sum (canonical selection unless given)."""
    if not y:
        raise ValueError("vector must be nonzero")
    return ds_norm(ds_greedy(y, m, selection)) / ds_norm(y)


def _block_coords(k: int) -> tuple:
    n, i = unflatten(k)
    return (n, i), (n, 2 * i + 1), (n, 2 * i + 2)


def ds_scan_selections(y: DSVec, cap: int = SELECTION_CAP):
    """Yield ``(m, selection, norm)`` over global greedy sets; selections hold flat indices.

    Blocks never share coordinates, so the norm is the sum of block norms.
    """
    for m, sel, norm in scan_selections(y.flat(), cap, coords=_block_coords):
        yield m, GreedySelection(sel), norm
