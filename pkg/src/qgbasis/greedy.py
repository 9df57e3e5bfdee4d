"""Thresholding greedy operator for the Lindenstrauss system.

``G_m`` keeps the ``m`` coefficients of largest modulus.  When moduli tie
at the threshold the kept set is not unique, and for a conditional basis
different choices give vectors of different norm.  So the operator is
handled as a relation: :func:`greedy_sets` returns the canonical choice
(smaller index wins ties) plus, when there are not too many, every valid
choice.

Norms are always taken after expanding to unit-vector coordinates.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .lindenstrauss import (
    common_denominator,
    expansion_norm,
    level,
    scaled_coeffs,
    scaled_expansion,
)
from .vectors import CoeffMap, SparseVec

SELECTION_CAP = 64
UCC_CAP = 20

DYADIC_GRID: tuple[Fraction, ...] = tuple(
    sorted({s * Fraction(1, 2**k) for k in range(5) for s in (1, -1)} | {Fraction(0)})
)


class MTooLarge(ValueError):
    pass


class InvalidSelection(ValueError):
    pass


class TooLarge(ValueError):
    pass


class TooManySelections(ValueError):
    pass


@dataclass(frozen=True)
class GreedySelection:
    indices: frozenset[int]
    canonical: bool = False

    def sorted(self) -> list[int]:
        return sorted(self.indices)


@dataclass(frozen=True)
class QGReport:
    ratio: Fraction
    coeffs: CoeffMap
    m: int
    selection: GreedySelection
    bound: Fraction = Fraction(3)
    evaluated: int = 0

    @property
    def witness(self) -> tuple[CoeffMap, int, GreedySelection]:
        return self.coeffs, self.m, self.selection


@dataclass(frozen=True)
class UccReport:
    m: int
    c_min: Fraction
    C_max: Fraction
    min_signs: tuple[int, ...]
    max_signs: tuple[int, ...]


@dataclass(frozen=True)
class ConditionalityWitness:
    n: int
    signs: tuple[int, ...]
    numerator: Fraction
    denominator: Fraction

    @property
    def ratio(self) -> Fraction:
        return self.numerator / self.denominator


def _canonical_order(a: Mapping[int, Fraction]) -> list[int]:
    return sorted(a, key=lambda i: (-abs(a[i]), i))


def _threshold_split(a: Mapping[int, Fraction], m: int) -> tuple[list[int], list[int], int]:
    """Split a valid m-selection into (forced, tied, need).

    Every valid selection is ``forced`` plus ``need`` indices drawn from
    ``tied``, the indices whose modulus equals the m-th largest.
    """
    if m < 0:
        raise ValueError(f"m must be >= 0, got {m}")
    if m > len(a):
        raise MTooLarge(f"m={m} exceeds support size {len(a)}")
    if m == 0:
        return [], [], 0
    order = _canonical_order(a)
    t = abs(a[order[m - 1]])
    forced = [i for i in order if abs(a[i]) > t]
    tied = [i for i in order if abs(a[i]) == t]
    return forced, tied, m - len(forced)


def selection_count(a: Mapping[int, Fraction], m: int) -> int:
    _, tied, need = _threshold_split(a, m)
    return math.comb(len(tied), need)


def iter_selections(a: Mapping[int, Fraction], m: int):
    """Yield every valid greedy set of size m, canonical first."""
    forced, tied, need = _threshold_split(a, m)
    for pick in itertools.combinations(tied, need):
        yield frozenset(forced).union(pick)


def greedy_sets(
    a: Mapping[int, Fraction], m: int, cap: int = SELECTION_CAP
) -> tuple[GreedySelection, list[GreedySelection] | None]:
    """Canonical greedy set of size ``m`` and, if at most ``cap`` exist, all of them."""
    forced, tied, need = _threshold_split(a, m)
    canonical = GreedySelection(frozenset(forced + tied[:need]), canonical=True)
    if math.comb(len(tied), need) > cap:
        return canonical, None
    everything = [
        GreedySelection(s, canonical=(s == canonical.indices)) for s in iter_selections(a, m)
    ]
    return canonical, everything


def is_greedy_set(a: Mapping[int, Fraction], indices, mags: Mapping[int, Fraction] | None = None) -> bool:
    """Threshold property: every chosen |a_i| >= every unchosen |a_k|.

    ``mags`` may carry precomputed moduli of ``a`` (any order-preserving
    rescaling works).
    """
    chosen = set(indices)
    if not chosen.issubset(a):
        return False
    if not chosen or len(chosen) == len(a):
        return True
    if mags is None:
        mags = {i: abs(v) for i, v in a.items()}
    low = min(mags[i] for i in chosen)
    high = max(mags[k] for k in a if k not in chosen)
    return low >= high


def greedy_operator(
    a: Mapping[int, Fraction], m: int, selection: GreedySelection | None = None
) -> CoeffMap:
    """G_m(a): the restriction of ``a`` to a valid greedy set (canonical by default)."""
    if selection is None:
        selection, _ = greedy_sets(a, m, cap=0)
    elif len(selection.indices) != m or not is_greedy_set(a, selection.indices):
        raise InvalidSelection(f"{selection.sorted()} is not a greedy set of size {m}")
    return CoeffMap({i: a[i] for i in selection.indices})


def qg_ratio(a: Mapping[int, Fraction], m: int, cap: int = 4096) -> Fraction:
    """max over valid greedy sets A of ||G_A a|| / ||a||, both norms in l1."""
    return qg_ratio_witness(a, m, cap)[0]


def qg_ratio_witness(
    a: Mapping[int, Fraction], m: int, cap: int = 4096
) -> tuple[Fraction, GreedySelection]:
    if not a:
        raise ValueError("coefficient map must be nonempty")
    count = selection_count(a, m)
    if count > cap:
        raise TooManySelections(f"{count} valid selections exceed cap {cap}")
    d = common_denominator(a)
    ints = scaled_coeffs(a, d)
    total = _norm2(ints)
    best, best_sel = None, None
    for sel in iter_selections(a, m):
        val = _norm2({i: ints[i] for i in sel})
        if best is None or val > best:
            best, best_sel = val, sel
    canonical = best_sel == greedy_sets(a, m, cap=0)[0].indices
    return Fraction(best, total), GreedySelection(best_sel, canonical)


def _norm2(ints: Mapping[int, int]) -> int:
    return sum(abs(t) for t in scaled_expansion(ints).values())


def _tree_coords(i: int) -> tuple:
    return i, 2 * i + 1, 2 * i + 2


def scan_selections(a: Mapping[int, Fraction], cap: int = SELECTION_CAP, coords=_tree_coords):
    """Yield ``(m, A, norm)`` for every m and every valid greedy set A.

    For a given m, all valid sets are produced when there are at most
    ``cap`` of them, otherwise only the canonical one.  ``norm`` is the
    exact l1 norm of the kept part, expanded in unit-vector coordinates.
    ``coords(i)`` names the three coordinates touched by basis vector i
    (own, first child, second child); the direct sum overrides it.
    """
    d = common_denominator(a)
    ints = scaled_coeffs(a, d)
    scale = 2 * d
    order = _canonical_order(a)
    prefix: dict = {}
    prefix_norm = 0
    prefix_len = 0

    def extend(acc: dict, i: int, norm: int) -> int:
        c = ints[i]
        own, left, right = coords(i)
        for j, dv in ((own, 2 * c), (left, -c), (right, -c)):
            old = acc.get(j, 0)
            new = old + dv
            acc[j] = new
            norm += abs(new) - abs(old)
        return norm

    for m in range(0, len(a) + 1):
        forced, tied, need = _threshold_split(a, m)
        # forced sets are prefixes of the canonical order
        while prefix_len < len(forced):
            prefix_norm = extend(prefix, order[prefix_len], prefix_norm)
            prefix_len += 1
        if need == 0 or math.comb(len(tied), need) > cap:
            picks = [tuple(tied[:need])]
        else:
            picks = itertools.combinations(tied, need)
        base = frozenset(forced)
        for pick in picks:
            norm = prefix_norm
            if pick:
                acc = dict(prefix)
                for i in pick:
                    norm = extend(acc, i, norm)
            yield m, base.union(pick), Fraction(norm, scale)


def worst_greedy_ratio(a: Mapping[int, Fraction], cap: int = SELECTION_CAP) -> QGReport:
    """Largest ||G_A a|| / ||a|| over every m and every valid A (see :func:`scan_selections`).

    ``evaluated`` counts the (m, A) pairs examined.
    """
    a = CoeffMap(a)
    if not a:
        raise ValueError("coefficient map must be nonempty")
    total = expansion_norm(a)
    best = None
    evaluated = 0
    for m, sel, norm in scan_selections(a, cap):
        evaluated += 1
        if best is None or norm > best[0]:
            best = (norm, m, sel)
    norm, m, sel = best
    canonical = sel == greedy_sets(a, m, cap=0)[0].indices
    return QGReport(
        ratio=norm / total,
        coeffs=a,
        m=m,
        selection=GreedySelection(sel, canonical),
        evaluated=evaluated,
    )


@dataclass(frozen=True)
class SearchConfig:
    """Search space for the empirical quasi-greedy constant."""

    max_index: int = 6
    support_size: int = 6
    grid: tuple[Fraction, ...] = DYADIC_GRID
    trials: int = 1000
    seed: int = 0
    exhaustive: bool = False
    cap: int = SELECTION_CAP


def _witness_key(report: QGReport):
    return (
        -report.ratio,
        tuple(report.coeffs.items()),
        report.m,
        tuple(sorted(report.selection.indices)),
    )


def _better(new: QGReport, old: QGReport | None) -> bool:
    return old is None or _witness_key(new) < _witness_key(old)


def search_candidates(config: SearchConfig):
    """Yield the coefficient maps examined by :func:`qg_lower_bound_search`, in order."""
    values = [Fraction(g) for g in config.grid if g]
    if not values:
        raise ValueError("grid has no nonzero values")
    if config.exhaustive:
        pool = range(1, config.max_index + 1)
        for size in range(1, min(config.support_size, config.max_index) + 1):
            for support in itertools.combinations(pool, size):
                for coeffs in itertools.product(values, repeat=size):
                    yield CoeffMap(zip(support, coeffs))
    else:
        for trial in range(config.trials):
            yield random_coeff_map(
                trial_rng(config.seed, trial), config.max_index, config.support_size, values
            )


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent stream per (seed, trial) so trials can run in any order."""
    return random.Random((seed << 32) ^ trial)


def random_coeff_map(
    rng: random.Random, max_index: int, support_size: int, values: Sequence[Fraction]
) -> CoeffMap:
    size = rng.randint(1, min(support_size, max_index))
    support = rng.sample(range(1, max_index + 1), size)
    return CoeffMap((i, rng.choice(values)) for i in sorted(support))


def qg_lower_bound_search(config: SearchConfig, candidates=None) -> QGReport:
    """Largest greedy ratio found over the configured search space.

    Deterministic: the maximum ratio wins, ties go to the lexicographically
    smallest witness, so evaluation order does not matter.
    """
    best = None
    evaluated = 0
    if candidates is None:
        candidates = search_candidates(config)
    for a in candidates:
        rep = worst_greedy_ratio(a, config.cap)
        evaluated += rep.evaluated
        if _better(rep, best):
            best = rep
    if best is None:
        raise ValueError("empty search space")
    return QGReport(best.ratio, best.coeffs, best.m, best.selection, best.bound, evaluated)


def merge_reports(reports) -> QGReport | None:
    """Combine partial search results the same way a serial search would."""
    best, evaluated = None, 0
    for rep in reports:
        evaluated += rep.evaluated
        if _better(rep, best):
            best = rep
    if best is None:
        return None
    return QGReport(best.ratio, best.coeffs, best.m, best.selection, best.bound, evaluated)


def ucc_constants(m: int, cap: int = UCC_CAP) -> UccReport:
    """Best constants c, C with c||sum x_i|| <= ||sum eps_i x_i|| <= C||sum x_i||, i <= m.

    Exhaustive over 2**(m-1) sign patterns (eps_1 = +1, since a global flip
    does not change the norm).  Ties go to the first pattern in enumeration
    order, where bit k of the counter set means eps_{k+2} = -1.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if m > cap:
        raise TooLarge(f"m={m} exceeds exhaustive cap {cap}")
    base = _norm2({i: 1 for i in range(1, m + 1)})
    lo = hi = None
    lo_signs = hi_signs = None
    for bits in range(2 ** (m - 1)):
        signs = (1,) + tuple(-1 if bits >> k & 1 else 1 for k in range(m - 1))
        val = _norm2({i + 1: s for i, s in enumerate(signs)})
        if lo is None or val < lo:
            lo, lo_signs = val, signs
        if hi is None or val > hi:
            hi, hi_signs = val, signs
    return UccReport(m, Fraction(lo, base), Fraction(hi, base), lo_signs, hi_signs)


def conditionality_witness(n: int) -> ConditionalityWitness:
    """Level-alternating signs on the level-halving weights over 2**(n+1) - 2 terms.

    The ratio ||sum eps_i w_i x_i|| / ||sum w_i x_i|| grows without bound
    in n, so the basis is conditional.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    size = 2 ** (n + 1) - 2
    weights = {i: Fraction(2, 2 ** level(i)) for i in range(1, size + 1)}
    signs = tuple((-1) ** level(i) for i in range(1, size + 1))
    signed = {i: s * weights[i] for i, s in zip(range(1, size + 1), signs)}
    return ConditionalityWitness(n, signs, expansion_norm(signed), expansion_norm(weights))
