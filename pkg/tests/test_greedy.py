from fractions import Fraction

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

import oracles
from conftest import coeff_maps, dyadic
from qgbasis.greedy import (
    GreedySelection,
    InvalidSelection,
    MTooLarge,
    SearchConfig,
    TooLarge,
    conditionality_witness,
    greedy_operator,
    greedy_sets,
    is_greedy_set,
    iter_selections,
    qg_lower_bound_search,
    qg_ratio,
    ucc_constants,
    worst_greedy_ratio,
)
from qgbasis.lindenstrauss import expansion_norm
from qgbasis.vectors import CoeffMap

H = Fraction(1, 2)


def test_greedy_sets_examples():
    canon, _ = greedy_sets(CoeffMap({1: 3, 2: -2, 3: 1}), 2)
    assert canon.indices == {1, 2} and canon.canonical

    canon, everything = greedy_sets(CoeffMap({1: 1, 2: -1}), 1)
    assert canon.indices == {1}
    assert [s.indices for s in everything] == [{1}, {2}]

    canon, everything = greedy_sets(CoeffMap({5: H}), 0)
    assert canon.indices == frozenset()
    assert greedy_operator(CoeffMap({5: H}), 0) == CoeffMap()


def test_greedy_sets_rejects_large_m():
    with pytest.raises(MTooLarge):
        greedy_sets(CoeffMap({1: 1}), 2)


def test_greedy_operator_examples():
    a = CoeffMap({1: 3, 2: -2, 3: 1})
    assert greedy_operator(a, 2, GreedySelection(frozenset({1, 2}))) == CoeffMap({1: 3, 2: -2})
    b = CoeffMap({1: 1, 2: 1})
    assert greedy_operator(b, 2) == b
    c = CoeffMap({1: 1, 3: H, 4: H})
    assert greedy_operator(c, 1, GreedySelection(frozenset({1}))) == CoeffMap({1: 1})


def test_greedy_operator_rejects_bad_selection():
    a = CoeffMap({1: 3, 2: -2, 3: 1})
    with pytest.raises(InvalidSelection):
        greedy_operator(a, 2, GreedySelection(frozenset({1, 3})))
    with pytest.raises(InvalidSelection):
        greedy_operator(a, 2, GreedySelection(frozenset({1})))


def test_qg_ratio_examples():
    assert qg_ratio(CoeffMap({1: 1}), 1) == 1
    assert qg_ratio(CoeffMap({1: 1, 2: 1}), 1) == H
    # ||x_1|| = 2 and ||x_1 + x_3/2 + x_4/2|| = 2
    assert qg_ratio(CoeffMap({1: 1, 3: H, 4: H}), 1) == 1


@given(coeff_maps(max_index=12, max_size=6))
def test_qg_ratio_against_brute_force(a):
    for m in range(0, len(a) + 1):
        assert qg_ratio(a, m) == oracles.brute_greedy_ratio(dict(a), m)


@given(coeff_maps(max_index=40, max_size=14))
def test_threshold_validity_and_bound(a):
    for m in range(len(a) + 1):
        canon, everything = greedy_sets(a, m)
        sels = everything if everything is not None else [canon]
        for sel in sels:
            assert len(sel.indices) == m
            assert is_greedy_set(a, sel.indices)
            assert expansion_norm(greedy_operator(a, m, sel)) <= 3 * expansion_norm(a)


@given(coeff_maps(max_index=40, max_size=14))
def test_idempotent_and_nested(a):
    prev = frozenset()
    for m in range(len(a) + 1):
        canon, _ = greedy_sets(a, m, cap=0)
        g = greedy_operator(a, m, canon)
        assert greedy_operator(g, m, canon) == g
        assert prev <= canon.indices
        prev = canon.indices


@given(coeff_maps(max_index=20, max_size=8))
def test_worst_ratio_matches_per_m_maximum(a):
    rep = worst_greedy_ratio(a, cap=10**6)
    expected = max(qg_ratio(a, m, cap=10**6) for m in range(len(a) + 1))
    assert rep.ratio == expected
    sel = rep.selection.indices
    assert expansion_norm({i: a[i] for i in sel}) / expansion_norm(a) == rep.ratio
    assert is_greedy_set(a, sel) and len(sel) == rep.m


def test_iter_selections_count():
    a = CoeffMap({i: 1 for i in range(1, 7)})
    assert len(list(iter_selections(a, 3))) == 20
    canon, everything = greedy_sets(a, 3, cap=19)
    assert everything is None and canon.indices == {1, 2, 3}


# frozen from tests/oracles.brute_ucc
UCC_EXPECTED = {
    1: (1, 1),
    2: (1, 1),
    3: (1, Fraction(6, 5)),
    4: (1, Fraction(4, 3)),
    5: (1, Fraction(10, 7)),
    6: (1, Fraction(3, 2)),
    7: (1, Fraction(14, 9)),
    8: (1, Fraction(8, 5)),
}


@pytest.mark.parametrize("m", range(1, 9))
def test_ucc_constants(m):
    rep = ucc_constants(m)
    assert (rep.c_min, rep.C_max) == UCC_EXPECTED[m]
    assert rep.c_min <= 1 <= rep.C_max
    assert len(rep.max_signs) == m and rep.max_signs[0] == 1


@pytest.mark.parametrize("m", range(1, 7))
def test_ucc_against_brute_force(m):
    rep = ucc_constants(m)
    assert (rep.c_min, rep.C_max) == oracles.brute_ucc(m)


def test_ucc_cap():
    with pytest.raises(TooLarge):
        ucc_constants(21)
    with pytest.raises(ValueError):
        ucc_constants(0)


# frozen from tests/oracles.level_sign_ratio
@pytest.mark.parametrize("n", range(1, 9))
def test_conditionality_witness(n):
    w = conditionality_witness(n)
    assert w.ratio == n
    assert w.denominator == 4 and w.numerator == 4 * n
    assert len(w.signs) == 2 ** (n + 1) - 2


def test_conditionality_n2_detail():
    w = conditionality_witness(2)
    assert (w.numerator, w.denominator) == (8, 4)
    assert w.signs == (-1, -1, 1, 1, 1, 1)


def test_conditionality_against_oracle():
    for n in range(1, 6):
        assert conditionality_witness(n).ratio == oracles.level_sign_ratio(n)


def test_conditionality_rejects():
    with pytest.raises(ValueError):
        conditionality_witness(0)


def test_search_exhaustive_small():
    grid = (Fraction(1), Fraction(-1), H, -H)
    rep = qg_lower_bound_search(SearchConfig(max_index=6, support_size=6, grid=grid, exhaustive=True))
    assert rep.ratio <= 3
    assert expansion_norm({i: rep.coeffs[i] for i in rep.selection.indices}) == rep.ratio * expansion_norm(rep.coeffs)


def test_search_support_one():
    rep = qg_lower_bound_search(SearchConfig(max_index=10, support_size=1, trials=50, seed=3))
    assert rep.ratio == 1


def test_search_deterministic():
    cfg = SearchConfig(max_index=30, support_size=12, trials=200, seed=11)
    assert qg_lower_bound_search(cfg) == qg_lower_bound_search(cfg)


def test_search_order_independent():
    from qgbasis.greedy import merge_reports, search_candidates

    cfg = SearchConfig(max_index=30, support_size=10, trials=120, seed=5)
    cands = list(search_candidates(cfg))
    whole = qg_lower_bound_search(cfg)
    parts = [qg_lower_bound_search(cfg, cands[i : i + 17]) for i in range(0, len(cands), 17)]
    merged = merge_reports(reversed(parts))
    assert (merged.ratio, merged.coeffs, merged.m, merged.selection) == (
        whole.ratio,
        whole.coeffs,
        whole.m,
        whole.selection,
    )
