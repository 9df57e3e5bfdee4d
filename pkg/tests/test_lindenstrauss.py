from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

import oracles
from conftest import coeff_maps, rationals
from qgbasis.lindenstrauss import (
    NotInSpan,
    alpha_chain,
    analyze,
    basis_vector,
    dual_vector,
    expand,
    expansion_norm,
    level,
    parent,
)
from qgbasis.vectors import CoeffMap, SparseVec, l1_norm, pair, sup_norm

H = Fraction(1, 2)
Q = Fraction(1, 4)

# y_1* .. y_8* as printed, coordinates 1..10
DISPLAYED_DUALS = {
    1: [1, 0],
    2: [0, 1, 0],
    3: [H, 0, 1, 0],
    4: [H, 0, 0, 1, 0],
    5: [0, H, 0, 0, 1, 0],
    6: [0, H, 0, 0, 0, 1, 0],
    7: [Q, 0, H, 0, 0, 0, 1, 0],
    8: [Q, 0, H, 0, 0, 0, 0, 1, 0, 0],
}


@pytest.mark.parametrize("i", range(1, 9))
def test_dual_vector_matches_display(i):
    dense = DISPLAYED_DUALS[i]
    assert dual_vector(i) == SparseVec({j + 1: v for j, v in enumerate(dense)})


def test_basis_vector_examples():
    assert basis_vector(1) == SparseVec({1: 1, 3: -H, 4: -H})
    assert basis_vector(2) == SparseVec({2: 1, 5: -H, 6: -H})
    assert basis_vector(10) == SparseVec({10: 1, 21: -H, 22: -H})


def test_parent_examples():
    assert parent(3) == 1 and parent(4) == 1
    assert parent(1) is None and parent(2) is None


def test_alpha_chain_examples():
    assert alpha_chain(7) == (7, 3, 1)
    assert alpha_chain(5) == (5, 2)
    assert alpha_chain(1) == (1,)


def test_dual_vector_examples():
    assert dual_vector(8) == SparseVec({1: Q, 3: H, 8: 1})
    assert dual_vector(4) == SparseVec({1: H, 4: 1})
    assert dual_vector(2) == SparseVec({2: 1})


def test_expand_examples():
    assert expand(CoeffMap({1: 1})) == basis_vector(1)
    assert expand(CoeffMap({1: 1, 3: H, 4: H})) == SparseVec({1: 1, 7: -Q, 8: -Q, 9: -Q, 10: -Q})
    assert expand(CoeffMap()) == SparseVec()


def test_analyze_examples():
    a = CoeffMap({2: 3, 5: -H})
    assert analyze(expand(a), 5) == a
    with pytest.raises(NotInSpan):
        analyze(SparseVec({1: 1}), 4)
    assert analyze(SparseVec(), 1) == CoeffMap()


def test_level_examples():
    assert level(1) == level(2) == 1
    assert level(6) == 2
    assert level(7) == 3


@pytest.mark.parametrize("fn", [basis_vector, parent, alpha_chain, dual_vector, level])
@pytest.mark.parametrize("bad", [0, -1])
def test_rejects_nonpositive(fn, bad):
    with pytest.raises(ValueError):
        fn(bad)


def test_biorthogonality_small():
    for i in range(1, 41):
        for k in range(1, 41):
            assert pair(dual_vector(i), basis_vector(k)) == (1 if i == k else 0)


def test_dual_vector_against_dense_oracle():
    for i in range(1, 64):
        dense = oracles.dense_y(i, 70)
        assert dual_vector(i) == SparseVec({j + 1: v for j, v in enumerate(dense)})


@pytest.mark.parametrize("i", range(3, 300))
def test_chain_parent_coherence(i):
    assert alpha_chain(i)[1] == parent(i)
    assert parent(2 * i + 1) == parent(2 * i + 2) == i


@pytest.mark.parametrize("i", range(1, 300))
def test_level_bounds(i):
    lvl = level(i)
    assert 2**lvl - 1 <= i <= 2 ** (lvl + 1) - 2
    assert lvl == oracles.tree_level(i)
    assert lvl == len(alpha_chain(i))


@pytest.mark.parametrize("i", [1, 2, 5, 17, 100, 1000])
def test_normalization(i):
    assert l1_norm(basis_vector(i)) == 2
    assert sup_norm(dual_vector(i)) == 1


@given(coeff_maps(values=rationals.filter(bool)))
def test_expand_matches_dense_oracle(a):
    dense = oracles.dense_combo(dict(a))
    assert expand(a) == SparseVec({j + 1: v for j, v in enumerate(dense)})
    assert expansion_norm(a) == oracles.norm1(dense) == l1_norm(expand(a))


@given(coeff_maps(values=rationals.filter(bool)))
def test_analyze_round_trip(a):
    assert analyze(expand(a), a.max_index) == a


@given(coeff_maps(max_index=25, max_size=12, values=rationals.filter(bool)))
def test_monotone_partial_sums(a):
    full = l1_norm(expand(a))
    norms = [expansion_norm({i: c for i, c in a.items() if i <= n}) for n in range(1, a.max_index + 1)]
    assert norms == sorted(norms)
    assert norms[-1] == full


@given(coeff_maps(max_index=25, max_size=12, values=rationals.filter(bool)))
def test_partial_sum_norms_match_direct(a):
    from qgbasis.lindenstrauss import partial_sum_norms

    direct = [expansion_norm({i: c for i, c in a.items() if i <= n}) for n in range(1, a.max_index + 1)]
    assert partial_sum_norms(a) == direct
