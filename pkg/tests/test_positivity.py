from fractions import Fraction

import pytest

from src.covers import make_cover
from src.errors import InvalidModelError
from src.lattice import hirzebruch, projective_plane
from src.positivity import (
    SlopeBound,
    h1_vanishing_from,
    is_ample,
    is_big,
    is_bpf,
    is_nef,
    k_plus_b_bpf,
    least_n_for,
    lemma_1_1_corollary,
    lemma_1_2_check,
    nef_by_cone,
    van_claim,
    vanishing_van,
    vanishing_van1,
)
from src.records import Inapplicable


def f1_double(L):
    S = hirzebruch(1)
    return make_cover(S, 2, S.cls(*L))


def steep():
    """h1(lB) = 0 for l <= 2 and l >= 19 only."""
    X = f1_double((3, 23))
    return X, X.pb(1, 2)


def test_nef_and_ample_on_f1():
    S = hirzebruch(1)
    assert is_nef(S, S.cls(1, 1)) and not is_ample(S, S.cls(1, 1))
    assert is_ample(S, S.cls(1, 2))
    assert is_nef(S, S.cls(0, 1)) and not is_ample(S, S.cls(0, 1))
    assert not is_nef(S, S.cls(1, 0))
    assert not is_nef(S, S.cls(-1, 5))
    assert is_bpf(S, S.cls(2, 2))


@pytest.mark.parametrize("e", range(4))
def test_nef_matches_cone_of_curves(e):
    S = hirzebruch(e)
    for a in range(-4, 5):
        for b in range(-4, 12):
            assert is_nef(S, S.cls(a, b)) == nef_by_cone(S, S.cls(a, b))


def test_plane_positivity():
    P2 = projective_plane()
    assert is_ample(P2, P2.cls(1))
    assert is_nef(P2, P2.cls(0)) and not is_ample(P2, P2.cls(0))
    assert not is_nef(P2, P2.cls(-1))


def test_bigness():
    S = hirzebruch(1)
    assert not is_big(S, S.cls(0, 1))
    assert is_big(S, S.cls(1, 1))


@pytest.mark.parametrize(
    "B2, BK, expected",
    [(2, 4, Fraction(1, 2)), (14, 16, Fraction(7, 8)), (10, 12, Fraction(5, 6)), (6, 42, Fraction(1, 7))],
)
def test_best_slope_bound(B2, BK, expected):
    assert SlopeBound.best(B2, BK, 1000).ratio == expected


def test_slope_bound_when_b_squared_dominates():
    bound = SlopeBound.best(6, 6, 1000)
    assert (bound.a, bound.b) == (999, 1000)
    assert bound.holds(6, 6)
    with pytest.raises(InvalidModelError):
        SlopeBound.best(0, 4, 1000)


@pytest.mark.parametrize("a, b", [(2, 4), (3, 2), (0, 5), (1, 1)])
def test_invalid_slope_bounds(a, b):
    with pytest.raises(ValueError):
        SlopeBound(a=a, b=b)


def test_k_plus_b_provenance():
    P2 = projective_plane()
    X = make_cover(P2, 2, P2.cls(5))
    assert k_plus_b_bpf(X, X.pb(1)).provenance == "base-class check"
    Y = f1_double((3, 8))
    verdict = k_plus_b_bpf(Y, Y.pb(1, 4))
    assert verdict.value and verdict.provenance == "Reider"
    with pytest.raises(InvalidModelError):
        k_plus_b_bpf(Y, Y.pb(0, 1))


def test_propagation_of_h1_vanishing():
    X, B = steep()
    bound = SlopeBound.best(6, 42, 1000)
    vanishes = h1_vanishing_from(19, bound, X, B)
    assert callable(vanishes)
    assert vanishes(200) and vanishes(19) and vanishes(2)
    assert not vanishes(3) and not vanishes(18)

    too_small = h1_vanishing_from(5, bound, X, B)
    assert isinstance(too_small, Inapplicable)
    assert too_small.blocking == ["m0 > b/a"]

    nonzero = h1_vanishing_from(10, bound, X, B)
    assert isinstance(nonzero, Inapplicable)
    assert nonzero.blocking == ["h1(m0 B) = 0"]


def test_lemma_1_1_corollary():
    X, B = steep()
    assert callable(lemma_1_1_corollary(7, 19, X, B))
    assert isinstance(lemma_1_1_corollary(1, 19, X, B), Inapplicable)
    # 6 B^2 < B.K
    assert isinstance(lemma_1_1_corollary(6, 19, X, B), Inapplicable)


def test_lemma_1_2_self_check():
    P2 = projective_plane()
    X = make_cover(P2, 2, P2.cls(5))
    assert lemma_1_2_check(SlopeBound(a=1, b=2), X, X.pb(1)) is True
    Y, B = steep()
    assert lemma_1_2_check(SlopeBound(a=1, b=7), Y, B) is True
    assert isinstance(lemma_1_2_check(SlopeBound(a=1, b=2), Y, B), Inapplicable)


def test_vanishing_inequalities_are_strict():
    assert vanishing_van(2, 6, 1)
    assert not vanishing_van(2, 4, 1)
    assert not vanishing_van(1, 3, 1)  # 2m = (n+1)(l+2)
    assert vanishing_van1(2, 5, 1)
    assert not vanishing_van1(2, 4, 1)


def test_van_claim_gated_on_nef_hypothesis():
    X = f1_double((3, 8))
    assert van_claim(X, X.pb(1, 4), 2, 5, 1) is True
    assert van_claim(X, X.pb(1, 4), 2, 4, 1) is False
    assert van_claim(X, X.pb(1, 4), 2, 4, 1, "van1") is False
    assert isinstance(van_claim(X, X.pb(1, 4), 1, 5, 1), Inapplicable)
    Y, B = steep()
    assert isinstance(van_claim(Y, B, 2, 50, 1), Inapplicable)


def test_least_n_searches():
    X = f1_double((3, 8))
    B = X.pb(1, 4)
    assert least_n_for(X, B, "(n+1)B-2K", 10) == 2
    assert least_n_for(X, B, "nB-K", 10) == 2
    assert least_n_for(X, B, "slope", 10) == 2
    Y, C = steep()
    assert least_n_for(Y, C, "slope", 10) == 7
    assert least_n_for(Y, C, "(n+1)B-2K", 10) is None
    assert least_n_for(Y, C, "nB-K", 30) == 19
