from math import comb

import pytest

from src.cohomology import (
    CohomologyDims,
    cohomology_base,
    cohomology_cover,
    euler_char,
    h_line,
    regularity,
    surface_invariants,
)
from src.covers import canonical_of_cover, make_cover
from src.errors import LatticeMismatchError
from src.lattice import canonical_class, hirzebruch, projective_plane
from src.positivity import is_ample


def brute_force_hirzebruch(e, a, b):
    """(h0, h1) of aC0 + bf, a >= 0, summing O(b - ke) over k = 0..a."""
    h0 = sum(max(0, b - k * e + 1) for k in range(a + 1))
    h1 = sum(max(0, k * e - b - 1) for k in range(a + 1))
    return h0, h1


def test_projective_line():
    assert h_line(3) == (4, 0)
    assert h_line(-1) == (0, 0)
    assert h_line(-4) == (0, 3)


@pytest.mark.parametrize("e", range(5))
def test_closed_form_matches_summation(e):
    S = hirzebruch(e)
    for a in range(0, 7):
        for b in range(-12, 13):
            dims = cohomology_base(S, S.cls(a, b))
            assert (dims.h0, dims.h1) == brute_force_hirzebruch(e, a, b)
            assert dims.h2 == 0


@pytest.mark.parametrize("e", range(5))
def test_structure_sheaf_and_canonical(e):
    S = hirzebruch(e)
    assert cohomology_base(S, S.zero()).as_tuple() == (1, 0, 0)
    assert cohomology_base(S, canonical_class(S)).as_tuple() == (0, 0, 1)


def test_minus_one_section_coefficient_is_acyclic():
    S = hirzebruch(3)
    for b in range(-10, 11):
        assert cohomology_base(S, S.cls(-1, b)).as_tuple() == (0, 0, 0)


def test_plane_cohomology():
    P2 = projective_plane()
    for d in range(-10, 11):
        dims = cohomology_base(P2, P2.cls(d))
        assert dims.h0 == (comb(d + 2, 2) if d >= 0 else 0)
        assert dims.h1 == 0
        assert dims.h2 == (comb(-d - 1, 2) if d <= -3 else 0)


@pytest.mark.parametrize("e", [0, 1, 2])
def test_riemann_roch_and_serre_duality_on_base(e):
    S = hirzebruch(e)
    K = canonical_class(S)
    for a in range(-8, 9):
        for b in range(-8, 9):
            D = S.cls(a, b)
            dims = cohomology_base(S, D)
            assert dims.chi == euler_char(S, D)
            dual = cohomology_base(S, K - D)
            assert dims.h0 == dual.h2
            assert dims.h1 == dual.h1


def test_kodaira_vanishing_on_f1():
    S = hirzebruch(1)
    K = canonical_class(S)
    for a in range(1, 12):
        for b in range(a + 1, 14):
            assert is_ample(S, S.cls(a, b))
            dims = cohomology_base(S, K + S.cls(a, b))
            assert (dims.h1, dims.h2) == (0, 0)


def test_fiber_direction_h1():
    S = hirzebruch(1)
    assert cohomology_base(S, S.cls(0, -17)).as_tuple() == (0, 16, 0)


def test_cover_cohomology_sums_summands():
    P2 = projective_plane()
    X = make_cover(P2, 2, P2.cls(5))
    # O_X pushes forward to O + O(-5)
    assert cohomology_cover(X.zero()).as_tuple() == (1, 0, 6)
    assert cohomology_cover(X.pb(1)).as_tuple() == (3, 0, 3)


def test_serre_duality_on_cover():
    S = hirzebruch(1)
    X = make_cover(S, 2, S.cls(3, 8))
    K = canonical_of_cover(X)
    for a in range(-6, 7):
        for b in range(-6, 7):
            D = X.pb(a, b)
            dims = cohomology_cover(D)
            assert dims.h2 == cohomology_cover(K - D).h0
            assert dims.h0 == cohomology_cover(K - D).h2
            assert dims.chi == euler_char(X, D)


@pytest.mark.parametrize(
    "base, degree, L, p_g, q, K2",
    [
        ("plane", 2, (5,), 6, 0, 8),
        ("plane", 3, (3,), 11, 0, 27),
        ("f1", 2, (3, 8), 11, 0, 18),
        ("f1", 2, (3, 7), 9, 0, 14),
        ("f1", 2, (4, 7), 12, 0, 24),
    ],
)
def test_surface_invariants(base, degree, L, p_g, q, K2):
    S = projective_plane() if base == "plane" else hirzebruch(1)
    X = make_cover(S, degree, S.cls(*L))
    inv = surface_invariants(X)
    assert (inv.p_g, inv.q, inv.K2) == (p_g, q, K2)
    assert inv.regular and inv.minimal and inv.general_type
    assert inv.chi == 1 - q + p_g


def test_regularity_of_double_plane():
    P2 = projective_plane()
    X = make_cover(P2, 2, P2.cls(5))
    assert regularity(X.pb(1), 20) == 4
    assert regularity(X.pb(1), 3) is None


def test_dims_add_and_reject_mismatched_surfaces():
    total = CohomologyDims(h0=1, h1=2, h2=3) + CohomologyDims(h0=4, h1=0, h2=1)
    assert total.as_tuple() == (5, 2, 4)
    assert total.chi == 7
    with pytest.raises(LatticeMismatchError):
        cohomology_base(hirzebruch(0), hirzebruch(1).cls(1, 1))
    X = make_cover(projective_plane(), 2, projective_plane().cls(5))
    with pytest.raises(LatticeMismatchError):
        euler_char(X, projective_plane().cls(1))
