import pytest

from src.errors import InvalidModelError
from src.families import (
    build_classics,
    build_ex5_7,
    enumerate_ex5_3,
    enumerate_ex5_4,
    enumerate_family_by_geometry,
    ex5_3_inequalities,
    ex5_4_inequalities,
    ex5_7_parameters,
    f1_model,
    nef_boundary_discrepancies,
)


def pairs(solutions):
    return {(s.parameters["b"], s.parameters["m"]) for s in solutions}


def test_ex5_3_contains_the_worked_member():
    assert ex5_3_inequalities(2, 4, 5)
    sols = enumerate_ex5_3(2, 10)
    assert (4, 5) in pairs(sols)
    assert all(s.verified for s in sols)
    member = next(s for s in sols if (s.parameters["b"], s.parameters["m"]) == (4, 5))
    claims = {c.claim: c for c in member.verification}
    assert claims["main6 certifies N_2 for K+5B"].status == "pass"
    assert claims["(n+1)B-2K nef"].witness["strict"] == "true"


def test_ex5_4_contains_the_worked_member():
    assert ex5_4_inequalities(2, 3, 4)
    sols = enumerate_ex5_4(2, 8)
    assert (3, 4) in pairs(sols)
    assert all(s.verified for s in sols)
    member = next(s for s in sols if (s.parameters["b"], s.parameters["m"]) == (3, 4))
    assert "main51 certifies N_2 for K+7B" in [c.claim for c in member.verification]


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_every_member_verifies_up_to_b_30(n):
    sols3 = enumerate_ex5_3(n, 30)
    sols4 = enumerate_ex5_4(n, 30)
    assert sols3 and sols4
    assert all(s.verified for s in sols3 + sols4)
    assert max(s.parameters["b"] for s in sols4) == 30
    for sol in sols4:
        claims = {c.claim: c.status for c in sol.verification}
        assert claims["(n-1)b-n+2 < nb-n+1 < (n+1)b-n+1"] == "pass"


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_families_are_nonempty_and_grow(n):
    counts = []
    for b_max in (10, 20, 40):
        counts.append(sum(
            1 for b in range(2, b_max + 1) for m in range(1, (n + 1) * b + 2) if ex5_3_inequalities(n, b, m)
        ))
    assert 0 < counts[0] < counts[1] < counts[2]
    assert enumerate_ex5_4(n, 6)


@pytest.mark.parametrize("family, enumerate_family", [("ex5_3", enumerate_ex5_3), ("ex5_4", enumerate_ex5_4)])
def test_geometric_search_matches_inequalities_in_degree_two(family, enumerate_family):
    by_geometry = enumerate_family_by_geometry(family, 2, 7)
    assert pairs(by_geometry) == pairs(enumerate_family(2, 7, extras=False))
    assert {s.family_id for s in by_geometry} == {family}


def test_higher_degree_search():
    sols = enumerate_family_by_geometry("ex5_3", 8, 10, degree=3)
    assert (10, 19) in pairs(sols)
    assert {s.family_id for s in sols} == {"ex5_5"}
    assert (4, 7) in pairs(enumerate_family_by_geometry("ex5_4", 5, 4, degree=3))


def test_nef_discrepancies_lie_on_the_boundary():
    n = 3
    found = nef_boundary_discrepancies("ex5_3", n, 12, 40)
    assert found
    assert all(2 * m == (n + 1) * b - n + 1 for b, m in found)
    found = nef_boundary_discrepancies("ex5_4", n, 12, 40)
    assert found
    assert all(m == n * b - n + 1 for b, m in found)


def test_cm_obstruction_family():
    assert ex5_7_parameters(3, 3) == (4, 2, 4)
    sol = build_ex5_7(3, 3)
    assert sol.verified
    claims = {c.claim: c for c in sol.verification}
    assert claims["h0(2K-3B) > 0"].witness["h0"] == "5"
    assert claims["mult_regular certifies (3, 3)"].status == "pass"
    assert claims["mult_general is blocked for (3, 3)"].status == "pass"
    assert build_ex5_7(4, 4).parameters["b_param"] == 6


@pytest.mark.parametrize("n, m", [(3, 4), (2, 2), (0, 6)])
def test_cm_obstruction_preconditions(n, m):
    with pytest.raises(InvalidModelError):
        ex5_7_parameters(n, m)


def test_classics_keep_negative_claims_unverified():
    sols = build_classics()
    assert [s.family_id for s in sols] == ["ex5_1", "ex5_2"]
    for sol in sols:
        assert sol.verified
        statuses = [c.status for c in sol.verification]
        assert statuses.count("unverifiable") == 1
        assert "fail" not in statuses


def test_invalid_family_arguments():
    with pytest.raises(InvalidModelError):
        enumerate_ex5_3(1, 10)
    with pytest.raises(InvalidModelError):
        f1_model(1, 5)
    with pytest.raises(InvalidModelError):
        enumerate_family_by_geometry("ex5_3", 2, 5, degree=1)
