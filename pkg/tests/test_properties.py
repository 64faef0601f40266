import pytest

from src.config import DEFAULT_CONFIG
from src.corpus import load_corpus
from src.families import enumerate_ex5_3, enumerate_ex5_4
from src.paper_runner import verify_paper
from src.properties import (
    DOMINANCE_PAIRS,
    cohomology_violations,
    corpus_context,
    dominance_violations,
    family_counts,
    growth_violations,
    monotonicity_violations,
    propagation_violations,
    van_violations,
)


@pytest.fixture(scope="module")
def members():
    out = []
    for n in (2, 3, 4, 5):
        out += enumerate_ex5_3(n, 30, extras=False)
        out += enumerate_ex5_4(n, 30, extras=False)
    return out


@pytest.fixture(scope="module")
def corpus_contexts():
    return [(entry.name, corpus_context(entry, DEFAULT_CONFIG)) for entry in load_corpus()]


def test_cohomology_engine_properties():
    assert cohomology_violations() == []


def test_family_counts_grow():
    assert growth_violations() == []
    for family_id in ("ex5_3", "ex5_4"):
        counts = family_counts(family_id, 2)
        assert 0 < counts[0] < counts[1] < counts[2]


def test_vanishing_inequalities_hold_on_family_members(members):
    assert {s.parameters["n"] for s in members} == {2, 3, 4, 5}
    assert max(s.parameters["b"] for s in members) == 30
    confirmed, bad = van_violations(members)
    assert bad == []
    assert confirmed > 1000


def test_h1_propagation_on_corpus_models(corpus_contexts):
    for name, ctx in corpus_contexts:
        applied, bad = propagation_violations(ctx, name)
        assert bad == [], name
        assert applied == 2, name


def test_h1_propagation_on_family_members(members):
    applied = 0
    for sol in members:
        count, bad = propagation_violations(sol.context, str(sol.parameters))
        assert bad == []
        applied += count
    assert applied == 2 * len(members)


def test_least_r_is_monotone_in_p(corpus_contexts):
    for name, ctx in corpus_contexts:
        assert monotonicity_violations(ctx, name) == []


def test_regular_rules_dominate(corpus_contexts):
    assert [pair[0] for pair in DOMINANCE_PAIRS] == ["n0_4", "n1_3", "main6"]
    for name, ctx in corpus_contexts:
        assert dominance_violations(ctx, name) == []


def test_member_of_main6_family_dominates(members):
    sol = next(s for s in members if s.family_id == "ex5_3" and (s.parameters["b"], s.parameters["m"]) == (4, 5))
    assert dominance_violations(sol.context, "ex5_3 b=4 m=5", r_max=12) == []
    assert monotonicity_violations(sol.context, "ex5_3 b=4 m=5", p_max=3) == []


def test_suite_violations_fail_the_run(monkeypatch):
    monkeypatch.setattr("src.paper_runner.van_violations", lambda members: (0, ["2B-0K does not vanish"]))
    report = verify_paper(family_b_max=4)
    assert report.exit_code == 1
    assert report.failures == ["property vanishing inequalities: 2B-0K does not vanish"]
