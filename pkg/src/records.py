"""Verdict records shared by the positivity rules and the certification engine.

Numbers are stored as exact decimal strings ("17", "-3", "7/2") so the records
serialize losslessly and compare byte-for-byte across runs.
"""

import operator
from fractions import Fraction
from typing import Callable, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

Exact = Union[int, Fraction]

Relation = Literal["<", "<=", ">", ">=", "==", "!=", "holds"]

_COMPARE: Dict[str, Callable[[Exact, Exact], bool]] = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}


def fmt_exact(x: Exact) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def parse_exact(s: str) -> Exact:
    if "/" in s:
        return Fraction(s)
    return int(s)


class Hypothesis(BaseModel):
    """One checked hypothesis: lhs relation rhs, or a named fact when relation is 'holds'."""

    model_config = ConfigDict(frozen=True)

    name: str
    lhs: str = ""
    relation: Relation = "holds"
    rhs: str = ""
    verdict: bool
    provenance: str = Field("direct", description="How the verdict was obtained")


def compare(
    name: str, lhs: Exact, relation: Relation, rhs: Exact, provenance: str = "exact arithmetic"
) -> Hypothesis:
    verdict = _COMPARE[relation](lhs, rhs)
    return Hypothesis(
        name=name,
        lhs=fmt_exact(lhs),
        relation=relation,
        rhs=fmt_exact(rhs),
        verdict=verdict,
        provenance=provenance,
    )


def fact(name: str, verdict: bool, provenance: str, subject: str = "") -> Hypothesis:
    return Hypothesis(name=name, lhs=subject, verdict=verdict, provenance=provenance)


def replay(h: Hypothesis) -> bool:
    """Recomputes a comparison verdict from its recorded values."""
    if h.relation == "holds":
        return h.verdict
    return _COMPARE[h.relation](parse_exact(h.lhs), parse_exact(h.rhs))


class Verdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: bool
    provenance: str


class RuleOutcome(BaseModel):
    """Result of trying one rule: every hypothesis it checked, in order."""

    model_config = ConfigDict(frozen=True)

    rule_id: str
    level: int
    applicable: bool
    n: Optional[int] = None
    r_bound: Optional[int] = None
    hypotheses: List[Hypothesis] = []

    @property
    def blocking(self) -> List[str]:
        return [h.name for h in self.hypotheses if not h.verdict]


class Inapplicable(BaseModel):
    """A rule, lemma or search that could not conclude. This is a value, not an error."""

    model_config = ConfigDict(frozen=True)

    reason: str
    blocking: List[str] = []
    appendix: List[RuleOutcome] = []
