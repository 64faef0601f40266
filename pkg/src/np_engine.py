"""Certification of N_p properties for adjoint bundles K + rB.

Each rule is a sufficient condition: a list of numerical hypotheses that, when
all hold, imply N_p for K + rB. Rules are tried strongest first and every
attempt is kept, so a report shows which hypothesis blocked which route.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, floor
from typing import Callable, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, model_validator

from src.cohomology import SurfaceInvariants, cohomology_cover, surface_invariants
from src.config import DEFAULT_CONFIG, EngineConfig
from src.covers import (
    SMOOTH_BRANCH_ASSUMPTION,
    CyclicCover,
    PullbackClass,
    canonical_of_cover,
    pullback_intersect,
)
from src.errors import InternalInconsistency, InvalidModelError
from src.positivity import (
    SlopeBound,
    is_ample_pullback,
    is_bpf_pullback,
    is_nef_pullback,
    k_plus_b_bpf,
    lemma_1_2_check,
    least_n_for,
    nef_form,
)
from src.records import Hypothesis, Inapplicable, RuleOutcome, Verdict, compare, fact, fmt_exact

logger = logging.getLogger(__name__)

RuleId = Literal[
    "n0_1", "n0_2", "n0_3", "n0_4",
    "n1_0", "n1_1", "n1_2", "n1_3", "n1_5",
    "main5", "main51", "main6",
]

N0_RULES: Tuple[str, ...] = ("n0_4", "n0_3", "n0_2", "n0_1")
N1_RULES: Tuple[str, ...] = ("n1_3", "n1_2", "n1_5", "n1_1", "n1_0")
NP_RULES: Tuple[str, ...] = ("main6", "main5", "main51")

REGULAR_RULE_ASSUMPTION = "regular-surface rules also require p_g >= 3 and K^2 >= 2"
MAIN6_ASSUMPTION = "main6 also requires q = 0 and p_g >= 3"


@dataclass(frozen=True)
class SurfaceContext:
    """A cover X, an ample class B on it, and everything the rules read off them."""

    cover: CyclicCover
    B: PullbackClass
    config: EngineConfig = field(default=DEFAULT_CONFIG)

    @cached_property
    def K(self) -> PullbackClass:
        return canonical_of_cover(self.cover)

    @cached_property
    def B2(self) -> int:
        return pullback_intersect(self.B, self.B)

    @cached_property
    def BK(self) -> int:
        return pullback_intersect(self.B, self.K)

    @cached_property
    def K2(self) -> int:
        return pullback_intersect(self.K, self.K)

    @cached_property
    def invariants(self) -> SurfaceInvariants:
        return surface_invariants(self.cover)

    @property
    def p_g(self) -> int:
        return self.invariants.p_g

    @property
    def q(self) -> int:
        return self.invariants.q

    @property
    def regular(self) -> bool:
        return self.invariants.regular

    @property
    def minimal_certified(self) -> bool:
        return self.invariants.minimal

    @property
    def general_type_certified(self) -> bool:
        return self.invariants.general_type

    @cached_property
    def k_plus_b(self) -> Verdict:
        return k_plus_b_bpf(self.cover, self.B)

    @cached_property
    def bound(self) -> SlopeBound:
        return SlopeBound.best(self.B2, self.BK, self.config.slope_cap)

    @cached_property
    def slope_n(self) -> int:
        """Least n >= 2 with n B^2 >= B.K."""
        return max(2, ceil(Fraction(self.BK, self.B2)))

    @cached_property
    def least_n_searches(self) -> Dict[str, Optional[int]]:
        """Results of the n searches of the N_p rules, keyed by nef form."""
        return {}

    def h1(self, l: int) -> int:
        return cohomology_cover(self.B * l).h1

    @cached_property
    def _propagation_start(self) -> Optional[int]:
        lo = floor(self.bound.inverse) + 1
        for m0 in range(lo, self.config.direct_limit + 1):
            if self.h1(m0) == 0:
                return m0
        return None

    def h1_gate(self, l: int) -> Hypothesis:
        """h^1(lB) = 0, computed directly up to the configured limit, propagated beyond it."""
        name = f"h1({l}B) = 0"
        if l <= self.config.direct_limit:
            return compare(name, self.h1(l), "==", 0, "direct")
        m0 = self._propagation_start
        if m0 is not None:
            return compare(name, 0, "==", 0, f"propagated from h1({m0}B) = 0")
        return fact(name, False, "undecided beyond the direct limit")

    def numerically_distinct(self, name: str, lhs: PullbackClass, rhs: PullbackClass) -> Hypothesis:
        return fact(name, not lhs.numerically_equal(rhs), "numerical class comparison", f"{lhs} vs {rhs}")

    @cached_property
    def standing(self) -> List[Hypothesis]:
        kb = self.k_plus_b
        return [
            fact("B ample", is_ample_pullback(self.B), "nef cone", str(self.B)),
            fact("B bpf", is_bpf_pullback(self.B), "nef cone", str(self.B)),
            fact("K nef", self.minimal_certified, "nef cone", str(self.K)),
            compare("K^2 > 0", self.K2, ">", 0),
            compare("B^2 >= 2", self.B2, ">=", 2),
            fact("K+B bpf", kb.value, kb.provenance),
        ]

    @cached_property
    def regular_hypotheses(self) -> List[Hypothesis]:
        return [
            compare("q = 0", self.q, "==", 0, "direct"),
            compare("p_g >= 3", self.p_g, ">=", 3, "direct"),
            compare("K^2 >= 2", self.K2, ">=", 2),
        ]

    def slope_hypothesis(self) -> Hypothesis:
        return compare("B^2 >= (a/b) B.K", self.B2, ">=", self.bound.ratio * self.BK)

    def n_slope_hypothesis(self, n: int) -> Hypothesis:
        return compare("B^2 >= (1/n) B.K", self.B2, ">=", Fraction(self.BK, n))

    def assumptions(self) -> List[str]:
        out = [SMOOTH_BRANCH_ASSUMPTION]
        if self.k_plus_b.provenance == "base-class check":
            out.append("K+B bpf inferred from base point freeness of its base class")
        return out


def build_context(
    cover: CyclicCover, B: PullbackClass, config: EngineConfig = DEFAULT_CONFIG
) -> SurfaceContext:
    """Validates the standing hypotheses that are errors rather than rule failures."""
    if B.cover != cover:
        raise InvalidModelError("B is not a class on the given cover")
    if not is_ample_pullback(B) or not is_bpf_pullback(B):
        raise InvalidModelError(f"B = {B} must be ample and base point free")
    ctx = SurfaceContext(cover=cover, B=B, config=config)
    if ctx.B2 <= 1:
        raise InvalidModelError(f"B^2 = {ctx.B2}; an ample base point free class has B^2 >= 2")
    if ctx.minimal_certified:
        verdict = lemma_1_2_check(ctx.bound, cover, B)
        if verdict is not True:
            raise InternalInconsistency(
                f"b(B.K) >= a K^2 fails with a/b = {fmt_exact(ctx.bound.ratio)}: {verdict}"
            )
    logger.info(
        "[np_engine] context %s, B = %s: B^2=%d B.K=%d K^2=%d p_g=%d q=%d",
        cover.label(), B, ctx.B2, ctx.BK, ctx.K2, ctx.p_g, ctx.q,
    )
    return ctx


class NpCertificate(BaseModel):
    """N_p holds for K + rB by the named rule; r_min is the least r its numerical bound admits."""

    model_config = ConfigDict(frozen=True)

    rule_id: RuleId
    p: int
    rule_level: int
    r: int
    r_min: int
    n: Optional[int] = None
    slope: str
    hypotheses: List[Hypothesis]
    assumptions: List[str]
    appendix: List[RuleOutcome] = []

    @model_validator(mode="after")
    def _check(self) -> "NpCertificate":
        failed = [h.name for h in self.hypotheses if not h.verdict]
        if failed:
            raise ValueError(f"certificate carries failed hypotheses: {failed}")
        if self.r < self.r_min:
            raise ValueError(f"r = {self.r} is below the bound {self.r_min} of {self.rule_id}")
        if self.rule_level < self.p:
            raise ValueError(f"{self.rule_id} certifies N_{self.rule_level}, not N_{self.p}")
        return self


def _outcome(
    rule_id: str, level: int, hyps: List[Hypothesis], n: Optional[int] = None, r_bound: Optional[int] = None
) -> RuleOutcome:
    applicable = all(h.verdict for h in hyps)
    logger.debug("[np_engine] %s: %s", rule_id, "holds" if applicable else
                 "blocked by " + ", ".join(h.name for h in hyps if not h.verdict))
    return RuleOutcome(
        rule_id=rule_id, level=level, applicable=applicable, n=n, r_bound=r_bound, hypotheses=hyps
    )


def _strict_or_equal(
    ctx: SurfaceContext, r: int, threshold: Fraction, label: str, coeff: int
) -> Tuple[List[Hypothesis], int]:
    """r > threshold, or r = threshold with 2K numerically distinct from coeff * B."""
    strict = compare(f"r > {label}", r, ">", threshold)
    bound = floor(threshold) + 1
    if strict.verdict or r != threshold:
        return [strict], bound
    return [
        compare(f"r = {label}", r, "==", threshold),
        ctx.numerically_distinct(f"2K != ({coeff})B", ctx.K * 2, ctx.B * coeff),
    ], r


# -- N_0 ------------------------------------------------------------------


def _n0_1(ctx: SurfaceContext, r: int) -> RuleOutcome:
    inv = ctx.bound.inverse
    cond, bound = _strict_or_equal(ctx, r, inv + Fraction(3, 2), "b/a + 3/2", 2 * r - 3)
    hyps = ctx.standing + [ctx.slope_hypothesis(), ctx.h1_gate(2 * r - 2)] + cond
    return _outcome("n0_1", 0, hyps, r_bound=max(3, bound))


def _n0_2(ctx: SurfaceContext, r: int) -> RuleOutcome:
    n = ctx.slope_n
    hyps = ctx.standing + [
        ctx.n_slope_hypothesis(n),
        compare("r >= n+2", r, ">=", n + 2),
        ctx.h1_gate(2 * r - 2),
    ]
    return _outcome("n0_2", 0, hyps, n=n, r_bound=max(3, n + 2))


def _n0_3(ctx: SurfaceContext, r: int) -> RuleOutcome:
    x = ctx.bound.ratio
    hyps = ctx.standing + ctx.regular_hypotheses + [
        ctx.slope_hypothesis(),
        compare("(2r-2)(a/b)^2 + (2r-4)(a/b) >= 2", (2 * r - 2) * x * x + (2 * r - 4) * x, ">=", 2),
        ctx.h1_gate(2 * r - 2),
    ]
    # the quadratic condition reduces to r >= 1 + b/a
    return _outcome("n0_3", 0, hyps, r_bound=max(3, ceil(1 + ctx.bound.inverse)))


def _n0_4(ctx: SurfaceContext, r: int) -> RuleOutcome:
    n = ctx.slope_n
    hyps = ctx.standing + ctx.regular_hypotheses + [
        ctx.n_slope_hypothesis(n),
        compare("r >= n+1", r, ">=", n + 1),
        ctx.h1_gate(2 * r - 2),
    ]
    return _outcome("n0_4", 0, hyps, n=n, r_bound=max(3, n + 1))


# -- N_1 ------------------------------------------------------------------


def _n1_0(ctx: SurfaceContext, r: int) -> RuleOutcome:
    cond, bound = _strict_or_equal(ctx, r, ctx.bound.inverse + 2, "b/a + 2", 2 * r - 4)
    hyps = ctx.standing + [ctx.slope_hypothesis(), ctx.h1_gate(2 * r - 3)] + cond
    return _outcome("n1_0", 1, hyps, r_bound=max(3, bound))


def _n1_1(ctx: SurfaceContext, r: int) -> RuleOutcome:
    n = ctx.slope_n
    hyps = ctx.standing + [ctx.n_slope_hypothesis(n), ctx.h1_gate(2 * r - 3)]
    strict = compare("r >= n+3", r, ">=", n + 3)
    bound = n + 3
    if strict.verdict or r != n + 2:
        hyps.append(strict)
    else:
        hyps.append(compare("r = n+2", r, "==", n + 2))
        hyps.append(ctx.numerically_distinct(f"2K != ({2 * r - 4})B", ctx.K * 2, ctx.B * (2 * r - 4)))
        bound = n + 2
    return _outcome("n1_1", 1, hyps, n=n, r_bound=max(3, bound))


def _n1_2(ctx: SurfaceContext, r: int) -> RuleOutcome:
    x = ctx.bound.ratio
    threshold = ctx.bound.inverse + Fraction(3, 2)
    hyps = ctx.standing + ctx.regular_hypotheses + [
        ctx.slope_hypothesis(),
        ctx.h1_gate(2 * r - 3),
        compare("r > b/a + 3/2", r, ">", threshold),
        compare("(2r-3)(a/b) > 2", (2 * r - 3) * x, ">", 2),
    ]
    return _outcome("n1_2", 1, hyps, r_bound=max(3, floor(threshold) + 1))


def _n1_3(ctx: SurfaceContext, r: int) -> RuleOutcome:
    n = ctx.slope_n
    hyps = ctx.standing + ctx.regular_hypotheses + [
        ctx.n_slope_hypothesis(n),
        compare("r >= n+2", r, ">=", n + 2),
        ctx.h1_gate(2 * r - 3),
    ]
    return _outcome("n1_3", 1, hyps, n=n, r_bound=max(3, n + 2))


def _n1_5(ctx: SurfaceContext, r: int) -> RuleOutcome:
    hyps = ctx.standing + ctx.regular_hypotheses + [
        compare("(2r-3) B^2 >= 2 B.K", (2 * r - 3) * ctx.B2, ">=", 2 * ctx.BK),
        ctx.h1_gate(r - 1),
    ]
    bound = ceil(Fraction(2 * ctx.BK + 3 * ctx.B2, 2 * ctx.B2))
    return _outcome("n1_5", 1, hyps, r_bound=max(3, bound))


# -- N_p, p >= 2 --------------------------------------------------------


def _least_n(ctx: SurfaceContext, form: str) -> Optional[int]:
    """Least n >= 2 making the form nef with h^1((n+1)B) = 0."""
    if form not in ctx.least_n_searches:
        ctx.least_n_searches[form] = _search_n(ctx, form)
    return ctx.least_n_searches[form]


def _search_n(ctx: SurfaceContext, form: str) -> Optional[int]:
    start = least_n_for(ctx.cover, ctx.B, form, ctx.config.n_max, n_min=2)
    if start is None:
        return None
    for n in range(start, ctx.config.n_max + 1):
        if ctx.h1_gate(n + 1).verdict:
            return n
    return None


def _np_rule(
    ctx: SurfaceContext,
    r: int,
    p: int,
    rule_id: str,
    form: str,
    label: str,
    bound_of: Callable[[int], int],
    extra: List[Hypothesis],
) -> RuleOutcome:
    n = _least_n(ctx, form)
    hyps = ctx.standing + extra
    if n is None:
        hyps.append(fact(f"{form} nef and h1((n+1)B) = 0 for some n in [2, n_max]", False,
                         f"searched n <= {ctx.config.n_max}"))
        return _outcome(rule_id, p, hyps)
    D = nef_form(ctx.cover, ctx.B, form, n)
    bound = bound_of(n) + p
    hyps += [
        fact(f"{form} nef", is_nef_pullback(D), "nef cone", str(D)),
        ctx.h1_gate(n + 1),
        compare(f"r >= {label}", r, ">=", bound),
    ]
    return _outcome(rule_id, p, hyps, n=n, r_bound=max(3, bound))


def _main6(ctx: SurfaceContext, r: int, p: int) -> RuleOutcome:
    extra = ctx.regular_hypotheses[:2] + [compare("B^2 >= 5", ctx.B2, ">=", 5)]
    return _np_rule(ctx, r, p, "main6", "(n+1)B-2K", "n+p+1", lambda n: n + 1, extra)


def _main5(ctx: SurfaceContext, r: int, p: int) -> RuleOutcome:
    return _np_rule(ctx, r, p, "main5", "(n+1)B-2K", "n+p+2", lambda n: n + 2, [])


def _main51(ctx: SurfaceContext, r: int, p: int) -> RuleOutcome:
    return _np_rule(ctx, r, p, "main51", "nB-K", "2n+p+1", lambda n: 2 * n + 1, [])


_LEVEL_RULES = {
    "n0_1": _n0_1, "n0_2": _n0_2, "n0_3": _n0_3, "n0_4": _n0_4,
    "n1_0": _n1_0, "n1_1": _n1_1, "n1_2": _n1_2, "n1_3": _n1_3, "n1_5": _n1_5,
}
_HIGHER_RULES = {"main6": _main6, "main5": _main5, "main51": _main51}


def run_rule(ctx: SurfaceContext, rule_id: str, r: int, p: int = 0) -> RuleOutcome:
    """Evaluates a single rule, whether or not it wins."""
    if rule_id in _LEVEL_RULES:
        return _LEVEL_RULES[rule_id](ctx, r)
    return _HIGHER_RULES[rule_id](ctx, r, p)


def _check_r(r: int) -> None:
    if r < 3:
        raise InvalidModelError(f"adjoint bundles K + rB are only certified for r >= 3, got r = {r}")


def _certificate(
    ctx: SurfaceContext, r: int, p: int, outcomes: List[RuleOutcome]
) -> Union[NpCertificate, Inapplicable]:
    for o in outcomes:
        if o.applicable:
            assumptions = ctx.assumptions()
            if o.rule_id in {"n0_3", "n0_4", "n1_2", "n1_3", "n1_5"}:
                assumptions.append(REGULAR_RULE_ASSUMPTION)
            elif o.rule_id == "main6":
                assumptions.append(MAIN6_ASSUMPTION)
            return NpCertificate(
                rule_id=o.rule_id,
                p=p,
                rule_level=o.level,
                r=r,
                r_min=o.r_bound,
                n=o.n,
                slope=fmt_exact(ctx.bound.ratio),
                hypotheses=o.hypotheses,
                assumptions=assumptions,
                appendix=outcomes,
            )
    blocking = []
    for o in outcomes:
        blocking += [f"{o.rule_id}: {name}" for name in o.blocking]
    return Inapplicable(reason=f"no rule certifies N_{p} for K+{r}B", blocking=blocking, appendix=outcomes)


def certify_N0(ctx: SurfaceContext, r: int) -> Union[NpCertificate, Inapplicable]:
    _check_r(r)
    return _certificate(ctx, r, 0, [run_rule(ctx, rid, r) for rid in N0_RULES])


def certify_N1(ctx: SurfaceContext, r: int) -> Union[NpCertificate, Inapplicable]:
    _check_r(r)
    return _certificate(ctx, r, 1, [run_rule(ctx, rid, r) for rid in N1_RULES])


def certify_Np(ctx: SurfaceContext, r: int, p: int) -> Union[NpCertificate, Inapplicable]:
    if p < 2:
        raise InvalidModelError(f"certify_Np needs p >= 2, got {p}")
    _check_r(r)
    return _certificate(ctx, r, p, [run_rule(ctx, rid, r, p) for rid in NP_RULES])


def certify(ctx: SurfaceContext, r: int, p: int) -> Union[NpCertificate, Inapplicable]:
    """Certifies N_p, falling back to rules for stronger properties (N_q implies N_p for q >= p)."""
    if p < 0:
        raise InvalidModelError(f"p must be >= 0, got {p}")
    _check_r(r)
    outcomes: List[RuleOutcome] = []
    if p == 0:
        outcomes += [run_rule(ctx, rid, r) for rid in N0_RULES]
    if p <= 1:
        outcomes += [run_rule(ctx, rid, r) for rid in N1_RULES]
    outcomes += [run_rule(ctx, rid, r, max(p, 2)) for rid in NP_RULES]
    return _certificate(ctx, r, p, outcomes)


def min_r_for_Np(ctx: SurfaceContext, p: int) -> Optional[Tuple[int, NpCertificate]]:
    """Smallest r in [3, r_cap] with a certificate for N_p, or None."""
    for r in range(3, ctx.config.r_cap + 1):
        result = certify(ctx, r, p)
        if isinstance(result, NpCertificate):
            logger.info("[np_engine] N_%d first certified at r = %d by %s", p, r, result.rule_id)
            return r, result
    logger.info("[np_engine] N_%d not certified for r <= %d", p, ctx.config.r_cap)
    return None


class MultiplicationCertificate(BaseModel):
    """Surjectivity of H^0(K+nB) x H^0(K+mB) -> H^0(2K+(n+m)B)."""

    model_config = ConfigDict(frozen=True)

    rule_id: Literal["mult_regular", "mult_general"]
    n: int
    m: int
    slope: str
    hypotheses: List[Hypothesis]
    assumptions: List[str]
    appendix: List[RuleOutcome] = []


def _mult_regular(ctx: SurfaceContext, n: int, m: int) -> RuleOutcome:
    x = ctx.bound.ratio
    hyps = ctx.standing + ctx.regular_hypotheses + [
        ctx.slope_hypothesis(),
        compare("(n+m-2)(a/b)^2 + (n+m-4)(a/b) >= 2", (n + m - 2) * x * x + (n + m - 4) * x, ">=", 2),
        ctx.h1_gate(n + m - 2),
    ]
    return _outcome("mult_regular", 0, hyps)


def _mult_general(ctx: SurfaceContext, n: int, m: int) -> RuleOutcome:
    x = ctx.bound.ratio
    hyps = ctx.standing + [ctx.slope_hypothesis(), ctx.h1_gate(n + m - 2)]
    value = (n + m - 3) * x
    strict = compare("(n+m-3)(a/b) > 2", value, ">", 2)
    if strict.verdict or value != 2:
        hyps.append(strict)
    else:
        hyps.append(compare("(n+m-3)(a/b) = 2", value, "==", 2))
        hyps.append(ctx.numerically_distinct(f"2K != ({n + m - 3})B", ctx.K * 2, ctx.B * (n + m - 3)))
    return _outcome("mult_general", 0, hyps)


def certify_multiplication(
    ctx: SurfaceContext, n: int, m: int
) -> Union[MultiplicationCertificate, Inapplicable]:
    if n < 3 or m < 1:
        raise InvalidModelError(f"multiplication maps need n >= 3 and m >= 1, got ({n}, {m})")
    outcomes = [_mult_regular(ctx, n, m), _mult_general(ctx, n, m)]
    for o in outcomes:
        if o.applicable:
            return MultiplicationCertificate(
                rule_id=o.rule_id,
                n=n,
                m=m,
                slope=fmt_exact(ctx.bound.ratio),
                hypotheses=o.hypotheses,
                assumptions=ctx.assumptions(),
                appendix=outcomes,
            )
    blocking = [f"{o.rule_id}: {name}" for o in outcomes for name in o.blocking]
    return Inapplicable(
        reason=f"no rule certifies the multiplication map for ({n}, {m})", blocking=blocking, appendix=outcomes
    )
