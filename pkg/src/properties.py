"""Property suites replayed by verify-paper and by the tests.

Each suite returns the violations it found; an empty list means the property
held on every model it was given.
"""

import logging
from math import floor
from typing import Callable, Iterable, List, Optional, Set, Tuple, Union

from src.cohomology import cohomology_base, cohomology_cover, euler_char
from src.config import EngineConfig
from src.corpus import CorpusEntry
from src.families import FamilySolution, ex5_3_inequalities, ex5_4_inequalities
from src.lattice import canonical_class, hirzebruch, projective_plane
from src.np_engine import NP_RULES, SurfaceContext, build_context, min_r_for_Np, run_rule
from src.positivity import (
    SlopeBound,
    h1_vanishing_from,
    is_ample,
    lemma_1_1_corollary,
    lemma_1_2_check,
    van_claim,
    vanishing_van,
    vanishing_van1,
)
from src.records import Inapplicable

logger = logging.getLogger(__name__)

# (regular rule, general rule) whose r-bounds must compare as <=
DOMINANCE_PAIRS: Tuple[Tuple[str, str], ...] = (("n0_4", "n0_2"), ("n1_3", "n1_1"), ("main6", "main5"))

GROWTH_STEPS: Tuple[int, ...] = (10, 20, 40)

Propagation = Union[Callable[[int], bool], Inapplicable]


def corpus_context(entry: CorpusEntry, config: EngineConfig) -> SurfaceContext:
    X, B = entry.spec.build()
    return build_context(X, B, entry.spec.engine_config(config))


def cohomology_violations(bound: int = 15, ample_bound: int = 20) -> List[str]:
    """Riemann-Roch and Serre duality on both bases, Kodaira vanishing on F_1."""
    F1, P2 = hirzebruch(1), projective_plane()
    bad = []
    for S, classes in (
        (F1, [F1.cls(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1)]),
        (P2, [P2.cls(d) for d in range(-bound, bound + 1)]),
    ):
        K = canonical_class(S)
        for D in classes:
            dims = cohomology_base(S, D)
            if dims.chi != euler_char(S, D):
                bad.append(f"riemann-roch fails at {S.label()} {D.coords}")
            if dims.h0 != cohomology_base(S, K - D).h2:
                bad.append(f"serre duality fails at {S.label()} {D.coords}")
    K = canonical_class(F1)
    for a in range(1, ample_bound + 1):
        for b in range(a + 1, ample_bound + 1):
            D = F1.cls(a, b)
            if is_ample(F1, D) and cohomology_base(F1, K + D).as_tuple()[1:] != (0, 0):
                bad.append(f"kodaira vanishing fails at F_1 {D.coords}")
    return bad


def family_counts(family_id: str, n: int, steps: Iterable[int] = GROWTH_STEPS) -> List[int]:
    """Number of (b, m) solving the family inequalities for 2 <= b <= b_max, per b_max."""
    holds = ex5_3_inequalities if family_id == "ex5_3" else ex5_4_inequalities
    return [
        sum(1 for b in range(2, b_max + 1) for m in range(1, (n + 1) * b + 2) if holds(n, b, m))
        for b_max in steps
    ]


def growth_violations(n_values: Iterable[int] = (2, 3, 4, 5)) -> List[str]:
    bad = []
    for family_id in ("ex5_3", "ex5_4"):
        for n in n_values:
            counts = family_counts(family_id, n)
            if not 0 < counts[0] < counts[1] < counts[2]:
                bad.append(f"{family_id} n={n}: counts {counts} for b_max {list(GROWTH_STEPS)} do not grow")
    return bad


def van_violations(
    solutions: Iterable[FamilySolution], m_max: int = 20, l_max: int = 4
) -> Tuple[int, List[str]]:
    """Confirms every vanishing of mB - lK the two inequalities promise by direct computation.

    Returns the number of confirmed vanishings and the counterexamples.
    """
    seen: Set[Tuple[int, int, int]] = set()
    confirmed, bad = 0, []
    for sol in solutions:
        key = (sol.parameters["n"], sol.parameters["b"], sol.parameters["m"])
        if key in seen:
            continue
        seen.add(key)
        n, ctx = key[0], sol.context
        for variant, promised in (("van", vanishing_van), ("van1", vanishing_van1)):
            # the nef gate does not depend on the multiples
            if isinstance(van_claim(ctx.cover, ctx.B, n, 0, 0, variant), Inapplicable):
                continue
            for mult in range(1, m_max + 1):
                for l in range(l_max + 1):
                    if not promised(n, mult, l):
                        continue
                    dims = cohomology_cover(ctx.B * mult - ctx.K * l)
                    if (dims.h1, dims.h2) == (0, 0):
                        confirmed += 1
                    else:
                        bad.append(
                            f"{variant} at n={key[0]} b={key[1]} m={key[2]}: "
                            f"h1, h2 of {mult}B-{l}K are {dims.h1}, {dims.h2}"
                        )
    logger.info("[properties] %d vanishings confirmed, %d counterexamples", confirmed, len(bad))
    return confirmed, bad


def _first_propagation(
    ctx: SurfaceContext, lo: int, propagate: Callable[[int], Propagation]
) -> Optional[Tuple[int, Callable[[int], bool]]]:
    for m0 in range(lo, ctx.config.direct_limit + 1):
        vanishes = propagate(m0)
        if not isinstance(vanishes, Inapplicable):
            return m0, vanishes
    return None


def propagation_violations(ctx: SurfaceContext, label: str, span: int = 10) -> Tuple[int, List[str]]:
    """Checks h^1 propagation against direct computation, and b(B.K) >= a K^2.

    Propagation is started at the least admissible m0 for the model's own slope
    bound and for the bound 1/n. Returns how many propagations applied and what
    failed.
    """
    n = ctx.slope_n
    routes = (
        (ctx.bound, floor(ctx.bound.inverse) + 1,
         lambda m0: h1_vanishing_from(m0, ctx.bound, ctx.cover, ctx.B)),
        (SlopeBound(a=1, b=n), n + 1, lambda m0: lemma_1_1_corollary(n, m0, ctx.cover, ctx.B)),
    )
    applied, bad = 0, []
    for bound, lo, propagate in routes:
        found = _first_propagation(ctx, lo, propagate)
        if found is None:
            continue
        m0, vanishes = found
        applied += 1
        wrong = [l for l in range(m0, m0 + span + 1) if not vanishes(l) or ctx.h1(l) != 0]
        if wrong:
            bad.append(f"{label}: h1 propagation from {m0}B with a/b = {bound.a}/{bound.b} fails at l = {wrong}")
    # needs K nef
    if ctx.minimal_certified:
        for bound, _, _ in routes:
            if lemma_1_2_check(bound, ctx.cover, ctx.B) is not True:
                bad.append(f"{label}: b(B.K) >= a K^2 fails for a/b = {bound.a}/{bound.b}")
    return applied, bad


def monotonicity_violations(ctx: SurfaceContext, label: str, p_max: int = 5) -> List[str]:
    """The least certified r never decreases with p; an uncertified level counts as infinite."""
    firsts = []
    for p in range(p_max + 1):
        found = min_r_for_Np(ctx, p)
        firsts.append(found[0] if found else None)
    bad = []
    for p in range(p_max):
        lower, upper = firsts[p], firsts[p + 1]
        if upper is not None and (lower is None or lower > upper):
            bad.append(f"{label}: least r is {lower} for N_{p} but {upper} for N_{p + 1}")
    return bad


def dominance_violations(ctx: SurfaceContext, label: str, r_max: int = 40, p_max: int = 5) -> List[str]:
    """When a regular-surface rule and its general counterpart both apply, its r-bound is not larger."""
    bad = []
    for regular, general in DOMINANCE_PAIRS:
        levels = range(2, p_max + 1) if regular in NP_RULES else (0,)
        for p in levels:
            for r in range(3, min(r_max, ctx.config.r_cap) + 1):
                strong, weak = run_rule(ctx, regular, r, p), run_rule(ctx, general, r, p)
                if strong.applicable and weak.applicable and strong.r_bound > weak.r_bound:
                    bad.append(
                        f"{label}: {regular} bound {strong.r_bound} exceeds {general} bound {weak.r_bound} at r={r} p={p}"
                    )
    return bad


if __name__ == "__main__":
    from rich import print

    print(f"cohomology: {len(cohomology_violations())} violations")
    print(f"growth: {len(growth_violations())} violations")
