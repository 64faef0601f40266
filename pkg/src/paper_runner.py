"""Replays the pinned claims of the surface corpus, the example families and the property suites.

Every pinned claim names a probe; the probe is evaluated against a freshly
built context and its value compared, as an exact string, with the pinned one.
"""

import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

import yaml

from src.cohomology import cohomology_cover, regularity
from src.config import DEFAULT_CONFIG, EngineConfig
from src.corpus import DEFAULT_CORPUS, CorpusEntry, load_corpus
from src.errors import InternalInconsistency, InvalidModelError, SurfaceError
from src.families import FamilySolution, build_classics, build_ex5_7, enumerate_ex5_3, enumerate_ex5_4
from src.np_engine import NpCertificate, SurfaceContext, certify, certify_multiplication, min_r_for_Np
from src.parser import PinnedClaim, Report, stringify
from src.positivity import is_nef_pullback, least_n_for
from src.properties import (
    cohomology_violations,
    corpus_context,
    dominance_violations,
    growth_violations,
    monotonicity_violations,
    propagation_violations,
    van_violations,
)

logger = logging.getLogger(__name__)

Probe = Callable[[SurfaceContext, Dict[str, Any]], Any]


def _h(ctx: SurfaceContext, args: Dict[str, Any]) -> int:
    dims = cohomology_cover(ctx.cover.pb(*args["class"]))
    return dims.as_tuple()[int(args["index"])]


def _h1_multiples_zero(ctx: SurfaceContext, args: Dict[str, Any]) -> bool:
    return all(ctx.h1(l) == 0 for l in range(int(args["lo"]), int(args["hi"]) + 1))


def _min_r(ctx: SurfaceContext, args: Dict[str, Any]) -> Any:
    found = min_r_for_Np(ctx, int(args["p"]))
    return found[0] if found else "none"


def _min_r_rule(ctx: SurfaceContext, args: Dict[str, Any]) -> str:
    found = min_r_for_Np(ctx, int(args["p"]))
    return found[1].rule_id if found else "none"


def _certify(ctx: SurfaceContext, args: Dict[str, Any]) -> str:
    result = certify(ctx, int(args["r"]), int(args["p"]))
    return result.rule_id if isinstance(result, NpCertificate) else "inapplicable"


def _mult(ctx: SurfaceContext, args: Dict[str, Any]) -> str:
    result = certify_multiplication(ctx, int(args["n"]), int(args["m"]))
    return getattr(result, "rule_id", "inapplicable")


def _optional(x: Optional[int]) -> Any:
    return "none" if x is None else x


PROBES: Dict[str, Probe] = {
    "B2": lambda ctx, _: ctx.B2,
    "BK": lambda ctx, _: ctx.BK,
    "K2": lambda ctx, _: ctx.K2,
    "p_g": lambda ctx, _: ctx.p_g,
    "q": lambda ctx, _: ctx.q,
    "chi": lambda ctx, _: ctx.invariants.chi,
    "h": _h,
    "h1_multiples_zero": _h1_multiples_zero,
    "min_r": _min_r,
    "min_r_rule": _min_r_rule,
    "certify": _certify,
    "mult": _mult,
    "k_plus_b_bpf": lambda ctx, _: ctx.k_plus_b.provenance if ctx.k_plus_b.value else "unavailable",
    "regularity": lambda ctx, _: _optional(regularity(ctx.B, ctx.config.direct_limit)),
    "least_n": lambda ctx, a: _optional(least_n_for(ctx.cover, ctx.B, a["form"], ctx.config.n_max)),
    "nef": lambda ctx, a: is_nef_pullback(ctx.cover.pb(*a["class"])),
}


def parse_corruptions(items: List[str]) -> Dict[str, Any]:
    """'model.id=VALUE' pairs; VALUE is read as a YAML scalar."""
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or "." not in key:
            raise InvalidModelError(f"--corrupt expects MODEL.ID=VALUE, got {item!r}")
        out[key] = yaml.safe_load(value)
    return out


def evaluate_claim(ctx: SurfaceContext, claim: PinnedClaim) -> Any:
    if claim.probe not in PROBES:
        raise InvalidModelError(f"unknown probe {claim.probe!r} in claim {claim.id}")
    return PROBES[claim.probe](ctx, claim.args)


def execute_claims(
    entry: CorpusEntry, config: EngineConfig, corruptions: Dict[str, Any], report: Report
) -> SurfaceContext:
    ctx = corpus_context(entry, config)
    for claim in entry.claims:
        key = f"{entry.name}.{claim.id}"
        expected = stringify(corruptions.get(key, claim.expected))
        actual = stringify(evaluate_claim(ctx, claim))
        passed = actual == expected
        report.add("claim", key, claim=claim.claim, expected=expected, actual=actual, passed=passed)
        if not passed:
            report.fail(f"{key}: {claim.claim}: expected {expected}, got {actual}")
        logger.debug("[paper_runner] %s -> %s (%s)", key, actual, "ok" if passed else "FAIL")
    return ctx


def _family_checks(config: EngineConfig, report: Report, b_max: int) -> List[FamilySolution]:
    """Builds every example family; returns the ex5_3 and ex5_4 members for the property suites."""
    for sol in build_classics(config):
        report.add("family", sol.family_id, parameters=sol.parameters,
                   failed=sol.failures(), claims=len(sol.verification))
    members: List[FamilySolution] = []
    for n in (2, 3, 4, 5):
        for family_id, enumerate_family in (("ex5_3", enumerate_ex5_3), ("ex5_4", enumerate_ex5_4)):
            sols = enumerate_family(n, b_max, config)
            failed = [f"{s.parameters}: {s.failures()}" for s in sols if not s.verified]
            report.add("family", f"{family_id} n={n}", b_max=b_max, solutions=len(sols), failed=failed)
            if not sols:
                report.fail(f"{family_id} n={n}: no solutions for b_max={b_max}")
            for failure in failed:
                report.fail(f"{family_id} n={n}: {failure}")
            members += sols
    for b_param in (4, 6, 8, 10):
        half = b_param // 2 + 1
        sol = build_ex5_7(half, half, config)
        report.add("family", f"ex5_7 b={b_param}", parameters=sol.parameters, claims=len(sol.verification))
    return members


def _suite(report: Report, name: str, violations: List[str], **data: Any) -> None:
    report.add("property", name, violations=violations, **data)
    for violation in violations:
        report.fail(f"property {name}: {violation}")


def _property_checks(
    report: Report, contexts: List[Tuple[str, SurfaceContext]], members: List[FamilySolution]
) -> None:
    _suite(report, "cohomology engine", cohomology_violations())
    _suite(report, "family growth", growth_violations())
    confirmed, bad = van_violations(members)
    _suite(report, "vanishing inequalities", bad, confirmed=confirmed)
    applied, bad = 0, []
    models = contexts + [(f"{s.family_id} {s.parameters}", s.context) for s in members]
    for label, ctx in models:
        count, found = propagation_violations(ctx, label)
        applied += count
        bad += found
    _suite(report, "h1 propagation", bad, models=len(models), applied=applied)
    bad = []
    for label, ctx in contexts:
        bad += monotonicity_violations(ctx, label)
        bad += dominance_violations(ctx, label)
    _suite(report, "monotonicity and dominance", bad, models=len(contexts))


def verify_paper(
    corpus_dir: str = DEFAULT_CORPUS,
    config: EngineConfig = DEFAULT_CONFIG,
    corrupt: Optional[List[str]] = None,
    family_b_max: int = 30,
) -> Report:
    report = Report(command="verify-paper")
    corruptions = parse_corruptions(corrupt or [])
    entries = load_corpus(corpus_dir)
    known = {f"{e.name}.{c.id}" for e in entries for c in e.claims}
    unknown = sorted(set(corruptions) - known)
    if unknown:
        raise InvalidModelError(f"--corrupt names unknown claims: {', '.join(unknown)}")
    try:
        contexts: List[Tuple[str, SurfaceContext]] = []
        for entry in entries:
            try:
                contexts.append((entry.name, execute_claims(entry, config, corruptions, report)))
            except InternalInconsistency:
                raise
            except SurfaceError as e:
                report.fail(f"{entry.name}: {e}")
        members = _family_checks(config, report, family_b_max)
        _property_checks(report, contexts, members)
    except InternalInconsistency as e:
        logger.error("[paper_runner] internal inconsistency: %s", e)
        report.fail(f"internal inconsistency: {e}", code=3)
    logger.info("[paper_runner] %d records, %d failures", len(report.records), len(report.failures))
    return report


if __name__ == "__main__":
    from rich import print

    result = verify_paper()
    print(f"exit code {result.exit_code}, {len(result.failures)} failures")
    for failure in result.failures:
        print(f"  - {failure}")
