import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table

from src.cohomology import cohomology_cover, regularity
from src.config import DEFAULT_CONFIG, EngineConfig
from src.corpus import DEFAULT_CORPUS, list_model_folders
from src.covers import PullbackClass, branch_divisor
from src.errors import InternalInconsistency, InvalidModelError, SurfaceError
from src.families import (
    FamilySolution,
    build_classics,
    build_ex5_7,
    enumerate_ex5_3,
    enumerate_ex5_4,
    enumerate_family_by_geometry,
)
from src.np_engine import (
    NpCertificate,
    SurfaceContext,
    build_context,
    certify,
    certify_multiplication,
    min_r_for_Np,
)
from src.paper_runner import verify_paper
from src.parser import Report, inapplicable_data, load_surface_spec, outcome_rows, serialize_report
from src.positivity import is_ample_pullback, is_bpf_pullback, is_nef_pullback, least_n_for
from src.records import Inapplicable

logger = logging.getLogger(__name__)

FAMILIES = ("ex5_1", "ex5_2", "ex5_3", "ex5_4", "ex5_5", "ex5_7", "classics")


def load_context(path: str, config: EngineConfig) -> SurfaceContext:
    """Reads a surface file and builds its context; file keys override the engine defaults."""
    spec = load_surface_spec(path)
    X, B = spec.build()
    return build_context(X, B, spec.engine_config(config))


def _class_on(ctx: SurfaceContext, coords: Sequence[int]) -> PullbackClass:
    try:
        return ctx.cover.pb(*coords)
    except ValueError as e:
        raise InvalidModelError(f"--class {' '.join(map(str, coords))}: {e}") from e


def _positivity(D: PullbackClass) -> Dict[str, Any]:
    return {
        "class": str(D),
        "nef": is_nef_pullback(D),
        "ample": is_ample_pullback(D),
        "bpf": is_bpf_pullback(D),
    }


def _describe_one(path: str, config: EngineConfig, report: Report) -> None:
    ctx = load_context(path, config)
    inv = ctx.invariants
    n_max = ctx.config.n_max
    report.add(
        "invariants",
        path,
        cover=ctx.cover.label(),
        branch_divisor=str(branch_divisor(ctx.cover)),
        B=str(ctx.B),
        B2=ctx.B2,
        BK=ctx.BK,
        K2=ctx.K2,
        p_g=inv.p_g,
        q=inv.q,
        chi=inv.chi,
        slope=ctx.bound.ratio,
    )
    for name, D in (("B", ctx.B), ("K", ctx.K), ("K+B", ctx.K + ctx.B)):
        report.add("positivity", f"{path} {name}", **_positivity(D))
    kb = ctx.k_plus_b
    reg = regularity(ctx.B, ctx.config.direct_limit)
    report.add(
        "search",
        path,
        least_n_2K=least_n_for(ctx.cover, ctx.B, "(n+1)B-2K", n_max),
        least_n_K=least_n_for(ctx.cover, ctx.B, "nB-K", n_max),
        least_n_slope=least_n_for(ctx.cover, ctx.B, "slope", n_max),
        regularity=reg,
        k_plus_b_bpf=kb.value,
        k_plus_b_provenance=kb.provenance,
    )


def cmd_describe(
    specs: List[str], config: EngineConfig = DEFAULT_CONFIG, seed_corpus: Optional[str] = None
) -> Report:
    report = Report(command="describe")
    paths = list(specs)
    if seed_corpus:
        paths += [f"{folder}/surface.json" for folder in list_model_folders(seed_corpus)]
    if not paths:
        raise InvalidModelError("describe needs at least one surface file or --seed-corpus")
    for path in paths:
        _describe_one(path, config, report)
    return report


def parse_twists(text: str) -> Tuple[int, int]:
    lo, sep, hi = text.partition(":")
    try:
        t0, t1 = int(lo), int(hi if sep else lo)
    except ValueError:
        raise InvalidModelError(f"--twists expects T0:T1, got {text!r}") from None
    if t0 > t1:
        raise InvalidModelError(f"--twists range {text!r} is empty")
    return t0, t1


def cmd_coh(
    spec: str, coords: Sequence[int], twists: Tuple[int, int], config: EngineConfig = DEFAULT_CONFIG
) -> Report:
    """h^i of phi^*(D + t B) for t in the twist range."""
    report = Report(command="coh")
    ctx = load_context(spec, config)
    D = _class_on(ctx, coords)
    for t in range(twists[0], twists[1] + 1):
        E = D + ctx.B * t
        dims = cohomology_cover(E)
        report.add("cohomology", f"t={t}", **{"class": str(E), "h0": dims.h0, "h1": dims.h1, "h2": dims.h2, "chi": dims.chi})
    return report


def _report_certificate(report: Report, cert: NpCertificate) -> None:
    report.add(
        "certificate",
        f"N_{cert.p} for K+{cert.r}B",
        rule_id=cert.rule_id,
        rule_level=cert.rule_level,
        r=cert.r,
        r_min=cert.r_min,
        n=cert.n,
        slope=cert.slope,
        assumptions=cert.assumptions,
    )
    for h in cert.hypotheses:
        report.add("hypothesis", h.name, lhs=h.lhs, relation=h.relation, rhs=h.rhs, provenance=h.provenance)
    for row in outcome_rows(cert.appendix):
        report.add("route", row["rule_id"], **row)


def _report_inapplicable(report: Report, subject: str, result: Inapplicable) -> None:
    report.add("inapplicable", subject, **inapplicable_data(result))
    blocked = "; ".join(result.blocking[:6])
    report.fail(f"{result.reason} ({blocked})" if blocked else result.reason)


def cmd_certify(
    spec: str,
    p: int,
    r: Optional[int] = None,
    mult: Optional[Tuple[int, int]] = None,
    config: EngineConfig = DEFAULT_CONFIG,
) -> Report:
    report = Report(command="certify")
    ctx = load_context(spec, config)
    if mult is not None:
        n, m = mult
        result = certify_multiplication(ctx, n, m)
        if isinstance(result, Inapplicable):
            _report_inapplicable(report, f"multiplication ({n}, {m})", result)
        else:
            report.add("multiplication", f"({n}, {m})", rule_id=result.rule_id, slope=result.slope,
                       assumptions=result.assumptions)
            for row in outcome_rows(result.appendix):
                report.add("route", row["rule_id"], **row)
        return report
    if r is None:
        found = min_r_for_Np(ctx, p)
        if found is None:
            report.fail(f"no rule certifies N_{p} for any r <= {ctx.config.r_cap}")
            return report
        _report_certificate(report, found[1])
        return report
    result = certify(ctx, r, p)
    if isinstance(result, NpCertificate):
        _report_certificate(report, result)
    else:
        _report_inapplicable(report, f"N_{p} for K+{r}B", result)
    return report


def _report_solutions(report: Report, sols: List[FamilySolution], with_claims: bool) -> None:
    for sol in sols:
        subject = f"{sol.family_id} " + " ".join(f"{k}={v}" for k, v in sol.parameters.items())
        report.add("solution", subject, parameters=sol.parameters, verified=sol.verified,
                   claims=len(sol.verification), failed=sol.failures())
        if with_claims:
            for c in sol.verification:
                report.add("claim", f"{subject}: {c.claim}", status=c.status, witness=c.witness)
        for failed in sol.failures():
            report.fail(f"{subject}: {failed}")


def cmd_family(
    family: str,
    n: int = 2,
    m: Optional[int] = None,
    b_max: int = 10,
    degree: int = 2,
    like: str = "ex5_3",
    config: EngineConfig = DEFAULT_CONFIG,
) -> Report:
    report = Report(command="family")
    if family in ("ex5_1", "ex5_2", "classics"):
        sols = [s for s in build_classics(config) if family in (s.family_id, "classics")]
        _report_solutions(report, sols, with_claims=True)
    elif family == "ex5_3":
        _report_solutions(report, enumerate_ex5_3(n, b_max, config), with_claims=False)
    elif family == "ex5_4":
        _report_solutions(report, enumerate_ex5_4(n, b_max, config), with_claims=False)
    elif family == "ex5_5":
        sols = enumerate_family_by_geometry(like, n, b_max, degree, config)
        _report_solutions(report, sols, with_claims=False)
    elif family == "ex5_7":
        _report_solutions(report, [build_ex5_7(n, n if m is None else m, config)], with_claims=True)
    else:
        raise InvalidModelError(f"unknown family {family!r}")
    logger.info("[main] family %s: %d records", family, len(report.records))
    return report


def cmd_verify_paper(
    seed_corpus: str = DEFAULT_CORPUS,
    corrupt: Optional[List[str]] = None,
    config: EngineConfig = DEFAULT_CONFIG,
    b_max: int = 30,
) -> Report:
    return verify_paper(seed_corpus, config, corrupt, b_max)


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, (list, dict)):
        return json.dumps(value, sort_keys=True)
    return str(value)


def render(report: Report, console: Console) -> None:
    """Human section: one table per record kind, columns in first-seen order."""
    kinds: Dict[str, List[Any]] = {}
    for record in report.records:
        kinds.setdefault(record.kind, []).append(record)
    for kind, records in kinds.items():
        columns: List[str] = []
        for record in records:
            columns += [k for k in record.data if k not in columns]
        table = Table(title=f"{report.command}: {kind}", show_lines=False)
        table.add_column("subject", style="bold")
        for col in columns:
            table.add_column(col)
        for record in records:
            table.add_row(record.subject, *(_cell(record.data.get(col)) for col in columns))
        console.print(table)
    if report.failures:
        console.print(f"[bold red]{len(report.failures)} failure(s)[/bold red]")
        for failure in report.failures:
            console.print(f"  - {failure}", markup=False)
    else:
        console.print("[bold green]all checks passed[/bold green]")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print only the machine section")
    common.add_argument("--n-max", type=int, default=None, help="Override the engine's n_max")
    common.add_argument("--r-cap", type=int, default=None, help="Override the engine's r_cap")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")

    parser = argparse.ArgumentParser(
        prog="python -m src.main", description="N_p certification for cyclic covers of P^2 and F_e"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    describe = sub.add_parser("describe", parents=[common], help="Invariants and positivity of surface files")
    describe.add_argument("specs", nargs="*", help="Surface definition files")
    describe.add_argument("--seed-corpus", default=None, help="Also describe every model folder under DIR")

    coh = sub.add_parser("coh", parents=[common], help="Cohomology of twists of a pullback class")
    coh.add_argument("spec")
    coh.add_argument("--class", dest="coords", type=int, nargs="+", required=True,
                     help="Base class coordinates: A B on F_e, A on the plane")
    coh.add_argument("--twists", default="0:0", help="Range T0:T1 of multiples of B to add")

    cert = sub.add_parser("certify", parents=[common], help="Certify N_p for K+rB")
    cert.add_argument("spec")
    cert.add_argument("--p", type=int, required=True)
    cert.add_argument("--r", type=int, default=None, help="Omit to search for the least certified r")
    cert.add_argument("--mult", type=int, nargs=2, default=None, metavar=("N", "M"),
                      help="Certify the multiplication map for (N, M) instead")

    family = sub.add_parser("family", parents=[common], help="Enumerate and verify an example family")
    family.add_argument("family", choices=FAMILIES)
    family.add_argument("--n", type=int, default=2)
    family.add_argument("--m", type=int, default=None)
    family.add_argument("--b-max", type=int, default=10)
    family.add_argument("--degree", type=int, default=2)
    family.add_argument("--like", choices=("ex5_3", "ex5_4"), default="ex5_3",
                        help="Family whose claims the degree-d search tests (ex5_5 only)")

    verify = sub.add_parser("verify-paper", parents=[common], help="Replay every pinned claim")
    verify.add_argument("--seed-corpus", default=DEFAULT_CORPUS)
    verify.add_argument("--corrupt", action="append", default=[], metavar="MODEL.ID=VALUE",
                        help="Replace a pinned value before checking (repeatable)")
    verify.add_argument("--b-max", type=int, default=30, help="Largest b enumerated for the F_1 families")
    return parser


def _dispatch(args: argparse.Namespace, config: EngineConfig) -> Report:
    if args.command == "describe":
        return cmd_describe(args.specs, config, args.seed_corpus)
    if args.command == "coh":
        return cmd_coh(args.spec, args.coords, parse_twists(args.twists), config)
    if args.command == "certify":
        return cmd_certify(args.spec, args.p, args.r, tuple(args.mult) if args.mult else None, config)
    if args.command == "family":
        return cmd_family(args.family, args.n, args.m, args.b_max, args.degree, args.like, config)
    return cmd_verify_paper(args.seed_corpus, args.corrupt, config, args.b_max)


def _setup_logging(verbose: bool) -> None:
    handler = RichHandler(console=Console(stderr=True), show_path=False)
    root = logging.getLogger()
    root.handlers = [handler]
    root.setLevel(logging.DEBUG if verbose else logging.WARNING)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    err = Console(stderr=True)
    try:
        config = DEFAULT_CONFIG.merged(n_max=args.n_max, r_cap=args.r_cap)
        report = _dispatch(args, config)
    except InternalInconsistency as e:
        logger.error("[main] internal inconsistency: %s", e)
        return 3
    except SurfaceError as e:
        err.print(f"[bold red]error:[/bold red] {e}", highlight=False)
        return 2
    except ValueError as e:
        # pydantic rejects out-of-range flags such as --n-max 1
        err.print(f"[bold red]error:[/bold red] {e}", highlight=False)
        return 2
    if not args.json:
        render(report, Console())
    sys.stdout.write(serialize_report(report) + "\n")
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
