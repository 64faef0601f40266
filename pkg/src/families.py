"""Example families of cyclic covers, rebuilt and verified by direct computation.

The F_1 families share one construction: a cover of degree d branched in
|d(3C0 + (m+3)f)|, with B the pullback of C0 + bf. Membership is first decided
by the defining inequalities, then every claim is recomputed from the lattice
and cohomology engines. A pair that passes the inequalities but fails a claim
is an engine bug, never a silent drop.
"""

import logging
from fractions import Fraction
from typing import Callable, Dict, List, Literal, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from src.cohomology import cohomology_cover
from src.config import DEFAULT_CONFIG, EngineConfig
from src.covers import make_cover
from src.errors import InternalInconsistency, InvalidModelError
from src.lattice import BaseClass, hirzebruch, projective_plane
from src.np_engine import (
    MultiplicationCertificate,
    NpCertificate,
    SurfaceContext,
    build_context,
    certify,
    certify_multiplication,
    min_r_for_Np,
    run_rule,
)
from src.positivity import is_ample_pullback, is_nef_pullback, nef_form
from src.records import Inapplicable, fmt_exact

logger = logging.getLogger(__name__)

FamilyId = Literal["ex5_1", "ex5_2", "ex5_3", "ex5_4", "ex5_5", "ex5_7"]
Status = Literal["pass", "fail", "unverifiable"]


class Claim(BaseModel):
    model_config = ConfigDict(frozen=True)

    claim: str
    status: Status
    witness: Dict[str, str] = {}


def _claim(name: str, verdict: bool, **witness: object) -> Claim:
    return Claim(
        claim=name,
        status="pass" if verdict else "fail",
        witness={k: fmt_exact(v) if isinstance(v, (int, Fraction)) else str(v) for k, v in witness.items()},
    )


def _unverifiable(name: str, why: str) -> Claim:
    return Claim(claim=name, status="unverifiable", witness={"reason": why})


class FamilySolution(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    family_id: FamilyId
    parameters: Dict[str, int]
    verification: List[Claim]
    context: SurfaceContext = Field(exclude=True)

    @property
    def verified(self) -> bool:
        return all(c.status != "fail" for c in self.verification)

    def failures(self) -> List[str]:
        return [c.claim for c in self.verification if c.status == "fail"]


# -- the F_1 construction ------------------------------------------------------


def f1_branch_class(m: int) -> BaseClass:
    return hirzebruch(1).cls(3, m + 3)


def f1_model(b: int, m: int, degree: int = 2, config: EngineConfig = DEFAULT_CONFIG) -> SurfaceContext:
    """Cover of F_1 branched in |degree (3C0 + (m+3)f)| with B = phi^*(C0 + bf)."""
    if b < 2 or m < 1:
        raise InvalidModelError(f"the F_1 families need b >= 2 and m >= 1, got b = {b}, m = {m}")
    S = hirzebruch(1)
    X = make_cover(S, degree, f1_branch_class(m))
    return build_context(X, X.pb(1, b), config)


def _common_claims(ctx: SurfaceContext, n: int) -> List[Claim]:
    inv = ctx.invariants
    h1 = ctx.h1(n + 1)
    return [
        _claim("X minimal (K nef)", inv.minimal, K=ctx.K),
        _claim("X of general type (K^2 > 0)", inv.general_type, K2=ctx.K2),
        _claim("B ample and bpf", is_ample_pullback(ctx.B), B=ctx.B),
        _claim("K+B bpf", ctx.k_plus_b.value, provenance=ctx.k_plus_b.provenance),
        _claim(f"h1({n + 1}B) = 0", h1 == 0, h1=h1),
    ]


def _strictness_claims(ctx: SurfaceContext, n: int, nef_name: str, not_nef_name: str) -> List[Claim]:
    """The nef form and its non-nef neighbour, each with the strict and the exact verdict."""
    D = nef_form(ctx.cover, ctx.B, nef_name, n)
    E = nef_form(ctx.cover, ctx.B, not_nef_name, n)
    strict = is_ample_pullback(D)
    exact = is_nef_pullback(D)
    return [
        _claim(f"{nef_name} nef", exact, base_class=D.base_class, strict=strict, exact=exact),
        _claim(f"{not_nef_name} not nef", not is_nef_pullback(E), base_class=E.base_class),
    ]


def _verify_ex5_3(ctx: SurfaceContext, n: int) -> List[Claim]:
    inv = ctx.invariants
    claims = [
        _claim("X regular", inv.regular, q=inv.q),
        _claim("p_g >= 3", inv.p_g >= 3, p_g=inv.p_g),
        _claim("B^2 >= 5", ctx.B2 >= 5, B2=ctx.B2),
    ]
    claims += _common_claims(ctx, n)
    claims += _strictness_claims(ctx, n, "(n+1)B-2K", "nB-2K")
    return claims


def _verify_ex5_4(ctx: SurfaceContext, n: int) -> List[Claim]:
    claims = _common_claims(ctx, n)
    claims += _strictness_claims(ctx, n, "nB-K", "(n-1)B-K")
    return claims


def _extras_ex5_3(ctx: SurfaceContext, n: int) -> List[Claim]:
    r = n + 3
    outcome = run_rule(ctx, "main6", r, 2)
    return [_claim(f"main6 certifies N_2 for K+{r}B", outcome.applicable and outcome.n == n,
                   n=outcome.n, r_bound=outcome.r_bound)]


def _extras_ex5_4(ctx: SurfaceContext, n: int, b: int) -> List[Claim]:
    r = 2 * n + 3
    outcome = run_rule(ctx, "main51", r, 2)
    lo, mid, hi = (n - 1) * b - n + 2, n * b - n + 1, (n + 1) * b - n + 1
    return [
        _claim(f"main51 certifies N_2 for K+{r}B", outcome.applicable and outcome.n == n,
               n=outcome.n, r_bound=outcome.r_bound),
        _claim("(n-1)b-n+2 < nb-n+1 < (n+1)b-n+1", lo < mid < hi, low=lo, mid=mid, high=hi),
    ]


# -- inequality systems --------------------------------------------------------


def ex5_3_inequalities(n: int, b: int, m: int) -> bool:
    return (
        m < (n + 1) * b - n + 1
        and 2 * m < (n + 1) * b + 1 - n
        and 2 * m > n * b + 2 - n
    )


def ex5_4_inequalities(n: int, b: int, m: int) -> bool:
    return (
        m < (n + 1) * b - n + 1
        and m < n * b - n + 1
        and m > (n - 1) * b - n + 2
    )


def _check_family_args(n: int, b_max: int) -> None:
    if n < 2 or b_max < 2:
        raise InvalidModelError(f"families need n >= 2 and b_max >= 2, got n = {n}, b_max = {b_max}")


def _m_box(n: int, b: int) -> range:
    # inequality (1) already forces m < (n+1)b
    return range(1, (n + 1) * b + 2)


def _solution(
    family_id: FamilyId, params: Dict[str, int], ctx: SurfaceContext, claims: List[Claim]
) -> FamilySolution:
    sol = FamilySolution(family_id=family_id, parameters=params, verification=claims, context=ctx)
    if not sol.verified:
        raise InternalInconsistency(
            f"{family_id} {params} passes its inequalities but fails {sol.failures()}"
        )
    return sol


def enumerate_ex5_3(
    n: int, b_max: int, config: EngineConfig = DEFAULT_CONFIG, extras: bool = True
) -> List[FamilySolution]:
    """All (b, m) in the inequality polytope, each verified independently."""
    _check_family_args(n, b_max)
    out = []
    for b in range(2, b_max + 1):
        for m in _m_box(n, b):
            if not ex5_3_inequalities(n, b, m):
                continue
            ctx = f1_model(b, m, 2, config)
            claims = _verify_ex5_3(ctx, n)
            if extras:
                claims += _extras_ex5_3(ctx, n)
            out.append(_solution("ex5_3", {"n": n, "b": b, "m": m, "degree": 2}, ctx, claims))
    logger.info("[families] ex5_3 n=%d b_max=%d: %d solutions", n, b_max, len(out))
    return out


def enumerate_ex5_4(
    n: int, b_max: int, config: EngineConfig = DEFAULT_CONFIG, extras: bool = True
) -> List[FamilySolution]:
    _check_family_args(n, b_max)
    out = []
    for b in range(2, b_max + 1):
        for m in _m_box(n, b):
            if not ex5_4_inequalities(n, b, m):
                continue
            ctx = f1_model(b, m, 2, config)
            claims = _verify_ex5_4(ctx, n)
            if extras:
                claims += _extras_ex5_4(ctx, n, b)
            out.append(_solution("ex5_4", {"n": n, "b": b, "m": m, "degree": 2}, ctx, claims))
    logger.info("[families] ex5_4 n=%d b_max=%d: %d solutions", n, b_max, len(out))
    return out


# -- geometric search, any degree --------------------------------------------------


def _geometric_ex5_3(ctx: SurfaceContext, n: int) -> bool:
    inv = ctx.invariants
    return (
        inv.regular
        and inv.p_g >= 3
        and ctx.B2 >= 5
        and ctx.h1(n + 1) == 0
        and is_ample_pullback(nef_form(ctx.cover, ctx.B, "(n+1)B-2K", n))
        and not is_nef_pullback(nef_form(ctx.cover, ctx.B, "nB-2K", n))
    )


def _geometric_ex5_4(ctx: SurfaceContext, n: int) -> bool:
    return (
        ctx.invariants.general_type
        and ctx.k_plus_b.value
        and ctx.h1(n + 1) == 0
        and is_ample_pullback(nef_form(ctx.cover, ctx.B, "nB-K", n))
        and not is_nef_pullback(nef_form(ctx.cover, ctx.B, "(n-1)B-K", n))
    )


_GEOMETRY: Dict[str, Tuple[Callable[[SurfaceContext, int], bool], Callable[[SurfaceContext, int], List[Claim]]]] = {
    "ex5_3": (_geometric_ex5_3, _verify_ex5_3),
    "ex5_4": (_geometric_ex5_4, _verify_ex5_4),
}


def enumerate_family_by_geometry(
    family: Literal["ex5_3", "ex5_4"],
    n: int,
    b_max: int,
    degree: int = 2,
    config: EngineConfig = DEFAULT_CONFIG,
) -> List[FamilySolution]:
    """Searches the (b, m) box for covers of the given degree meeting the family's claims.

    The positive nef claim is tested by its strict form (ampleness), as the
    inequality systems are; in degree 2 the result equals the inequality
    enumeration.
    """
    _check_family_args(n, b_max)
    if degree < 2:
        raise InvalidModelError(f"cover degree must be >= 2, got {degree}")
    accepts, verify = _GEOMETRY[family]
    family_id: FamilyId = family if degree == 2 else "ex5_5"
    out = []
    for b in range(2, b_max + 1):
        for m in _m_box(n, b):
            ctx = f1_model(b, m, degree, config)
            if accepts(ctx, n):
                params = {"n": n, "b": b, "m": m, "degree": degree}
                out.append(_solution(family_id, params, ctx, verify(ctx, n)))
    logger.info("[families] %s by geometry, degree %d, n=%d: %d solutions", family, degree, n, len(out))
    return out


def nef_boundary_discrepancies(
    family: Literal["ex5_3", "ex5_4"], n: int, b_max: int, m_max: int
) -> List[Tuple[int, int]]:
    """(b, m) where the exact nef test and its strict sufficient form disagree."""
    form = "(n+1)B-2K" if family == "ex5_3" else "nB-K"
    out = []
    for b in range(2, b_max + 1):
        for m in range(1, m_max + 1):
            X = make_cover(hirzebruch(1), 2, f1_branch_class(m))
            D = nef_form(X, X.pb(1, b), form, n)
            if is_nef_pullback(D) != is_ample_pullback(D):
                out.append((b, m))
    return out


# -- the CM obstruction family ---------------------------------------------------


def ex5_7_parameters(n: int, m: int) -> Tuple[int, int, int]:
    """(b_param, r, s) with b_param = n+m-2, r = b_param/2, s = b_param."""
    if n < 1 or m < 1 or (n + m) % 2 or n + m < 6:
        raise InvalidModelError(f"need positive n, m with n+m even and >= 6, got ({n}, {m})")
    b_param = n + m - 2
    return b_param, b_param // 2, b_param


def build_ex5_7(n: int, m: int, config: EngineConfig = DEFAULT_CONFIG) -> FamilySolution:
    b_param, r, s = ex5_7_parameters(n, m)
    S = hirzebruch(1)
    X = make_cover(S, 2, S.cls(r + 2, s + 3))
    ctx = build_context(X, X.pb(1, 2), config)
    inv = ctx.invariants
    x = Fraction(2, b_param)
    identity = (n + m - 2) * x * x + (n + m - 4) * x
    h0_obstruction = cohomology_cover(ctx.K * 2 - ctx.B * (b_param - 1)).h0
    h2_obstruction = cohomology_cover(ctx.B * (n + m - 3) - ctx.K).h2
    if h0_obstruction != h2_obstruction:
        raise InternalInconsistency(
            f"Serre duality fails on the cover: h0 = {h0_obstruction}, h2 = {h2_obstruction}"
        )
    logger.warning("[families] ex5_7: the H^2 obstruction is evaluated with K_X, not K_S")
    claims = [
        _claim("X regular", inv.regular, q=inv.q),
        _claim("p_g >= 3", inv.p_g >= 3, p_g=inv.p_g),
        _claim("K^2 >= 2", ctx.K2 >= 2, K2=ctx.K2),
        _claim("B^2 = 6", ctx.B2 == 6, B2=ctx.B2),
        _claim("B.K = 2(r+s)", ctx.BK == 2 * (r + s), BK=ctx.BK, r=r, s=s),
        _claim("B.K > B^2 >= (2/b) B.K", ctx.BK > ctx.B2 >= x * ctx.BK,
               BK=ctx.BK, B2=ctx.B2, rhs=x * ctx.BK),
        _claim("(n+m-2)(a/b)^2 + (n+m-4)(a/b) = 2 at a = 2", identity == 2, value=identity),
        _claim(f"h1({b_param}B) = 0", ctx.h1(b_param) == 0, h1=ctx.h1(b_param)),
        _claim(f"h0(2K-{b_param - 1}B) > 0", h0_obstruction > 0, h0=h0_obstruction),
        _claim(f"h2({n + m - 3}B-K_X) != 0", h2_obstruction != 0, h2=h2_obstruction),
    ]
    big, small = max(n, m), min(n, m)
    cert = certify_multiplication(ctx, big, small)
    regular_route, general_route = _mult_routes(cert)
    claims += [
        _claim(f"mult_regular certifies ({big}, {small})", regular_route),
        _claim(f"mult_general is blocked for ({big}, {small})", not general_route),
    ]
    params = {"n": n, "m": m, "b_param": b_param, "r": r, "s": s}
    return _solution("ex5_7", params, ctx, claims)


def _mult_routes(cert: Union[MultiplicationCertificate, Inapplicable]) -> Tuple[bool, bool]:
    appendix = cert.appendix
    by_id = {o.rule_id: o.applicable for o in appendix}
    return by_id.get("mult_regular", False), by_id.get("mult_general", False)


# -- the plane examples -----------------------------------------------------------


def plane_model(degree: int, L: int, config: EngineConfig = DEFAULT_CONFIG) -> SurfaceContext:
    P2 = projective_plane()
    X = make_cover(P2, degree, P2.cls(L))
    return build_context(X, X.pb(1), config)


def _classic_ex5_1(config: EngineConfig) -> FamilySolution:
    ctx = plane_model(2, 5, config)
    inv = ctx.invariants
    found = min_r_for_Np(ctx, 0)
    r_min = found[0] if found else None
    claims = [
        _claim("B^2 = 2", ctx.B2 == 2, B2=ctx.B2),
        _claim("B.K = 4", ctx.BK == 4, BK=ctx.BK),
        _claim("h1(B) = 0", ctx.h1(1) == 0, h1=ctx.h1(1)),
        _claim("K^2 = 8", ctx.K2 == 8, K2=ctx.K2),
        _claim("p_g = 6", inv.p_g == 6, p_g=inv.p_g),
        _claim("q = 0", inv.q == 0, q=inv.q),
        _claim("N_0 certified for K+3B", r_min == 3, r_min=r_min,
               rule=found[1].rule_id if found else "none"),
        _unverifiable("K+2B does not satisfy N_0", "failure of N_p needs syzygy computations"),
    ]
    return _solution("ex5_1", {"degree": 2, "L": 5}, ctx, claims)


def _classic_ex5_2(config: EngineConfig) -> FamilySolution:
    ctx = plane_model(3, 3, config)
    h1s = [ctx.h1(l) for l in range(1, 11)]
    cert = certify(ctx, 5, 1)
    rule = cert.rule_id if isinstance(cert, NpCertificate) else "none"
    claims = [
        _claim("B^2 = 3", ctx.B2 == 3, B2=ctx.B2),
        _claim("B.K = 9", ctx.BK == 9, BK=ctx.BK),
        _claim("h1(lB) = 0 for l = 1..10", all(h == 0 for h in h1s), max_h1=max(h1s)),
        _claim("N_1 certified for K+5B by n1_3", rule == "n1_3", rule=rule),
        _unverifiable("K+2B does not satisfy N_1", "failure of N_p needs syzygy computations"),
    ]
    return _solution("ex5_2", {"degree": 3, "L": 3}, ctx, claims)


def build_classics(config: EngineConfig = DEFAULT_CONFIG) -> List[FamilySolution]:
    return [_classic_ex5_1(config), _classic_ex5_2(config)]
