"""Positivity predicates and the vanishing rules the N_p theorems consume.

On F_e the cone of curves is spanned by C0 and f, so a class is nef exactly
when it meets both non-negatively; on these toric bases nef and base point
free coincide. A finite cover pulls nef back to nef and ample back to ample,
so pullback predicates are decided on the base class.
"""

import logging
from fractions import Fraction
from math import gcd
from typing import Callable, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, model_validator

from src.covers import CyclicCover, PullbackClass, canonical_of_cover, pullback_intersect
from src.errors import InvalidModelError, LatticeMismatchError
from src.lattice import BaseClass, BaseSurface, curve_generators, intersect
from src.records import Inapplicable, Verdict

logger = logging.getLogger(__name__)


def is_nef(S: BaseSurface, D: BaseClass) -> bool:
    if S.is_plane:
        return D.d >= 0
    # D.f = a and D.C0 = b - ae
    return D.a >= 0 and D.b >= D.a * S.e


def is_ample(S: BaseSurface, D: BaseClass) -> bool:
    if S.is_plane:
        return D.d > 0
    return D.a > 0 and D.b > D.a * S.e


def is_big(S: BaseSurface, D: BaseClass) -> bool:
    """Bigness, tested for nef classes only: nef with D^2 > 0."""
    return is_nef(S, D) and intersect(S, D, D) > 0


def is_bpf(S: BaseSurface, D: BaseClass) -> bool:
    return is_nef(S, D)


def nef_by_cone(S: BaseSurface, D: BaseClass) -> bool:
    """Nefness tested against the generators of the cone of curves."""
    return all(intersect(S, D, C) >= 0 for C in curve_generators(S))


def is_nef_pullback(D: PullbackClass) -> bool:
    return is_nef(D.cover.base, D.base_class)


def is_ample_pullback(D: PullbackClass) -> bool:
    return is_ample(D.cover.base, D.base_class)


def is_bpf_pullback(D: PullbackClass) -> bool:
    """Sufficient test: a base point free base class pulls back base point free."""
    return is_bpf(D.cover.base, D.base_class)


def is_big_pullback(D: PullbackClass) -> bool:
    return is_nef_pullback(D) and pullback_intersect(D, D) > 0


class SlopeBound(BaseModel):
    """The pair a < b with B^2 >= (a/b)(B.K), in lowest terms."""

    model_config = ConfigDict(frozen=True)

    a: int
    b: int

    @model_validator(mode="after")
    def _check_pair(self) -> "SlopeBound":
        if not 0 < self.a < self.b:
            raise ValueError(f"slope bound needs 0 < a < b, got {self.a}/{self.b}")
        if gcd(self.a, self.b) != 1:
            raise ValueError(f"slope bound {self.a}/{self.b} is not in lowest terms")
        return self

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.a, self.b)

    @property
    def inverse(self) -> Fraction:
        """b/a, the quantity the r-bounds are stated in."""
        return Fraction(self.b, self.a)

    def holds(self, B2: int, BK: int) -> bool:
        return self.b * B2 >= self.a * BK

    @classmethod
    def of(cls, x: Fraction) -> "SlopeBound":
        return cls(a=x.numerator, b=x.denominator)

    @classmethod
    def best(cls, B2: int, BK: int, cap: int) -> "SlopeBound":
        """Largest admissible a/b: B^2/(B.K) when that is below 1, else (cap-1)/cap.

        Every rule hypothesis is monotone in a/b, so this choice dominates.
        """
        if B2 <= 0:
            raise InvalidModelError(f"slope bound needs B^2 > 0, got {B2}")
        if 0 < B2 < BK:
            return cls.of(Fraction(B2, BK))
        return cls(a=cap - 1, b=cap)


def _check_on(X: CyclicCover, B: PullbackClass) -> None:
    if B.cover != X:
        raise LatticeMismatchError("B does not live on the given cover")


def k_plus_b_bpf(X: CyclicCover, B: PullbackClass) -> Verdict:
    """Base point freeness of K_X + B.

    B^2 >= 5 settles it by Reider's theorem. Below that only the base class of
    K_X + B is examined; failure there leaves the hypothesis unavailable.
    """
    _check_on(X, B)
    if not is_ample_pullback(B):
        raise InvalidModelError(f"B = {B} is not ample")
    B2 = pullback_intersect(B, B)
    if B2 <= 1:
        raise InvalidModelError(f"an ample base point free B on a cover has B^2 >= 2, got {B2}")
    if B2 >= 5:
        return Verdict(value=True, provenance="Reider")
    KB = canonical_of_cover(X) + B
    if is_bpf_pullback(KB):
        return Verdict(value=True, provenance="base-class check")
    logger.info("[positivity] K+B bpf unavailable for %s (B^2 = %d)", B, B2)
    return Verdict(value=False, provenance="unavailable")


def h1_of_multiple(B: PullbackClass, l: int) -> int:
    from src.cohomology import cohomology_cover

    return cohomology_cover(B * l).h1


def h1_vanishing_from(
    m0: int, bound: SlopeBound, X: CyclicCover, B: PullbackClass
) -> Union[Callable[[int], bool], Inapplicable]:
    """Propagates H^1(m0 B) = 0 to every l >= m0, given m0 > b/a.

    The returned predicate answers l >= m0 from the propagation and computes
    smaller multiples directly.
    """
    _check_on(X, B)
    K = canonical_of_cover(X)
    B2, BK = pullback_intersect(B, B), pullback_intersect(B, K)
    blocking = []
    if not bound.holds(B2, BK):
        blocking.append("B^2 >= (a/b) B.K")
    if m0 * bound.a <= bound.b:
        blocking.append("m0 > b/a")
    if not blocking and h1_of_multiple(B, m0) != 0:
        blocking.append("h1(m0 B) = 0")
    if blocking:
        return Inapplicable(reason=f"propagation from m0 = {m0} unavailable", blocking=blocking)

    def vanishes(l: int) -> bool:
        if l >= m0:
            return True
        return h1_of_multiple(B, l) == 0

    return vanishes


def lemma_1_1_corollary(
    n: int, m0: int, X: CyclicCover, B: PullbackClass
) -> Union[Callable[[int], bool], Inapplicable]:
    """The a = 1, b = n case: n B^2 >= B.K and H^1(m0 B) = 0 with m0 >= n + 1."""
    if n < 2:
        return Inapplicable(reason="needs n >= 2", blocking=["n >= 2"])
    return h1_vanishing_from(m0, SlopeBound(a=1, b=n), X, B)


def lemma_1_2_check(
    bound: SlopeBound, X: CyclicCover, B: PullbackClass
) -> Union[bool, Inapplicable]:
    """b (B.K) >= a K^2. Every valid model must satisfy it."""
    _check_on(X, B)
    K = canonical_of_cover(X)
    B2, BK = pullback_intersect(B, B), pullback_intersect(B, K)
    if not is_ample_pullback(B):
        return Inapplicable(reason="B is not ample", blocking=["B ample"])
    if not bound.holds(B2, BK):
        return Inapplicable(reason="slope bound fails", blocking=["B^2 >= (a/b) B.K"])
    return bound.b * BK >= bound.a * pullback_intersect(K, K)


def vanishing_van(n: int, m: int, l: int) -> bool:
    """m > (n+1)(l+2)/2, compared exactly."""
    return 2 * m > (n + 1) * (l + 2)


def vanishing_van1(n: int, m: int, l: int) -> bool:
    return m > n * (l + 1)


NefForm = Literal["(n+1)B-2K", "nB-K", "nB-2K", "(n-1)B-K", "slope"]


def nef_form(X: CyclicCover, B: PullbackClass, form: NefForm, n: int) -> PullbackClass:
    K = canonical_of_cover(X)
    if form == "(n+1)B-2K":
        return B * (n + 1) - K * 2
    if form == "nB-K":
        return B * n - K
    if form == "nB-2K":
        return B * n - K * 2
    if form == "(n-1)B-K":
        return B * (n - 1) - K
    raise InvalidModelError(f"{form} is not a class form")


def van_claim(
    X: CyclicCover, B: PullbackClass, n: int, m: int, l: int, variant: Literal["van", "van1"] = "van"
) -> Union[bool, Inapplicable]:
    """Vanishing of H^1 and H^2 of mB - lK, gated on the lemma's nef hypothesis."""
    _check_on(X, B)
    if n < 2 or l < 0:
        return Inapplicable(reason="needs n >= 2 and l >= 0", blocking=["n >= 2", "l >= 0"])
    form: NefForm = "(n+1)B-2K" if variant == "van" else "nB-K"
    if not is_nef_pullback(nef_form(X, B, form, n)):
        return Inapplicable(reason=f"{form} is not nef for n = {n}", blocking=[f"{form} nef"])
    if variant == "van":
        return vanishing_van(n, m, l)
    return vanishing_van1(n, m, l)


def least_n_for(
    X: CyclicCover, B: PullbackClass, form: NefForm, n_max: int, n_min: int = 1
) -> Optional[int]:
    """Least n in [n_min, n_max] making the form nef (or, for 'slope', n B^2 >= B.K)."""
    _check_on(X, B)
    if form == "slope":
        K = canonical_of_cover(X)
        B2, BK = pullback_intersect(B, B), pullback_intersect(B, K)
        for n in range(n_min, n_max + 1):
            if n * B2 >= BK:
                return n
        return None
    for n in range(n_min, n_max + 1):
        if is_nef_pullback(nef_form(X, B, form, n)):
            return n
    return None
