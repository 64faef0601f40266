"""Exact line bundle cohomology on the bases and on their cyclic covers.

On F_e a class aC0 + bf with a >= 0 pushes forward to the projective line as
O(b) + O(b-e) + ... + O(b-ae), with no higher direct image, so h^0 and h^1
are sums over the line. h^2 always comes from Serre duality, and for
a <= -2 the value of h^1 comes from Riemann-Roch. On a cover,
h^i(X, phi^*D) is the sum of h^i(S, D - kL) over k = 0..d-1.
"""

import logging
from functools import lru_cache
from math import comb
from typing import Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, computed_field

from src.covers import (
    CyclicCover,
    PullbackClass,
    canonical_of_cover,
    pullback_intersect,
    pushforward_summands,
)
from src.errors import InternalInconsistency, LatticeMismatchError
from src.lattice import BaseClass, BaseSurface, canonical_class, intersect
from src.positivity import is_nef_pullback

logger = logging.getLogger(__name__)


class CohomologyDims(BaseModel):
    model_config = ConfigDict(frozen=True)

    h0: int = Field(ge=0)
    h1: int = Field(ge=0)
    h2: int = Field(ge=0)

    @computed_field
    @property
    def chi(self) -> int:
        return self.h0 - self.h1 + self.h2

    def __add__(self, other: "CohomologyDims") -> "CohomologyDims":
        return CohomologyDims(h0=self.h0 + other.h0, h1=self.h1 + other.h1, h2=self.h2 + other.h2)

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.h0, self.h1, self.h2)


ZERO_DIMS = CohomologyDims(h0=0, h1=0, h2=0)


def h_line(n: int) -> Tuple[int, int]:
    """(h^0, h^1) of O(n) on the projective line."""
    return max(0, n + 1), max(0, -n - 1)


def _sum_line(e: int, a: int, b: int) -> Tuple[int, int]:
    """Sum of (h^0, h^1) of O(b - ke) over k = 0..a, in closed form."""
    if e == 0:
        x0, x1 = h_line(b)
        return (a + 1) * x0, (a + 1) * x1
    # b - ke decreases in k: h^0 terms form a prefix, h^1 terms a suffix
    h0 = 0
    if b >= 0:
        last = min(a, b // e)
        h0 = (last + 1) * (b + 1) - e * last * (last + 1) // 2
    h1 = 0
    first = max(0, -(-(b + 2) // e))  # least k with b - ke <= -2
    if first <= a:
        count = a - first + 1
        h1 = e * (first + a) * count // 2 - count * (b + 1)
    return h0, h1


@lru_cache(maxsize=1 << 16)
def _dims_base(kind: str, e: int, coords: Tuple[int, ...]) -> CohomologyDims:
    logger.debug("[cohomology] computing %s e=%d %s", kind, e, coords)
    if kind == "plane":
        (d,) = coords
        h0 = comb(d + 2, 2) if d >= 0 else 0
        dual = -3 - d
        h2 = comb(dual + 2, 2) if dual >= 0 else 0
        return CohomologyDims(h0=h0, h1=0, h2=h2)

    a, b = coords
    # K - D = (-2 - a) C0 + (-(e + 2) - b) f
    ka, kb = -2 - a, -(e + 2) - b
    if a >= 0:
        h0, h1 = _sum_line(e, a, b)
        # K - D has negative C0 coefficient, so h^2 = 0
        return CohomologyDims(h0=h0, h1=h1, h2=0)
    if a == -1:
        return ZERO_DIMS
    h2, _ = _sum_line(e, ka, kb)
    chi = _euler_base(e, a, b)
    h1 = h2 - chi
    if h1 < 0:
        raise InternalInconsistency(f"negative h^1 for ({a}, {b}) on F_{e}")
    return CohomologyDims(h0=0, h1=h1, h2=h2)


def _euler_base(e: int, a: int, b: int) -> int:
    """chi(O) + D.(D - K)/2 on F_e, with chi(O) = 1."""
    twice = -e * a * a + 2 * a * b - e * a + 2 * a + 2 * b
    if twice % 2:
        raise InternalInconsistency(f"odd D.(D-K) for ({a}, {b}) on F_{e}")
    return 1 + twice // 2


def cohomology_base(S: BaseSurface, D: BaseClass) -> CohomologyDims:
    if D.surface != S:
        raise LatticeMismatchError(f"class on {D.surface.label()} queried on {S.label()}")
    return _dims_base(S.kind, S.e, D.coords)


def cohomology_cover(D: PullbackClass) -> CohomologyDims:
    """Componentwise sum of base cohomology over the pushforward summands."""
    X = D.cover
    total = ZERO_DIMS
    for summand in pushforward_summands(D):
        total = total + cohomology_base(X.base, summand)
    return total


Space = Union[BaseSurface, CyclicCover]
AnyClass = Union[BaseClass, PullbackClass]


def euler_char(space: Space, D: AnyClass) -> int:
    """Riemann-Roch: chi(O) + D.(D - K)/2, with chi(O) read off h^*(O)."""
    if isinstance(space, CyclicCover):
        if not isinstance(D, PullbackClass) or D.cover != space:
            raise LatticeMismatchError("class is not a pullback to this cover")
        chi_o = cohomology_cover(space.zero()).chi
        K = canonical_of_cover(space)
        twice = pullback_intersect(D, D) - pullback_intersect(D, K)
    else:
        if not isinstance(D, BaseClass) or D.surface != space:
            raise LatticeMismatchError("class does not live on this surface")
        chi_o = cohomology_base(space, space.zero()).chi
        twice = intersect(space, D, D) - intersect(space, D, canonical_class(space))
    if twice % 2:
        raise InternalInconsistency(f"non-integral Riemann-Roch value for {D}")
    return chi_o + twice // 2


class SurfaceInvariants(BaseModel):
    model_config = ConfigDict(frozen=True)

    p_g: int
    q: int
    K2: int
    chi: int
    regular: bool
    minimal: bool = Field(description="K_X nef")
    general_type: bool = Field(description="K_X nef and K^2 > 0")


def surface_invariants(X: CyclicCover) -> SurfaceInvariants:
    K = canonical_of_cover(X)
    O = cohomology_cover(X.zero())
    p_g = cohomology_cover(K).h0
    K2 = pullback_intersect(K, K)
    minimal = is_nef_pullback(K)
    return SurfaceInvariants(
        p_g=p_g,
        q=O.h1,
        K2=K2,
        chi=O.chi,
        regular=O.h1 == 0,
        minimal=minimal,
        general_type=minimal and K2 > 0,
    )


def regularity(B: PullbackClass, cap: int) -> Optional[int]:
    """Castelnuovo-Mumford regularity of B with respect to itself.

    Least m >= 0 with H^1(mB) = 0 and H^2((m-1)B) = 0, or None if no m up to
    cap qualifies.
    """
    for m in range(cap + 1):
        if cohomology_cover(B * m).h1 == 0 and cohomology_cover(B * (m - 1)).h2 == 0:
            return m
    return None
