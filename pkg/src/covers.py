"""Cyclic branched covers X -> S and the pullback classes living on them.

A degree d cyclic cover branched along a smooth member of |dL| has
phi_* O_X = O_S + O_S(-L) + ... + O_S(-(d-1)L) and K_X = phi^*(K_S + (d-1)L).
Only pullback classes are representable on X.
"""

import logging
from typing import List

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import InvalidModelError, LatticeMismatchError
from src.lattice import BaseClass, BaseSurface, canonical_class, intersect

logger = logging.getLogger(__name__)

# Recorded in every certificate: smoothness of the branch member is not checked pointwise.
SMOOTH_BRANCH_ASSUMPTION = (
    "the branch divisor is a smooth member of |dL|; dL ample and base point free, "
    "so such a member exists by generic smoothness in characteristic 0"
)


class CyclicCover(BaseModel):
    model_config = ConfigDict(frozen=True)

    base: BaseSurface
    degree: int = Field(description="Cover degree d >= 2")
    branch_class: BaseClass = Field(description="L, with the branch divisor in |dL|")

    @model_validator(mode="after")
    def _check_cover(self) -> "CyclicCover":
        if self.degree < 2:
            raise ValueError(f"cover degree must be >= 2, got {self.degree}")
        if self.branch_class.surface != self.base:
            raise ValueError("branch class does not live on the base surface")
        # positivity imports covers, so the import is local
        from src.positivity import is_ample, is_bpf

        branch = self.branch_class * self.degree
        if not (is_ample(self.base, branch) and is_bpf(self.base, branch)):
            raise ValueError(f"branch class dL = {branch} must be ample and base point free")
        return self

    def pullback(self, D: BaseClass) -> "PullbackClass":
        return PullbackClass(cover=self, base_class=D)

    def pb(self, *coords: int) -> "PullbackClass":
        """Pullback of the base class with the given coordinates."""
        return self.pullback(self.base.cls(*coords))

    def zero(self) -> "PullbackClass":
        return self.pullback(self.base.zero())

    def label(self) -> str:
        return f"deg {self.degree} cover of {self.base.label()} branched in |{self.degree}({self.branch_class})|"


def make_cover(base: BaseSurface, degree: int, branch_class: BaseClass) -> CyclicCover:
    """Like the constructor, but reports invariant violations as InvalidModelError."""
    try:
        return CyclicCover(base=base, degree=degree, branch_class=branch_class)
    except ValueError as e:
        raise InvalidModelError(str(e)) from e


class PullbackClass(BaseModel):
    """phi^* D for a base class D."""

    model_config = ConfigDict(frozen=True)

    cover: CyclicCover
    base_class: BaseClass

    @model_validator(mode="after")
    def _check_lattice(self) -> "PullbackClass":
        if self.base_class.surface != self.cover.base:
            raise ValueError("pulled back class must live on the cover's base")
        return self

    def _same_cover(self, other: "PullbackClass") -> None:
        if not isinstance(other, PullbackClass):
            raise TypeError(f"expected a PullbackClass, got {type(other).__name__}")
        if other.cover != self.cover:
            raise LatticeMismatchError("pullback classes live on different covers")

    def __add__(self, other: "PullbackClass") -> "PullbackClass":
        self._same_cover(other)
        return PullbackClass(cover=self.cover, base_class=self.base_class + other.base_class)

    def __sub__(self, other: "PullbackClass") -> "PullbackClass":
        self._same_cover(other)
        return PullbackClass(cover=self.cover, base_class=self.base_class - other.base_class)

    def __neg__(self) -> "PullbackClass":
        return self * -1

    def __mul__(self, k: int) -> "PullbackClass":
        if not isinstance(k, int):
            return NotImplemented
        return PullbackClass(cover=self.cover, base_class=self.base_class * k)

    __rmul__ = __mul__

    def numerically_equal(self, other: "PullbackClass") -> bool:
        """Pullback is injective on numerical classes (the form scales by d)."""
        self._same_cover(other)
        return self.base_class == other.base_class

    def __str__(self) -> str:
        return f"phi*({self.base_class})"


def pullback_intersect(D1: PullbackClass, D2: PullbackClass) -> int:
    D1._same_cover(D2)
    X = D1.cover
    return X.degree * intersect(X.base, D1.base_class, D2.base_class)


def canonical_of_cover(X: CyclicCover) -> PullbackClass:
    """K_X = phi^*(K_S + (d-1)L)."""
    return X.pullback(canonical_class(X.base) + X.branch_class * (X.degree - 1))


def pushforward_summands(D: PullbackClass) -> List[BaseClass]:
    """phi_* phi^* D = D + (D - L) + ... + (D - (d-1)L), in that order."""
    X = D.cover
    return [D.base_class - X.branch_class * k for k in range(X.degree)]


def branch_divisor(X: CyclicCover) -> BaseClass:
    return X.branch_class * X.degree


if __name__ == "__main__":
    from src.lattice import projective_plane

    P2 = projective_plane()
    X = make_cover(P2, 2, P2.cls(5))
    B = X.pb(1)
    K = canonical_of_cover(X)
    print(X.label())
    print(f"K = {K}, B^2 = {pullback_intersect(B, B)}, B.K = {pullback_intersect(B, K)}")
    print([str(D) for D in pushforward_summands(B)])
