"""Picard lattices of the base surfaces.

Two kinds of base are modelled: the Hirzebruch surface F_e, with classes
written a*C0 + b*f in the basis {section C0, fiber f}, and the projective
plane, with classes d*H. All arithmetic is on Python integers, so nothing
can overflow.
"""

from typing import Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.errors import InvalidModelError, LatticeMismatchError


class BaseSurface(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["hirzebruch", "plane"] = Field(description="Which base surface")
    e: int = Field(0, description="Twist of the Hirzebruch surface F_e; 0 for the plane")

    @model_validator(mode="after")
    def _check_twist(self) -> "BaseSurface":
        if self.e < 0:
            raise ValueError("Hirzebruch twist e must be nonnegative")
        if self.kind == "plane" and self.e != 0:
            raise ValueError("the projective plane carries no twist")
        return self

    @property
    def rank(self) -> int:
        return 2 if self.kind == "hirzebruch" else 1

    @property
    def is_plane(self) -> bool:
        return self.kind == "plane"

    def cls(self, *coords: int) -> "BaseClass":
        """Builds a class on this surface from its coordinates."""
        return BaseClass(surface=self, coords=tuple(coords))

    def zero(self) -> "BaseClass":
        return self.cls(*([0] * self.rank))

    def label(self) -> str:
        return "P2" if self.is_plane else f"F_{self.e}"


def hirzebruch(e: int) -> BaseSurface:
    if e < 0:
        raise InvalidModelError(f"Hirzebruch twist must be >= 0, got {e}")
    return BaseSurface(kind="hirzebruch", e=e)


def projective_plane() -> BaseSurface:
    return BaseSurface(kind="plane")


class BaseClass(BaseModel):
    """A divisor class on a base surface, in the fixed basis {C0, f} or {H}."""

    model_config = ConfigDict(frozen=True)

    surface: BaseSurface
    coords: Tuple[int, ...]

    @model_validator(mode="after")
    def _check_rank(self) -> "BaseClass":
        if len(self.coords) != self.surface.rank:
            raise ValueError(
                f"{self.surface.label()} classes have {self.surface.rank} coordinates, "
                f"got {len(self.coords)}"
            )
        return self

    @property
    def a(self) -> int:
        """Coefficient of C0 (or of H on the plane)."""
        return self.coords[0]

    @property
    def b(self) -> int:
        """Coefficient of f. Only meaningful on a Hirzebruch surface."""
        if self.surface.is_plane:
            raise InvalidModelError("plane classes have no fiber coordinate")
        return self.coords[1]

    @property
    def d(self) -> int:
        if not self.surface.is_plane:
            raise InvalidModelError("Hirzebruch classes have no plane degree")
        return self.coords[0]

    def _same_lattice(self, other: "BaseClass") -> None:
        if not isinstance(other, BaseClass):
            raise TypeError(f"expected a BaseClass, got {type(other).__name__}")
        if other.surface != self.surface:
            raise LatticeMismatchError(
                f"classes on {self.surface.label()} and {other.surface.label()} cannot be combined"
            )

    def __add__(self, other: "BaseClass") -> "BaseClass":
        self._same_lattice(other)
        return BaseClass(
            surface=self.surface, coords=tuple(x + y for x, y in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "BaseClass") -> "BaseClass":
        return self + (-other)

    def __neg__(self) -> "BaseClass":
        return self * -1

    def __mul__(self, k: int) -> "BaseClass":
        if not isinstance(k, int):
            return NotImplemented
        return BaseClass(surface=self.surface, coords=tuple(k * x for x in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def __str__(self) -> str:
        if self.surface.is_plane:
            return f"{self.a}H"
        return f"{self.a}C0{self.b:+d}f"


def intersect(S: BaseSurface, D1: BaseClass, D2: BaseClass) -> int:
    """Intersection number of two classes on S.

    On F_e: (a1 C0 + b1 f).(a2 C0 + b2 f) = -e a1 a2 + a1 b2 + a2 b1.
    On the plane: d1 H . d2 H = d1 d2.
    """
    if D1.surface != S or D2.surface != S:
        raise LatticeMismatchError(
            f"intersect on {S.label()} got classes on {D1.surface.label()} and {D2.surface.label()}"
        )
    if S.is_plane:
        return D1.a * D2.a
    return -S.e * D1.a * D2.a + D1.a * D2.b + D2.a * D1.b


def canonical_class(S: BaseSurface) -> BaseClass:
    if S.is_plane:
        return S.cls(-3)
    return S.cls(-2, -(S.e + 2))


def section(S: BaseSurface) -> BaseClass:
    """The negative section C0 of F_e."""
    if S.is_plane:
        raise InvalidModelError("the plane has no ruling")
    return S.cls(1, 0)


def fiber(S: BaseSurface) -> BaseClass:
    if S.is_plane:
        raise InvalidModelError("the plane has no ruling")
    return S.cls(0, 1)


def hyperplane(S: BaseSurface) -> BaseClass:
    if not S.is_plane:
        raise InvalidModelError("only the plane has a hyperplane class here")
    return S.cls(1)


def curve_generators(S: BaseSurface) -> Tuple[BaseClass, ...]:
    """Generators of the cone of curves: {C0, f} on F_e, {H} on the plane."""
    if S.is_plane:
        return (hyperplane(S),)
    return (section(S), fiber(S))
