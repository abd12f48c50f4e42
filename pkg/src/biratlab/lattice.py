"""Picard lattices of the plane, its blow-ups, and Hirzebruch surfaces.

All arithmetic is exact: coordinates are Python integers, genera are
``Fraction``.  The three supported models and their fixed bases are

* ``Plane``: rank 1, basis ``(H,)`` with ``H^2 = 1``;
* ``BlowupPlane(r)``: rank ``r + 1``, basis ``(H, E1, ..., Er)`` with the
  diagonal form ``(+1, -1, ..., -1)``;
* ``Hirzebruch(k)``: rank 2, basis ``(C0, f)`` with ``C0^2 = -k``,
  ``C0.f = 1``, ``f^2 = 0``.

Every serialized divisor class carries its basis so that coordinates are
never reinterpreted silently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidClass, UnsupportedCone

PLANE = "Plane"
BLOWUP_PLANE = "BlowupPlane"
HIRZEBRUCH = "Hirzebruch"

_KINDS = (PLANE, BLOWUP_PLANE, HIRZEBRUCH)


@dataclass(frozen=True)
class DivisorClass:
    """Integer divisor class in a fixed lattice basis."""

    coords: tuple[int, ...]
    basis: tuple[str, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        basis = tuple(str(b) for b in self.basis)
        if len(coords) != len(basis):
            raise InvalidClass(
                "coordinate/basis length mismatch",
                coords=list(coords),
                basis=list(basis),
            )
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "basis", basis)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_basis(other)
        return DivisorClass(
            tuple(a + b for a, b in zip(self.coords, other.coords)), self.basis
        )

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._same_basis(other)
        return DivisorClass(
            tuple(a - b for a, b in zip(self.coords, other.coords)), self.basis
        )

    def __neg__(self) -> "DivisorClass":
        return DivisorClass(tuple(-a for a in self.coords), self.basis)

    def __rmul__(self, n: int) -> "DivisorClass":
        return DivisorClass(tuple(n * a for a in self.coords), self.basis)

    def is_zero(self) -> bool:
        return all(a == 0 for a in self.coords)

    def _same_basis(self, other: "DivisorClass") -> None:
        if self.basis != other.basis:
            raise InvalidClass(
                "classes live in different bases",
                left=list(self.basis),
                right=list(other.basis),
            )

    def __str__(self) -> str:
        terms = []
        for c, name in zip(self.coords, self.basis):
            if c == 0:
                continue
            if c == 1:
                terms.append(f"+{name}")
            elif c == -1:
                terms.append(f"-{name}")
            else:
                terms.append(f"{c:+d}{name}")
        return "".join(terms) if terms else "0"


@dataclass(frozen=True)
class SurfaceModel:
    """A rational surface presented by its Picard lattice."""

    kind: str
    r: int = 0
    k: int = 0
    general_position: bool = True

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise InvalidClass("unknown surface kind", kind=self.kind)
        if self.kind == BLOWUP_PLANE and self.r < 0:
            raise InvalidClass("negative blow-up count", r=self.r)
        if self.kind == HIRZEBRUCH and self.k < 0:
            raise InvalidClass("negative Hirzebruch index", k=self.k)
        if self.kind != BLOWUP_PLANE and self.r != 0:
            raise InvalidClass("r only applies to BlowupPlane", kind=self.kind)
        if self.kind != HIRZEBRUCH and self.k != 0:
            raise InvalidClass("k only applies to Hirzebruch", kind=self.kind)

    # -- constructors ------------------------------------------------

    @staticmethod
    def plane() -> "SurfaceModel":
        return SurfaceModel(PLANE)

    @staticmethod
    def blowup_plane(r: int, general_position: bool = True) -> "SurfaceModel":
        return SurfaceModel(BLOWUP_PLANE, r=r, general_position=general_position)

    @staticmethod
    def hirzebruch(k: int) -> "SurfaceModel":
        return SurfaceModel(HIRZEBRUCH, k=k)

    # -- lattice data ------------------------------------------------

    @property
    def rank(self) -> int:
        if self.kind == PLANE:
            return 1
        if self.kind == BLOWUP_PLANE:
            return self.r + 1
        return 2

    @property
    def basis(self) -> tuple[str, ...]:
        if self.kind == PLANE:
            return ("H",)
        if self.kind == BLOWUP_PLANE:
            return ("H",) + tuple(f"E{i}" for i in range(1, self.r + 1))
        return ("C0", "f")

    @property
    def gram(self) -> tuple[tuple[int, ...], ...]:
        """Intersection matrix in the fixed basis."""
        if self.kind == HIRZEBRUCH:
            return ((-self.k, 1), (1, 0))
        n = self.rank
        return tuple(
            tuple((1 if i == 0 else -1) if i == j else 0 for j in range(n))
            for i in range(n)
        )

    # -- class constructors -------------------------------------------

    def divisor(self, coords) -> DivisorClass:
        c = DivisorClass(tuple(int(x) for x in coords), self.basis)
        return c

    def zero(self) -> DivisorClass:
        return self.divisor((0,) * self.rank)

    def line(self) -> DivisorClass:
        """Class H (plane and blow-ups only)."""
        if self.kind == HIRZEBRUCH:
            raise InvalidClass("no line class on a Hirzebruch surface")
        return self.divisor((1,) + (0,) * (self.rank - 1))

    def exceptional(self, i: int) -> DivisorClass:
        """Class E_i, 1-based."""
        if self.kind != BLOWUP_PLANE or not 1 <= i <= self.r:
            raise InvalidClass("no such exceptional class", i=i)
        coords = [0] * self.rank
        coords[i] = 1
        return self.divisor(coords)

    def section(self) -> DivisorClass:
        """Class C0 on a Hirzebruch surface."""
        if self.kind != HIRZEBRUCH:
            raise InvalidClass("C0 only lives on Hirzebruch surfaces")
        return self.divisor((1, 0))

    def fiber(self) -> DivisorClass:
        """Class f on a Hirzebruch surface."""
        if self.kind != HIRZEBRUCH:
            raise InvalidClass("f only lives on Hirzebruch surfaces")
        return self.divisor((0, 1))

    def __str__(self) -> str:
        if self.kind == PLANE:
            return "P^2"
        if self.kind == BLOWUP_PLANE:
            return f"Bl_{self.r}(P^2)"
        return f"F_{self.k}"


def check_class(model: SurfaceModel, c: DivisorClass) -> None:
    """Raise InvalidClass unless c belongs to model's lattice."""
    if c.basis != model.basis:
        raise InvalidClass(
            "class does not belong to this model",
            model=str(model),
            class_basis=list(c.basis),
            model_basis=list(model.basis),
        )


def intersect(model: SurfaceModel, a: DivisorClass, b: DivisorClass) -> int:
    """Symmetric bilinear intersection number a.b."""
    check_class(model, a)
    check_class(model, b)
    gram = model.gram
    total = 0
    for i, ai in enumerate(a.coords):
        if ai == 0:
            continue
        row = gram[i]
        for j, bj in enumerate(b.coords):
            if bj:
                total += ai * row[j] * bj
    return total


def self_intersection(model: SurfaceModel, a: DivisorClass) -> int:
    return intersect(model, a, a)


def canonical_class(model: SurfaceModel) -> DivisorClass:
    """Canonical class K: -3H, -3H + sum E_i, or -2C0 - (k+2)f."""
    if model.kind == PLANE:
        return model.divisor((-3,))
    if model.kind == BLOWUP_PLANE:
        return model.divisor((-3,) + (1,) * model.r)
    return model.divisor((-2, -(model.k + 2)))


def genus_of_class(model: SurfaceModel, c: DivisorClass) -> Fraction:
    """Arithmetic genus g = 1 + (C.C + K.C)/2 of the class."""
    check_class(model, c)
    k = canonical_class(model)
    return 1 + Fraction(intersect(model, c, c) + intersect(model, k, c), 2)


class Ampleness(enum.Enum):
    AMPLE = "Ample"
    NEF_NOT_AMPLE = "NefNotAmple"
    NOT_NEF = "NotNef"


@dataclass(frozen=True)
class AmplenessReport:
    verdict: Ampleness
    witness: DivisorClass | None = None
    pairing: int | None = None


def require_cone_support(model: SurfaceModel) -> None:
    """Cone enumeration works on Plane, Hirzebruch, and general-position
    blow-ups of at most 8 points."""
    if model.kind == BLOWUP_PLANE:
        if model.r > 8:
            raise UnsupportedCone(
                "effective cone is only enumerated for r <= 8", r=model.r
            )
        if not model.general_position:
            raise UnsupportedCone(
                "effective cone enumeration needs general position", r=model.r
            )


def is_ample(model: SurfaceModel, d: DivisorClass) -> AmplenessReport:
    """Kleiman test of d against every effective-cone generator.

    Returns the strictest verdict; on failure the witness is the first
    generator (in canonical order) with non-positive pairing.
    """
    check_class(model, d)
    require_cone_support(model)
    from .mmp import effective_generators

    verdict = Ampleness.AMPLE
    witness: DivisorClass | None = None
    pairing: int | None = None
    for g in effective_generators(model):
        value = intersect(model, d, g)
        if value < 0:
            return AmplenessReport(Ampleness.NOT_NEF, g, value)
        if value == 0 and verdict is Ampleness.AMPLE:
            verdict = Ampleness.NEF_NOT_AMPLE
            witness, pairing = g, value
    return AmplenessReport(verdict, witness, pairing)
