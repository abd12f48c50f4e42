"""K-negative extremal rays and the minimal model program on rational surfaces.

The supported regime is the plane, Hirzebruch surfaces, and general-position
blow-ups of at most 8 points.  There the relevant curve classes are cut out
by two Diophantine conditions in the blow-up basis ``aH - sum b_i E_i``:

* ``(-1)``-classes:  ``a^2 - sum b_i^2 = -1`` and ``3a - sum b_i = 1``;
* ruled-fibration (conic) classes:  ``a^2 - sum b_i^2 = 0`` and
  ``3a - sum b_i = 2``.

Both searches are exhaustive: Cauchy-Schwarz gives ``(sum b)^2 <= r sum b^2``,
which bounds the degree ``a`` once ``r <= 8``.  Results come back in a
deterministic canonical order (sorted coordinate tuples).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidRay, NotBirational, UnsupportedCone
from .lattice import (
    BLOWUP_PLANE,
    HIRZEBRUCH,
    PLANE,
    DivisorClass,
    SurfaceModel,
    canonical_class,
    check_class,
    intersect,
    require_cone_support,
)


class ContractionKind(enum.Enum):
    BLOWDOWN_TO_POINT = "BlowdownToPoint"
    RULED_FIBRATION = "RuledFibration"
    CONTRACT_TO_POINT = "ContractToPoint"


_KIND_ORDER = {
    ContractionKind.BLOWDOWN_TO_POINT: 0,
    ContractionKind.RULED_FIBRATION: 1,
    ContractionKind.CONTRACT_TO_POINT: 2,
}


@dataclass(frozen=True)
class ExtremalRay:
    generator: DivisorClass
    kind: ContractionKind


# ---------------------------------------------------------------------------
# Diophantine class searches
# ---------------------------------------------------------------------------


def _degree_bound(r: int, square: int, k_degree: int) -> int:
    """Largest a with (3a - k_degree)^2 <= r(a^2 - square).

    Exhaustive search bound for classes aH - sum b_i E_i with
    C^2 = square and -K.C = k_degree, valid for r <= 8 where the
    quadratic (9-r)a^2 - 6 k a + (k^2 + r square) has positive leading
    coefficient.
    """
    if r == 0:
        return 0

    def feasible(a: int) -> bool:
        return (9 - r) * a * a - 6 * k_degree * a + (k_degree**2 + r * square) <= 0

    disc = 36 * k_degree**2 - 4 * (9 - r) * (k_degree**2 + r * square)
    if disc < 0:
        return 0
    a_max = (6 * k_degree + math.isqrt(disc)) // (2 * (9 - r))
    while feasible(a_max + 1):  # isqrt rounding can undershoot by one
        a_max += 1
    return max(a_max, 0)


def _multiplicity_vectors(r: int, total: int, squares: int):
    """All integer vectors b of length r with sum(b) = total, sum(b^2) = squares."""
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec(pos: int, s_rem: int, q_rem: int) -> None:
        if pos == r:
            if s_rem == 0 and q_rem == 0:
                out.append(tuple(prefix))
            return
        m = r - pos
        # remaining squares bound each entry, Cauchy-Schwarz bounds the rest
        if q_rem < 0 or m * q_rem < s_rem * s_rem or (s_rem - q_rem) % 2:
            return
        top = math.isqrt(q_rem)
        for b in range(-top, top + 1):
            prefix.append(b)
            rec(pos + 1, s_rem - b, q_rem - b * b)
            prefix.pop()

    rec(0, total, squares)
    return out


@lru_cache(maxsize=None)
def _class_search_cached(
    r: int, square: int, k_degree: int, max_degree: int | None
) -> tuple[DivisorClass, ...]:
    """Classes C = aH - sum b_i E_i with C^2 = square, K.C = -k_degree, a >= 0."""
    model = SurfaceModel.blowup_plane(r)
    bound = _degree_bound(r, square, k_degree) if max_degree is None else max_degree
    found: list[DivisorClass] = []
    for a in range(bound + 1):
        squares = a * a - square
        if squares < 0:
            continue
        for b in _multiplicity_vectors(r, 3 * a - k_degree, squares):
            found.append(model.divisor((a,) + tuple(-x for x in b)))
    found.sort(key=lambda c: c.coords)
    return tuple(found)


def _class_search(
    model: SurfaceModel, square: int, k_degree: int, max_degree: int | None
) -> list[DivisorClass]:
    return list(_class_search_cached(model.r, square, k_degree, max_degree))


def enumerate_minus_one_classes(
    r: int, max_degree: int | None = None
) -> list[DivisorClass]:
    """All classes with C^2 = -1 and K.C = -1 on a general blow-up of r points.

    ``max_degree`` widens the search window past the proven bound; tests use
    it to re-verify exhaustiveness.  Counts for r = 1..8 are
    1, 3, 6, 10, 16, 27, 56, 240.
    """
    if not 0 <= r <= 8:
        raise UnsupportedCone("(-1)-class enumeration needs 0 <= r <= 8", r=r)
    model = SurfaceModel.blowup_plane(r)
    return _class_search(model, -1, 1, max_degree)


def enumerate_fibration_classes(
    r: int, max_degree: int | None = None
) -> list[DivisorClass]:
    """All classes with C^2 = 0 and K.C = -2 (conic-bundle fibers)."""
    if not 0 <= r <= 8:
        raise UnsupportedCone("fibration-class enumeration needs 0 <= r <= 8", r=r)
    model = SurfaceModel.blowup_plane(r)
    return _class_search(model, 0, 2, max_degree)


def effective_generators(model: SurfaceModel) -> list[DivisorClass]:
    """Generators of the cone of effective curves.

    Plane: H.  Hirzebruch: C0 and f.  General-position blow-ups: the
    (-1)-classes together with the fibration classes (the latter are
    extremal only for r = 1 but are always effective, so including them
    never enlarges the cone).
    """
    require_cone_support(model)
    if model.kind == PLANE or (model.kind == BLOWUP_PLANE and model.r == 0):
        return [model.line()]
    if model.kind == HIRZEBRUCH:
        return [model.section(), model.fiber()]
    gens = enumerate_minus_one_classes(model.r) + enumerate_fibration_classes(model.r)
    gens.sort(key=lambda c: c.coords)
    return gens


# ---------------------------------------------------------------------------
# Extremal rays
# ---------------------------------------------------------------------------


def enumerate_extremal_rays(model: SurfaceModel) -> list[ExtremalRay]:
    """K-negative rays in canonical order: blow-downs first, then fibrations."""
    require_cone_support(model)
    if model.kind == PLANE or (model.kind == BLOWUP_PLANE and model.r == 0):
        return [ExtremalRay(model.line(), ContractionKind.CONTRACT_TO_POINT)]
    if model.kind == HIRZEBRUCH:
        rays = []
        if model.k == 1:
            rays.append(ExtremalRay(model.section(), ContractionKind.BLOWDOWN_TO_POINT))
        elif model.k == 0:
            rays.append(ExtremalRay(model.section(), ContractionKind.RULED_FIBRATION))
        rays.append(ExtremalRay(model.fiber(), ContractionKind.RULED_FIBRATION))
        rays.sort(key=lambda ray: (_KIND_ORDER[ray.kind], ray.generator.coords))
        return rays
    rays = [
        ExtremalRay(c, ContractionKind.BLOWDOWN_TO_POINT)
        for c in enumerate_minus_one_classes(model.r)
    ]
    rays += [
        ExtremalRay(c, ContractionKind.RULED_FIBRATION)
        for c in enumerate_fibration_classes(model.r)
    ]
    return rays


# ---------------------------------------------------------------------------
# Contraction of a (-1)-class
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Contraction:
    """One blow-down: target model plus the linear pushforward of classes."""

    model_before: SurfaceModel
    ray: ExtremalRay
    model_after: SurfaceModel
    matrix: tuple[tuple[int, ...], ...]  # new_coords = matrix . old_coords

    def push(self, c: DivisorClass) -> DivisorClass:
        check_class(self.model_before, c)
        coords = tuple(
            sum(m * x for m, x in zip(row, c.coords)) for row in self.matrix
        )
        return self.model_after.divisor(coords)


def _pairing_vector(model: SurfaceModel, c: DivisorClass) -> tuple[int, ...]:
    """Row vector x -> c.x, i.e. gram @ c."""
    gram = model.gram
    return tuple(
        sum(gram[i][j] * c.coords[j] for j in range(model.rank))
        for i in range(model.rank)
    )


def _reflection_matrix(model: SurfaceModel, alpha: DivisorClass):
    """Matrix of x -> x + (x.alpha) alpha for a root alpha (alpha^2 = -2, K.alpha = 0)."""
    n = model.rank
    pair = _pairing_vector(model, alpha)
    return [
        [
            (1 if i == j else 0) + alpha.coords[i] * pair[j]
            for j in range(n)
        ]
        for i in range(n)
    ]


def _mat_mul(a, b):
    return [
        [sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))]
        for i in range(len(a))
    ]


def _mat_vec(a, v):
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in a)


def _weyl_normalize(model: SurfaceModel, cls: DivisorClass):
    """Integral isometry (fixing K) taking the (-1)-class to E_r.

    Degree is lowered by reflecting in the root H - E_i - E_j - E_k at the
    three largest multiplicities (the classical cascade); a final
    transposition root E_i - E_r moves the coordinate class into place.
    """
    n = model.rank
    r = model.r
    matrix = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    current = cls
    guard = 0
    while True:
        guard += 1
        if guard > 64:  # cascade terminates in <= degree steps
            raise AssertionError("Weyl cascade failed to terminate")
        a = current.coords[0]
        mults = [-x for x in current.coords[1:]]
        if a == 0:
            idx = [i for i, m in enumerate(mults) if m != 0]
            if len(idx) != 1 or mults[idx[0]] != -1:
                raise AssertionError(f"cascade reached a non-exceptional class {current}")
            i = idx[0] + 1
            if i != r:
                alpha_coords = [0] * n
                alpha_coords[i] = 1
                alpha_coords[r] = -1
                alpha = model.divisor(alpha_coords)
                refl = _reflection_matrix(model, alpha)
                matrix = _mat_mul(refl, matrix)
                current = model.divisor(_mat_vec(refl, current.coords))
            return matrix, current
        order = sorted(range(r), key=lambda i: (-mults[i], i))[:3]
        alpha_coords = [1] + [0] * r
        for i in order:
            alpha_coords[i + 1] = -1
        alpha = model.divisor(alpha_coords)
        t = intersect(model, current, alpha)
        if t >= 0:
            raise AssertionError(f"cascade stalled on {current}")
        refl = _reflection_matrix(model, alpha)
        matrix = _mat_mul(refl, matrix)
        current = model.divisor(_mat_vec(refl, current.coords))
        if current.coords[0] < 0 or current.coords[0] >= a:
            raise AssertionError(f"cascade failed to lower degree at {current}")


def contract_ray(model: SurfaceModel, ray: ExtremalRay) -> Contraction:
    """Blow down a (-1)-ray, returning the target model and pushforward.

    Fiber-type rays are not birational and raise NotBirational; rays not in
    the enumeration raise InvalidRay.  Contracting C0 on F_1 or the last
    exceptional class gives the plane; contracting the line through the two
    points of Bl_2 gives F_0; everything else is a smaller blow-up after a
    Weyl change of basis.
    """
    check_class(model, ray.generator)
    if ray not in enumerate_extremal_rays(model):
        raise InvalidRay("ray is not extremal on this model", ray=str(ray.generator))
    if ray.kind is not ContractionKind.BLOWDOWN_TO_POINT:
        raise NotBirational(
            "only blow-down rays can be contracted", kind=ray.kind.value
        )

    if model.kind == HIRZEBRUCH:
        # k = 1, generator C0; fibers map to lines through the blown-down point
        target = SurfaceModel.plane()
        return Contraction(model, ray, target, ((0, 1),))

    r = model.r
    gen = ray.generator
    if r == 1:
        target = SurfaceModel.plane()
        return Contraction(model, ray, target, ((1, 0),))

    if r == 2 and gen.coords[0] != 0:
        # the strict line through both points; the two pencils of lines
        # through each point become the rulings of F_0
        target = SurfaceModel.hirzebruch(0)
        f1 = model.divisor((1, -1, 0))
        f2 = model.divisor((1, 0, -1))
        rows = []
        for basis_class in (f2, f1):  # new C0 pairs against f2, new f against f1
            pair = _pairing_vector(model, basis_class)
            lpair = _pairing_vector(model, gen)
            lg = intersect(model, basis_class, gen)
            rows.append(
                tuple(pair[j] + lg * lpair[j] for j in range(model.rank))
            )
        return Contraction(model, ray, target, tuple(rows))

    # coordinate exceptional class: drop its coordinate
    mults = [-x for x in gen.coords[1:]]
    if gen.coords[0] == 0:
        i = mults.index(-1) + 1
        target = SurfaceModel.blowup_plane(r - 1, model.general_position)
        rows = tuple(
            tuple(1 if j == keep else 0 for j in range(model.rank))
            for keep in range(model.rank)
            if keep != i
        )
        return Contraction(model, ray, target, rows)

    # general (-1)-class: realign so the class becomes E_r, then drop it
    weyl, image = _weyl_normalize(model, gen)
    assert image.coords == (0,) * r + (1,), "normalization must reach E_r"
    target = SurfaceModel.blowup_plane(r - 1, model.general_position)
    rows = tuple(tuple(weyl[i]) for i in range(r))  # drop the last new coordinate
    return Contraction(model, ray, target, rows)


# ---------------------------------------------------------------------------
# The program
# ---------------------------------------------------------------------------


class Strategy(enum.Enum):
    FIRST_RAY = "first-ray"
    PREFER_BIRATIONAL = "prefer-birational"
    PREFER_FIBER = "prefer-fiber"


class TerminalKind(enum.Enum):
    PLANE = "PlaneOutput"
    RULED = "RuledOutput"
    MINIMAL = "MinimalOutput"


@dataclass(frozen=True)
class Terminal:
    kind: TerminalKind
    model: SurfaceModel
    fiber_ray: ExtremalRay | None = None

    @property
    def rank(self) -> int:
        return self.model.rank


@dataclass(frozen=True)
class MMPTrace:
    initial_model: SurfaceModel
    steps: tuple[Contraction, ...]
    terminal: Terminal


def _select_ray(rays: list[ExtremalRay], strategy: Strategy) -> ExtremalRay:
    if strategy is Strategy.FIRST_RAY:
        return rays[0]
    wanted = (
        ContractionKind.BLOWDOWN_TO_POINT
        if strategy is Strategy.PREFER_BIRATIONAL
        else ContractionKind.RULED_FIBRATION
    )
    for ray in rays:
        if ray.kind is wanted:
            return ray
    return rays[0]


def run_mmp(
    model: SurfaceModel, strategy: Strategy = Strategy.PREFER_BIRATIONAL
) -> MMPTrace:
    """Contract K-negative rays until the plane or a ruled fibration is reached.

    Each birational step drops the Picard rank by exactly one, so the loop
    ends after at most r contractions.  A K-nef model (MinimalOutput) is
    unreachable on these rational surfaces and is asserted against rather
    than implemented.
    """
    require_cone_support(model)
    steps: list[Contraction] = []
    current = model
    while True:
        if current.rank == 1:
            terminal = Terminal(TerminalKind.PLANE, current)
            break
        rays = enumerate_extremal_rays(current)
        assert rays, "K-negative rays always exist in the supported regime"
        ray = _select_ray(rays, strategy)
        if ray.kind is ContractionKind.RULED_FIBRATION:
            terminal = Terminal(TerminalKind.RULED, current, ray)
            break
        step = contract_ray(current, ray)
        steps.append(step)
        current = step.model_after
    trace = MMPTrace(model, tuple(steps), terminal)
    assert len(steps) == model.rank - terminal.rank
    return trace
