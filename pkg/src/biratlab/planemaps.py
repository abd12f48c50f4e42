"""Plane Cremona maps as triples of homogeneous forms over the rationals.

A map is three coprime homogeneous polynomials of equal degree in
``x0, x1, x2``; composition substitutes and strips the common factor by
exact multivariate GCD (sympy over QQ), so degrees follow the classical
rule ``deg(f o q) = 2 deg f - sum of multiplicities`` of f at the base
points of the quadratic q.

``factor_map`` unwinds a map into quadratic involutions conjugate to the
standard Cremona transformation plus one final linear map.  Base points
must be supplied (with multiplicities, re-verified by vanishing order);
a single layer of infinitely-near data (a common tangent direction at a
supplied point) is detected from the linear jets and carried through
compositions by exact first-order limits.  Anything deeper, or any
special position encountered mid-run, raises PositionFailure rather than
guessing.

Degrees are capped by BIRATLAB_MAX_DEGREE (default 64).
"""

from __future__ import annotations

import math
import os
import random
from dataclasses import dataclass
from fractions import Fraction

import sympy
from sympy import Rational, symbols

from .errors import (
    BadCluster,
    BiratlabError,
    DegenerateComposition,
    Inconclusive,
    PositionFailure,
)
from .homaloidal import (
    LINEAR,
    FactorizationTrace,
    HomaloidalType,
    TraceStep,
    narrate_round,
    validate_type,
)
from .lattice import SurfaceModel

X0, X1, X2 = symbols("x0 x1 x2")
GENS = (X0, X1, X2)
DEFAULT_MAX_DEGREE = 64


def max_degree_ceiling() -> int:
    """Polynomial-degree ceiling, overridable via BIRATLAB_MAX_DEGREE."""
    raw = os.environ.get("BIRATLAB_MAX_DEGREE")
    if raw is None:
        return DEFAULT_MAX_DEGREE
    try:
        value = int(raw)
    except ValueError as exc:
        raise BiratlabError(
            "BIRATLAB_MAX_DEGREE must be an integer", value=raw
        ) from exc
    if value < 1:
        raise BiratlabError("BIRATLAB_MAX_DEGREE must be positive", value=value)
    return value


# ---------------------------------------------------------------------------
# Projective points
# ---------------------------------------------------------------------------


def normalize_point(coords) -> tuple[int, int, int]:
    """Primitive integer representative with positive leading coordinate."""
    fracs = [Fraction(c) for c in coords]
    if len(fracs) != 3 or all(c == 0 for c in fracs):
        raise PositionFailure("not a projective point", coords=[str(c) for c in coords])
    lcm = 1
    for c in fracs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in fracs]
    g = math.gcd(*ints)
    ints = [c // g for c in ints]
    lead = next(c for c in ints if c != 0)
    if lead < 0:
        ints = [-c for c in ints]
    return tuple(ints)


def format_point(p: tuple[int, int, int]) -> str:
    return "(" + ":".join(str(c) for c in p) + ")"


def _collinear(p, q, r) -> bool:
    det = (
        p[0] * (q[1] * r[2] - q[2] * r[1])
        - p[1] * (q[0] * r[2] - q[2] * r[0])
        + p[2] * (q[0] * r[1] - q[1] * r[0])
    )
    return det == 0


# ---------------------------------------------------------------------------
# The maps
# ---------------------------------------------------------------------------


def _canonical_polys(exprs) -> tuple[sympy.Poly, ...]:
    polys = tuple(sympy.Poly(e, *GENS, domain="QQ") for e in exprs)
    if len(polys) != 3:
        raise BiratlabError("a plane map needs exactly three components")
    if all(p.is_zero for p in polys):
        raise DegenerateComposition("all three components are zero")
    # one common projective scale: integer coefficients, content 1,
    # first nonzero coefficient (components in order, graded-lex terms)
    denom = 1
    for p in polys:
        for c in p.coeffs():
            q = Rational(c).q
            denom = denom * q // math.gcd(denom, q)
    nums: list[int] = []
    for p in polys:
        nums += [int(Rational(c) * denom) for c in p.coeffs()]
    g = 0
    for c in nums:
        g = math.gcd(g, c)
    lead = next(c for c in nums if c != 0)
    scale = Rational(denom, g if lead > 0 else -g)
    return tuple(sympy.Poly(p.as_expr() * scale, *GENS, domain="QQ") for p in polys)


@dataclass(frozen=True)
class PlaneMap:
    """Rational self-map of the plane: three coprime equal-degree forms."""

    components: tuple[sympy.Poly, sympy.Poly, sympy.Poly]

    def __post_init__(self) -> None:
        polys = _canonical_polys(self.components)
        degrees = {p.total_degree() for p in polys if not p.is_zero}
        if len(degrees) != 1:
            raise BiratlabError(
                "components must share one degree",
                degrees=sorted(degrees),
            )
        (degree,) = degrees
        if degree < 1:
            raise BiratlabError("constant components do not define a map")
        if degree > max_degree_ceiling():
            raise BiratlabError(
                "degree exceeds the configured ceiling",
                degree=degree,
                ceiling=max_degree_ceiling(),
            )
        for p in polys:
            if not p.is_zero and not p.is_homogeneous:
                raise BiratlabError("components must be homogeneous")
        common = sympy.gcd(sympy.gcd(polys[0], polys[1]), polys[2])
        if common.total_degree() > 0:
            reduced = tuple(sympy.exquo(p, common) for p in polys)
            polys = _canonical_polys(reduced)
        object.__setattr__(self, "components", polys)
        terms = tuple(
            tuple((monom, Fraction(c.p, c.q)) for monom, c in p.terms())
            for p in polys
        )
        object.__setattr__(self, "_terms", terms)

    @staticmethod
    def from_exprs(*exprs) -> "PlaneMap":
        return PlaneMap(tuple(sympy.sympify(e) for e in exprs))

    @staticmethod
    def from_matrix(matrix) -> "PlaneMap":
        rows = [list(row) for row in matrix]
        exprs = [
            sum(Rational(entry) * g for entry, g in zip(row, GENS)) for row in rows
        ]
        return PlaneMap.from_exprs(*exprs)

    @property
    def degree(self) -> int:
        return self.components[0].total_degree()

    def is_linear(self) -> bool:
        return self.degree == 1

    def linear_matrix(self) -> tuple[tuple[Fraction, ...], ...]:
        if not self.is_linear():
            raise BiratlabError("not a linear map", degree=self.degree)
        rows = []
        for p in self.components:
            expr = p.as_expr()
            rows.append(
                tuple(Fraction(str(expr.coeff(g))) for g in GENS)
            )
        return tuple(rows)

    def evaluate(self, point) -> tuple[Fraction, Fraction, Fraction]:
        vals = tuple(Fraction(c) for c in point)
        out = []
        for comp_terms in self._terms:
            total = Fraction(0)
            for (e0, e1, e2), coeff in comp_terms:
                total += coeff * vals[0] ** e0 * vals[1] ** e1 * vals[2] ** e2
            out.append(total)
        return tuple(out)

    def __call__(self, point) -> tuple[int, int, int]:
        image = self.evaluate(point)
        if all(v == 0 for v in image):
            raise PositionFailure(
                "point lies in the base locus",
                point=format_point(normalize_point(point)),
            )
        return normalize_point(image)

    def __str__(self) -> str:
        return "(" + " : ".join(str(p.as_expr()) for p in self.components) + ")"


def standard_cremona() -> PlaneMap:
    """The degree-2 involution (x0:x1:x2) -> (x1 x2 : x0 x2 : x0 x1)."""
    return PlaneMap.from_exprs(X1 * X2, X0 * X2, X0 * X1)


def identity_map() -> PlaneMap:
    return PlaneMap.from_exprs(X0, X1, X2)


def compose(f: PlaneMap, g: PlaneMap) -> PlaneMap:
    """Componentwise substitution f(g0, g1, g2), then exact GCD removal."""
    if f.degree * g.degree > max_degree_ceiling():
        raise BiratlabError(
            "composition exceeds the degree ceiling",
            degrees=[f.degree, g.degree],
            ceiling=max_degree_ceiling(),
        )
    gx = {gen: comp.as_expr() for gen, comp in zip(GENS, g.components)}
    exprs = [sympy.expand(p.as_expr().subs(gx, simultaneous=True)) for p in f.components]
    if all(e == 0 for e in exprs):
        raise DegenerateComposition(
            "composition collapsed to the zero triple",
            left=str(f),
            right=str(g),
        )
    return PlaneMap(tuple(exprs))


def compose_chain(maps) -> PlaneMap:
    """Right-to-left composition: compose_chain([a, b, c]) = a o b o c."""
    maps = list(maps)
    if not maps:
        return identity_map()
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def quadratic_at(p1, p2, p3) -> PlaneMap:
    """The quadratic involution based at three non-collinear points.

    Conjugates the standard Cremona map by the linear map sending the
    coordinate points to p1, p2, p3; the result is an involution with
    base points exactly p1, p2, p3.
    """
    pts = [normalize_point(p) for p in (p1, p2, p3)]
    if len({pts[0], pts[1], pts[2]}) != 3 or _collinear(*pts):
        raise PositionFailure(
            "base points of a quadratic map must be distinct and non-collinear",
            points=[format_point(p) for p in pts],
        )
    m = sympy.Matrix([[pts[0][i], pts[1][i], pts[2][i]] for i in range(3)])
    m_inv = m.adjugate()
    inner = PlaneMap.from_matrix(m_inv.tolist())
    outer = PlaneMap.from_matrix(m.tolist())
    return compose(outer, compose(standard_cremona(), inner))


# ---------------------------------------------------------------------------
# Probabilistic projective equality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EqualityReport:
    equal: bool
    trials: int
    witness: tuple[int, int, int] | None = None
    residuals: tuple[sympy.Poly, ...] | None = None

    def __bool__(self) -> bool:
        return self.equal


def cross_residuals(f: PlaneMap, g: PlaneMap) -> tuple[sympy.Poly, ...]:
    """The three 2x2 minors f_i g_j - f_j g_i; all zero iff f = g projectively."""
    fc = [p.as_expr() for p in f.components]
    gc = [p.as_expr() for p in g.components]
    pairs = ((0, 1), (0, 2), (1, 2))
    return tuple(
        sympy.Poly(sympy.expand(fc[i] * gc[j] - fc[j] * gc[i]), *GENS, domain="QQ")
        for i, j in pairs
    )


def verify_equal(
    f: PlaneMap,
    g: PlaneMap,
    trials: int,
    seed: int,
    height: int = 10**4,
    symbolic: bool = False,
) -> EqualityReport:
    """Projective equality at ``trials`` random rational points.

    Points with either image in a base locus are discarded; if a sampling
    round produces none, the coordinate height doubles.  With ``symbolic``
    the exact cross-product residuals are attached (and decide equality).
    """
    if trials < 1:
        raise BiratlabError("trials must be positive", trials=trials)
    residuals = cross_residuals(f, g) if symbolic else None
    if symbolic:
        equal = all(p.is_zero for p in residuals)
        if equal:
            return EqualityReport(True, 0, None, residuals)
    rng = random.Random(seed)
    done = 0
    rounds_without_progress = 0
    while done < trials:
        progressed = False
        for _ in range(4 * (trials - done)):
            point = tuple(rng.randint(-height, height) for _ in range(3))
            if all(c == 0 for c in point):
                continue
            fv = f.evaluate(point)
            gv = g.evaluate(point)
            if all(v == 0 for v in fv) or all(v == 0 for v in gv):
                continue
            progressed = True
            minors = (
                fv[0] * gv[1] - fv[1] * gv[0],
                fv[0] * gv[2] - fv[2] * gv[0],
                fv[1] * gv[2] - fv[2] * gv[1],
            )
            if any(m != 0 for m in minors):
                return EqualityReport(
                    False, done + 1, normalize_point(point), residuals
                )
            done += 1
            if done == trials:
                break
        if not progressed:
            rounds_without_progress += 1
            height *= 2
            if rounds_without_progress > 16:
                raise Inconclusive(
                    "could not sample points outside both base loci",
                    trials_completed=done,
                    height=height,
                )
    return EqualityReport(True, done, None, residuals)


# ---------------------------------------------------------------------------
# Multiplicities and infinitely-near detection
# ---------------------------------------------------------------------------


def _chart_matrix(p: tuple[int, int, int]) -> sympy.Matrix:
    """Invertible integer matrix whose first column is p."""
    for a, b in ((0, 1), (0, 2), (1, 2)):
        cols = [list(p)]
        e_a = [1 if i == a else 0 for i in range(3)]
        e_b = [1 if i == b else 0 for i in range(3)]
        m = sympy.Matrix([[p[i], e_a[i], e_b[i]] for i in range(3)])
        if m.det() != 0:
            return m
    raise AssertionError("no chart for a nonzero point")


def _local_orders(f: PlaneMap, p) -> list[dict]:
    """For each component: terms of the localized form at p.

    Returns per-component dicts {total local degree: nonzero}, where local
    degree is the order in the two chart variables after sending p to
    (1:0:0) and setting the first coordinate to 1.
    """
    pt = normalize_point(p)
    m = _chart_matrix(pt)
    u, v = symbols("u v")
    image = m * sympy.Matrix([1, u, v])
    subs = dict(zip(GENS, list(image)))
    out = []
    for comp in f.components:
        local = sympy.Poly(sympy.expand(comp.as_expr().subs(subs)), u, v, domain="QQ")
        orders: dict[int, list] = {}
        for monom, coeff in local.terms():
            orders.setdefault(monom[0] + monom[1], []).append((monom, coeff))
        out.append(orders)
    return out


def multiplicity_at(f: PlaneMap, p) -> int:
    """Multiplicity of the linear system of f at the point p.

    Vanishing-order check: move p to (1:0:0), dehomogenize, take the
    minimum over components of the lowest total degree.
    """
    locals_ = _local_orders(f, p)
    best = None
    for orders in locals_:
        if not orders:
            continue  # component vanished identically in the chart: impossible
        low = min(orders)
        best = low if best is None else min(best, low)
    assert best is not None
    return best


def common_tangent_direction(f: PlaneMap, p) -> tuple[int, int, int] | None:
    """Direction of a first-order base point above p, if one exists.

    At a multiplicity-1 point the system has an infinitely near base point
    exactly when the linear jets of all components at p span one line; the
    returned direction is a projective tangent vector at p.
    """
    pt = normalize_point(p)
    m = _chart_matrix(pt)
    locals_ = _local_orders(f, pt)
    jets = []
    for orders in locals_:
        low = min(orders)
        if low == 0:
            return None  # component not vanishing: p not even a base point
        if low == 1:
            terms = orders[1]
            coeff_u = sum(c for (mon, c) in terms if mon == (1, 0))
            coeff_v = sum(c for (mon, c) in terms if mon == (0, 1))
            jets.append((Rational(coeff_u), Rational(coeff_v)))
    if not jets:
        return None
    first = jets[0]
    for other in jets[1:]:
        if first[0] * other[1] - first[1] * other[0] != 0:
            return None  # jets span the full cotangent space: no common tangent
    alpha, beta = first
    # tangent line {alpha u + beta v = 0}: direction (u, v) = (beta, -alpha)
    local_dir = sympy.Matrix([0, beta, -alpha])
    direction = m * local_dir
    return normalize_point(tuple(direction))


def _limit_through(q: PlaneMap, point, direction):
    """Exact limit of q along point + eps * direction.

    Returns (image point, image direction or None).  Used to transport a
    first-order infinitely near point through a quadratic map: if the
    carrier is a base point of q the limit materializes it as a proper
    point; otherwise the direction is pushed forward.
    """
    eps = symbols("_eps")
    pt = normalize_point(point)
    dv = normalize_point(direction)
    coords = [pt[i] + eps * dv[i] for i in range(3)]
    subs = dict(zip(GENS, coords))
    series = [
        sympy.Poly(sympy.expand(c.as_expr().subs(subs)), eps, domain="QQ")
        for c in q.components
    ]
    if all(s.is_zero for s in series):
        raise PositionFailure(
            "direction collapses under the quadratic map",
            point=format_point(pt),
        )
    low = min(
        min((d[0] for d, _ in s.terms()), default=10**9) for s in series if not s.is_zero
    )

    def coeff(s: sympy.Poly, order: int) -> Rational:
        for d, c in s.terms():
            if d[0] == order:
                return Rational(c)
        return Rational(0)

    w0 = tuple(coeff(s, low) for s in series)
    w1 = tuple(coeff(s, low + 1) for s in series)
    image = normalize_point(w0)
    minors = (
        w0[0] * w1[1] - w0[1] * w1[0],
        w0[0] * w1[2] - w0[2] * w1[0],
        w0[1] * w1[2] - w0[2] * w1[1],
    )
    if all(v == 0 for v in minors):
        return image, None  # direction data degenerates; caller decides
    # remove the w0 component to get a tangent vector at the image
    out_dir = normalize_point(w1) if any(w1) else None
    return image, out_dir


# ---------------------------------------------------------------------------
# Concrete factorization
# ---------------------------------------------------------------------------

_GENERIC_CANDIDATES = (
    (1, 1, 1),
    (1, 2, 3),
    (2, 3, 5),
    (1, 3, 7),
    (3, 1, 4),
    (5, 2, 1),
    (1, 5, 2),
    (7, 3, 2),
    (2, 7, 9),
    (4, 9, 1),
    (3, 8, 5),
    (11, 2, 5),
)


@dataclass
class _TrackedPoint:
    point: tuple[int, int, int]
    mult: int
    # direction of a simple infinitely near base point above this one
    tangent: tuple[int, int, int] | None = None


def _verify_multiplicities(f: PlaneMap, tracked: list[_TrackedPoint]) -> None:
    for tp in tracked:
        actual = multiplicity_at(f, tp.point)
        if actual != tp.mult:
            raise PositionFailure(
                "multiplicity drifted during factorization",
                point=format_point(tp.point),
                expected=tp.mult,
                actual=actual,
            )


def _missing_units(f: PlaneMap, tracked: list[_TrackedPoint]) -> int:
    n = f.degree
    s = sum(tp.mult for tp in tracked)
    q = sum(tp.mult**2 for tp in tracked)
    missing = (3 * n - 3) - s
    missing_sq = (n * n - 1) - q
    if missing < 0 or missing_sq < 0 or missing != missing_sq:
        raise BadCluster(
            "multiplicities are inconsistent with the degree",
            degree=n,
            mults=[tp.mult for tp in tracked],
            missing_sum=missing,
            missing_squares=missing_sq,
        )
    return missing


def _attach_tangents(f: PlaneMap, tracked: list[_TrackedPoint], missing: int) -> None:
    """Locate ``missing`` simple infinitely near base points as common
    tangent directions at supplied multiplicity-1 points."""
    if missing == 0:
        return
    found = 0
    for tp in tracked:
        if tp.mult == 1 and tp.tangent is None:
            direction = common_tangent_direction(f, tp.point)
            if direction is not None:
                tp.tangent = direction
                found += 1
                if found == missing:
                    return
    raise PositionFailure(
        "unsupported infinitely near base structure",
        missing_units=missing,
        located=found,
    )


def _pick_generic(
    f: PlaneMap, tracked: list[_TrackedPoint], chosen: list[_TrackedPoint]
) -> _TrackedPoint:
    taken = {tp.point for tp in tracked} | {tp.point for tp in chosen}
    for cand in _GENERIC_CANDIDATES:
        p = normalize_point(cand)
        if p in taken:
            continue
        if any(v != 0 for v in f.evaluate(p)):
            others = [tp.point for tp in chosen]
            if len(others) == 2 and _collinear(p, *others):
                continue
            return _TrackedPoint(p, 0)
    raise PositionFailure("no usable generic point found; report configuration")


def factor_map(
    f: PlaneMap, base_points, max_rounds: int | None = None
) -> tuple[FactorizationTrace, list[PlaneMap]]:
    """Factor f into quadratic involutions plus a final linear map.

    ``base_points`` lists (point, multiplicity) for the proper base points
    of f; multiplicities are re-verified by vanishing order.  Rounds
    untwist at the three largest multiplicities, topping the triple up
    with generic points when fewer than three proper base points exist;
    simple tangent directions (one missing multiplicity unit per carrier)
    are transported exactly and materialize as proper points.  The
    returned maps compose right-to-left to f, exactly; the last entry is
    linear.
    """
    current = f
    tracked: list[_TrackedPoint] = []
    seen: set[tuple[int, int, int]] = set()
    for point, mult in base_points:
        p = normalize_point(point)
        if p in seen:
            raise PositionFailure("duplicate base point", point=format_point(p))
        seen.add(p)
        if int(mult) < 1:
            raise BadCluster("multiplicities must be positive", point=format_point(p))
        actual = multiplicity_at(f, p)
        if actual != int(mult):
            raise BadCluster(
                "multiplicity mismatch",
                point=format_point(p),
                expected=int(mult),
                actual=actual,
            )
        tracked.append(_TrackedPoint(p, int(mult)))

    missing = _missing_units(current, tracked)
    _attach_tangents(current, tracked, missing)

    steps: list[TraceStep] = []
    quadratics: list[PlaneMap] = []
    initial_type = _type_of(current, tracked)
    rounds = 0
    limit = max_rounds if max_rounds is not None else 4 * f.degree + 8

    while current.degree > 1:
        rounds += 1
        if rounds > limit:
            raise PositionFailure(
                "factorization did not terminate within the round limit",
                limit=limit,
                degree=current.degree,
            )
        n = current.degree
        tracked.sort(key=lambda tp: (-tp.mult, tp.point))
        chosen = list(tracked[:3])
        while len(chosen) < 3:
            chosen.append(_pick_generic(current, tracked, chosen))
        top = sum(tp.mult for tp in chosen)
        pending = any(tp.tangent is not None for tp in tracked)
        if top < n or (top == n and not pending):
            raise PositionFailure(
                "no untwisting triple clears the degree",
                degree=n,
                chosen=[tp.mult for tp in chosen],
            )
        pts = [tp.point for tp in chosen]
        rest_mults = tuple(
            sorted((tp.mult for tp in tracked if tp not in chosen), reverse=True)
        )
        if _collinear(*pts):
            raise PositionFailure(
                "untwisting triple is collinear",
                points=[format_point(p) for p in pts],
            )
        q = quadratic_at(*pts)
        nxt = compose(current, q)
        expected_degree = 2 * n - top
        if nxt.degree != expected_degree:
            raise PositionFailure(
                "degree after untwist disagrees with multiplicities",
                expected=expected_degree,
                actual=nxt.degree,
                points=[format_point(p) for p in pts],
            )

        new_tracked: list[_TrackedPoint] = []
        mi, mj, mk = (tp.mult for tp in chosen)
        for tp, new_mult in zip(
            chosen, (n - mj - mk, n - mi - mk, n - mi - mj)
        ):
            carried = tp.tangent
            if carried is not None:
                image, _ = _limit_through(q, tp.point, carried)
                new_tracked.append(_TrackedPoint(image, 1))
            if new_mult > 0:
                new_tracked.append(_TrackedPoint(tp.point, new_mult))
        exceptional_lines = [
            (pts[0], pts[1]),
            (pts[0], pts[2]),
            (pts[1], pts[2]),
        ]
        for tp in tracked:
            if tp in chosen:
                continue
            if any(_collinear(tp.point, a, b) for a, b in exceptional_lines):
                raise PositionFailure(
                    "base point lies on an exceptional line of the untwist",
                    point=format_point(tp.point),
                )
            if tp.tangent is not None:
                image, out_dir = _limit_through(q, tp.point, tp.tangent)
                if out_dir is None:
                    raise PositionFailure(
                        "tangent direction degenerated under the untwist",
                        point=format_point(tp.point),
                    )
                new_tracked.append(_TrackedPoint(image, tp.mult, out_dir))
            else:
                new_tracked.append(_TrackedPoint(q(tp.point), tp.mult))

        merged: dict[tuple[int, int, int], _TrackedPoint] = {}
        for tp in new_tracked:
            if tp.point in merged:
                raise PositionFailure(
                    "two base points collided during the untwist",
                    point=format_point(tp.point),
                )
            merged[tp.point] = tp
        tracked = list(merged.values())
        _verify_multiplicities(nxt, tracked)
        still_missing = _missing_units(nxt, tracked)
        assert still_missing == sum(1 for tp in tracked if tp.tangent is not None)

        after_mults = tuple(sorted((tp.mult for tp in tracked), reverse=True))
        steps.extend(
            narrate_round(
                n,
                (mi, mj, mk),
                rest_mults,
                after_mults,
                tuple(format_point(p) for p in pts),
            )
        )
        quadratics.append(q)
        current = nxt

    plane = SurfaceModel.plane()
    steps.append(
        TraceStep(
            LINEAR,
            plane,
            plane.divisor((1,)),
            (),
            points=(str(current),),
        )
    )
    final_type = HomaloidalType(1, ())
    trace = FactorizationTrace(initial_type, tuple(steps), final_type)

    whole = compose_chain([current] + list(reversed(quadratics)))
    residuals = cross_residuals(f, whole)
    assert all(p.is_zero for p in residuals), "factorization does not recompose to f"
    return trace, quadratics + [current]


def _type_of(f: PlaneMap, tracked: list[_TrackedPoint]) -> HomaloidalType:
    mults = [tp.mult for tp in tracked]
    mults += [1 for tp in tracked if tp.tangent is not None]
    if f.degree == 1:
        return HomaloidalType(1, ())
    return validate_type(f.degree, mults)
