"""Homaloidal types and their untwisting into the trivial type.

A type ``(n; m_1 >= m_2 >= ...)`` records the degree and base
multiplicities of the linear system of a plane Cremona map and satisfies
the two Noether identities

    sum m_i = 3n - 3        sum m_i^2 = n^2 - 1,

equivalently the class ``D = nH - sum m_i E_i`` has ``D^2 = 1`` and
``K.D = -3``.  Untwisting composes with a quadratic map based at three of
the points, which acts on the type exactly like the lattice reflection in
``H - E_i - E_j - E_k``.

``factor_type`` drives the degree to 1 by untwisting at the three largest
multiplicities, narrating each round as a chain of elementary links
(blow up the maximal point to F_1, two elementary transformations through
F_0, blow back down) with the threshold ``n' = n - m_max`` and the
positivity certificate ``-n + 3 m_max > 0``.  The link bookkeeping is
computed in ruled-surface lattices and cross-checked against the
combinatorial untwist each round.

Beware: the Noether identities alone do not make a multiset the type of
an actual Cremona map.  Improper solutions exist (smallest degree 5,
e.g. ``(5; 3,3,1^6)``); on those the untwisting chain provably produces a
negative multiplicity and ``factor_type`` raises ``NotHomaloidal``.  Use
``is_proper`` to screen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AlreadyLinear, NoUntwist, NotHomaloidal
from .lattice import DivisorClass, SurfaceModel


@dataclass(frozen=True)
class HomaloidalType:
    """Degree and non-increasing multiplicity tuple; build via validate_type."""

    degree: int
    mults: tuple[int, ...]

    @property
    def points(self) -> int:
        return len(self.mults)

    def lattice_class(self) -> tuple[SurfaceModel, DivisorClass]:
        """The class nH - sum m_i E_i on the blow-up at the base points."""
        model = SurfaceModel.blowup_plane(self.points)
        return model, model.divisor((self.degree,) + tuple(-m for m in self.mults))

    def __str__(self) -> str:
        inner = ",".join(str(m) for m in self.mults)
        return f"({self.degree};{inner})"


def validate_type(n: int, mults) -> HomaloidalType:
    """Accept iff both Noether identities hold; returns the sorted type."""
    n = int(n)
    ms = tuple(sorted((int(m) for m in mults), reverse=True))
    if n < 1:
        raise NotHomaloidal("degree must be positive", degree=n)
    if any(m <= 0 for m in ms):
        raise NotHomaloidal(
            "multiplicities must be positive", degree=n, mults=list(ms)
        )
    s, q = sum(ms), sum(m * m for m in ms)
    if s != 3 * n - 3:
        raise NotHomaloidal(
            "sum of multiplicities must be 3n - 3",
            degree=n,
            mults=list(ms),
            identity=f"sum = {s} != {3 * n - 3}",
        )
    if q != n * n - 1:
        raise NotHomaloidal(
            "sum of squared multiplicities must be n^2 - 1",
            degree=n,
            mults=list(ms),
            identity=f"sum of squares = {q} != {n * n - 1}",
        )
    # follows from the identities, but the invariant is part of the contract
    if n >= 2 and ms and ms[0] > n - 1:
        raise NotHomaloidal(
            "multiplicity exceeds n - 1", degree=n, mults=list(ms)
        )
    return HomaloidalType(n, ms)


def noether_fano_point(t: HomaloidalType) -> int:
    """Index of the first maximal multiplicity; checks m_max > n/3."""
    if t.degree < 2:
        raise AlreadyLinear("type has degree 1; nothing to untwist")
    idx = 0  # mults are sorted, the first entry is maximal
    assert 3 * t.mults[idx] > t.degree, (
        "Noether-Fano violation on a validated type: "
        f"{t} has m_max = {t.mults[idx]}"
    )
    return idx


def quadratic_untwist(t: HomaloidalType, i: int, j: int, k: int) -> HomaloidalType:
    """Untwist by a quadratic map based at points i, j, k.

    The new degree is 2n - m_i - m_j - m_k and the three chosen
    multiplicities become n - m_j - m_k, n - m_i - m_k, n - m_i - m_j;
    zeros are dropped and the result is re-validated, so an improper type
    surfaces here as NotHomaloidal.
    """
    if len({i, j, k}) != 3:
        raise NoUntwist("three distinct indices required", indices=[i, j, k])
    for idx in (i, j, k):
        if not 0 <= idx < t.points:
            raise NoUntwist("index out of range", index=idx)
    n = t.degree
    mi, mj, mk = t.mults[i], t.mults[j], t.mults[k]
    if mi + mj + mk <= n:
        raise NoUntwist(
            "chosen multiplicities do not exceed the degree",
            degree=n,
            chosen=[mi, mj, mk],
        )
    new_degree = 2 * n - mi - mj - mk
    replaced = {i: n - mj - mk, j: n - mi - mk, k: n - mi - mj}
    new_mults = [
        replaced.get(idx, m) for idx, m in enumerate(t.mults)
    ]
    kept = [m for m in new_mults if m != 0]
    if new_degree == 1 and not kept:
        return HomaloidalType(1, ())
    return validate_type(new_degree, kept)


# ---------------------------------------------------------------------------
# Elementary-link bookkeeping on ruled surfaces
# ---------------------------------------------------------------------------


def _normalize_ruled(k: int, x: int, y: int) -> tuple[int, int, int]:
    """Re-express a system tracked against a positive section in the
    standard F_k basis (minimal section C0)."""
    if k < 0:
        return -k, x, (-k) * x + y
    return k, x, y


def _elm(k: int, x: int, y: int, mult: int, on_section: bool) -> tuple[int, int, int]:
    """Elementary transformation of F_k at a point of system multiplicity
    ``mult``: blow up, contract the strict fiber.  Off the section the
    index drops, on it the index rises; the fiber degree x is preserved.
    """
    if on_section:
        return _normalize_ruled(k + 1, x, y + x - mult)
    return _normalize_ruled(k - 1, x, y - mult)


# ---------------------------------------------------------------------------
# Factorization trace
# ---------------------------------------------------------------------------

BLOW_UP_MAX_MULT = "BlowUpMaxMult"
ELEMENTARY_TRANSFORM = "ElementaryTransform"
BLOW_DOWN = "BlowDown"
SWITCH_RULING = "SwitchRuling"
QUADRATIC_CREMONA = "QuadraticCremona"
LINEAR = "Linear"

STEP_ACTIONS = (
    BLOW_UP_MAX_MULT,
    ELEMENTARY_TRANSFORM,
    BLOW_DOWN,
    SWITCH_RULING,
    QUADRATIC_CREMONA,
    LINEAR,
)


@dataclass(frozen=True)
class TraceStep:
    """One record of a factorization trace.

    ``model``/``system`` give the state after the step; ``mults`` lists the
    base multiplicities not yet absorbed into the model's lattice;
    ``threshold`` is the paper-level parameter n' of the active round;
    ``certificate`` carries ``-n + 3 m_max`` on the round-opening step.
    """

    action: str
    model: SurfaceModel
    system: DivisorClass
    mults: tuple[int, ...]
    threshold: int | None = None
    points: tuple[str, ...] = ()
    certificate: int | None = None


@dataclass(frozen=True)
class FactorizationTrace:
    initial_type: HomaloidalType
    steps: tuple[TraceStep, ...]
    final_type: HomaloidalType

    @property
    def plane_degrees(self) -> list[int]:
        """Degrees recorded at each return to the plane, starting degree first."""
        degrees = [self.initial_type.degree]
        for step in self.steps:
            if step.action == BLOW_DOWN:
                degrees.append(step.system.coords[0])
        return degrees

    def quadratic_steps(self) -> list[TraceStep]:
        return [s for s in self.steps if s.action == QUADRATIC_CREMONA]


def _plane_state(n: int) -> tuple[SurfaceModel, DivisorClass]:
    model = SurfaceModel.plane()
    return model, model.divisor((n,))


def narrate_round(
    n: int,
    chosen: tuple[int, int, int],
    rest: tuple[int, ...],
    after_mults: tuple[int, ...],
    tags: tuple[str, str, str],
) -> list[TraceStep]:
    """Narrate one untwist round as elementary links.

    ``chosen`` are the three multiplicities of the untwisting triple in
    descending order, ``rest`` the untouched ones, ``after_mults`` the
    full multiset after the round.  The ruled-surface bookkeeping is
    computed link by link and cross-checked against the combinatorial
    degree 2n - m_i - m_j - m_k.
    """
    mi, mj, mk = chosen
    plane, system = _plane_state(n)
    n_prime = n - mi
    certificate = -n + 3 * mi

    steps = [
        TraceStep(
            QUADRATIC_CREMONA,
            plane,
            system,
            (mi, mj, mk) + rest,
            threshold=n_prime,
            points=tags,
            certificate=certificate,
        )
    ]

    # blow up the maximal point: P^2 -> F_1 with system (n - m_i) C0 + n f
    k, x, y = 1, n - mi, n
    ruled = SurfaceModel.hirzebruch(k)
    steps.append(
        TraceStep(
            BLOW_UP_MAX_MULT,
            ruled,
            ruled.divisor((x, y)),
            (mj, mk) + rest,
            threshold=n_prime,
            points=tags[:1],
            certificate=certificate,
        )
    )

    # two elementary transformations at general-position points off C0
    for tag, mult, left in ((tags[1], mj, (mk,) + rest), (tags[2], mk, rest)):
        k, x, y = _elm(k, x, y, mult, on_section=False)
        ruled = SurfaceModel.hirzebruch(k)
        steps.append(
            TraceStep(
                ELEMENTARY_TRANSFORM,
                ruled,
                ruled.divisor((x, y)),
                left,
                threshold=n_prime,
                points=(tag,),
            )
        )

    assert k == 1, "general-position link chain must return to F_1"
    # blow down C0: the plane degree is the f-coefficient
    new_degree = y
    assert new_degree == 2 * n - mi - mj - mk, (
        "link bookkeeping disagrees with the quadratic untwist: "
        f"{new_degree} vs {2 * n - mi - mj - mk}"
    )
    assert x == n_prime, "fiber degree must equal the threshold n'"
    plane_after, system_after = _plane_state(new_degree)
    steps.append(
        TraceStep(
            BLOW_DOWN,
            plane_after,
            system_after,
            after_mults,
            threshold=None,
        )
    )
    return steps


def factor_type(t: HomaloidalType) -> FactorizationTrace:
    """Untwist at the three largest multiplicities until degree 1.

    Raises NotHomaloidal when an untwist produces a negative multiplicity,
    which happens exactly on improper types (valid identities, no actual
    Cremona map).
    """
    current = validate_type(t.degree, t.mults)
    initial = current
    steps: list[TraceStep] = []
    while current.degree > 1:
        noether_fano_point(current)
        untwisted = quadratic_untwist(current, 0, 1, 2)
        if untwisted.degree >= current.degree:
            raise AssertionError("untwist must strictly lower the degree")
        steps.extend(
            narrate_round(
                current.degree,
                current.mults[:3],
                current.mults[3:],
                untwisted.mults,
                ("0", "1", "2"),
            )
        )
        current = untwisted
    return FactorizationTrace(initial, tuple(steps), current)


def is_proper(t: HomaloidalType) -> bool:
    """True iff the three-largest untwisting chain reaches (1;) without
    ever needing a negative multiplicity."""
    try:
        factor_type(t)
    except NotHomaloidal:
        return False
    return True


# ---------------------------------------------------------------------------
# Diophantine enumeration of types
# ---------------------------------------------------------------------------


def enumerate_types(n: int) -> list[HomaloidalType]:
    """All multisets satisfying both Noether identities in degree n.

    Degree 1 gives the trivial type.  The result is sorted by multiplicity
    tuple, largest first, and includes improper solutions; filter with
    is_proper for the characteristics of actual maps.
    """
    if n < 1:
        raise NotHomaloidal("degree must be positive", degree=n)
    if n == 1:
        return [HomaloidalType(1, ())]
    target_sum = 3 * n - 3
    target_sq = n * n - 1
    out: list[HomaloidalType] = []
    prefix: list[int] = []

    def descend(s_rem: int, q_rem: int, cap: int) -> None:
        if s_rem == 0:
            if q_rem == 0:
                out.append(HomaloidalType(n, tuple(prefix)))
            return
        # every part is >= 1, so squares are at least the sum
        if q_rem < s_rem:
            return
        top = min(cap, math.isqrt(q_rem), s_rem)
        for m in range(top, 0, -1):
            # after choosing m, parts are <= m: need enough square mass
            if q_rem - m * m > (s_rem - m) * m:
                continue
            prefix.append(m)
            descend(s_rem - m, q_rem - m * m, m)
            prefix.pop()

    descend(target_sum, target_sq, n - 1)
    out.sort(key=lambda t: t.mults, reverse=True)
    return out
