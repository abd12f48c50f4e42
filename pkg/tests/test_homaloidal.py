"""Noether identities, quadratic untwisting, and type-level factorization.

The lattice cross-check re-derives each untwist as the reflection of
D = nH - sum m_i E_i in the root H - E_i - E_j - E_k, and the type
enumeration is compared against a partition-based oracle built on
sympy's partition iterator.
"""

import random

import pytest
from sympy.utilities.iterables import partitions

from biratlab.errors import AlreadyLinear, NotHomaloidal, NoUntwist
from biratlab.homaloidal import (
    BLOW_DOWN,
    BLOW_UP_MAX_MULT,
    ELEMENTARY_TRANSFORM,
    QUADRATIC_CREMONA,
    FactorizationTrace,
    HomaloidalType,
    enumerate_types,
    factor_type,
    is_proper,
    noether_fano_point,
    quadratic_untwist,
    validate_type,
)
from biratlab.lattice import SurfaceModel, canonical_class, intersect, self_intersection


def oracle_types(n: int) -> set[tuple[int, ...]]:
    """Partition-based enumeration of valid multiplicity multisets."""
    if n == 1:
        return {()}
    found = set()
    for part in partitions(3 * n - 3, k=n - 1):
        mults = []
        for value, count in sorted(part.items(), reverse=True):
            mults += [value] * count
        if sum(m * m for m in mults) == n * n - 1:
            found.add(tuple(mults))
    return found


class TestValidateType:
    def test_linear(self):
        t = validate_type(1, [])
        assert t == HomaloidalType(1, ())

    def test_standard_quadratic(self):
        assert validate_type(2, [1, 1, 1]).mults == (1, 1, 1)

    def test_degree_five_symmetric(self):
        t = validate_type(5, [2, 2, 2, 2, 2, 2])
        assert t.degree == 5 and t.mults == (2,) * 6

    def test_sorting(self):
        assert validate_type(3, [1, 2, 1, 1, 1]).mults == (2, 1, 1, 1, 1)

    def test_sum_identity_failure(self):
        with pytest.raises(NotHomaloidal) as err:
            validate_type(2, [1, 1])
        assert "3n - 3" in str(err.value)

    def test_square_identity_failure(self):
        with pytest.raises(NotHomaloidal) as err:
            validate_type(3, [2, 2, 1, 1])  # sum is 6, squares are 10
        assert "n^2 - 1" in str(err.value)

    def test_nonpositive_rejected(self):
        with pytest.raises(NotHomaloidal):
            validate_type(2, [1, 1, 1, 0])

    def test_lattice_identities(self):
        for n, mults in [(2, [1, 1, 1]), (5, [2] * 6), (8, [6, 3, 2, 2, 2, 1, 1, 1, 1, 1, 1])]:
            t = validate_type(n, mults)
            model, cls = t.lattice_class()
            assert self_intersection(model, cls) == 1
            assert intersect(model, canonical_class(model), cls) == -3


class TestNoetherFano:
    def test_standard_quadratic(self):
        assert noether_fano_point(validate_type(2, [1, 1, 1])) == 0

    def test_degree_five(self):
        t = validate_type(5, [2] * 6)
        idx = noether_fano_point(t)
        assert idx == 0 and 3 * t.mults[idx] > t.degree

    def test_linear_rejected(self):
        with pytest.raises(AlreadyLinear):
            noether_fano_point(validate_type(1, []))

    def test_exhaustive_scan_up_to_20(self):
        # acceptance-grade scan: every valid type with 2 <= n <= 20 has a
        # multiplicity above n/3, improper solutions included
        for n in range(2, 21):
            for t in enumerate_types(n):
                assert 3 * t.mults[0] > n, t


class TestQuadraticUntwist:
    def test_standard_collapses(self):
        t = validate_type(2, [1, 1, 1])
        assert quadratic_untwist(t, 0, 1, 2) == HomaloidalType(1, ())

    def test_degree_five(self):
        t = validate_type(5, [2] * 6)
        out = quadratic_untwist(t, 0, 1, 2)
        assert out.degree == 4 and out.mults == (2, 2, 2, 1, 1, 1)

    def test_drops_zeros(self):
        t = validate_type(3, [2, 1, 1, 1, 1])
        out = quadratic_untwist(t, 0, 1, 2)
        assert out == HomaloidalType(2, (1, 1, 1))

    def test_precondition(self):
        t = validate_type(5, [2] * 6)
        with pytest.raises(NoUntwist):
            quadratic_untwist(t, 0, 1, 1)
        # the three largest always work on a valid type, but a triple of
        # simple points need not clear the degree
        big = validate_type(8, [7] + [1] * 14)
        with pytest.raises(NoUntwist):
            quadratic_untwist(big, 6, 7, 8)  # 1 + 1 + 1 <= 8

    def test_improper_type_surfaces_negative_multiplicity(self):
        t = validate_type(5, [3, 3, 1, 1, 1, 1, 1, 1])
        with pytest.raises(NotHomaloidal):
            quadratic_untwist(t, 0, 1, 2)

    def test_agrees_with_lattice_reflection(self):
        rng = random.Random(271828)
        corpus = [t for n in range(2, 16) for t in enumerate_types(n)]
        rng.shuffle(corpus)
        for t in corpus[:120]:
            model, cls = t.lattice_class()
            k = canonical_class(model)
            root = model.divisor(
                (1, -1, -1, -1) + (0,) * (t.points - 3)
            )
            reflected = cls + intersect(model, cls, root) * root
            assert self_intersection(model, reflected) == 1
            assert intersect(model, k, reflected) == -3
            try:
                out = quadratic_untwist(t, 0, 1, 2)
            except NotHomaloidal:
                # reflection produced a negative multiplicity: improper
                assert any(c > 0 for c in reflected.coords[1:])
                continue
            expected = tuple(
                sorted((-c for c in reflected.coords[1:] if c != 0), reverse=True)
            )
            assert out.degree == reflected.coords[0]
            assert out.mults == expected


class TestFactorType:
    def test_trivial(self):
        trace = factor_type(validate_type(1, []))
        assert trace.steps == ()
        assert trace.final_type == HomaloidalType(1, ())

    def test_standard_quadratic_narration(self):
        trace = factor_type(validate_type(2, [1, 1, 1]))
        actions = [s.action for s in trace.steps]
        assert actions == [
            QUADRATIC_CREMONA,
            BLOW_UP_MAX_MULT,
            ELEMENTARY_TRANSFORM,
            ELEMENTARY_TRANSFORM,
            BLOW_DOWN,
        ]
        models = [str(s.model) for s in trace.steps[1:]]
        assert models == ["F_1", "F_0", "F_1", "P^2"]
        assert trace.plane_degrees == [2, 1]
        opener = trace.steps[1]
        assert opener.threshold == 1  # n' = n - m_max = 2 - 1
        assert opener.certificate == 1  # -n + 3 m_max = -2 + 3
        assert opener.certificate > 0

    def test_degree_five_chain(self):
        trace = factor_type(validate_type(5, [2] * 6))
        assert trace.plane_degrees == [5, 4, 2, 1]
        assert trace.final_type == HomaloidalType(1, ())
        degs = trace.plane_degrees
        assert all(a > b for a, b in zip(degs, degs[1:]))

    def test_fiber_degree_matches_threshold(self):
        trace = factor_type(validate_type(8, [4, 4, 3, 3, 2, 2, 2, 1]))
        for step in trace.steps:
            if step.action in (BLOW_UP_MAX_MULT, ELEMENTARY_TRANSFORM):
                assert step.model.kind == "Hirzebruch"
                fiber_degree = step.system.coords[0]
                assert fiber_degree == step.threshold

    def test_improper_raises(self):
        with pytest.raises(NotHomaloidal):
            factor_type(validate_type(5, [3, 3, 1, 1, 1, 1, 1, 1]))

    def test_proper_classification_small_degrees(self):
        improper = {
            (n, t.mults)
            for n in range(2, 11)
            for t in enumerate_types(n)
            if not is_proper(t)
        }
        # the degree-5 example is the smallest improper solution
        assert (5, (3, 3, 1, 1, 1, 1, 1, 1)) in improper
        assert all(n >= 5 for n, _ in improper)


class TestEnumerateTypes:
    @pytest.mark.parametrize("n", range(1, 11))
    def test_against_partition_oracle(self, n):
        assert {t.mults for t in enumerate_types(n)} == oracle_types(n)

    def test_counts_small(self):
        assert [len(enumerate_types(n)) for n in range(1, 9)] == [
            1,
            1,
            1,
            2,
            4,
            5,
            9,
            16,
        ]

    def test_all_validate(self):
        for n in range(1, 16):
            for t in enumerate_types(n):
                assert validate_type(t.degree, t.mults) == t


class TestRandomProperCorpus:
    def test_untwist_chain_preserves_lattice_identities(self):
        # criterion-3-style workout on a seeded sample of proper types
        rng = random.Random(5)
        corpus = [
            t for n in range(2, 21) for t in enumerate_types(n) if is_proper(t)
        ]
        sample = [corpus[rng.randrange(len(corpus))] for _ in range(200)]
        for t in sample:
            trace = factor_type(t)
            degs = trace.plane_degrees
            assert degs[-1] == 1
            assert all(a > b for a, b in zip(degs, degs[1:]))
            current = t
            while current.degree > 1:
                model, cls = current.lattice_class()
                assert self_intersection(model, cls) == 1
                assert intersect(model, canonical_class(model), cls) == -3
                current = quadratic_untwist(current, 0, 1, 2)
