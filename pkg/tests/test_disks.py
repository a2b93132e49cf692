"""Core interval-family combinatorics: validation, area, distance, codes."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import area_oracle2
from wallsys.disks import (
    Center,
    CylinderPoint,
    HalfInteger,
    IntervalFamily,
    canonical_code,
    discrete_area,
    discrete_area_raw,
    discrete_distance,
    discrete_distance_raw,
    extremal_disk,
    validate,
)
from wallsys.errors import InvalidFamily, NonGenericPoint, ParseError


R1_TILING = IntervalFamily(6, ((1, 3), (3, 5), (5, 1)))


def rotated(family: IntervalFamily, shift2: int) -> IntervalFamily:
    c2 = family.circumference2
    return IntervalFamily(
        c2, tuple(((a + shift2) % c2, (b + shift2) % c2) for a, b in family.intervals)
    )


def reflected(family: IntervalFamily) -> IntervalFamily:
    c2 = family.circumference2
    return IntervalFamily(c2, tuple(((-b) % c2, (-a) % c2) for a, b in family.intervals))


@st.composite
def valid_families(draw, max_n=6):
    """Random fully-gridded valid families via the end-assignment encoding."""
    n = draw(st.integers(min_value=1, max_value=max_n))
    perm = draw(st.permutations(list(range(n))))
    c2 = 2 * n
    ivs = tuple((2 * i + 1, 2 * perm[i] + 1) for i in range(n))
    try:
        fam = IntervalFamily(c2, ivs)
    except ParseError:
        return None
    return fam if validate(fam).valid else None


class TestValidate:
    def test_extremal_2(self):
        rep = validate(extremal_disk(2))
        assert rep.valid and rep.radius == 2
        assert extremal_disk(2).n_walls == 6

    def test_two_interval_cover(self):
        rep = validate(IntervalFamily(4, ((1, 3), (3, 1))))
        assert not rep.valid
        kinds = {(v.kind, v.data) for v in rep.violations}
        assert ("cover_pair", (0, 1)) in kinds

    def test_r1_tiling(self):
        rep = validate(R1_TILING)
        assert rep.valid and rep.radius == 1

    def test_empty_family_radius_zero(self):
        rep = validate(IntervalFamily(4, ()))
        assert rep.valid and rep.radius == 0

    def test_endpoint_degree_violation(self):
        # two walls start at 1: degree failure and uneven coverage
        rep = validate(IntervalFamily(8, ((1, 3), (1, 5), (3, 7), (5, 7))))
        assert not rep.valid
        assert any(v.kind == "endpoint_degree" for v in rep.violations)

    def test_coverage_mismatch_reported(self):
        rep = validate(IntervalFamily(8, ((1, 3), (3, 1), (5, 7))))
        assert not rep.valid


class TestArea:
    def test_extremal_5_value(self):
        assert discrete_area(extremal_disk(5)) == HalfInteger(75)

    def test_extremal_matches_oracle(self):
        for r in (1, 2, 3):
            fam = extremal_disk(r)
            assert discrete_area(fam).twice == area_oracle2(fam) == 3 * r * r

    def test_r1_tiling_three_halves(self):
        assert discrete_area(R1_TILING) == HalfInteger(3)

    def test_disjoint_raw_zero(self):
        fam = IntervalFamily(8, ((1, 3), (5, 7)))
        assert discrete_area_raw(fam).twice == 0

    def test_invalid_raises(self):
        with pytest.raises(InvalidFamily):
            discrete_area(IntervalFamily(4, ((1, 3), (3, 1))))

    @settings(max_examples=60, deadline=None)
    @given(valid_families())
    def test_matches_oracle_on_random_families(self, fam):
        if fam is None:
            return
        assert discrete_area(fam).twice == area_oracle2(fam)


class TestDistance:
    def test_center_to_boundary_is_radius(self):
        for r in (1, 2, 4):
            fam = extremal_disk(r)
            q = CylinderPoint(0, 0)  # even position, generic by construction
            assert discrete_distance(fam, Center, q) == r

    def test_identity(self):
        p = CylinderPoint(0, Fraction(1, 3))
        assert discrete_distance(extremal_disk(2), p, p) == 0

    def test_single_wall_raw(self):
        fam = IntervalFamily(6, ((5, 1),))
        p = CylinderPoint(0, Fraction(1, 5))  # under the tent over (5, 1)
        assert discrete_distance_raw(fam, p, Center) == 1

    def test_non_generic_rejected(self):
        fam = extremal_disk(1)
        on_tent = CylinderPoint(2, 1)  # tent over (1,3) has apex (2,1)
        with pytest.raises(NonGenericPoint):
            discrete_distance(fam, on_tent, Center)

    def test_symmetry_and_triangle(self):
        fam = extremal_disk(3)
        pts = [
            Center,
            CylinderPoint(0, 0),
            CylinderPoint(4, Fraction(1, 2)),
            CylinderPoint(10, Fraction(7, 3)),
            CylinderPoint(Fraction(25, 7), Fraction(1, 9)),
        ]
        for p, q in itertools.combinations(pts, 2):
            assert discrete_distance(fam, p, q) == discrete_distance(fam, q, p)
        for p, q, s in itertools.permutations(pts, 3):
            assert discrete_distance(fam, p, s) <= (
                discrete_distance(fam, p, q) + discrete_distance(fam, q, s)
            )

    def test_semiperimeter_bound(self):
        fam = extremal_disk(3)
        n = fam.n_walls
        pts = [Center] + [CylinderPoint(2 * k, Fraction(1, 7)) for k in range(9)]
        for p, q in itertools.combinations(pts, 2):
            assert discrete_distance(fam, p, q) <= n

    def test_distance_to_center_is_coverage_depth(self):
        fam = extremal_disk(2)
        # point at position 0 height h sits under max(0, r - h)-ish nest depth
        assert discrete_distance(fam, CylinderPoint(0, 0), Center) == 2
        assert discrete_distance(fam, CylinderPoint(0, 2), Center) == 1
        assert discrete_distance(fam, CylinderPoint(0, 4), Center) == 0


class TestCanonicalCode:
    def test_rotation_invariance(self):
        fam = extremal_disk(1)
        assert canonical_code(rotated(fam, 2)) == canonical_code(fam)

    def test_reflection_invariance(self):
        fam = extremal_disk(3)
        assert canonical_code(reflected(fam)) == canonical_code(fam)

    def test_perturbed_family_differs(self):
        from wallsys.moves import swap_nested_pair

        fam = extremal_disk(2)
        outer = fam.intervals.index((9, 3))
        inner = fam.intervals.index((11, 1))
        pert = swap_nested_pair(fam, outer, inner)
        assert canonical_code(pert) != canonical_code(fam)

    @settings(max_examples=60, deadline=None)
    @given(valid_families(), st.integers(min_value=0, max_value=11), st.booleans())
    def test_invariance_and_conserved_stats(self, fam, shift, mirror):
        if fam is None:
            return
        other = rotated(fam, 2 * shift)
        if mirror:
            other = reflected(other)
        assert canonical_code(other) == canonical_code(fam)
        assert validate(other).radius == validate(fam).radius
        assert discrete_area(other) == discrete_area(fam)


class TestExtremal:
    def test_r1_explicit(self):
        assert extremal_disk(1) == R1_TILING

    def test_r2_widths(self):
        fam = extremal_disk(2)
        widths = sorted(fam.width2(i) for i in range(fam.n_walls))
        assert widths == [2, 2, 2, 6, 6, 6]

    @pytest.mark.parametrize("r", [1, 2, 3, 7, 12])
    def test_area_and_radius(self, r):
        fam = extremal_disk(r)
        rep = validate(fam)
        assert rep.valid and rep.radius == r and fam.n_walls == 3 * r
        assert discrete_area(fam).twice == 3 * r * r

    def test_rejects_zero(self):
        with pytest.raises(ParseError):
            extremal_disk(0)


class TestJson:
    def test_round_trip(self):
        fam = extremal_disk(3)
        again = IntervalFamily.from_json_dict(fam.to_json_dict())
        assert again == fam

    def test_normalizes_order(self):
        fam = IntervalFamily(6, ((5, 1), (1, 3), (3, 5)))
        assert fam.intervals == ((1, 3), (3, 5), (5, 1))

    def test_rejects_even_endpoints(self):
        with pytest.raises(ParseError):
            IntervalFamily(6, ((0, 3),))

    def test_rejects_duplicates(self):
        with pytest.raises(ParseError):
            IntervalFamily(6, ((1, 3), (1, 3)))
