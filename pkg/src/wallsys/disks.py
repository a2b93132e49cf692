"""Exact combinatorics of simple discrete metric disks.

A disk with a system of n pairwise-almost-disjoint boundary-to-boundary
walls is encoded by the family of boundary intervals the walls are
homotopic to.  All endpoint coordinates are stored doubled so that the
semi-integer endpoint grid becomes odd integers; every computation in
this module is exact (ints and Fractions, no floats).

Coordinate conventions
----------------------
* ``circumference2`` is twice the circle circumference.  Wall endpoints
  are odd values in ``[0, circumference2)``.
* An interval ``(a2, b2)`` is the positively oriented boundary arc from
  ``a2`` to ``b2``; its doubled width is ``(b2 - a2) % circumference2``.
* The fixed geometric realization of a wall is its "tent": the arc of
  slopes +1/-1 over its interval on the flat cylinder, peaking at half
  the interval width.  Heights are doubled too, so slopes stay +-1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

from .errors import InvalidFamily, NonGenericPoint, ParseError


@dataclass(frozen=True, order=True)
class HalfInteger:
    """Exact half-integer stored as twice its value."""

    twice: int

    def __add__(self, other: "HalfInteger") -> "HalfInteger":
        return HalfInteger(self.twice + other.twice)

    def __sub__(self, other: "HalfInteger") -> "HalfInteger":
        return HalfInteger(self.twice - other.twice)

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __str__(self) -> str:
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"


@dataclass(frozen=True)
class IntervalFamily:
    """Interval encoding of a wall system on a disk.

    ``intervals`` is sorted by (start, end); identical pairs are
    forbidden (two identical walls would cross twice in any
    realization).
    """

    circumference2: int
    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        c2 = self.circumference2
        if c2 <= 0 or c2 % 2 != 0:
            raise ParseError(f"circumference2 must be a positive even integer, got {c2}")
        ivs = tuple((int(a), int(b)) for a, b in self.intervals)
        if list(ivs) != sorted(ivs):
            ivs = tuple(sorted(ivs))
        object.__setattr__(self, "intervals", ivs)
        seen = set()
        for a2, b2 in ivs:
            if not (0 <= a2 < c2 and 0 <= b2 < c2):
                raise ParseError(f"endpoint out of range [0, {c2}): ({a2}, {b2})")
            if a2 % 2 == 0 or b2 % 2 == 0:
                raise ParseError(f"endpoints must be odd (semi-integer grid): ({a2}, {b2})")
            if a2 == b2:
                raise ParseError(f"interval ({a2}, {b2}) is empty or the full circle")
            if (a2, b2) in seen:
                raise ParseError(f"duplicate interval ({a2}, {b2})")
            seen.add((a2, b2))

    @property
    def n_walls(self) -> int:
        return len(self.intervals)

    def width2(self, i: int) -> int:
        a2, b2 = self.intervals[i]
        return (b2 - a2) % self.circumference2

    def to_json_dict(self) -> dict:
        return {
            "circumference2": self.circumference2,
            "intervals": [list(p) for p in self.intervals],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "IntervalFamily":
        try:
            c2 = obj["circumference2"]
            ivs = tuple((int(a), int(b)) for a, b in obj["intervals"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed interval family: {exc}") from exc
        return cls(int(c2), ivs)


class _Center:
    """The disk center (the point at infinity of the cylinder model)."""

    __slots__ = ()

    def __repr__(self):
        return "Center"


Center = _Center()

Rat = Union[int, Fraction]


@dataclass(frozen=True)
class CylinderPoint:
    """A point of the punctured-disk cylinder in doubled coordinates.

    ``s2`` is the doubled angular position, ``h2`` the doubled height
    above the boundary circle.  Use the module-level ``Center`` for the
    disk center.
    """

    s2: Rat
    h2: Rat = 0

    def __post_init__(self):
        if self.h2 < 0:
            raise ParseError("height must be nonnegative")


QueryPoint = Union[CylinderPoint, _Center]


@dataclass(frozen=True)
class Violation:
    kind: str  # cover_pair | coverage_mismatch | endpoint_degree
    data: tuple

    def to_json_dict(self) -> dict:
        if self.kind == "cover_pair":
            return {"kind": self.kind, "i": self.data[0], "j": self.data[1]}
        if self.kind == "coverage_mismatch":
            return {"kind": self.kind, "point2": self.data[0], "count": self.data[1]}
        return {"kind": self.kind, "point2": self.data[0], "degree": self.data[1]}


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    radius: int | None
    violations: tuple[Violation, ...] = field(default=())

    def to_json_dict(self) -> dict:
        return {
            "valid": self.valid,
            "radius": self.radius,
            "violations": [v.to_json_dict() for v in self.violations],
        }


def _contains_open(a2: int, b2: int, p: Rat, c2: int) -> bool:
    """Is p strictly inside the positively oriented arc (a2, b2)?"""
    w = (b2 - a2) % c2
    u = (p - a2) % c2
    return 0 < u < w


def _pair_covers_circle(iv1: tuple[int, int], iv2: tuple[int, int], c2: int) -> bool:
    """Do the two closed arcs jointly cover the circle?

    Equivalent to: the open complement of iv1 is contained in iv2.
    """
    a, b = iv1
    cpl_w = (a - b) % c2  # width of the complement (b, a)
    cc, d = iv2
    w2 = (d - cc) % c2
    # open arc (b, a) inside closed arc [cc, d]: every point b+t, 0<t<cpl_w
    # must satisfy 0 <= (b+t-cc) % c2 <= w2.
    off = (b - cc) % c2
    # The open arc maps to offsets (off, off+cpl_w) mod c2; containment in
    # [0, w2] holds iff off + cpl_w <= w2 when the arc does not wrap past 0.
    # If off == 0 the arc starts at cc's own offset 0 boundary.
    if off + cpl_w <= w2:
        return True
    # wrapping case: part of the open arc passes offset 0 from above, i.e.
    # reaches offsets >= c2 -> reduced below off; containment then requires
    # covering [0,w2] to absorb both pieces, only possible if iv2 is the
    # full circle, which the type forbids.
    return False


def validate(family: IntervalFamily) -> ValidationReport:
    """Check the three simple-disk conditions; return radius when valid.

    1. no two intervals jointly cover the circle;
    2. every generic boundary point is covered by the same count r >= 0;
    3. every endpoint position ends exactly one interval and starts
       exactly one interval.

    Violations are diagnostics, not failures.  The empty family is valid
    with radius 0.
    """
    c2 = family.circumference2
    ivs = family.intervals
    violations: list[Violation] = []

    for i in range(len(ivs)):
        for j in range(i + 1, len(ivs)):
            if _pair_covers_circle(ivs[i], ivs[j], c2):
                violations.append(Violation("cover_pair", (i, j)))

    positions = sorted({p for iv in ivs for p in iv})
    if positions:
        probes = []
        for k, p in enumerate(positions):
            q = positions[(k + 1) % len(positions)]
            gap = (q - p) % c2
            if gap == 0:  # single distinct position
                gap = c2
            probes.append((p + gap // 2) % c2)
    else:
        probes = [0]

    counts = [sum(1 for iv in ivs if _contains_open(iv[0], iv[1], m, c2)) for m in probes]
    radius = counts[0]
    for m, cnt in zip(probes, counts):
        if cnt != radius:
            violations.append(Violation("coverage_mismatch", (m, cnt)))

    for p in positions:
        starts = sum(1 for a2, _ in ivs if a2 == p)
        ends = sum(1 for _, b2 in ivs if b2 == p)
        if starts != 1 or ends != 1:
            violations.append(Violation("endpoint_degree", (p, starts + ends)))

    ok = not violations
    return ValidationReport(ok, radius if ok else None, tuple(violations))


def require_valid(family: IntervalFamily) -> int:
    """Return the radius, raising InvalidFamily when validation fails."""
    report = validate(family)
    if not report.valid:
        raise InvalidFamily(f"family is not a simple discrete disk: {report.violations[:3]}")
    assert report.radius is not None
    return report.radius


def _pair_crossing_weight2(iv1: tuple[int, int], iv2: tuple[int, int], c2: int) -> int:
    """Doubled crossing weight of one unordered wall pair.

    +2 for an interior crossing (exactly one endpoint of each interval
    strictly inside the other), +1 for exactly one shared endpoint.  The
    two contributions add: a pair may meet on the boundary and also
    cross in the interior.
    """
    a, b = iv1
    c, d = iv2
    shared = len({a, b} & {c, d})
    w2 = 0
    in1 = sum(1 for p in (c, d) if _contains_open(a, b, p, c2))
    in2 = sum(1 for p in (a, b) if _contains_open(c, d, p, c2))
    if in1 == 1 and in2 == 1:
        w2 += 2
    if shared == 1:
        w2 += 1
    return w2


def discrete_area_raw(family: IntervalFamily) -> HalfInteger:
    """Weighted self-crossing count of the tent realization (no validity check)."""
    ivs = family.intervals
    c2 = family.circumference2
    total2 = 0
    for i in range(len(ivs)):
        for j in range(i + 1, len(ivs)):
            total2 += _pair_crossing_weight2(ivs[i], ivs[j], c2)
    return HalfInteger(total2)


def discrete_area(family: IntervalFamily) -> HalfInteger:
    """Discrete area: interior crossings + half the boundary crossings."""
    require_valid(family)
    return discrete_area_raw(family)


def _tent_side(family: IntervalFamily, i: int, point: QueryPoint) -> int:
    """-1 if the point is strictly under tent i, +1 strictly outside, 0 on it."""
    if point is Center:
        return 1
    a2, _ = family.intervals[i]
    c2 = family.circumference2
    w2 = family.width2(i)
    u = (Fraction(point.s2) - a2) % c2
    h2 = Fraction(point.h2)
    if u <= 0 or u >= w2:
        return 0 if (u == 0 or u == w2) and h2 == 0 else 1
    height = min(u, w2 - u)
    if h2 < height:
        return -1
    return 0 if h2 == height else 1


def discrete_distance_raw(family: IntervalFamily, p: QueryPoint, q: QueryPoint) -> int:
    """Number of walls whose tent contains exactly one of p, q (no validity check)."""
    for pt in (p, q):
        if pt is Center:
            continue
        for i in range(family.n_walls):
            if _tent_side(family, i, pt) == 0:
                raise NonGenericPoint(f"point {pt} lies on the tent of wall {i}")
    count = 0
    for i in range(family.n_walls):
        inside_p = _tent_side(family, i, p) < 0
        inside_q = _tent_side(family, i, q) < 0
        if inside_p != inside_q:
            count += 1
    return count


def discrete_distance(family: IntervalFamily, p: QueryPoint, q: QueryPoint) -> int:
    """Discrete distance between two generic points of the cylinder model.

    Equals the number of walls separating p from q; the center is
    contained in no tent.
    """
    require_valid(family)
    return discrete_distance_raw(family, p, q)


def _normal_form(ivs: Iterable[tuple[int, int]], c2: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(((a % c2, b % c2) for a, b in ivs)))


def canonical_code(family: IntervalFamily) -> bytes:
    """Rotation/reflection-invariant code of the endpoint pattern.

    Minimizes the sorted (start, width) sequence over all even rotations
    of the doubled circle and both orientations; equal codes mean equal
    boundary patterns up to rotation/reflection, which for valid simple
    disks is isotopy equivalence of the standard realizations.
    """
    c2 = family.circumference2
    best: tuple | None = None
    images = [family.intervals]
    images.append(tuple((-b % c2, -a % c2) for a, b in family.intervals))  # reflection
    for ivs in images:
        for shift in range(0, c2, 2):
            cand = tuple(
                sorted(((a - shift) % c2, ((b - a) % c2)) for a, b in ivs)
            )
            if best is None or cand < best:
                best = cand
    payload = ",".join(f"{a}:{w}" for a, w in (best or ()))
    return f"{c2}|{payload}".encode("ascii")


def extremal_disk(r: int) -> IntervalFamily:
    """The area-minimizing simple disk of radius r.

    Circumference 3r; three nests of concentric walls centered at 0, r,
    2r with half-widths 1/2, 3/2, ..., r - 1/2.  Discrete area is
    exactly 3r^2/2.
    """
    if r < 1:
        raise ParseError("radius must be a positive integer")
    c2 = 6 * r
    ivs = []
    for k in range(3):
        center2 = 2 * k * r
        for s2 in range(1, 2 * r, 2):
            ivs.append(((center2 - s2) % c2, (center2 + s2) % c2))
    return IntervalFamily(c2, tuple(ivs))
