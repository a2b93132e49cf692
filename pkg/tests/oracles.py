"""Independent geometric oracles used to derive expected test values.

The discrete area and strip counts are recomputed here from first
principles: every wall is realized as its two tent segments with exact
integer endpoints in the universal cover, and crossings are counted by
exact rational segment intersection.  Nothing below shares logic with
the interval-containment arithmetic in the package.
"""

from __future__ import annotations

from fractions import Fraction

from wallsys.disks import IntervalFamily


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _seg_intersection(p1, p2, q1, q2):
    """Single intersection point of two non-collinear closed segments, or None."""
    d1 = (p2[0] - p1[0], p2[1] - p1[1])
    d2 = (q2[0] - q1[0], q2[1] - q1[1])
    denom = _cross(d1[0], d1[1], d2[0], d2[1])
    if denom == 0:
        return None
    w = (q1[0] - p1[0], q1[1] - p1[1])
    t = Fraction(_cross(w[0], w[1], d2[0], d2[1]), denom)
    u = Fraction(_cross(w[0], w[1], d1[0], d1[1]), denom)
    if 0 <= t <= 1 and 0 <= u <= 1:
        return (p1[0] + t * d1[0], p1[1] + t * d1[1])
    return None


def _tent_segments(a2: int, w2: int, lift: int):
    base = a2 + lift
    apex = (Fraction(base) + Fraction(w2, 2), Fraction(w2, 2))
    return [((Fraction(base), Fraction(0)), apex), (apex, (Fraction(base + w2), Fraction(0)))]


def _pair_points(family: IntervalFamily, i: int, j: int, lift_j: int):
    c2 = family.circumference2
    a_i, w_i = family.intervals[i][0], family.width2(i)
    a_j, w_j = family.intervals[j][0], family.width2(j)
    pts = set()
    for s1 in _tent_segments(a_i, w_i, 0):
        for s2 in _tent_segments(a_j, w_j, lift_j * c2):
            pt = _seg_intersection(*s1, *s2)
            if pt is not None:
                pts.add(pt)
    return pts


def area_oracle2(family: IntervalFamily) -> int:
    """Twice the discrete area, from exact tent-segment intersections."""
    c2 = family.circumference2
    n = family.n_walls
    total2 = 0
    for i in range(n):
        for j in range(i + 1, n):
            pts = set()
            for m in range(-2, 3):
                pts |= _pair_points(family, i, j, m)
            for (_, y) in pts:
                total2 += 2 if y > 0 else 1
    return total2


def strip_oracle2(family: IntervalFamily, t2: int, width2: int) -> int:
    """Twice the weighted crossing count with abscissa in [t2, t2+width2)."""
    c2 = family.circumference2
    n = family.n_walls
    lo, hi = Fraction(t2), Fraction(t2 + width2)
    total2 = 0
    span = (abs(t2) + width2) // c2 + 3
    for i in range(n):
        for j in range(i + 1, n):
            pts = set()
            for mi in range(-span, span + 1):
                for mj in range(-span, span + 1):
                    a_i, w_i = family.intervals[i][0], family.width2(i)
                    a_j, w_j = family.intervals[j][0], family.width2(j)
                    for s1 in _tent_segments(a_i, w_i, mi * c2):
                        for s2 in _tent_segments(a_j, w_j, mj * c2):
                            pt = _seg_intersection(*s1, *s2)
                            if pt is not None:
                                pts.add(pt)
            for (x, y) in pts:
                if lo <= x < hi:
                    total2 += 2 if y > 0 else 1
    return total2
