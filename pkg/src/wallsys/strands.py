"""Universal-cover strand structure of a valid family.

Lifting the walls to the half-plane cover of the punctured disk, the
arcs chain end-to-start into exactly r bi-infinite strands.  A strand is
stored as one fundamental period of its stops (reduced into [0, c2))
plus the cover translation after one traversal, which avoids storing
infinite sequences.
"""

from __future__ import annotations

from dataclasses import dataclass

from .disks import HalfInteger, IntervalFamily, require_valid
from .errors import InternalInvariant, InvalidFamily, NonGenericCut


@dataclass(frozen=True)
class StrandDecomposition:
    """The r strands of a valid family, in deterministic anchor order.

    ``strands[k]`` lists one period of stop positions reduced into
    [0, circumference2); ``widths[k]`` the doubled widths of the
    corresponding arcs (summing to ``offsets2[k]``, a multiple of the
    circumference); ``stops_cover[k]`` the same stops before reduction,
    strictly increasing from the strand's smallest window stop.
    """

    r: int
    n: int
    circumference2: int
    strands: tuple[tuple[int, ...], ...]
    widths: tuple[tuple[int, ...], ...]
    offsets2: tuple[int, ...]
    stops_cover: tuple[tuple[int, ...], ...]

    def strand_of_cover_stop(self, x: int) -> int:
        """Index of the strand whose cover-stop set contains x."""
        for k, stops in enumerate(self.stops_cover):
            off = self.offsets2[k]
            for s in stops:
                if (x - s) % off == 0:
                    return k
        raise InternalInvariant(f"cover position {x} is not a stop of any strand")


def strand_decomposition(family: IntervalFamily) -> StrandDecomposition:
    """Partition the lifted arcs into maximal chains of adjacent arcs."""
    r = require_valid(family)
    if r < 1:
        raise InvalidFamily("strand decomposition requires radius >= 1")
    c2 = family.circumference2
    ivs = family.intervals
    start_of = {a2: i for i, (a2, _) in enumerate(ivs)}

    assigned: set[int] = set()
    strands: list[tuple[int, ...]] = []
    widths: list[tuple[int, ...]] = []
    offsets2: list[int] = []
    covers: list[tuple[int, ...]] = []

    for p in sorted(start_of):
        if p in assigned:
            continue
        w0 = start_of[p]
        stops = [p]
        wds = []
        x, w = p, w0
        while True:
            step = family.width2(w)
            x += step
            wds.append(step)
            w = start_of[x % c2]
            if w == w0:
                break
            stops.append(x)
        offset2 = x - p
        if offset2 % c2 != 0:
            raise InternalInvariant("strand traversal did not close up over the circle")
        assigned.update(s for s in stops if s < c2)
        strands.append(tuple(s % c2 for s in stops))
        widths.append(tuple(wds))
        offsets2.append(offset2)
        covers.append(tuple(stops))

    if len(strands) != r:
        raise InternalInvariant(f"expected {r} strands, found {len(strands)}")
    return StrandDecomposition(
        r=r,
        n=family.n_walls,
        circumference2=c2,
        strands=tuple(strands),
        widths=tuple(widths),
        offsets2=tuple(offsets2),
        stops_cover=tuple(covers),
    )


def width_one_arc(decomp: StrandDecomposition) -> tuple[int, int] | None:
    """Some arc of width 1 (doubled 2) as a (start, end) stop pair, if any."""
    for stops, wds in zip(decomp.strands, decomp.widths):
        for i, w2 in enumerate(wds):
            if w2 == 2:
                s = stops[i]
                return (s, (s + 2) % decomp.circumference2)
    return None


def _cover_arcs(family: IntervalFamily, lo: int, hi: int) -> list[tuple[int, int]]:
    """All lifted arcs (A1, A2) whose span [A1, A2] meets the range (lo, hi)."""
    c2 = family.circumference2
    arcs = []
    for i, (a2, _) in enumerate(family.intervals):
        w2 = family.width2(i)
        m = (lo - w2 - a2) // c2 + 1  # smallest lift with A1 + w2 > lo
        A1 = a2 + m * c2
        while A1 < hi:
            arcs.append((A1, A1 + w2))
            A1 += c2
    return arcs


def strip_crossings(family: IntervalFamily, t2: int, width2: int | None = None) -> HalfInteger:
    """Weighted self-crossings of the lift inside the strip [t, t+2r).

    Interior tent crossings count 1; boundary meetings of adjacent arcs
    count 1/2.  A crossing belongs to the strip containing its exact
    abscissa (strips are half-open).  Computed combinatorially from the
    stop positions.  ``width2`` overrides the default doubled strip
    width 4r (e.g. one full period reproduces the discrete area).
    """
    r = require_valid(family)
    c2 = family.circumference2
    used = {p for iv in family.intervals for p in iv}
    if t2 % c2 in used:
        raise NonGenericCut(f"cut {t2} passes through a stop")
    if width2 is None:
        width2 = 4 * r
    if width2 <= 0:
        return HalfInteger(0)
    lo, hi = t2, t2 + width2

    total2 = 0
    # boundary meetings: every used odd position is the common endpoint of
    # exactly one (end, start) arc pair
    for x in range(lo if lo % 2 else lo + 1, hi, 2):
        if x % c2 in used:
            total2 += 1

    arcs = sorted(_cover_arcs(family, lo - c2, hi + c2))
    for i, (A1, A2) in enumerate(arcs):
        for B1, B2 in arcs[i + 1:]:
            if A1 < B1 < A2 < B2:
                x2 = A2 + B1  # twice the crossing abscissa
                if 2 * lo <= x2 < 2 * hi:
                    total2 += 2
    return HalfInteger(total2)


def strip_arc_census(family: IntervalFamily, t2: int) -> list[list[tuple[int, int]]]:
    """Per strand, the lifted arcs contained entirely in [t2, t2 + 2r)."""
    decomp = strand_decomposition(family)
    r = decomp.r
    lo, hi = t2, t2 + 4 * r
    census: list[list[tuple[int, int]]] = [[] for _ in range(r)]
    for A1, A2 in _cover_arcs(family, lo, hi):
        if lo <= A1 and A2 < hi:
            census[decomp.strand_of_cover_stop(A1)].append((A1, A2))
    return census
