"""Area-decreasing rewrite moves, local search, and exhaustive enumeration.

Two move kinds operate on a valid family:

* Move A: a wall covers two intersecting (possibly adjacent) walls
  alpha = (a, c), beta = (b, d) with a <= b <= c <= d inside the
  covering interval; the pair is rewritten to (a, d), (b, c), dropping
  the degenerate second wall when b == c.
* Move B: a wall crosses two walls adjacent at a point c, and covers no
  other wall covering c; the circle is re-gridded with one extra unit
  slot splitting c into c- < c+ and the three walls become four.

Move A drops the area by at least 1 in the crossing case and by exactly
1/2 in the adjacent case; Move B drops it by exactly 1/2.  When a move
vacates an endpoint slot, the slot is removed from the grid so that
every odd position stays in use (wall count == circumference); the
strand-level structure theory counts grid positions, so keeping the
grid full is what makes its conclusions apply to local-search output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .disks import (
    HalfInteger,
    IntervalFamily,
    _pair_covers_circle,
    canonical_code,
    discrete_area_raw,
    require_valid,
)
from .errors import ComplexityRefusal, InvalidFamily, ParseError, StaleConfig


@dataclass(frozen=True)
class ReductionConfig:
    """A concrete move instance, pinned to interval values for staleness checks.

    For Move A, ``pattern`` is (a2, b2, c2, d2) with alpha = (a2, c2),
    beta = (b2, d2); adjacent case iff b2 == c2.  For Move B,
    ``pattern`` is (a2, c2, e2, b2, d2) with alpha = (a2, c2),
    beta = (c2, e2), gamma = (b2, d2) crossing both.
    """

    kind: str  # "A" | "B"
    gamma: tuple[int, int]
    alpha: tuple[int, int]
    beta: tuple[int, int]
    pattern: tuple[int, ...]

    @property
    def adjacent(self) -> bool:
        return self.kind == "A" and self.pattern[1] == self.pattern[2]


def _rel(x: int, base: int, c2: int) -> int:
    return (x - base) % c2


def _covered_by(iv: tuple[int, int], g: tuple[int, int], c2: int) -> bool:
    """Is the closed arc of iv contained in the closed arc of g?"""
    gw = (g[1] - g[0]) % c2
    s = _rel(iv[0], g[0], c2)
    e = _rel(iv[1], g[0], c2)
    return s <= e <= gw


def _move_a_candidates(family: IntervalFamily, want_adjacent: bool) -> Iterator[ReductionConfig]:
    c2 = family.circumference2
    ivs = family.intervals
    n = len(ivs)
    for g in range(n):
        giv = ivs[g]
        covered = [i for i in range(n) if i != g and _covered_by(ivs[i], giv, c2)]
        for ii in range(len(covered)):
            for jj in range(ii + 1, len(covered)):
                i, j = covered[ii], covered[jj]
                s_i, e_i = (_rel(p, giv[0], c2) for p in ivs[i])
                s_j, e_j = (_rel(p, giv[0], c2) for p in ivs[j])
                if s_j < s_i:
                    i, j = j, i
                    s_i, e_i, s_j, e_j = s_j, e_j, s_i, e_i
                # roles: alpha = earlier-start (a, c), beta = (b, d)
                if not (s_i < s_j <= e_i < e_j):
                    continue
                adjacent = s_j == e_i
                if adjacent != want_adjacent:
                    continue
                yield ReductionConfig(
                    kind="A",
                    gamma=giv,
                    alpha=ivs[i],
                    beta=ivs[j],
                    pattern=(ivs[i][0], ivs[j][0], ivs[i][1], ivs[j][1]),
                )


def _strictly_inside(a: int, b: int, p: int, c2: int) -> bool:
    w = (b - a) % c2
    u = (p - a) % c2
    return 0 < u < w


def _move_b_candidates(family: IntervalFamily) -> Iterator[ReductionConfig]:
    c2 = family.circumference2
    ivs = family.intervals
    end_at = {iv[1]: iv for iv in ivs}
    start_at = {iv[0]: iv for iv in ivs}
    for c in sorted(end_at):
        alpha = end_at[c]
        beta = start_at.get(c)
        if beta is None:
            continue
        cands = []
        for giv in ivs:
            if giv in (alpha, beta):
                continue
            # gamma's interval runs from inside alpha, over c, to inside beta
            if not (
                _strictly_inside(giv[0], giv[1], c, c2)
                and _strictly_inside(alpha[0], alpha[1], giv[0], c2)
                and _strictly_inside(beta[0], beta[1], giv[1], c2)
            ):
                continue
            # minimality: gamma covers no other wall covering c
            minimal = True
            for div in ivs:
                if div == giv:
                    continue
                if _covered_by(div, giv, c2):
                    w = (div[1] - div[0]) % c2
                    if (c - div[0]) % c2 <= w:
                        minimal = False
                        break
            if minimal:
                cands.append(giv)
        if cands:
            giv = min(cands, key=lambda iv: ((iv[1] - iv[0]) % c2, iv[0]))
            yield ReductionConfig(
                kind="B",
                gamma=giv,
                alpha=alpha,
                beta=beta,
                pattern=(alpha[0], c, beta[1], giv[0], giv[1]),
            )


def find_reduction(family: IntervalFamily) -> ReductionConfig | None:
    """First reducible configuration in deterministic scan order, if any.

    Move A instances are preferred, crossing case before adjacent case
    (a crossing instance always exists whenever an adjacent one would
    drop the area by more than its own 1/2, which keeps the per-move
    area deltas exact); Move B is the fallback.  Returns None iff the
    family is config-free.
    """
    require_valid(family)
    for cfg in _move_a_candidates(family, want_adjacent=False):
        return cfg
    for cfg in _move_a_candidates(family, want_adjacent=True):
        return cfg
    for cfg in _move_b_candidates(family):
        return cfg
    return None


def _remove_slot(ivs: list[tuple[int, int]], c2: int, slot: int) -> tuple[list[tuple[int, int]], int]:
    """Re-grid to circumference - 1, deleting an unused odd slot."""

    def remap(p: int) -> int:
        return p - 2 if p > slot else p

    return [(remap(a), remap(b)) for a, b in ivs], c2 - 2


def _insert_slot(ivs: list[tuple[int, int]], c2: int, at: int) -> list[tuple[int, int]]:
    """Re-grid to circumference + 1; positions above ``at`` shift by one unit."""

    def remap(p: int) -> int:
        return p + 2 if p > at else p

    return [(remap(a), remap(b)) for a, b in ivs]


def apply_reduction(family: IntervalFamily, config: ReductionConfig) -> IntervalFamily:
    """Apply a move produced by find_reduction on this same family."""
    c2 = family.circumference2
    ivs = list(family.intervals)
    for iv in (config.gamma, config.alpha, config.beta):
        if iv not in ivs:
            raise StaleConfig(f"interval {iv} is not in the family")

    if config.kind == "A":
        a2, b2, cc2, d2 = config.pattern
        if not _covered_by(config.alpha, config.gamma, c2) or not _covered_by(
            config.beta, config.gamma, c2
        ):
            raise StaleConfig("covering pattern no longer holds")
        ivs.remove(config.alpha)
        ivs.remove(config.beta)
        ivs.append((a2, d2))
        if b2 != cc2:
            ivs.append((b2, cc2))
            return IntervalFamily(c2, tuple(ivs))
        ivs, new_c2 = _remove_slot(ivs, c2, b2)
        return IntervalFamily(new_c2, tuple(ivs))

    a2, cpoint, e2, b2, d2 = config.pattern
    if not (
        _strictly_inside(b2, d2, cpoint, c2)
        and _strictly_inside(a2, cpoint, b2, c2)
        and _strictly_inside(cpoint, e2, d2, c2)
    ):
        raise StaleConfig("crossing pattern no longer holds")
    ivs.remove(config.alpha)
    ivs.remove(config.beta)
    ivs.remove(config.gamma)
    ivs = _insert_slot(ivs, c2, cpoint)
    remap = lambda p: p + 2 if p > cpoint else p  # noqa: E731
    c_minus, c_plus = cpoint, cpoint + 2
    ivs.append((remap(a2), c_plus))
    ivs.append((c_minus, remap(e2)))
    ivs.append((remap(b2), c_minus))
    ivs.append((c_plus, remap(d2)))
    return IntervalFamily(c2 + 2, tuple(ivs))


@dataclass(frozen=True)
class MoveRecord:
    kind: str
    adjacent: bool
    gamma: tuple[int, int]
    alpha: tuple[int, int]
    beta: tuple[int, int]
    area2_before: int
    area2_after: int
    n_before: int
    n_after: int

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "adjacent": self.adjacent,
            "gamma": list(self.gamma),
            "alpha": list(self.alpha),
            "beta": list(self.beta),
            "area2_before": self.area2_before,
            "area2_after": self.area2_after,
            "n_before": self.n_before,
            "n_after": self.n_after,
        }


def remove_unused_slots(family: IntervalFamily) -> IntervalFamily:
    """Canonical re-grid deleting odd positions no wall ends at.

    Preserves validity, radius, and discrete area; afterwards the wall
    count equals the circumference.
    """
    used = {p for iv in family.intervals for p in iv}
    ivs = list(family.intervals)
    c2 = family.circumference2
    for slot in sorted((p for p in range(1, c2, 2) if p not in used), reverse=True):
        ivs, c2 = _remove_slot(ivs, c2, slot)
    if c2 == 0:  # empty family: keep a minimal legal circle
        c2 = 2
    return IntervalFamily(c2, tuple(ivs))


def minimize(family: IntervalFamily) -> tuple[IntervalFamily, list[MoveRecord]]:
    """Iterate reductions until config-free; returns the result and move log.

    The input grid is first canonicalized (unused slots removed).  Each
    move strictly decreases the area by 1/2 or more, so the loop
    terminates; the output is config-free and fully gridded, hence its
    area is (n/2r) * r^2 with n >= 3r walls.
    """
    require_valid(family)
    current = remove_unused_slots(family)
    log: list[MoveRecord] = []
    area2 = discrete_area_raw(current).twice
    budget = area2 * 2 + 1
    while True:
        cfg = find_reduction(current)
        if cfg is None:
            return current, log
        nxt = apply_reduction(current, cfg)
        nxt_area2 = discrete_area_raw(nxt).twice
        log.append(
            MoveRecord(
                kind=cfg.kind,
                adjacent=cfg.adjacent,
                gamma=cfg.gamma,
                alpha=cfg.alpha,
                beta=cfg.beta,
                area2_before=area2,
                area2_after=nxt_area2,
                n_before=current.n_walls,
                n_after=nxt.n_walls,
            )
        )
        current, area2 = nxt, nxt_area2
        if len(log) > budget:
            raise InvalidFamily("reduction loop exceeded its area budget; input suspect")


def swap_nested_pair(family: IntervalFamily, outer: int, inner: int) -> IntervalFamily:
    """Replace a nested wall pair (A,B) > (C,D) by the crossing pair (A,D), (C,B).

    The inverse of the crossing-case Move A; raises ParseError when the
    pair is not strictly nested.  Area goes up by exactly 1.
    """
    c2 = family.circumference2
    o = family.intervals[outer]
    i = family.intervals[inner]
    if set(o) & set(i) or not _covered_by(i, o, c2) or o == i:
        raise ParseError(f"walls {o} and {i} are not strictly nested")
    ivs = list(family.intervals)
    for iv in (o, i):
        ivs.remove(iv)
    ivs.append((o[0], i[1]))
    ivs.append((i[0], o[1]))
    return IntervalFamily(c2, tuple(ivs))


def enumerate_disks(
    r: int, n_max: int, allow_large: bool = False
) -> Iterator[tuple[bytes, int, int]]:
    """All valid radius-r disks with n <= n_max walls, one per canonical code.

    Families are enumerated in the fully-gridded normalization
    (circumference == wall count; a family with unused endpoint slots is
    the same disk as its re-gridded form).  Yields (code, n, area2)
    triples; exhaustive for r <= 2, refused beyond that unless
    ``allow_large`` opts into the exponential cost.
    """
    if r < 1:
        raise ParseError("radius must be a positive integer")
    if r > 2 and not allow_large:
        raise ComplexityRefusal(
            f"exhaustive enumeration documented for r <= 2 only (asked r={r}); "
            "pass allow_large to override"
        )
    seen: set[bytes] = set()
    for n in range(1, n_max + 1):
        for fam in _enumerate_fixed_n(r, n):
            code = canonical_code(fam)
            if code in seen:
                continue
            seen.add(code)
            yield code, n, discrete_area_raw(fam).twice


def _enumerate_fixed_n(r: int, n: int) -> Iterator[IntervalFamily]:
    """Backtracking over end-position assignments with validity pruning."""
    c2 = 2 * n
    positions = list(range(1, c2, 2))
    used_ends: set[int] = set()
    arcs: list[tuple[int, int]] = []

    def wraps(a: int, b: int) -> bool:
        return b < a  # arc runs through the point 0

    def cover_conflict(new: tuple[int, int]) -> bool:
        return any(_pair_covers_circle(new, old, c2) for old in arcs)

    def rec(idx: int, wrap_count: int) -> Iterator[IntervalFamily]:
        if idx == len(positions):
            if wrap_count == r:
                yield IntervalFamily(c2, tuple(arcs))
            return
        p = positions[idx]
        for q in positions:
            if q == p or q in used_ends:
                continue
            new = (p, q)
            w = wrap_count + (1 if wraps(p, q) else 0)
            if w > r or cover_conflict(new):
                continue
            used_ends.add(q)
            arcs.append(new)
            yield from rec(idx + 1, w)
            arcs.pop()
            used_ends.remove(q)

    yield from rec(0, 0)


def enumerate_summary(r: int, n_max: int, allow_large: bool = False) -> dict:
    """Run the enumeration and report the minimum area and its codes."""
    min_area2: int | None = None
    minimizers: list[str] = []
    count = 0
    per_n: dict[int, int] = {}
    for code, n, area2 in enumerate_disks(r, n_max, allow_large):
        count += 1
        per_n[n] = per_n.get(n, 0) + 1
        if min_area2 is None or area2 < min_area2:
            min_area2 = area2
            minimizers = [code.hex()]
        elif area2 == min_area2:
            minimizers.append(code.hex())
    return {
        "r": r,
        "n_max": n_max,
        "count": count,
        "per_n": per_n,
        "min_area2": min_area2,
        "min_area": str(HalfInteger(min_area2)) if min_area2 is not None else None,
        "minimizer_codes": sorted(minimizers),
    }
