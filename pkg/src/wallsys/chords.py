"""Random chords of the Euclidean unit disk as sampled wall systems.

A chord is an oriented line (theta, p) with |p| < 1.  Sampling theta
uniform on [0, 2pi) and p uniform on (-1, 1) draws lines from the
normalized kinematic measure restricted to lines meeting the disk
(total mass 4pi).  With n i.i.d. chords, (1/n) x separation count
estimates Euclidean distance / pi and 2/(n^2-n) x interior crossing
count estimates 1/2, which the convergence experiment measures.

The cell-graph distance rebuilds the chord arrangement as a planar
subdivision and runs BFS on face adjacency; it must agree with the
direct separation count on generic inputs, which is the module's
central oracle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra
from shapely.geometry import LineString, Point
from shapely.ops import polygonize, unary_union

from .errors import DegenerateArrangement, NonGenericPoint, PreconditionError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ChordSet:
    """A sampled set of disk chords plus the seed that produced it."""

    thetas: np.ndarray
    ps: np.ndarray
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "thetas", np.asarray(self.thetas, dtype=float))
        object.__setattr__(self, "ps", np.asarray(self.ps, dtype=float))

    @property
    def n(self) -> int:
        return len(self.thetas)

    def endpoints(self) -> tuple[np.ndarray, np.ndarray]:
        """Boundary endpoints of each chord on the unit circle."""
        half = np.sqrt(np.clip(1.0 - self.ps**2, 0.0, None))
        nx, ny = np.sin(self.thetas), -np.cos(self.thetas)
        dx, dy = np.cos(self.thetas), np.sin(self.thetas)
        base = np.column_stack([self.ps * nx, self.ps * ny])
        d = np.column_stack([dx, dy])
        return base - half[:, None] * d, base + half[:, None] * d


def sample_chords(n: int, seed: int) -> ChordSet:
    """n i.i.d. uniform chords; sample i is a pure function of (seed, i).

    Philox counter blocks give each sample index its own 4 x 64-bit
    block, so the set is reproducible and order-independent under any
    parallel split of the index range.
    """
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    gen = np.random.Generator(np.random.Philox(key=seed))
    raw = gen.integers(0, 2**64, size=(n, 4), dtype=np.uint64, endpoint=False)
    theta = (raw[:, 0] >> np.uint64(11)).astype(np.float64) / float(1 << 53) * TWO_PI
    p = (raw[:, 1] >> np.uint64(11)).astype(np.float64) / float(1 << 53) * 2.0 - 1.0
    return ChordSet(theta, p, seed)


def _offsets_of(chords: ChordSet, z) -> np.ndarray:
    return z[0] * np.sin(chords.thetas) - z[1] * np.cos(chords.thetas)


def _check_inside(z) -> None:
    if math.hypot(z[0], z[1]) >= 1.0:
        raise PreconditionError(f"point {z} is not strictly inside the unit disk")


def separation_distance(chords: ChordSet, x, y) -> int:
    """Number of chords strictly separating x from y."""
    _check_inside(x)
    _check_inside(y)
    fx = _offsets_of(chords, x) - chords.ps
    fy = _offsets_of(chords, y) - chords.ps
    if np.any(fx == 0.0) or np.any(fy == 0.0):
        raise NonGenericPoint("query point lies on a chord")
    return int(np.count_nonzero(fx * fy < 0.0))


def crossing_area(chords: ChordSet) -> int:
    """Number of chord pairs meeting strictly inside the unit disk."""
    n = chords.n
    if n < 2:
        return 0
    i, j = np.triu_indices(n, k=1)
    t0, p0 = chords.thetas[i], chords.ps[i]
    t1, p1 = chords.thetas[j], chords.ps[j]
    det = np.sin(t1 - t0)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (p1 * np.cos(t0) - p0 * np.cos(t1)) / det
        y = (p1 * np.sin(t0) - p0 * np.sin(t1)) / det
        r2 = x * x + y * y
    inside = (det != 0.0) & np.isfinite(r2) & (r2 < 1.0)
    return int(np.count_nonzero(inside))


def _detect_concurrency(chords: ChordSet, tol: float = 1e-9) -> None:
    n = chords.n
    if n < 3:
        return
    i, j = np.triu_indices(n, k=1)
    t0, p0 = chords.thetas[i], chords.ps[i]
    t1, p1 = chords.thetas[j], chords.ps[j]
    det = np.sin(t1 - t0)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (p1 * np.cos(t0) - p0 * np.cos(t1)) / det
        y = (p1 * np.sin(t0) - p0 * np.sin(t1)) / det
    ok = (det != 0.0) & np.isfinite(x) & (x * x + y * y < 1.0)
    pts = np.column_stack([x[ok], y[ok]])
    if len(pts) < 3:
        return
    key = np.round(pts / tol).astype(np.int64)
    _, counts = np.unique(key, axis=0, return_counts=True)
    if np.any(counts >= 3):
        raise DegenerateArrangement("three or more chords are concurrent")


@dataclass
class _Arrangement:
    faces: list
    adjacency: coo_matrix


def _build_arrangement(chords: ChordSet, boundary_gap: float = 0.05) -> _Arrangement:
    """Planar subdivision of the disk by the chords, with face adjacency.

    Faces come from noding & polygonizing the chord segments together
    with the polygonized circle; two faces are adjacent when they share
    an edge lying on a chord (not on the boundary circle).
    """
    _detect_concurrency(chords)
    a, b = chords.endpoints()
    angles = sorted(
        [math.atan2(py, px) % TWO_PI for px, py in np.concatenate([a, b])]
    )
    # fill large boundary gaps so faces hug the circle
    ring: list[float] = []
    m = len(angles)
    if m == 0:
        angles = [0.0]
        m = 1
    for k in range(m):
        cur = angles[k]
        nxt = angles[(k + 1) % m] + (TWO_PI if k == m - 1 else 0.0)
        ring.append(cur)
        gap = nxt - cur
        extra = int(gap // boundary_gap)
        for s in range(1, extra + 1):
            ring.append(cur + gap * s / (extra + 1))
    boundary_pts = [(math.cos(t), math.sin(t)) for t in ring]
    edges = [LineString([boundary_pts[k], boundary_pts[(k + 1) % len(boundary_pts)]]) for k in range(len(boundary_pts))]
    segments = [LineString([pa, pb]) for pa, pb in zip(a, b)] + edges
    noded = unary_union(segments)
    faces = list(polygonize(noded))
    if not faces:
        raise DegenerateArrangement("polygonization produced no faces")

    # gather every face edge, endpoint-sorted and quantized for matching
    owners = []
    ends = []
    for fi, f in enumerate(faces):
        cs = np.asarray(f.exterior.coords)
        e = np.concatenate([cs[:-1], cs[1:]], axis=1)  # (m, 4): u, v
        owners.append(np.full(len(e), fi))
        ends.append(e)
    owners = np.concatenate(owners)
    ends = np.concatenate(ends)
    swap = (ends[:, 0] > ends[:, 2]) | (
        (ends[:, 0] == ends[:, 2]) & (ends[:, 1] > ends[:, 3])
    )
    ends[swap] = ends[swap][:, [2, 3, 0, 1]]
    keys = np.round(ends * 1e12).astype(np.int64)
    _, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    shared = counts[inverse] == 2
    order = np.argsort(inverse[shared], kind="stable")
    so = owners[shared][order]
    se = ends[shared][order]
    f0, f1 = so[0::2], so[1::2]
    mids = 0.25 * (se[0::2, 0:2] + se[0::2, 2:4] + se[1::2, 0:2] + se[1::2, 2:4])
    sin, cos = np.sin(chords.thetas), np.cos(chords.thetas)
    on_chord = (
        np.abs(mids[:, 0:1] * sin[None, :] - mids[:, 1:2] * cos[None, :] - chords.ps[None, :])
        < 1e-9
    ).any(axis=1)
    rows = np.concatenate([f0[on_chord], f1[on_chord]])
    cols = np.concatenate([f1[on_chord], f0[on_chord]])
    adj = coo_matrix(
        (np.ones(len(rows)), (rows, cols)), shape=(len(faces), len(faces))
    ).tocsr()
    return _Arrangement(faces=faces, adjacency=adj)


def _locate_many(faces, pts) -> list[int]:
    """Face index containing each point (nearest face for rim slivers)."""
    from shapely import STRtree

    tree = STRtree(faces)
    geoms = [Point(float(p[0]), float(p[1])) for p in pts]
    out = [-1] * len(geoms)
    qi, fi = tree.query(geoms, predicate="within")
    for q, f in zip(qi, fi):
        out[q] = int(f)
    for k, g in enumerate(geoms):
        if out[k] < 0:
            out[k] = int(tree.nearest(g))
    return out


def _locate(faces, z) -> int:
    return _locate_many(faces, [z])[0]


def cell_graph_distance(chords: ChordSet, x, y) -> int:
    """BFS distance between the arrangement cells containing x and y.

    Independent oracle for the separation count: builds the actual
    planar arrangement and walks the face-adjacency graph.
    """
    _check_inside(x)
    _check_inside(y)
    if chords.n == 0:
        return 0
    fx = _offsets_of(chords, x) - chords.ps
    fy = _offsets_of(chords, y) - chords.ps
    if np.any(fx == 0.0) or np.any(fy == 0.0):
        raise NonGenericPoint("query point lies on a chord")
    arr = _build_arrangement(chords)
    return _bfs_distance(arr, x, y)


def _bfs_distance(arr: _Arrangement, x, y) -> int:
    sx, sy = _locate(arr.faces, x), _locate(arr.faces, y)
    if sx == sy:
        return 0
    dist = dijkstra(arr.adjacency, directed=False, unweighted=True, indices=sx)
    d = dist[sy]
    if not math.isfinite(d):
        raise DegenerateArrangement("cell graph is disconnected")
    return int(round(d))


def cell_graph_distances(chords: ChordSet, pairs) -> list[int]:
    """Batched variant of cell_graph_distance sharing one arrangement."""
    arr = _build_arrangement(chords)
    keys = []
    for x, y in pairs:
        for z in (x, y):
            key = (float(z[0]), float(z[1]))
            if key not in keys:
                keys.append(key)
    found = _locate_many(arr.faces, keys)
    located = dict(zip(keys, found))
    unique_sources = sorted(set(found))
    table = dijkstra(arr.adjacency, directed=False, unweighted=True, indices=unique_sources)
    row_of = {s: k for k, s in enumerate(unique_sources)}
    out = []
    for x, y in pairs:
        sx = located[(float(x[0]), float(x[1]))]
        sy = located[(float(y[0]), float(y[1]))]
        d = 0.0 if sx == sy else table[row_of[sx], sy]
        if not math.isfinite(d):
            raise DegenerateArrangement("cell graph is disconnected")
        out.append(int(round(d)))
    return out


@dataclass(frozen=True)
class ExperimentReport:
    """Per-n distance/area discretization statistics against closed targets."""

    x: tuple[float, float]
    y: tuple[float, float]
    seed: int
    trials: int
    dist_target: float
    area_target: float
    rows: tuple  # (n, trial, dist_term, area_term)
    per_n: dict

    def to_json_dict(self) -> dict:
        return {
            "x": list(self.x),
            "y": list(self.y),
            "seed": self.seed,
            "trials": self.trials,
            "dist_target": self.dist_target,
            "area_target": self.area_target,
            "per_n": {str(k): v for k, v in self.per_n.items()},
        }


def _subseed(seed: int, n: int, trial: int) -> int:
    ss = np.random.SeedSequence([seed, n, trial])
    return int(ss.generate_state(1, np.uint64)[0])


def convergence_experiment(
    n_list, trials: int, x=(-0.5, 0.0), y=(0.5, 0.0), seed: int = 0
) -> ExperimentReport:
    """Sampled wall-system distance and area terms versus their limits.

    For each n and trial draws n chords and records (1/n) x separation
    count and 2/(n^2-n) x interior crossing count.  The targets are
    |x - y| / pi and 1/2 (unit disk: boundary length 2 pi, area pi).
    """
    _check_inside(x)
    _check_inside(y)
    dist_target = math.hypot(x[0] - y[0], x[1] - y[1]) / math.pi
    rows = []
    per_n: dict[int, dict] = {}
    for n in n_list:
        dvals, avals = [], []
        for trial in range(trials):
            chords = sample_chords(n, _subseed(seed, n, trial))
            chords = _nudge_generic(chords, x, y)
            dterm = separation_distance(chords, x, y) / n if n > 0 else 0.0
            aterm = 2.0 * crossing_area(chords) / (n * n - n) if n > 1 else 0.0
            rows.append((n, trial, dterm, aterm))
            dvals.append(dterm)
            avals.append(aterm)
        per_n[n] = {
            "mean_dist_term": float(np.mean(dvals)),
            "mean_area_term": float(np.mean(avals)),
            "abs_err_dist": abs(float(np.mean(dvals)) - dist_target),
            "abs_err_area": abs(float(np.mean(avals)) - 0.5),
            "trials": trials,
        }
    return ExperimentReport(
        x=tuple(x),
        y=tuple(y),
        seed=seed,
        trials=trials,
        dist_target=dist_target,
        area_target=0.5,
        rows=tuple(rows),
        per_n=per_n,
    )


def _nudge_generic(chords: ChordSet, x, y, scale: float = 1e-12) -> ChordSet:
    """Shift any chord passing exactly through a query point (measure zero)."""
    ps = chords.ps
    for z in (x, y):
        hit = np.abs(_offsets_of(chords, z) - ps) == 0.0
        if np.any(hit):
            logging.getLogger(__name__).info(
                "nudging %d chord(s) off query point %s by %g", int(hit.sum()), z, scale
            )
            ps = ps + hit * scale
    if ps is chords.ps:
        return chords
    return ChordSet(chords.thetas, ps, chords.seed)


def wlln_bound_check(
    n: int,
    eps: float,
    trials: int,
    seed: int = 0,
    family: str = "chords",
) -> dict:
    """Deviation probability of the pair-indicator mean vs the Chebyshev bound.

    The n(n-1)/2 crossing indicators of a chord set are identically
    distributed and mostly independent: the proportion of dependent
    ordered pairs is p = (4n - 6) / (n(n - 1)).  For centered variables
    the bound is Prob(|mean - E| >= eps) <= p E(X^2) / eps^2.  The
    expectation is estimated from an independent run and both the
    empirical deviation probability and its binomial standard error are
    reported.

    ``family``: "chords" (crossing indicators), "coins" (i.i.d. fair
    coins, classical sanity case), or "constant".
    """
    if n < 2:
        raise PreconditionError("need n >= 2")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0xC0FFEE]))
    n_pairs = n * (n - 1) // 2

    if family == "chords":
        p_dep = (4 * n - 6) / (n * (n - 1))
        est_trials = max(trials // 4, 50)
        big = [
            2.0 * crossing_area(sample_chords(n, _subseed(seed, n, 10_000 + t))) / (n * n - n)
            for t in range(est_trials)
        ]
        mean_est = float(np.mean(big))
        mean_se = float(np.std(big, ddof=1) / math.sqrt(est_trials))
        means = np.array(
            [
                2.0 * crossing_area(sample_chords(n, _subseed(seed, n, t))) / (n * n - n)
                for t in range(trials)
            ]
        )
        ex2 = mean_est * (1.0 - mean_est)  # centered indicator second moment
    elif family == "coins":
        p_dep = 1.0 / n_pairs  # only self-pairs are dependent
        mean_est, mean_se = 0.5, 0.0
        means = rng.binomial(n_pairs, 0.5, size=trials) / n_pairs
        ex2 = 0.25
    elif family == "constant":
        p_dep = 1.0
        mean_est, mean_se = 1.0, 0.0
        means = np.ones(trials)
        ex2 = 0.0
    else:
        raise PreconditionError(f"unknown family {family!r}")

    deviations = np.abs(means - mean_est) >= eps
    emp = float(np.mean(deviations))
    emp_se = math.sqrt(max(emp * (1 - emp), 1.0 / trials) / trials)
    bound = p_dep * ex2 / (eps * eps)
    return {
        "family": family,
        "n": n,
        "eps": eps,
        "trials": trials,
        "p_dependent": p_dep,
        "e_x2": ex2,
        "mean_estimate": mean_est,
        "mean_estimate_se": mean_se,
        "empirical_prob": emp,
        "empirical_se": emp_se,
        "bound": bound,
        "passes": emp <= bound + 3.0 * emp_se,
        "seed": seed,
    }
