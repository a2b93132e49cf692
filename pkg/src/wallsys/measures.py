"""Projective metrics from measures on the space of oriented lines.

An oriented line is the pair (theta, p): direction angle and signed
offset from the origin.  A reversal-invariant Borel measure mu on line
space induces a projective distance d(x, y) = mu(lines crossing the
segment [x, y]) / 4, a Crofton length for curves, and a Santalo area
area(D) = (1/8pi) iint #(g0 . g1 . D) dmu dmu.

Supported measure variants: uniform density (optionally band-limited in
p), parallel line families (stored as the half-weight pair of both
orientations), piecewise-constant grid densities, and finite mixtures.
Closed forms are used wherever the variant allows; quadrature and Monte
Carlo back the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, NamedTuple, Sequence, Union

import numpy as np
from scipy import integrate
from shapely import contains_xy, prepare
from shapely.geometry import LineString, MultiLineString, Polygon

from .errors import (
    NumericBudgetExceeded,
    GridTooCoarse,
    ParseError,
    PreconditionError,
    RayDegenerate,
    UnsupportedClosedForm,
    ZeroMass,
)

TWO_PI = 2.0 * math.pi


class PlanePoint(NamedTuple):
    x: float
    y: float


class LineCoord(NamedTuple):
    theta: float
    p: float

    def reverse(self) -> "LineCoord":
        return LineCoord((self.theta + math.pi) % TWO_PI, -self.p)


ORIGIN = PlanePoint(0.0, 0.0)


def line_offset(z: Sequence[float], theta: float) -> float:
    """Signed offset of the line through z with direction angle theta."""
    return z[0] * math.sin(theta) - z[1] * math.cos(theta)


def _offsets(z: Sequence[float], thetas: np.ndarray) -> np.ndarray:
    return z[0] * np.sin(thetas) - z[1] * np.cos(thetas)


@dataclass(frozen=True)
class Uniform:
    """Multiple of the standard d(theta) d(p) measure, optionally |p| <= p_max."""

    density: float = 1.0
    p_max: float | None = None

    def mass(self) -> float:
        if self.p_max is None:
            return math.inf
        return self.density * TWO_PI * 2.0 * self.p_max

    def seg_mass(self, x, y) -> float:
        amp = math.hypot(x[0] - y[0], x[1] - y[1])
        if self.p_max is None or max(math.hypot(*x), math.hypot(*y)) <= self.p_max:
            return self.density * 4.0 * amp
        pm = self.p_max

        def gap(theta: float) -> float:
            fx, fy = line_offset(x, theta), line_offset(y, theta)
            lo, hi = min(fx, fy), max(fx, fy)
            return max(0.0, min(hi, pm) - max(lo, -pm))

        out = integrate.quad(gap, 0.0, TWO_PI, limit=400, epsabs=1e-11, epsrel=1e-11, full_output=1)
        val, err = out[0], out[1]
        if err > 1e-6 * max(1.0, abs(val)):
            raise NumericBudgetExceeded(f"clipped uniform quadrature error {err}")
        return self.density * val

    def box_mass(self, t0, t1, p0, p1) -> float:
        pm = self.p_max
        lo, hi = (p0, p1) if pm is None else (max(p0, -pm), min(p1, pm))
        return self.density * max(0.0, t1 - t0) * max(0.0, hi - lo)

    def truncated(self, p_max: float) -> "Uniform":
        new = p_max if self.p_max is None else min(self.p_max, p_max)
        return Uniform(self.density, new)

    def scaled(self, c: float) -> "Uniform":
        return Uniform(self.density * c, self.p_max)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.p_max is None:
            raise PreconditionError("cannot sample an unbounded uniform measure")
        theta = rng.uniform(0.0, TWO_PI, n)
        p = rng.uniform(-self.p_max, self.p_max, n)
        return np.column_stack([theta, p])


@dataclass(frozen=True)
class ParallelFamily:
    """Lines of one direction with offsets t in [t_min, t_max], weight per unit t.

    Stored reversal-invariantly: half the weight sits on (theta, t) and
    half on (theta + pi, -t).
    """

    theta: float
    weight: float = 1.0
    t_min: float = 0.0
    t_max: float | None = None

    def __post_init__(self):
        if self.t_min < 0:
            raise ParseError("family offsets must satisfy t_min >= 0")

    def mass(self) -> float:
        if self.t_max is None:
            return math.inf
        return self.weight * max(0.0, self.t_max - self.t_min)

    def seg_mass(self, x, y) -> float:
        fx, fy = line_offset(x, self.theta), line_offset(y, self.theta)
        lo, hi = min(fx, fy), max(fx, fy)
        top = hi if self.t_max is None else min(hi, self.t_max)
        return self.weight * max(0.0, top - max(lo, self.t_min))

    def box_mass(self, t0, t1, p0, p1) -> float:
        tmax = math.inf if self.t_max is None else self.t_max
        out = 0.0
        if t0 <= self.theta % TWO_PI <= t1:
            out += 0.5 * self.weight * max(0.0, min(p1, tmax) - max(p0, self.t_min))
        if t0 <= (self.theta + math.pi) % TWO_PI <= t1:
            out += 0.5 * self.weight * max(0.0, min(p1, -self.t_min) - max(p0, -tmax))
        return out

    def truncated(self, p_max: float) -> "ParallelFamily":
        top = p_max if self.t_max is None else min(self.t_max, p_max)
        return ParallelFamily(self.theta, self.weight, min(self.t_min, top), top)

    def scaled(self, c: float) -> "ParallelFamily":
        return ParallelFamily(self.theta, self.weight * c, self.t_min, self.t_max)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.t_max is None:
            raise PreconditionError("cannot sample an unbounded family; truncate first")
        t = rng.uniform(self.t_min, self.t_max, n)
        flip = rng.integers(0, 2, n).astype(bool)
        theta = np.where(flip, (self.theta + math.pi) % TWO_PI, self.theta % TWO_PI)
        p = np.where(flip, -t, t)
        return np.column_stack([theta, p])


@dataclass(frozen=True, eq=False)
class GridDensity:
    """Piecewise-constant density on a theta x p grid (wrt dtheta dp)."""

    theta_edges: np.ndarray  # (nt+1,), spanning [0, 2pi]
    p_edges: np.ndarray  # (np+1,), increasing
    values: np.ndarray  # (nt, np), >= 0

    def __post_init__(self):
        object.__setattr__(self, "theta_edges", np.asarray(self.theta_edges, dtype=float))
        object.__setattr__(self, "p_edges", np.asarray(self.p_edges, dtype=float))
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
        if (self.values < 0).any():
            raise ParseError("grid density values must be nonnegative")

    def _cell_dp(self) -> np.ndarray:
        return np.diff(self.p_edges)

    def _cell_dt(self) -> np.ndarray:
        return np.diff(self.theta_edges)

    def mass(self) -> float:
        return float((self.values * self._cell_dp()[None, :]).sum(axis=1) @ self._cell_dt())

    def _strip_cums(self) -> np.ndarray:
        # cums[i, j] = integral of density over strip i, p_edges[0] .. p_edges[j]
        dp = self._cell_dp()
        cums = np.zeros((self.values.shape[0], self.values.shape[1] + 1))
        np.cumsum(self.values * dp, axis=1, out=cums[:, 1:])
        return cums

    def _mass_between(self, strip_idx: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Integral over p in [a, b] of the strip densities (vectorized)."""
        cums = self._strip_cums_cached()
        edges = self.p_edges
        a = np.clip(a, edges[0], edges[-1])
        b = np.clip(b, edges[0], edges[-1])

        def F(v):
            j = np.clip(np.searchsorted(edges, v, side="right") - 1, 0, len(edges) - 2)
            return cums[strip_idx, j] + self.values[strip_idx, j] * (v - edges[j])

        return F(b) - F(a)

    def _strip_cums_cached(self) -> np.ndarray:
        cached = getattr(self, "_cums", None)
        if cached is None:
            cached = self._strip_cums()
            object.__setattr__(self, "_cums", cached)
        return cached

    def seg_mass(self, x, y, nodes: int = 8) -> float:
        xg, wg = np.polynomial.legendre.leggauss(nodes)
        t0 = self.theta_edges[:-1]
        dt = self._cell_dt()
        nonzero = self.values.max(axis=1) > 0
        idx = np.nonzero(nonzero)[0]
        if idx.size == 0:
            return 0.0
        # Gauss nodes for every nonzero strip
        thetas = t0[idx, None] + (xg[None, :] + 1.0) * 0.5 * dt[idx, None]
        weights = wg[None, :] * 0.5 * dt[idx, None]
        strips = np.repeat(idx, nodes)
        th = thetas.ravel()
        fx, fy = _offsets(x, th), _offsets(y, th)
        lo, hi = np.minimum(fx, fy), np.maximum(fx, fy)
        vals = self._mass_between(strips, lo, hi)
        return float(vals @ weights.ravel())

    def box_mass(self, t0, t1, p0, p1) -> float:
        te, pe = self.theta_edges, self.p_edges
        ot = np.clip(np.minimum(te[1:], t1) - np.maximum(te[:-1], t0), 0.0, None)
        op = np.clip(np.minimum(pe[1:], p1) - np.maximum(pe[:-1], p0), 0.0, None)
        return float(ot @ self.values @ op)

    def truncated(self, p_max: float) -> "GridDensity":
        pe = self.p_edges
        new_edges = np.unique(np.concatenate([pe, [-p_max, p_max]]))
        new_edges = new_edges[(new_edges >= pe[0]) & (new_edges <= pe[-1])]
        idx = np.clip(np.searchsorted(pe, new_edges[:-1], side="right") - 1, 0, len(pe) - 2)
        vals = self.values[:, idx].copy()
        centers = 0.5 * (new_edges[:-1] + new_edges[1:])
        vals[:, np.abs(centers) > p_max] = 0.0
        return GridDensity(self.theta_edges, new_edges, vals)

    def scaled(self, c: float) -> "GridDensity":
        return GridDensity(self.theta_edges, self.p_edges, self.values * c)

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        dt, dp = self._cell_dt(), self._cell_dp()
        masses = (self.values * dp) * dt[:, None]
        flat = masses.ravel()
        total = flat.sum()
        if total <= 0:
            raise ZeroMass("cannot sample a zero-mass grid")
        cells = rng.choice(flat.size, size=n, p=flat / total)
        it, ip = np.unravel_index(cells, masses.shape)
        theta = self.theta_edges[it] + rng.random(n) * dt[it]
        p = self.p_edges[ip] + rng.random(n) * dp[ip]
        return np.column_stack([theta, p])


@dataclass(frozen=True)
class Mixture:
    terms: tuple[tuple[float, "LineMeasure"], ...]

    def __post_init__(self):
        for w, _ in self.terms:
            if w < 0:
                raise ParseError("mixture weights must be nonnegative")

    def mass(self) -> float:
        return sum(w * m.mass() for w, m in self.terms)

    def seg_mass(self, x, y) -> float:
        return sum(w * m.seg_mass(x, y) for w, m in self.terms)

    def box_mass(self, t0, t1, p0, p1) -> float:
        return sum(w * m.box_mass(t0, t1, p0, p1) for w, m in self.terms)

    def truncated(self, p_max: float) -> "Mixture":
        return Mixture(tuple((w, m.truncated(p_max)) for w, m in self.terms))

    def scaled(self, c: float) -> "Mixture":
        return Mixture(tuple((w * c, m) for w, m in self.terms))

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        weights = np.array([w * m.mass() for w, m in self.terms])
        if not np.isfinite(weights).all():
            raise PreconditionError("cannot sample a mixture with unbounded components")
        total = weights.sum()
        if total <= 0:
            raise ZeroMass("cannot sample a zero-mass mixture")
        counts = rng.multinomial(n, weights / total)
        parts = [m.sample(k, rng) for (w, m), k in zip(self.terms, counts) if k > 0]
        out = np.concatenate(parts) if parts else np.empty((0, 2))
        rng.shuffle(out)
        return out


LineMeasure = Union[Uniform, ParallelFamily, GridDensity, Mixture]


def mu_distance(mu: LineMeasure, x, y) -> float:
    """Projective distance: one quarter of the mass of lines crossing [x, y]."""
    return 0.25 * mu.seg_mass(x, y)


def make_mu_ext() -> Mixture:
    """The three-family measure whose metric balls are regular hexagons.

    Parallel families at mutual angle 2pi/3 with offsets t >= 0; the
    unit-speed ball of radius r has vertices (8*sqrt(3)/3) r at angles
    k*pi/3 and area (6/pi) r^2.
    """
    return Mixture(tuple((1.0, ParallelFamily(2.0 * k * math.pi / 3.0)) for k in range(3)))


def truncate(mu: LineMeasure, p_max: float) -> LineMeasure:
    """Restrict the measure to lines with |p| <= p_max."""
    if p_max <= 0:
        raise PreconditionError("p_max must be positive")
    return mu.truncated(p_max)


def normalize(mu: LineMeasure) -> tuple[LineMeasure, float]:
    """Rescale to a probability measure; returns (measure, original mass)."""
    m = mu.mass()
    if not math.isfinite(m) or m <= 0:
        raise ZeroMass(f"total mass {m} is not finite and positive")
    return mu.scaled(1.0 / m), m


def mu_ball(
    mu: LineMeasure, r: float, resolution: int, rel_tol: float = 1e-9
) -> np.ndarray:
    """Polyline of the metric ball boundary around the origin.

    Traces ``resolution`` equally spaced directions; along each ray the
    distance from the origin is nondecreasing, so the boundary radius is
    found by bracketed bisection to relative tolerance ``rel_tol``.
    """
    if r <= 0 or resolution < 3:
        raise PreconditionError("need r > 0 and resolution >= 3")
    pts = np.empty((resolution, 2))
    for k in range(resolution):
        phi = TWO_PI * k / resolution
        e = (math.cos(phi), math.sin(phi))

        def dist(s: float) -> float:
            return mu_distance(mu, ORIGIN, (s * e[0], s * e[1]))

        d1 = dist(1.0)
        s_hi = r / d1 if d1 > 0 else 1.0
        s_lo = 0.0
        grow = 0
        while dist(s_hi) < r:
            s_lo = s_hi
            s_hi *= 2.0
            grow += 1
            if grow > 200:
                raise RayDegenerate(f"distance along direction {phi:.6f} never reaches {r}")
        while s_hi - s_lo > rel_tol * s_hi:
            mid = 0.5 * (s_lo + s_hi)
            if dist(mid) < r:
                s_lo = mid
            else:
                s_hi = mid
        s = 0.5 * (s_lo + s_hi)
        pts[k] = (s * e[0], s * e[1])
    return pts


def _flatten(mu: LineMeasure, coef: float = 1.0) -> Iterator[tuple[float, LineMeasure]]:
    if isinstance(mu, Mixture):
        for w, m in mu.terms:
            yield from _flatten(m, coef * w)
    else:
        yield coef, mu


def _region_polygon(region) -> Polygon:
    pts = np.asarray(region, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3:
        return Polygon()
    poly = Polygon(pts)
    if not poly.is_valid or poly.area == 0:
        poly = poly.buffer(0)
    return poly


def _strip_polygon(v: np.ndarray, lo: float, hi: float, radius: float) -> Polygon:
    lo = max(lo, -radius)
    hi = min(hi, radius)
    if hi <= lo:
        return Polygon()
    u = np.array([-v[1], v[0]])
    corners = [
        lo * v + radius * u,
        hi * v + radius * u,
        hi * v - radius * u,
        lo * v - radius * u,
    ]
    return Polygon(corners)


def _closed_pair_mass(a_coef, a, b_coef, b, poly: Polygon, radius: float) -> float:
    """iint over (a x b) of the indicator that the two lines meet inside poly."""
    if isinstance(a, Uniform) and isinstance(b, Uniform):
        for u in (a, b):
            if u.p_max is not None and u.p_max < radius:
                raise NumericBudgetExceeded(
                    "closed Santalo for a band-limited uniform needs p_max >= region radius"
                )
        return a_coef * b_coef * a.density * b.density * 8.0 * math.pi * poly.area
    if isinstance(a, Uniform):
        a_coef, a, b_coef, b = b_coef, b, a_coef, a
    if isinstance(a, ParallelFamily) and isinstance(b, Uniform):
        if b.p_max is not None and b.p_max < radius:
            raise NumericBudgetExceeded(
                "closed Santalo for a band-limited uniform needs p_max >= region radius"
            )
        v = np.array([math.sin(a.theta), -math.cos(a.theta)])
        clipped = poly.intersection(
            _strip_polygon(v, a.t_min, math.inf if a.t_max is None else a.t_max, radius)
        )
        return a_coef * b_coef * a.weight * b.density * 4.0 * clipped.area
    assert isinstance(a, ParallelFamily) and isinstance(b, ParallelFamily)
    det = abs(math.sin(b.theta - a.theta))
    if det == 0.0:
        return 0.0
    va = np.array([math.sin(a.theta), -math.cos(a.theta)])
    vb = np.array([math.sin(b.theta), -math.cos(b.theta)])
    clipped = poly.intersection(
        _strip_polygon(va, a.t_min, math.inf if a.t_max is None else a.t_max, radius)
    ).intersection(
        _strip_polygon(vb, b.t_min, math.inf if b.t_max is None else b.t_max, radius)
    )
    return a_coef * b_coef * a.weight * b.weight * det * clipped.area


def _pair_intersections(lines0: np.ndarray, lines1: np.ndarray) -> np.ndarray:
    """Intersection points of line pairs given as (theta, p) rows."""
    t0, p0 = lines0[:, 0], lines0[:, 1]
    t1, p1 = lines1[:, 0], lines1[:, 1]
    det = np.sin(t1 - t0)
    with np.errstate(divide="ignore", invalid="ignore"):
        x = (p1 * np.cos(t0) - p0 * np.cos(t1)) / det
        y = (p1 * np.sin(t0) - p0 * np.sin(t1)) / det
    bad = ~np.isfinite(x) | ~np.isfinite(y)
    x[bad] = 1e30
    y[bad] = 1e30
    return np.column_stack([x, y])


def santalo_area(
    mu: LineMeasure,
    region,
    method: str = "closed",
    samples: int = 200_000,
    seed: int = 0,
    grid: int = 2048,
) -> float:
    """Area of a simple polygon under the pair-crossing double integral.

    ``closed`` evaluates exactly for uniform measures and mixtures of
    parallel families (polygon clipping in the family parameters);
    ``mc`` averages the pair-crossing indicator over line pairs drawn
    from the truncated measure; ``quadrature`` integrates the measured
    length of each chord over a deterministic line grid.
    """
    poly = _region_polygon(region)
    if poly.is_empty or poly.area == 0.0:
        return 0.0
    radius = max(math.hypot(px, py) for px, py in zip(*poly.exterior.coords.xy)) + 1e-9

    if method == "closed":
        leaves = list(_flatten(mu))
        if any(isinstance(m, GridDensity) for _, m in leaves):
            raise UnsupportedClosedForm("no closed Santalo form for grid densities")
        total = 0.0
        for ca, a in leaves:
            for cb, b in leaves:
                total += _closed_pair_mass(ca, a, cb, b, poly, radius)
        return total / (8.0 * math.pi)

    if method == "mc":
        trunc = truncate(mu, radius)
        m_total = trunc.mass()
        rng = np.random.default_rng(seed)
        prepare(poly)
        hits = 0
        done = 0
        chunk = 250_000
        while done < samples:
            k = min(chunk, samples - done)
            lines0 = trunc.sample(k, rng)
            lines1 = trunc.sample(k, rng)
            pts = _pair_intersections(lines0, lines1)
            hits += int(np.count_nonzero(contains_xy(poly, pts[:, 0], pts[:, 1])))
            done += k
        return (m_total**2 / (8.0 * math.pi)) * (hits / samples)

    if method == "quadrature":
        lines, weights = _discretize(mu, radius, grid)
        total = 0.0
        for (theta, p), w in zip(lines, weights):
            if w == 0.0:
                continue
            total += w * _chord_mu_length(mu, poly, theta, p, radius)
        return total / (2.0 * math.pi)

    raise ParseError(f"unknown method {method!r}")


def _chord_mu_length(mu: LineMeasure, poly: Polygon, theta: float, p: float, radius: float) -> float:
    v = (math.sin(theta), -math.cos(theta))
    d = (math.cos(theta), math.sin(theta))
    base = (p * v[0], p * v[1])
    span = 2.0 * radius
    seg = LineString(
        [
            (base[0] - span * d[0], base[1] - span * d[1]),
            (base[0] + span * d[0], base[1] + span * d[1]),
        ]
    )
    inter = poly.intersection(seg)
    if inter.is_empty:
        return 0.0
    pieces = []
    if isinstance(inter, LineString):
        pieces = [inter]
    elif isinstance(inter, MultiLineString):
        pieces = list(inter.geoms)
    total = 0.0
    for piece in pieces:
        cs = list(piece.coords)
        for u, w in zip(cs[:-1], cs[1:]):
            total += mu_distance(mu, u, w)
    return total


def _discretize(mu: LineMeasure, radius: float, budget: int) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic weighted line set approximating mu on |p| <= radius."""
    leaves = list(_flatten(truncate(mu, radius)))
    masses = np.array([c * m.mass() for c, m in leaves])
    total = masses.sum()
    lines: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    for (coef, leaf), m in zip(leaves, masses):
        if m <= 0:
            continue
        quota = max(16, int(budget * m / total))
        if isinstance(leaf, ParallelFamily):
            step = (leaf.t_max - leaf.t_min) / quota
            t = leaf.t_min + (np.arange(quota) + 0.5) * step
            # both orientations give the same chord, so one entry carries
            # the full weight
            lines.append(np.column_stack([np.full(quota, leaf.theta % TWO_PI), t]))
            weights.append(np.full(quota, coef * leaf.weight * step))
        elif isinstance(leaf, Uniform):
            nt = max(8, int(round(math.sqrt(quota))))
            npp = max(8, quota // nt)
            th = (np.arange(nt) + 0.5) * TWO_PI / nt
            # sine-spaced p cells: chord-type integrands are singular like
            # sqrt(p_max - |p|) at the rim, smooth in the sine parameter
            phi_edges = np.linspace(-0.5 * math.pi, 0.5 * math.pi, npp + 1)
            p_edges = leaf.p_max * np.sin(phi_edges)
            pp = 0.5 * (p_edges[:-1] + p_edges[1:])
            cellp = np.diff(p_edges)
            T, P = np.meshgrid(th, pp, indexing="ij")
            W = coef * leaf.density * (TWO_PI / nt) * np.broadcast_to(cellp, T.shape)
            lines.append(np.column_stack([T.ravel(), P.ravel()]))
            weights.append(W.ravel().copy())
        else:  # GridDensity
            dt = np.diff(leaf.theta_edges)
            dp = np.diff(leaf.p_edges)
            cellm = leaf.values * dp[None, :] * dt[:, None]
            it, ip = np.nonzero(cellm > 0)
            order = np.argsort(cellm[it, ip])[::-1][: max(quota, 1)]
            it, ip = it[order], ip[order]
            tc = leaf.theta_edges[it] + 0.5 * dt[it]
            pc = leaf.p_edges[ip] + 0.5 * dp[ip]
            kept = cellm[it, ip]
            scale = cellm.sum() / kept.sum()
            lines.append(np.column_stack([tc, pc]))
            weights.append(coef * kept * scale)
    if not lines:
        return np.empty((0, 2)), np.empty(0)
    return np.concatenate(lines), np.concatenate(weights)


def crofton_length(
    mu: LineMeasure,
    polyline,
    method: str = "closed",
    samples: int = 200_000,
    seed: int = 0,
    grid: int = 2048,
) -> float:
    """Length of a polyline: quarter of the crossing count integral.

    The closed form sums the exact segment masses, which counts each
    line once per segment it crosses (the multiplicity in the Crofton
    integral); mc and quadrature integrate the crossing count against
    sampled or gridded lines.
    """
    pts = np.asarray(polyline, dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 2:
        return 0.0

    if method == "closed":
        return sum(mu_distance(mu, pts[i], pts[i + 1]) for i in range(len(pts) - 1))

    radius = float(np.max(np.hypot(pts[:, 0], pts[:, 1]))) + 1e-9
    if method == "mc":
        trunc = truncate(mu, radius)
        m_total = trunc.mass()
        rng = np.random.default_rng(seed)
        total = 0
        done = 0
        chunk = max(1, min(200_000, int(2e7 / max(1, len(pts)))))
        while done < samples:
            k = min(chunk, samples - done)
            lines = trunc.sample(k, rng)
            total += int(_crossing_counts(lines, pts).sum())
            done += k
        return 0.25 * m_total * total / samples

    if method == "quadrature":
        lines, weights = _discretize(mu, radius, grid)
        counts = _crossing_counts(lines, pts)
        return 0.25 * float(counts @ weights)

    raise ParseError(f"unknown method {method!r}")


def _crossing_counts(lines: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Per line, the number of polyline segments it crosses."""
    theta, p = lines[:, 0], lines[:, 1]
    sin, cos = np.sin(theta), np.cos(theta)
    f = pts[:, 0][:, None] * sin[None, :] - pts[:, 1][:, None] * cos[None, :]
    g = f - p[None, :]
    return ((g[:-1] * g[1:]) < 0).sum(axis=0)


# --- smoothing -------------------------------------------------------------


@lru_cache(maxsize=8)
def _bump_tables(eps: float, n: int = 4097):
    """Normalized C-infinity bump on (-eps, eps): values, CDF, and CDF integral."""
    u = np.linspace(-1.0, 1.0, n)
    vals = np.zeros_like(u)
    inner = np.abs(u) < 1.0
    vals[inner] = np.exp(-1.0 / (1.0 - u[inner] ** 2))
    du = u[1] - u[0]
    total = np.trapezoid(vals, dx=du)
    vals /= total * eps  # unit integral over (-eps, eps) in t = eps * u
    t = u * eps
    cdf = np.concatenate([[0.0], np.cumsum(0.5 * (vals[1:] + vals[:-1]) * np.diff(t))])
    cdf /= cdf[-1]
    cdf_int = np.concatenate([[0.0], np.cumsum(0.5 * (cdf[1:] + cdf[:-1]) * np.diff(t))])
    return t, vals, cdf, cdf_int


def _bump_cdf(eps: float, x: np.ndarray) -> np.ndarray:
    t, _, cdf, _ = _bump_tables(eps)
    return np.interp(x, t, cdf, left=0.0, right=1.0)


def _bump_cdf_int(eps: float, x: np.ndarray) -> np.ndarray:
    """Antiderivative of the kernel CDF, linear (slope 1) above eps."""
    t, _, _, cdf_int = _bump_tables(eps)
    out = np.interp(x, t, cdf_int, left=0.0, right=0.0)
    high = x >= t[-1]
    out[high] = cdf_int[-1] + (x[high] - t[-1])
    return out


def convolve(
    mu0: LineMeasure,
    eps: float,
    n_theta: int | None = None,
    n_p: int | None = None,
    mass_rel_tol: float = 1e-3,
) -> GridDensity:
    """Smooth a finite-mass measure with the product bump kernel of width eps.

    Returns a grid density with at least 8 cells across the kernel
    support per axis, total mass preserved to ``mass_rel_tol``, and
    reversal invariance enforced by symmetrization.
    """
    if not (0.0 < eps < 1.0):
        raise PreconditionError("eps must lie in (0, 1)")
    leaves = list(_flatten(mu0))
    if any(isinstance(m, GridDensity) for _, m in leaves):
        raise PreconditionError("convolve expects uniform/family components")
    target_mass = mu0.mass()
    if not math.isfinite(target_mass) or target_mass <= 0:
        raise ZeroMass("convolve needs a finite positive mass; truncate first")

    p_hi = 0.0
    for _, leaf in leaves:
        if isinstance(leaf, ParallelFamily):
            p_hi = max(p_hi, leaf.t_max)
        else:
            p_hi = max(p_hi, leaf.p_max)
    p_hi += eps

    cell = eps / 8.0
    if n_theta is None:
        n_theta = int(2 * round(TWO_PI / cell / 2)) or 2
    if n_theta % 2:
        n_theta += 1
    if n_p is None:
        n_p = int(2 * round(p_hi / cell))
    theta_edges = np.linspace(0.0, TWO_PI, n_theta + 1)
    p_edges = np.linspace(-p_hi, p_hi, n_p + 1)
    values = np.zeros((n_theta, n_p))

    dtheta = np.diff(theta_edges)
    dp = np.diff(p_edges)

    def theta_cell_kernel(center: float) -> np.ndarray:
        # integral of the angular kernel over each theta cell, wrapped
        lo = theta_edges[:-1] - center
        hi = theta_edges[1:] - center
        out = np.zeros(n_theta)
        for shift in (-TWO_PI, 0.0, TWO_PI):
            out += _bump_cdf(eps, hi + shift) - _bump_cdf(eps, lo + shift)
        return out

    def p_cell_int_of_cdf(offset: float) -> np.ndarray:
        # integral over each p cell of CDF(p - offset)
        lo = p_edges[:-1] - offset
        hi = p_edges[1:] - offset
        return _bump_cdf_int(eps, hi) - _bump_cdf_int(eps, lo)

    for coef, leaf in leaves:
        if isinstance(leaf, ParallelFamily):
            w = coef * leaf.weight
            for ang, positive in ((leaf.theta, True), (leaf.theta + math.pi, False)):
                tk = theta_cell_kernel(ang % TWO_PI)
                # smoothed support indicator, integrated over each p cell
                if positive:
                    pint = p_cell_int_of_cdf(leaf.t_min) - p_cell_int_of_cdf(leaf.t_max)
                else:
                    pint = p_cell_int_of_cdf(-leaf.t_max) - p_cell_int_of_cdf(-leaf.t_min)
                values += 0.5 * w * np.outer(tk, pint) / (dtheta[:, None] * dp[None, :])
        else:
            rho = coef * leaf.density
            pint = p_cell_int_of_cdf(-leaf.p_max) - p_cell_int_of_cdf(leaf.p_max)
            values += rho * pint[None, :] / dp[None, :]

    half = n_theta // 2
    sym = 0.5 * (values + np.roll(values, half, axis=0)[:, ::-1])
    scale = sym.max(initial=0.0)
    if sym.min(initial=0.0) < -1e-9 * scale:
        raise GridTooCoarse("convolution produced significantly negative densities")
    sym = np.maximum(sym, 0.0)  # clear roundoff negatives
    grid = GridDensity(theta_edges, p_edges, sym)
    got = grid.mass()
    if abs(got - target_mass) > mass_rel_tol * target_mass:
        raise GridTooCoarse(f"grid mass {got} vs expected {target_mass}")
    return grid


def mix(mu_eps: LineMeasure, eps: float, lambda0: LineMeasure) -> Mixture:
    """The convex combination (1 - eps) * mu_eps + eps * lambda0."""
    if not (0.0 < eps < 1.0):
        raise PreconditionError("eps must lie in (0, 1)")
    return Mixture(((1.0 - eps, mu_eps), (eps, lambda0)))
