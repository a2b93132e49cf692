"""Command-line interface.

Every stochastic run is reproducible from the recorded flags plus
--seed (default from WALLSYS_SEED).  Errors exit nonzero with a JSON
payload on stderr: 1 parse, 2 precondition, 3 numeric budget,
4 internal invariant.
"""

from __future__ import annotations

import json
import math
import os
import sys
from fractions import Fraction
from functools import wraps
from pathlib import Path

import click
import numpy as np

from . import chords as chords_mod
from . import disks, measures, moves, strands, svg
from .disks import Center, CylinderPoint, HalfInteger, IntervalFamily
from .errors import ParseError, WallsysError


def _fail(err: Exception, code: int) -> None:
    payload = {"error": {"type": type(err).__name__, "message": str(err), "exit_code": code}}
    click.echo(json.dumps(payload), err=True)
    sys.exit(code)


def wallsys_errors(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except WallsysError as exc:
            _fail(exc, exc.exit_code)
        except (json.JSONDecodeError, KeyError, ValueError, OSError) as exc:
            _fail(exc, 1)

    return wrapper


def _default_seed() -> int:
    return int(os.environ.get("WALLSYS_SEED", "0"))


seed_option = click.option("--seed", type=int, default=_default_seed, show_default="env WALLSYS_SEED or 0")


def _load_family(path: str) -> IntervalFamily:
    with open(path) as fh:
        return IntervalFamily.from_json_dict(json.load(fh))


def _dump_family(family: IntervalFamily, path: str) -> None:
    Path(path).write_text(json.dumps(family.to_json_dict(), indent=None, sort_keys=True) + "\n")


def _parse_point(text: str) -> CylinderPoint | type(Center):
    if text.strip().lower() == "center":
        return Center
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"point must be 'center' or 's2,h2', got {text!r}")
    return CylinderPoint(Fraction(parts[0]), Fraction(parts[1]))


def _parse_xy(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ParseError(f"expected 'x,y', got {text!r}")
    return (float(parts[0]), float(parts[1]))


def measure_to_json(mu) -> dict:
    if isinstance(mu, measures.Uniform):
        return {"kind": "uniform", "density": mu.density, "p_max": mu.p_max}
    if isinstance(mu, measures.ParallelFamily):
        return {
            "kind": "parallel_family",
            "theta": mu.theta,
            "weight": mu.weight,
            "t_min": mu.t_min,
            "t_max": mu.t_max,
        }
    if isinstance(mu, measures.GridDensity):
        return {
            "kind": "grid",
            "theta_edges": mu.theta_edges.tolist(),
            "p_edges": mu.p_edges.tolist(),
            "values": mu.values.tolist(),
        }
    if isinstance(mu, measures.Mixture):
        return {
            "kind": "mixture",
            "terms": [{"weight": w, "measure": measure_to_json(m)} for w, m in mu.terms],
        }
    raise ParseError(f"unknown measure type {type(mu)!r}")


def measure_from_json(obj: dict):
    kind = obj.get("kind")
    if kind == "uniform":
        return measures.Uniform(float(obj.get("density", 1.0)), obj.get("p_max"))
    if kind == "parallel_family":
        return measures.ParallelFamily(
            float(obj["theta"]),
            float(obj.get("weight", 1.0)),
            float(obj.get("t_min", 0.0)),
            obj.get("t_max"),
        )
    if kind == "grid":
        return measures.GridDensity(
            np.asarray(obj["theta_edges"]), np.asarray(obj["p_edges"]), np.asarray(obj["values"])
        )
    if kind == "mixture":
        return measures.Mixture(
            tuple((float(t["weight"]), measure_from_json(t["measure"])) for t in obj["terms"])
        )
    raise ParseError(f"unknown measure kind {kind!r}")


def measure_from_spec(spec: str):
    """'ext', 'uniform[:density[:p_max]]', or a path to a measure JSON file."""
    low = spec.strip().lower()
    if low == "ext":
        return measures.make_mu_ext()
    if low.startswith("uniform"):
        parts = low.split(":")
        density = float(parts[1]) if len(parts) > 1 else 1.0
        p_max = float(parts[2]) if len(parts) > 2 else None
        return measures.Uniform(density, p_max)
    with open(spec) as fh:
        return measure_from_json(json.load(fh))


@click.group()
def main():
    """Discrete metric disks, rewrite-move minimization, and line-measure geometry."""


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True))
@wallsys_errors
def validate(path):
    """Check the simple-disk conditions of a family file."""
    report = disks.validate(_load_family(path))
    click.echo(json.dumps(report.to_json_dict()))


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True))
@click.option("--raw", is_flag=True, help="skip the validity precondition")
@wallsys_errors
def area(path, raw):
    """Discrete area of a family, printed as an exact half-integer."""
    family = _load_family(path)
    value = disks.discrete_area_raw(family) if raw else disks.discrete_area(family)
    click.echo(json.dumps({"area": str(value), "area2": value.twice}))


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True))
@click.option("--p", "p_text", required=True, help="'center' or 's2,h2' (doubled, exact fractions ok)")
@click.option("--q", "q_text", required=True)
@click.option("--raw", is_flag=True)
@wallsys_errors
def distance(path, p_text, q_text, raw):
    """Discrete distance between two generic points of the cylinder model."""
    family = _load_family(path)
    p, q = _parse_point(p_text), _parse_point(q_text)
    fn = disks.discrete_distance_raw if raw else disks.discrete_distance
    click.echo(json.dumps({"distance": fn(family, p, q)}))


@main.command()
@click.option("--r", "radius", required=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
@wallsys_errors
def extremal(radius, out_path):
    """Write the area-minimizing disk of the given radius."""
    family = disks.extremal_disk(radius)
    _dump_family(family, out_path)
    click.echo(json.dumps({"n": family.n_walls, "circumference2": family.circumference2}))


@main.command()
@click.option("--in", "path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--log", "log_path", type=click.Path())
@wallsys_errors
def minimize(path, out_path, log_path):
    """Run the rewrite moves to a config-free family."""
    family = _load_family(path)
    result, log = moves.minimize(family)
    _dump_family(result, out_path)
    if log_path:
        Path(log_path).write_text(json.dumps([m.to_json_dict() for m in log]) + "\n")
    area2 = disks.discrete_area(result).twice
    click.echo(
        json.dumps(
            {
                "moves": len(log),
                "n": result.n_walls,
                "area": str(HalfInteger(area2)),
                "area2": area2,
            }
        )
    )


@main.command("enumerate")
@click.option("--r", "radius", required=True, type=int)
@click.option("--n-max", required=True, type=int)
@click.option("--out", "out_path", type=click.Path(), help="JSON-lines stream of {code,n,area2}")
@click.option("--summary", "summary_path", type=click.Path())
@click.option("--allow-large", is_flag=True)
@wallsys_errors
def enumerate_cmd(radius, n_max, out_path, summary_path, allow_large):
    """Exhaustively enumerate valid disks up to rotation/reflection."""
    stream = sys.stdout if out_path is None else open(out_path, "w")
    try:
        summary = {"r": radius, "n_max": n_max, "count": 0, "per_n": {}}
        min_area2 = None
        minimizers = []
        for code, n, area2 in moves.enumerate_disks(radius, n_max, allow_large):
            stream.write(json.dumps({"code": code.hex(), "n": n, "area2": area2}) + "\n")
            summary["count"] += 1
            summary["per_n"][str(n)] = summary["per_n"].get(str(n), 0) + 1
            if min_area2 is None or area2 < min_area2:
                min_area2, minimizers = area2, [code.hex()]
            elif area2 == min_area2:
                minimizers.append(code.hex())
        summary["min_area2"] = min_area2
        summary["min_area"] = str(HalfInteger(min_area2)) if min_area2 is not None else None
        summary["minimizer_codes"] = sorted(minimizers)
    finally:
        if out_path is not None:
            stream.close()
    text = json.dumps(summary)
    if summary_path:
        Path(summary_path).write_text(text + "\n")
    click.echo(text)


@main.command("strands")
@click.option("--in", "path", required=True, type=click.Path(exists=True))
@click.option("--t", "t2", type=int, default=0, show_default=True, help="strip cut (doubled, even)")
@wallsys_errors
def strands_cmd(path, t2):
    """Strand decomposition report with strip crossings and width-one arc."""
    family = _load_family(path)
    decomp = strands.strand_decomposition(family)
    crossings = strands.strip_crossings(family, t2)
    arc = strands.width_one_arc(decomp)
    click.echo(
        json.dumps(
            {
                "r": decomp.r,
                "n": decomp.n,
                "strands": [list(s) for s in decomp.strands],
                "widths2": [list(w) for w in decomp.widths],
                "offsets2": list(decomp.offsets2),
                "strip_crossings": str(crossings),
                "strip_crossings2": crossings.twice,
                "width_one_arc": list(arc) if arc else None,
            }
        )
    )


@main.command("mu-distance")
@click.option("--mu", "spec", required=True, help="'ext', 'uniform[:d[:pmax]]', or JSON path")
@click.option("--x", "x_text", required=True)
@click.option("--y", "y_text", required=True)
@wallsys_errors
def mu_distance_cmd(spec, x_text, y_text):
    """Projective distance between two plane points."""
    mu = measure_from_spec(spec)
    d = measures.mu_distance(mu, _parse_xy(x_text), _parse_xy(y_text))
    click.echo(json.dumps({"distance": d}))


@main.command("mu-ball")
@click.option("--mu", "spec", required=True)
@click.option("--r", "radius", required=True, type=float)
@click.option("--resolution", type=int, default=360, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(), help="CSV polyline x,y")
@wallsys_errors
def mu_ball_cmd(spec, radius, resolution, out_path):
    """Trace the metric ball boundary and write it as CSV."""
    mu = measure_from_spec(spec)
    pts = measures.mu_ball(mu, radius, resolution)
    with open(out_path, "w") as fh:
        fh.write("x,y\n")
        for x, y in pts:
            fh.write(f"{float(x)!r},{float(y)!r}\n")
    mags = np.hypot(pts[:, 0], pts[:, 1])
    click.echo(json.dumps({"resolution": resolution, "min_radius": float(mags.min()), "max_radius": float(mags.max())}))


def _load_polyline(path: str) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.lower().startswith("x"):
                continue
            a, b = line.split(",")
            rows.append((float(a), float(b)))
    return np.asarray(rows)


@main.command("mu-area")
@click.option("--mu", "spec", required=True)
@click.option("--region", "region_path", type=click.Path(exists=True), help="CSV polygon x,y")
@click.option("--ngon", type=int, help="use a regular n-gon inscribed in the unit circle")
@click.option("--method", type=click.Choice(["closed", "mc", "quadrature"]), default="closed")
@click.option("--samples", type=int, default=200_000, show_default=True)
@click.option("--grid", type=int, default=2048, show_default=True)
@seed_option
@wallsys_errors
def mu_area_cmd(spec, region_path, ngon, method, samples, grid, seed):
    """Santalo area of a polygon region."""
    mu = measure_from_spec(spec)
    if (region_path is None) == (ngon is None):
        raise ParseError("give exactly one of --region or --ngon")
    if ngon is not None:
        ang = np.linspace(0.0, 2 * math.pi, ngon, endpoint=False)
        region = np.column_stack([np.cos(ang), np.sin(ang)])
    else:
        region = _load_polyline(region_path)
    value = measures.santalo_area(mu, region, method=method, samples=samples, seed=seed, grid=grid)
    click.echo(json.dumps({"area": value, "method": method, "seed": seed}))


@main.command("mu-length")
@click.option("--mu", "spec", required=True)
@click.option("--polyline", "poly_path", required=True, type=click.Path(exists=True))
@click.option("--method", type=click.Choice(["closed", "mc", "quadrature"]), default="closed")
@click.option("--samples", type=int, default=200_000, show_default=True)
@seed_option
@wallsys_errors
def mu_length_cmd(spec, poly_path, method, samples, seed):
    """Crofton length of a CSV polyline."""
    mu = measure_from_spec(spec)
    pts = _load_polyline(poly_path)
    value = measures.crofton_length(mu, pts, method=method, samples=samples, seed=seed)
    click.echo(json.dumps({"length": value, "method": method, "seed": seed}))


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
@seed_option
@wallsys_errors
def sample(n, out_path, seed):
    """Sample chords of the unit disk to CSV (index,theta,p)."""
    cs = chords_mod.sample_chords(n, seed)
    with open(out_path, "w") as fh:
        fh.write("index,theta,p\n")
        for i, (t, p) in enumerate(zip(cs.thetas, cs.ps)):
            fh.write(f"{i},{float(t)!r},{float(p)!r}\n")
    click.echo(json.dumps({"n": n, "seed": seed, "path": out_path}))


@main.command()
@click.option("--n", "n_text", required=True, help="chord count, or comma list e.g. 500,2000")
@click.option("--trials", type=int, default=50, show_default=True)
@click.option("--x", "x_text", default="-0.5,0", show_default=True)
@click.option("--y", "y_text", default="0.5,0", show_default=True)
@click.option("--out", "out_path", type=click.Path(), help="CSV per-trial rows")
@seed_option
@wallsys_errors
def converge(n_text, trials, x_text, y_text, out_path, seed):
    """Distance/area discretization experiment against the closed targets."""
    n_list = [int(s) for s in n_text.split(",")]
    rep = chords_mod.convergence_experiment(
        n_list, trials, _parse_xy(x_text), _parse_xy(y_text), seed
    )
    if out_path:
        with open(out_path, "w") as fh:
            fh.write("n,trial,dist_term,area_term\n")
            for n, trial, dterm, aterm in rep.rows:
                fh.write(f"{n},{trial},{float(dterm)!r},{float(aterm)!r}\n")
    click.echo(json.dumps(rep.to_json_dict()))


@main.command()
@click.option("--n", required=True, type=int)
@click.option("--eps", required=True, type=float)
@click.option("--trials", type=int, default=2000, show_default=True)
@click.option("--family", type=click.Choice(["chords", "coins", "constant"]), default="chords")
@seed_option
@wallsys_errors
def wlln(n, eps, trials, family, seed):
    """Check the mostly-independent weak-law deviation bound empirically."""
    out = chords_mod.wlln_bound_check(n, eps, trials, seed, family)
    click.echo(json.dumps(out))


@main.command()
@click.option("--in", "family_path", type=click.Path(exists=True), help="family JSON to draw")
@click.option("--ball", "ball_paths", multiple=True, type=click.Path(exists=True), help="ball CSV polyline(s)")
@click.option("--chords", "chords_path", type=click.Path(exists=True), help="chords CSV to draw")
@click.option("--out", "out_path", required=True, type=click.Path())
@wallsys_errors
def render(family_path, ball_paths, chords_path, out_path):
    """Draw a family (tents + disk chords), ball polylines, or a chord set as SVG."""
    given = [bool(family_path), bool(ball_paths), bool(chords_path)]
    if sum(given) != 1:
        raise ParseError("give exactly one of --in, --ball, --chords")
    if family_path:
        doc = svg.family_svg(_load_family(family_path))
    elif ball_paths:
        doc = svg.polyline_svg([_load_polyline(p).tolist() for p in ball_paths])
    else:
        rows = []
        with open(chords_path) as fh:
            for line in fh:
                parts = line.strip().split(",")
                if len(parts) != 3 or not parts[0].isdigit():
                    continue
                rows.append((float(parts[1]), float(parts[2])))
        arr = np.asarray(rows).reshape(-1, 2)
        doc = svg.chords_svg(arr[:, 0], arr[:, 1])
    Path(out_path).write_text(doc)
    click.echo(json.dumps({"out": out_path}))


if __name__ == "__main__":
    main()
