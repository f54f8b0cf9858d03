"""Command-line front end.

Subcommands
-----------
quad check W0 W1 W2 D      validity/genus report for a quadruple
poly analyze W0 W1 W2 D    polytope, case identities, projection
classify                   group g-good quadruples into an atlas file
polygons enum              enumerate polygon classes for a genus
map curve <8 ints>         transport a curve between equivalent quadruples

Configuration is read from wpoly.json in the working directory (keys
d_max_cap, jobs, atlas_dir, format, seed); the WPOLY_ATLAS_DIR
environment variable overrides the atlas directory, and flags override
both.

Exit codes: 0 success; 1 bad input or precondition failure; 2 is
reserved for violations of derived invariants (never for user error).

Curve files are JSON: {"terms": [{"coef": "5" or "3/2", "exponents":
[a, b, c]}, ...]} with each monomial of full weighted degree.
"""
from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import click

from .classify import (
    basis_change,
    enumerate_classes,
    group_by_class,
    make_curve,
    map_curve,
    stabilization_report,
)
from .errors import DegenerateInputError, InvariantViolation, PreconditionError
from .polygon2d import canonical_form, equivalent, project
from .quadruples import D_MAX_CAP, Quadruple, validate
from .render import render_polygon_svg
from .wpolytope import build, find_unimodular_triple, verify_case_identities

CONFIG_FILENAME = "wpoly.json"
ATLAS_ENV = "WPOLY_ATLAS_DIR"


@dataclass(frozen=True)
class Config:
    d_max_cap: int = D_MAX_CAP
    jobs: int = 1
    atlas_dir: str = "atlas"
    format: str = "text"
    seed: int = 0

    def __post_init__(self) -> None:
        if not (1 <= self.d_max_cap <= D_MAX_CAP):
            raise PreconditionError(
                f"config d_max_cap must be in [1, {D_MAX_CAP}], got {self.d_max_cap}"
            )
        if self.jobs < 1:
            raise PreconditionError(f"config jobs must be >= 1, got {self.jobs}")
        if self.format not in ("text", "json"):
            raise PreconditionError(f"config format must be text or json, got {self.format!r}")


def load_config(cwd: str | None = None) -> Config:
    path = Path(cwd or os.getcwd()) / CONFIG_FILENAME
    data: dict = {}
    if path.is_file():
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise PreconditionError(f"{path}: not valid JSON ({exc})") from exc
        if not isinstance(data, dict):
            raise PreconditionError(f"{path}: top level must be an object")
        unknown = set(data) - {"d_max_cap", "jobs", "atlas_dir", "format", "seed"}
        if unknown:
            raise PreconditionError(f"{path}: unknown keys {sorted(unknown)}")
    env_dir = os.environ.get(ATLAS_ENV)
    if env_dir:
        data["atlas_dir"] = env_dir
    try:
        return Config(**data)
    except TypeError as exc:
        raise PreconditionError(f"{path}: bad config ({exc})") from exc


def _fmt_fraction(x: Fraction) -> str:
    return str(x)


@click.group()
@click.pass_context
def cli(ctx: click.Context) -> None:
    """Exact lattice-polytope toolkit for weighted plane curves."""
    ctx.obj = load_config()


@cli.group()
def quad() -> None:
    """Quadruple-level checks."""


@quad.command("check")
@click.argument("w0", type=int)
@click.argument("w1", type=int)
@click.argument("w2", type=int)
@click.argument("d", type=int)
@click.option("--json", "as_json", is_flag=True, help="emit the report as JSON")
@click.pass_obj
def quad_check(cfg: Config, w0: int, w1: int, w2: int, d: int, as_json: bool) -> None:
    """Report pairwise coprimality, degree conditions, and genus."""
    q = Quadruple(w0, w1, w2, d)
    report = validate(q)
    if as_json or cfg.format == "json":
        click.echo(json.dumps(report.to_dict(), indent=2))
        return
    click.echo(f"quadruple        {q}")
    click.echo(f"pairwise coprime {report.pairwise_coprime}")
    click.echo(f"degree dominates {report.degree_dominates}")
    click.echo(f"condition (i)    {[w is not None for w in report.condition_i]}")
    click.echo(f"condition (ii)   {[w is not None for w in report.condition_ii]}")
    click.echo(f"good             {report.is_good}")
    if report.genus is not None:
        click.echo(f"genus            {report.genus}")


@cli.group()
def poly() -> None:
    """Polytope-level analysis."""


@poly.command("analyze")
@click.argument("w0", type=int)
@click.argument("w1", type=int)
@click.argument("w2", type=int)
@click.argument("d", type=int)
@click.option("--json", "as_json", is_flag=True, help="emit the report as JSON")
@click.option("--svg", "svg_path", type=click.Path(dir_okay=False), default=None,
              help="write an SVG of the projected polygon")
@click.pass_obj
def poly_analyze(cfg: Config, w0: int, w1: int, w2: int, d: int,
                 as_json: bool, svg_path: str | None) -> None:
    """Build the polytope of a good quadruple and verify its case identities."""
    q = Quadruple(w0, w1, w2, d)
    p = build(q)
    case = verify_case_identities(p)
    triple = find_unimodular_triple(p)
    polygon = project(p, triple)
    canon = canonical_form(polygon)
    payload = {
        "quadruple": [*q.weights, q.d],
        "genus": p.genus,
        "n": p.n,
        "interior": len(p.interior),
        "exceptional_bound": p.exceptional_bound,
        "case": case.to_dict(),
        "triple": [list(row) for row in triple],
        "projected": polygon.to_json_dict()["vertices"],
        "canonical": canon.to_json_dict()["vertices"],
    }
    if svg_path is not None:
        Path(svg_path).write_text(render_polygon_svg(polygon), encoding="utf-8")
    if as_json or cfg.format == "json":
        click.echo(json.dumps(payload, indent=2))
        return
    click.echo(f"quadruple   {q}")
    click.echo(f"genus       {p.genus}")
    click.echo(f"points      {p.n}" + ("  (exceeds soft bound 3g+6)" if p.exceptional_bound else ""))
    click.echo(f"interior    {len(p.interior)}")
    click.echo(f"case        {case.triangle.case_tag}")
    click.echo(f"determinant {case.actual_det} (predicted {case.predicted_det})")
    click.echo(f"triple      {[list(row) for row in triple]}")
    click.echo(f"canonical   {canon.to_json_dict()['vertices']}")
    if svg_path is not None:
        click.echo(f"figure      {svg_path}")


@cli.command("classify")
@click.option("--genus", "g", type=int, required=True)
@click.option("--dmax", type=int, required=True)
@click.option("--jobs", type=int, default=None, help="parallel workers (default from config)")
@click.option("--atlas-dir", "atlas_dir", type=click.Path(file_okay=False), default=None)
@click.option("--csv", "write_csv", is_flag=True, help="also write the member table as CSV")
@click.option("--figures", is_flag=True, help="also write one SVG per class")
@click.option("--stabilize", default=None,
              help="comma-separated increasing degree bounds to report class counts for")
@click.pass_obj
def classify_cmd(cfg: Config, g: int, dmax: int, jobs: int | None,
                 atlas_dir: str | None, write_csv: bool, figures: bool,
                 stabilize: str | None) -> None:
    """Group all g-good quadruples with d <= dmax into an atlas file."""
    jobs = cfg.jobs if jobs is None else jobs
    if jobs < 1:
        raise PreconditionError(f"--jobs must be >= 1, got {jobs}")
    if dmax > cfg.d_max_cap:
        raise PreconditionError(f"--dmax {dmax} exceeds the configured cap {cfg.d_max_cap}")
    atlas = group_by_class(g, dmax, jobs=jobs)
    out_dir = Path(atlas_dir or cfg.atlas_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    atlas_path = out_dir / f"atlas_g{g}_d{dmax}.json"
    atlas_path.write_bytes(atlas.to_json_bytes())
    members = sum(len(entry.members) for entry in atlas.classes)
    click.echo(f"{len(atlas.classes)} classes ({members} quadruples) -> {atlas_path}")
    if write_csv:
        csv_path = out_dir / f"atlas_g{g}_d{dmax}.csv"
        csv_path.write_text(atlas.to_csv_text(), encoding="utf-8")
        click.echo(f"csv -> {csv_path}")
    if figures:
        for index, entry in enumerate(atlas.classes):
            fig_path = out_dir / f"class_g{g}_d{dmax}_{index:03d}.svg"
            fig_path.write_text(render_polygon_svg(entry.canonical), encoding="utf-8")
        click.echo(f"{len(atlas.classes)} figures -> {out_dir}")
    if stabilize is not None:
        try:
            steps = [int(s) for s in stabilize.split(",") if s.strip()]
        except ValueError as exc:
            raise PreconditionError(f"--stabilize expects integers, got {stabilize!r}") from exc
        report = stabilization_report(g, steps, jobs=jobs)
        for d_step, count in report.steps:
            click.echo(f"d<={d_step}: {count} classes")
        click.echo(f"still growing at last step: {report.growing}")


@cli.group()
def polygons() -> None:
    """Polygon-class enumeration."""


@polygons.command("enum")
@click.option("--genus", "g", type=int, required=True)
@click.option("--method", type=click.Choice(["inductive", "box"]), default="inductive")
@click.option("--box", "box_bound", type=int, default=None,
              help="grid bound for the box method (default max(3, 2g+2))")
@click.option("--nmax", type=int, default=None,
              help="largest lattice point count to reach (default 3g+7)")
@click.option("--cross-check", is_flag=True,
              help="run both methods and fail (exit 2) on disagreement")
@click.pass_obj
def polygons_enum(cfg: Config, g: int, method: str, box_bound: int | None,
                  nmax: int | None, cross_check: bool) -> None:
    """List canonical forms of all polygon classes with g interior points."""
    if cross_check:
        inductive = enumerate_classes(g, "inductive", n_max=nmax)
        box = enumerate_classes(g, "box", box_bound=box_bound, n_max=nmax)
        a = {p.vertices for p in inductive}
        b = {p.vertices for p in box}
        if a != b:
            raise InvariantViolation(
                f"methods disagree: {len(a - b)} inductive-only, {len(b - a)} box-only"
            )
        classes = inductive
        click.echo(f"cross-check ok: both methods give {len(classes)} classes")
    else:
        classes = enumerate_classes(g, method, box_bound=box_bound, n_max=nmax)
    by_n: dict[int, int] = {}
    for p in classes:
        by_n[p.n] = by_n.get(p.n, 0) + 1
        click.echo(json.dumps({"n": p.n, "vertices": [[x, y] for x, y in p.vertices]}))
    summary = ", ".join(f"n={n}: {by_n[n]}" for n in sorted(by_n))
    click.echo(f"total: {len(classes)} classes ({summary})")


@cli.group("map")
def map_group() -> None:
    """Coordinate transport between equivalent quadruples."""


@map_group.command("curve")
@click.argument("w0", type=int)
@click.argument("w1", type=int)
@click.argument("w2", type=int)
@click.argument("d", type=int)
@click.argument("v0", type=int)
@click.argument("v1", type=int)
@click.argument("v2", type=int)
@click.argument("e", type=int)
@click.option("--curve", "curve_path", type=click.Path(exists=True, dir_okay=False),
              default=None, help="JSON file with curve terms (default: all monomials)")
@click.pass_obj
def map_curve_cmd(cfg: Config, w0: int, w1: int, w2: int, d: int,
                  v0: int, v1: int, v2: int, e: int,
                  curve_path: str | None) -> None:
    """Map a curve on (W0,W1,W2;D) to one on (V0,V1,V2;E)."""
    q_from = Quadruple(w0, w1, w2, d)
    q_to = Quadruple(v0, v1, v2, e)
    p_from = build(q_from)
    p_to = build(q_to)
    poly_from = project(p_from, find_unimodular_triple(p_from))
    poly_to = project(p_to, find_unimodular_triple(p_to))
    same, witness = equivalent(poly_from, poly_to)
    if not same or witness is None:
        raise PreconditionError(
            f"{q_from} and {q_to} do not share a polygon class; nothing to map"
        )
    bc = basis_change(q_from, q_to, witness)
    if curve_path is not None:
        raw = json.loads(Path(curve_path).read_text(encoding="utf-8"))
        if not isinstance(raw, dict) or "terms" not in raw:
            raise PreconditionError(f"{curve_path}: expected an object with a 'terms' list")
        terms = [
            (Fraction(str(t["coef"])), tuple(t["exponents"])) for t in raw["terms"]
        ]
    else:
        terms = [(Fraction(1), pt) for pt in p_from.points]
    curve = make_curve(q_from, terms)
    mapped, warnings = map_curve(curve, bc, q_to)
    payload = {
        "source": [*q_from.weights, q_from.d],
        "target": [*q_to.weights, q_to.d],
        "matrix": [[_fmt_fraction(x) for x in row] for row in bc.matrix],
        "row_map": list(bc.row_map),
        "terms": [
            {"coef": _fmt_fraction(c), "exponents": list(v)} for c, v in mapped.terms
        ],
        "warnings": list(warnings),
    }
    click.echo(json.dumps(payload, indent=2))


def main(argv: list[str] | None = None) -> int:
    """Entry point mapping failures to the documented exit codes."""
    try:
        cli.main(args=argv, prog_name="wpoly", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show(file=sys.stderr)
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except (PreconditionError, DegenerateInputError, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except InvariantViolation as exc:
        click.echo(f"invariant violation: {exc}", err=True)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
