"""Command-line front end.

Usage:
    d2dpda construct --kind I --grid 3 --out grid3.json
    d2dpda construct --kind general --code gf3_42.json
    d2dpda validate grid3.json [--phi phi.json]
    d2dpda simulate grid3.json --demand 4,2,1,5,6,3 --N 6 --B 4096 --seed 1
    d2dpda bounds --array grid3.json
    d2dpda compare --n 2 --n 3 --schemes jcm,hypercube,constrII --format csv
    d2dpda export grid3.json --format csv

Exit codes: 0 success, 1 validation or decode failure, 2 input/parse error.
Rationals are printed as p/q.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bounds as bnd
from .constructions import ConstructionError, construct_general, construct_I, construct_II
from .designs import DesignError, Resolution, design_from_code, grid_mcrd
from .finite_field import FieldError, GeneratorMatrix
from .pda import (
    ArrayFormatError,
    InvalidArrayError,
    PdaArray,
    canonicalize,
    format_ratio,
    load_phi,
    pda_violations,
    validate_dpda,
)
from .sim import FileLibrary, random_demand, run

FORMATS = click.Choice(["json", "csv", "text"])


class InputError(click.ClickException):
    exit_code = 2


def _emit(text: str, out: str | None) -> None:
    text = text.rstrip("\n")
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


def _load_array(path: str) -> tuple[PdaArray, dict]:
    try:
        raw = json.loads(Path(path).read_text())
        return PdaArray.from_json(raw), raw
    except (OSError, json.JSONDecodeError, ArrayFormatError) as exc:
        raise InputError(f"cannot read array {path}: {exc}") from exc


def _embedded_phi(raw: dict) -> dict | None:
    phi = raw.get("phi")
    if phi is None:
        return None
    try:
        return {int(s): int(c) - 1 for s, c in phi.items()}
    except (AttributeError, ValueError) as exc:
        raise InputError(f"malformed embedded phi: {exc}") from exc


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """D2D coded caching with placement delivery arrays."""


@cli.command()
@click.option("--kind", type=click.Choice(["I", "II", "general"]), required=True)
@click.option("--grid", "grid_n", type=int, help="Use the n x n grid MCRD.")
@click.option("--code", "code_path", type=click.Path(), help="Generator matrix JSON.")
@click.option("--design", "design_path", type=click.Path(), help="Resolution JSON.")
@click.option("--out", type=click.Path(), help="Write the DPDA here.")
@click.option("--format", "fmt", type=FORMATS, default="json", show_default=True)
def construct(kind, grid_n, code_path, design_path, out, fmt):
    """Build a DPDA from a design."""
    sources = [x is not None for x in (grid_n, code_path, design_path)]
    if sum(sources) != 1:
        raise InputError("give exactly one of --grid, --code, --design")
    try:
        if grid_n is not None:
            res = grid_mcrd(grid_n)
        elif code_path is not None:
            res = design_from_code(GeneratorMatrix.load(code_path))
        else:
            res = Resolution.load(design_path)
    except (OSError, json.JSONDecodeError, FieldError, DesignError) as exc:
        raise InputError(str(exc)) from exc
    builders = {"I": construct_I, "II": construct_II, "general": construct_general}
    try:
        result = builders[kind](res)
    except ConstructionError as exc:
        click.echo(f"construction failed: {exc}", err=True)
        sys.exit(1)
    if fmt == "json":
        body = result.dumps()
    elif fmt == "csv":
        body = result.symbolic.to_csv()
    else:
        body = result.render()
    if out:
        _emit(body, out)
        if fmt != "text":
            click.echo(result.render())
    else:
        click.echo(body)
    click.echo(f"{kind}: {result.params}", err=out is None)


@cli.command()
@click.argument("array_path", type=click.Path())
@click.option("--phi", "phi_path", type=click.Path(), help="phi JSON {symbol: user}, 1-based.")
def validate(array_path, phi_path):
    """Check PDA conditions C1-C3 and DPDA condition C4."""
    arr, raw = _load_array(array_path)
    if phi_path:
        try:
            phi = load_phi(phi_path)
        except (OSError, ArrayFormatError) as exc:
            raise InputError(str(exc)) from exc
    else:
        phi = _embedded_phi(raw)
    problems = pda_violations(arr)
    if problems:
        click.echo(f"not a PDA: {len(problems)} violation(s)")
        for v in problems:
            click.echo(f"  {v}")
        sys.exit(1)
    try:
        d = validate_dpda(arr, phi)
    except InvalidArrayError as exc:
        p = exc.params
        failing = ", ".join(f"s={v.symbol}" for v in exc.violations)
        click.echo(f"valid PDA ({p.K},{p.F},{p.Z},{p.S}), C4 fails for {failing}")
        for v in exc.violations:
            click.echo(f"  {v}")
        sys.exit(1)
    p = d.params
    phi_txt = "identity" if d.phi_is_identity() else json.dumps(d.phi_json())
    click.echo(f"valid DPDA ({p.K},{p.F},{p.Z},{p.S}), phi={phi_txt}")


def _parse_demand(text: str, K: int, N: int, seed: int) -> list[int]:
    if text == "random":
        return random_demand(K, N, seed)
    try:
        vals = [int(x) - 1 for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise InputError(f"bad demand {text!r}") from exc
    return vals


@cli.command()
@click.argument("array_path", type=click.Path())
@click.option("--demand", required=True, help="Comma-separated 1-based file ids, or 'random'.")
@click.option("--N", "n_files", type=int, required=True, help="Number of files.")
@click.option("--B", "file_bytes", type=int, default=4096, show_default=True, help="Bytes per file.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--phi", "phi_path", type=click.Path())
@click.option("--out", type=click.Path())
def simulate(array_path, demand, n_files, file_bytes, seed, phi_path, out):
    """Run placement, delivery and decoding on synthetic files."""
    arr, raw = _load_array(array_path)
    try:
        phi = load_phi(phi_path) if phi_path else _embedded_phi(raw)
    except (OSError, ArrayFormatError) as exc:
        raise InputError(str(exc)) from exc
    try:
        d = validate_dpda(arr, phi)
    except InvalidArrayError as exc:
        click.echo(str(exc), err=True)
        sys.exit(1)
    dem = _parse_demand(demand, d.K, n_files, seed)
    try:
        lib = FileLibrary.synthetic(n_files, file_bytes, seed)
        report = run(d, dem, lib)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    _emit(json.dumps(report.to_json(), indent=1), out)
    ok = sum(report.decoded)
    click.echo(
        f"load {format_ratio(report.measured_load)}, {ok}/{d.K} users decoded, "
        f"one-shot {'verified' if report.one_shot_verified else 'FAILED'}",
        err=True,
    )
    if not report.all_decoded:
        sys.exit(1)


@cli.command()
@click.option("--array", "array_path", type=click.Path(), help="Classify this DPDA.")
@click.option("--K", "K", type=int)
@click.option("--F", "F", type=int)
@click.option("--Z", "Z", type=int)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def bounds(array_path, K, F, Z, fmt):
    """Evaluate both load lower bounds."""
    if array_path:
        arr, raw = _load_array(array_path)
        try:
            d = validate_dpda(arr, _embedded_phi(raw))
        except InvalidArrayError as exc:
            click.echo(str(exc), err=True)
            sys.exit(1)
        report = bnd.classify(d)
        if fmt == "json":
            click.echo(json.dumps(report.to_json(), indent=1))
        else:
            click.echo(report.summary())
        return
    if None in (K, F, Z):
        raise InputError("give --array or all of --K, --F, --Z")
    try:
        bj, bn = bnd.bound_jmqx(F, Z), bnd.bound_new(K, F, Z)
    except bnd.BoundError as exc:
        raise InputError(str(exc)) from exc
    row = {"K": K, "F": F, "Z": Z, "bound_jmqx": format_ratio(bj),
           "bound_new": format_ratio(bn), "tighter": bnd.tighter_bound(K, F)}
    if fmt == "json":
        click.echo(json.dumps(row))
    elif fmt == "csv":
        click.echo(",".join(row))
        click.echo(",".join(str(v) for v in row.values()))
    else:
        click.echo(" ".join(f"{k}={v}" for k, v in row.items()))


def _parse_ns(values) -> list[int]:
    ns = []
    for v in values:
        if "-" in v:
            lo, hi = v.split("-", 1)
            ns.extend(range(int(lo), int(hi) + 1))
        else:
            ns.append(int(v))
    return ns


@cli.command()
@click.option("--n", "ns", multiple=True, required=True, help="n or a range like 2-6; repeatable.")
@click.option("--schemes", default=",".join(bnd.SCHEMES), show_default=True)
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
@click.option("--out", type=click.Path())
def compare(ns, schemes, fmt, out):
    """Compare proposed constructions with JCM and hypercube schemes."""
    try:
        rows = bnd.compare_report(_parse_ns(ns), tuple(s for s in schemes.split(",") if s))
    except (ValueError, bnd.BoundError) as exc:
        raise InputError(str(exc)) from exc
    render = {"csv": bnd.report_csv, "json": bnd.report_json, "text": bnd.report_text}[fmt]
    _emit(render(rows), out)


@cli.command()
@click.argument("array_path", type=click.Path())
@click.option("--format", "fmt", type=FORMATS, default="csv", show_default=True)
@click.option("--canonical/--as-is", default=False, help="Relabel symbols to 1..S first.")
@click.option("--out", type=click.Path())
def export(array_path, fmt, canonical, out):
    """Re-emit an array file as CSV, text or JSON."""
    arr, _ = _load_array(array_path)
    if canonical:
        arr = canonicalize(arr)
    body = {"csv": arr.to_csv, "text": arr.render}.get(fmt)
    _emit(body() if body else json.dumps(arr.to_json(), indent=1), out)


def main(argv=None):
    cli.main(args=argv, prog_name="d2dpda")


if __name__ == "__main__":
    main()
