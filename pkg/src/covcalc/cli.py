"""``covcalc`` command line: a thin client of the HTTP service.

With ``--url`` (or ``COVCALC_URL``) requests go to a running server;
otherwise the application is called in-process.  Reports are written under
``--out`` or ``$COVCALC_OUT_DIR`` (default: the working directory).

Exit codes: 0 ok, 1 failed check, 2 bad input, 3 norm violation,
4 pole inside the unit disk.
"""

from __future__ import annotations

import csv
import io as _io
import json
import os
import sys
import warnings
from pathlib import Path
from typing import Optional

import click

from .io import dumps

ENV_URL = "COVCALC_URL"
ENV_OUT = "COVCALC_OUT_DIR"


class Client:
    def __init__(self, url: Optional[str]):
        if url:
            import httpx

            self._http = httpx.Client(base_url=url, timeout=600.0)
        else:
            with warnings.catch_warnings():
                # starlette's test client warns about its httpx backend
                warnings.filterwarnings("ignore", message=".*httpx.*", category=UserWarning)
                from fastapi.testclient import TestClient

            from .service.app import app

            self._http = TestClient(app)

    def post(self, path: str, body: dict) -> tuple[int, dict]:
        """Returns ``(exit_code_if_error_or_None, payload)``."""
        r = self._http.post(path, json=body)
        payload = r.json()
        if r.status_code == 400 and "error" in payload:
            return payload["error"]["exit_code"], payload
        if r.status_code == 422:
            return 2, {"error": {"exit_code": 2, "kind": "validation", "message": json.dumps(payload.get("detail"))}}
        r.raise_for_status()
        return None, payload


def _out_path(out: Optional[str], default_name: str) -> Path:
    if out:
        return Path(out)
    return Path(os.environ.get(ENV_OUT, ".")) / default_name


def _fail(payload: dict, code: int):
    err = payload["error"]
    click.echo(f"error [{err['kind']}]: {err['message']}", err=True)
    sys.exit(code)


def _finish(record: dict, wall_time: float, written: list[Path]):
    for p in written:
        click.echo(f"wrote {p}")
    click.echo(f"wall time {wall_time:.3f} s", err=True)
    if not record["ok"]:
        bad = record["counterexample"]
        click.echo(f"FAILED {bad['name']}: {bad['value']:.3e} > {bad['tolerance']:.1e}", err=True)
        sys.exit(1)


def _residual_csv(record: dict) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["name", "value", "tolerance", "ok"])
    for c in record["residuals"]:
        w.writerow([c["name"], format(c["value"], ".17g"), format(c["tolerance"], ".17g"), c["ok"]])
    return buf.getvalue()


@click.group()
@click.option("--url", envvar=ENV_URL, default=None, help="Base URL of a running covcalc service.")
@click.pass_context
def cli(ctx, url):
    """Coherent-state transforms, verification suites and functional calculus."""
    ctx.obj = Client(url)


def _split(values: Optional[str]) -> Optional[list[str]]:
    if values is None:
        return None
    return [v.strip() for v in values.split(",") if v.strip()]


@cli.command()
@click.argument("theory", type=click.Choice(["hardy", "bergman", "sb"]))
@click.option("--fourier", help="Fourier coefficients c_k, k = min-mode, min-mode+1, ... (hardy).")
@click.option("--monomial", help="Coefficients of w^n, n = 0, 1, ... (bergman).")
@click.option("--hermite", help="Coefficients of the Hermite functions h_n (sb).")
@click.option("--min-mode", default=0, show_default=True, help="Index of the first Fourier coefficient.")
@click.option("-m", "m", default=2, show_default=True, help="Discrete-series parameter (bergman).")
@click.option("--nodes", type=int, default=None, help="Circle nodes (hardy), radial nodes (bergman), line nodes (sb).")
@click.option("--rmax", type=float, default=None, help="Outer radius of the disk Omega grid.")
@click.option("--tolerance", type=float, default=1e-8, show_default=True, help="Self-check tolerance.")
@click.option("--calibrated/--raw", default=None,
              help="Multiply by the calibration c(a) [default: calibrated for hardy/bergman, raw for sb].")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None, help="Output file.")
@click.pass_obj
def transform(client, theory, fourier, monomial, hermite, min_mode, m, nodes, rmax, tolerance, calibrated, fmt, out):
    """Reduced transform of a function on the theory's Omega grid."""
    given = {k: v for k, v in (("fourier", fourier), ("monomial", monomial), ("hermite", hermite)) if v is not None}
    if len(given) > 1:
        click.echo("error [input]: give one coefficient list", err=True)
        sys.exit(2)
    basis, raw = next(iter(given.items()), (None, ""))
    body = {"theory": theory, "coeffs": _split(raw), "basis": basis, "m": m, "nodes": nodes, "rmax": rmax,
            "tolerance": tolerance, "min_mode": min_mode, "calibrated": calibrated}
    code, payload = client.post("/transform", body)
    if code is not None:
        _fail(payload, code)
    path = _out_path(out, f"transform_{theory}.{fmt}")
    path.parent.mkdir(parents=True, exist_ok=True)
    data = payload["data"]
    written = [path]
    if fmt == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        cols = ["node_re", "node_im", "weight", "value_re", "value_im"]
        w.writerow(cols)
        for row in zip(*(data[c] for c in cols)):
            w.writerow([format(v, ".17g") for v in row])
        path.write_text(buf.getvalue())
        env = path.with_name(path.name + ".json")
        env.write_text(dumps({**payload["envelope"], "record": payload["record"]}))
        written.append(env)
    else:
        path.write_text(dumps({**payload["envelope"], "record": payload["record"], "data": data}))
    _finish(payload["record"], payload["wall_time"], written)


@cli.command()
@click.argument("suite", type=click.Choice(["groups", "reps", "cstrans", "qplane", "opcalc", "all"]))
@click.option("--seed", default=0, show_default=True, help="Seed for the random test inputs.")
@click.option("--tolerance", type=float, default=1.0, show_default=True, help="Factor applied to every tolerance.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", default=None, help="Report file.")
@click.pass_obj
def verify(client, suite, seed, tolerance, fmt, out):
    """Run a verification suite; exit 0 iff every residual is within tolerance."""
    code, payload = client.post("/verify", {"suite": suite, "seed": seed, "tolerance_scale": tolerance})
    if code is not None:
        _fail(payload, code)
    record = payload["record"]
    for c in record["residuals"]:
        click.echo(f"{'pass' if c['ok'] else 'FAIL'}  {c['name']:<52} {c['value']:.3e}  (tol {c['tolerance']:.1e})")
    path = _out_path(out, f"verify_{suite}.{fmt}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(record) if fmt == "json" else _residual_csv(record))
    _finish(record, payload["wall_time"], [path])


def _load_matrix(spec: str):
    p = Path(spec)
    try:
        if p.is_file():
            return json.loads(p.read_text())
        if spec.lstrip().startswith(("[", "{")):
            return json.loads(spec)
    except json.JSONDecodeError as exc:
        click.echo(f"error [matrix]: invalid JSON: {exc}", err=True)
        sys.exit(2)
    click.echo(f"error [matrix]: no such file {spec!r}", err=True)
    sys.exit(2)


@cli.command()
@click.argument("f")
@click.option("--matrix", "matrix", required=True, help="JSON file (or inline JSON) holding the matrix.")
@click.option("--method", type=click.Choice(["contour", "disk", "weyl"]), default="contour", show_default=True)
@click.option("--nodes", type=int, default=512, show_default=True, help="Contour nodes.")
@click.option("--tolerance", type=float, default=None, help="Oracle tolerance (default depends on method).")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--out", default=None, help="Report file.")
@click.pass_obj
def funcalc(client, f, matrix, method, nodes, tolerance, fmt, out):
    """Apply the rational function F of z to a matrix."""
    body = {"f": f, "matrix": _load_matrix(matrix), "method": method, "nodes": nodes, "tolerance": tolerance}
    code, payload = client.post("/funcalc", body)
    if code is not None:
        _fail(payload, code)
    record = payload["record"]
    result = record["outputs"]["result"]
    for row in result["entries"]:
        click.echo("  ".join(f"{re:+.12g}{im:+.12g}i" for re, im in row))
    path = _out_path(out, f"funcalc.{fmt}")
    path.parent.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        path.write_text(dumps(record))
    else:
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for i, row in enumerate(result["entries"]):
            for j, (re, im) in enumerate(row):
                w.writerow([i, j, format(re, ".17g"), format(im, ".17g")])
        path.write_text(buf.getvalue())
    _finish(record, payload["wall_time"], [path])


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service (needs uvicorn)."""
    try:
        import uvicorn
    except ImportError:
        click.echo("error: uvicorn is not installed (pip install 'artifact[serve]')", err=True)
        sys.exit(2)
    uvicorn.run("covcalc.service.app:app", host=host, port=port)


def main():
    cli()


if __name__ == "__main__":
    main()
