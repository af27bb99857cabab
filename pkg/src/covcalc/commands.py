"""The three user-facing operations, independent of transport.

The HTTP service calls these functions; the CLI talks to the service.  Errors
carry the process exit code the CLI should use:

==== ==========================================
code meaning
==== ==========================================
0    success, every residual within tolerance
1    a residual exceeded its tolerance
2    malformed input (syntax, unknown names, bad matrix)
3    operator norm bound violated
4    pole of the symbol inside the closed unit disk
==== ==========================================
"""

from __future__ import annotations

import time
from typing import Optional, Sequence, Union

import numpy as np

from . import cstrans as cs
from . import opcalc, suites
from .cmatrix import CMatrix
from .errors import CovcalcError, NormViolationError, ParseError, PoleError
from .expr import Parser
from .grids import DiskPolynomial, FourierSeries, GaussPoly, disk_grid, hermite_function
from .io import Check, RunRecord

EXIT_OK, EXIT_FAILED, EXIT_BAD_SPEC, EXIT_NORM, EXIT_POLE = 0, 1, 2, 3, 4


class CommandError(Exception):
    def __init__(self, exit_code: int, kind: str, message: str, position: Optional[int] = None):
        super().__init__(message)
        self.exit_code = exit_code
        self.kind = kind
        self.message = message
        self.position = position

    def to_dict(self) -> dict:
        d = {"exit_code": self.exit_code, "kind": self.kind, "message": self.message}
        if self.position is not None:
            d["position"] = self.position
        return d


def classify(exc: Exception) -> CommandError:
    if isinstance(exc, CommandError):
        return exc
    if isinstance(exc, PoleError):
        return CommandError(EXIT_POLE, "pole", str(exc))
    if isinstance(exc, NormViolationError):
        return CommandError(EXIT_NORM, "norm", str(exc))
    if isinstance(exc, ParseError):
        return CommandError(EXIT_BAD_SPEC, "syntax", str(exc), exc.position)
    if isinstance(exc, (CovcalcError, ValueError, KeyError, TypeError)):
        return CommandError(EXIT_BAD_SPEC, type(exc).__name__, str(exc))
    raise exc


def parse_scalar(src: Union[str, float, int]) -> complex:
    """``"1.5"``, ``"-2i"``, ``"(1-0.5i)"`` etc., with the shared tokenizer."""
    if isinstance(src, (int, float)):
        return complex(src)

    def no_symbols(name, pos):
        raise ParseError(f"unknown symbol {name!r} in a coefficient", pos, src)

    return complex(Parser(src, complex, no_symbols).parse())


def parse_coeffs(items: Sequence) -> list[complex]:
    out = []
    for k, item in enumerate(items):
        try:
            out.append(parse_scalar(item))
        except ParseError as exc:
            raise CommandError(EXIT_BAD_SPEC, "syntax", f"coefficient {k}: {exc}", exc.position) from None
    return out


# --------------------------------------------------------------------------
# transform


def _input_function(theory: str, coeffs: list[complex], min_mode: int):
    if theory == "hardy":
        return FourierSeries({min_mode + k: c for k, c in enumerate(coeffs)})
    if theory == "bergman":
        return DiskPolynomial({(k, 0): c for k, c in enumerate(coeffs)})
    f = GaussPoly([0.0])
    for k, c in enumerate(coeffs):
        if c != 0:
            f = f + hermite_function(k).scaled(c)
    return f


def _theory(theory: str, m: int, nodes: Optional[int], rmax: Optional[float]) -> cs.Theory:
    if theory == "hardy":
        th = cs.hardy(nodes or 256, omega_rmax=rmax or 0.95)
    elif theory == "bergman":
        Nr = nodes or 64
        th = cs.bergman(m, Nr, 4 * Nr)
        if rmax is not None and rmax < 1:
            omega = disk_grid(Nr, 4 * Nr, "invariant", rmax)
            th = cs.Theory("bergman", th.rep, omega, th.band, m)
    elif theory == "sb":
        th = cs.segal_bargmann(nodes or 64)
    else:
        raise CommandError(EXIT_BAD_SPEC, "theory", f"unknown theory {theory!r} (hardy | bergman | sb)")
    return th


def run_transform(
    theory: str,
    coeffs: Sequence = (),
    basis: Optional[str] = None,
    m: int = 2,
    nodes: Optional[int] = None,
    rmax: Optional[float] = None,
    tolerance: float = 1e-8,
    min_mode: int = 0,
    calibrated: Optional[bool] = None,
) -> dict:
    """Reduced transform on the theory's Omega grid plus a self-check.

    ``calibrated`` multiplies by ``c(a)`` (see :func:`covcalc.cstrans.calibration`);
    by default the disk theories are calibrated, so the output is the analytic
    function itself, and Segal-Bargmann output is the plain transform.

    Hardy and Segal-Bargmann use direct quadrature; Bergman uses the series
    route (stable up to the boundary).  The self-check compares the two routes
    (Hardy: the closed-form analytic extension) away from the boundary.
    """
    start = time.perf_counter()
    expected = {"hardy": "fourier", "bergman": "monomial", "sb": "hermite"}
    try:
        if basis is not None and theory in expected and basis != expected[theory]:
            raise CommandError(EXIT_BAD_SPEC, "input", f"{theory} takes --{expected[theory]} coefficients, not --{basis}")
        values = parse_coeffs(coeffs)
        th = _theory(theory, m, nodes, rmax)
        f = _input_function(theory, values, min_mode)
        method = "series" if theory == "bergman" else "quadrature"
        out = cs.reduced_transform(th, f, method=method)
        a = th.omega_grid.nodes
        if calibrated is None:
            calibrated = theory != "sb"
        scale = cs.calibration(th, a) if calibrated else np.ones(a.shape)
        if theory == "hardy":
            sel = np.abs(a) <= 0.9
            ref = f.analytic(a[sel]) / cs.calibration(th, a[sel])
            check_name = "quadrature_vs_closed_form"
        else:
            sel = np.abs(a) <= (0.9 if theory == "bergman" else 3.0)
            idx = np.flatnonzero(sel)[:: max(1, int(sel.sum()) // 256)]
            sel = np.zeros_like(sel)
            sel[idx] = True
            other = "quadrature" if method == "series" else "series"
            ref = cs.reduced_transform(th, f, a[sel], other)
            check_name = f"{method}_vs_{other}"
        resid = float(np.max(np.abs(scale[sel] * (out.values[sel] - ref)), initial=0.0))
        values_out = scale * out.values
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        raise classify(exc) from None
    desc = th.describe()
    record = RunRecord(
        command="transform",
        parameters={"theory": theory, "coeffs": [[c.real, c.imag] for c in values], "m": m, "nodes": nodes,
                    "rmax": rmax, "tolerance": tolerance, "min_mode": min_mode, "method": method, "calibrated": calibrated},
        grid_checksums={"x": th.x_grid.checksum, "omega": th.omega_grid.checksum},
        outputs={"theory": desc},
        residuals=[Check(check_name, resid, tolerance)],
        wall_time=time.perf_counter() - start,
    )
    grid = out.grid
    return {
        "record": record.to_dict(),
        "envelope": {
            "schema": "1", "domain": grid.domain, "law": grid.law, "N": len(grid), "checksum": grid.checksum,
            "params": dict(grid.params), "theory": desc, "method": method, "calibrated": calibrated,
        },
        "data": {
            "node_re": grid.nodes.real.tolist(), "node_im": grid.nodes.imag.tolist(), "weight": grid.weights.tolist(),
            "value_re": values_out.real.tolist(), "value_im": values_out.imag.tolist(),
        },
        "wall_time": record.wall_time,
    }


# --------------------------------------------------------------------------
# verify


def run_verify(suite: str, seed: int = 0, tolerance_scale: float = 1.0) -> dict:
    start = time.perf_counter()
    if suite != "all" and suite not in suites.SUITES:
        raise CommandError(EXIT_BAD_SPEC, "suite", f"unknown suite {suite!r} ({' | '.join(suites.SUITES)} | all)")
    checks = suites.run_suite(suite, seed, tolerance_scale)
    record = RunRecord(
        command="verify",
        parameters={"suite": suite, "seed": seed, "tolerance_scale": tolerance_scale},
        residuals=checks,
        wall_time=time.perf_counter() - start,
    )
    return {"record": record.to_dict(), "wall_time": record.wall_time}


# --------------------------------------------------------------------------
# funcalc


def run_funcalc(
    f: str,
    matrix,
    method: str = "contour",
    nodes: int = 512,
    tolerance: Optional[float] = None,
) -> dict:
    start = time.perf_counter()
    try:
        sym = opcalc.parse_function(f)
        t = CMatrix.from_json(matrix)
        if method not in ("contour", "disk", "weyl"):
            raise CommandError(EXIT_BAD_SPEC, "method", f"unknown method {method!r} (contour | disk | weyl)")
        extra = {}
        if method == "weyl":
            r = sym.data
            if r.den.size != 1:
                raise CommandError(EXIT_BAD_SPEC, "symbol", "the Weyl calculus takes polynomial symbols")
            if not t.is_hermitian():
                raise CommandError(EXIT_BAD_SPEC, "matrix", "the Weyl calculus needs a Hermitian matrix")
            poly = {(k,): c / r.den[0] for k, c in enumerate(r.num)}
            value = opcalc.weyl_poly(poly, [t])
            lam, U = np.linalg.eigh(t.data)
            oracle = CMatrix(U @ np.diag(sym(lam)) @ U.conj().T)
            tol = 1e-10 if tolerance is None else tolerance
        else:
            sym.check_analytic()
            cert = opcalc.require_contraction(t)
            extra["norm_certificate"] = {"upper": cert.upper, "estimate": cert.estimate, "residual": cert.residual,
                                         "steps": cert.steps}
            if method == "contour":
                value = opcalc.riesz_dunford_contour(sym, t, nodes)
                tol = 1e-8 if tolerance is None else tolerance
            else:
                value = opcalc.disk_regularized(sym, t)
                raw = opcalc.riesz_dunford_disk(sym, t, 0.9)
                extra["disk"] = {"cutoffs": list(opcalc.DEFAULT_CUTOFFS), "drift_rho_0.9": raw.drift, "divergent": True}
                tol = 1e-4 if tolerance is None else tolerance
            report = opcalc.spectral_oracle_report(sym, t)
            oracle = report.value
            extra["oracle"] = {"method": report.method, "tail_bound": report.tail_bound}
        delta = value.dist(oracle)
    except Exception as exc:  # noqa: BLE001 - mapped to exit codes
        raise classify(exc) from None
    record = RunRecord(
        command="funcalc",
        parameters={"f": f, "method": method, "nodes": nodes, "tolerance": tol},
        outputs={"symbol": sym.describe(), "input": t.to_json(), "result": value.to_json(), **extra},
        residuals=[Check("oracle_delta", delta, tol)],
        wall_time=time.perf_counter() - start,
    )
    return {"record": record.to_dict(), "wall_time": record.wall_time}
