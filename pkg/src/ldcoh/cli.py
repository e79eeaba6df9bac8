"""Command-line surface: file-driven, seeded, reproducible workflows.

Every command reads JSON inputs, writes JSON/CSV outputs (plus rendered
figures for the scan and sweep reports), and drops a run manifest next to
each output.  Exit codes: 0 success, 1 domain error, 2 malformed input.
"""

from __future__ import annotations

import functools
import os
import sys
from importlib import metadata
from pathlib import Path

import click
import numpy as np

from . import basis as basis_mod
from . import duality as duality_mod
from . import jsonio
from . import kraus as kraus_mod
from . import povm as povm_mod

try:
    VERSION = metadata.version("ldcoh")
except metadata.PackageNotFoundError:  # running from a source tree
    VERSION = "0.1.0"


def _manifest_path(out: Path) -> Path:
    stem = out.name[: -len(out.suffix)] if out.suffix else out.name
    return out.with_name(stem + ".manifest.json")


def _write_manifest(command: str, inputs, outputs, seed=None, tolerances=None):
    manifest = {
        "command": command,
        "inputs": [str(p) for p in inputs],
        "outputs": [str(p) for p in outputs],
        "seed": seed,
        "tolerances": tolerances or {},
        "version": VERSION,
    }
    for out in outputs:
        jsonio.dump_json(manifest, _manifest_path(Path(out)))
    click.echo(f"manifest: {_manifest_path(Path(outputs[0]))}")


def _handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except jsonio.InputError as exc:
            click.echo(f"input error: {exc}", err=True)
            sys.exit(2)
        except (ValueError, RuntimeError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _format_float(x: float) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: str, rows) -> None:
    lines = [header]
    for row in rows:
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


@click.group()
@click.version_option(VERSION)
def main():
    """Coherence toolkit for general (possibly linearly dependent) bases."""


@main.command()
@click.argument("state", type=click.Path(exists=False))
@click.argument("basis", type=click.Path(exists=False))
@click.option("--tol", default=basis_mod.MEMBERSHIP_TOL, show_default=True,
              help="Frobenius residual below which the state counts as free.")
@click.option("--out", default="membership.json", show_default=True)
@_handle_errors
def membership(state, basis, tol, out):
    """Decide whether STATE is a mixture of the BASIS projectors."""
    rho = jsonio.load_state(state)
    b = jsonio.load_basis(basis)
    result = basis_mod.membership(rho, b, tol=tol)
    payload = {
        "is_free": result.is_free,
        "residual": result.residual,
        "weights": [float(w) for w in result.weights],
    }
    jsonio.dump_json(payload, out)
    _write_manifest("membership", [state, basis], [out], tolerances={"tol": tol})
    click.echo(f"is_free: {result.is_free}  residual: {result.residual:.3e}")


@main.command()
@click.argument("state", type=click.Path(exists=False))
@click.argument("basis", type=click.Path(exists=False))
@click.option("--distance", default="trace", show_default=True,
              type=click.Choice(["trace", "frobenius", "hilbert-schmidt"]))
@click.option("--out", default="coherence.json", show_default=True)
@_handle_errors
def coherence(state, basis, distance, out):
    """Distance from STATE to the free set of BASIS."""
    rho = jsonio.load_state(state)
    b = jsonio.load_basis(basis)
    value = basis_mod.coherence_generic(rho, b, distance=distance)
    jsonio.dump_json({"coherence": value, "distance": distance}, out)
    _write_manifest("coherence", [state, basis], [out])
    click.echo(f"coherence ({distance}): {value!r}")


@main.command("kraus-check")
@click.argument("kraus", type=click.Path(exists=False))
@click.argument("basis", type=click.Path(exists=False))
@click.option("--tol", default=1e-10, show_default=True,
              help="Tolerance for the circle-basis coefficients.")
@click.option("--out", default="kraus_check.json", show_default=True)
@_handle_errors
def kraus_check(kraus, basis, tol, out):
    """Incoherence checks for the Kraus operators in KRAUS against BASIS.

    BASIS may be a general basis file or a circle description {"theta": t,
    "phis": [p1, p2, p3]}; circle bases additionally get the algebraic
    coefficient check.
    """
    ops = jsonio.load_kraus_list(kraus)
    doc = jsonio.load_json(basis)
    circle = None
    if isinstance(doc, dict) and "theta" in doc:
        circle = jsonio.decode_circle_basis(doc, basis)
        general = circle.to_general_basis()
    else:
        general = jsonio.decode_basis(doc, basis)

    reports = []
    for op in ops:
        vertex = kraus_mod.vertex_image_check(op, general)
        entry = {
            "vertex_incoherent": vertex.incoherent,
            "failing_vertex": vertex.failing_vertex,
            "vacuous": vertex.vacuous,
            "circle": None,
        }
        if circle is not None:
            cond = kraus_mod.kraus_circle_condition(op, circle, tol=tol)
            entry["circle"] = {
                "satisfied": cond.satisfied,
                "delta": jsonio.complex_to_pair(cond.delta),
                "abc": [float(v) for v in cond.abc],
            }
        reports.append(entry)
    total = sum(op.conj().T @ op for op in ops)
    completeness = float(np.linalg.norm(total - np.eye(general.dim)))
    payload = {"operators": reports, "channel_completeness_residual": completeness}
    jsonio.dump_json(payload, out)
    _write_manifest("kraus-check", [kraus, basis], [out], tolerances={"tol": tol})
    click.echo(
        f"operators: {len(reports)}  completeness residual: {completeness:.3e}"
    )


@main.command("povm-build")
@click.argument("basis", type=click.Path(exists=False))
@click.option("--out", default="povm.json", show_default=True)
@_handle_errors
def povm_build(basis, out):
    """POVM whose outcomes reproduce the BASIS states (extending if needed)."""
    b = jsonio.load_basis(basis)
    built = povm_mod.build_povm(b)
    payload = jsonio.encode_povm(built.povm)
    payload["weights"] = [float(w) for w in built.weights]
    payload["extension"] = [
        jsonio.encode_vector(s.amplitudes) for s in built.extension
    ]
    jsonio.dump_json(payload, out)
    _write_manifest("povm-build", [basis], [out])
    click.echo(
        f"outcomes: {built.povm.size}  extension states: {len(built.extension)}  "
        f"completeness residual: {built.povm.completeness_residual():.3e}"
    )


@main.command("maxcoh-scan")
@click.argument("basis", type=click.Path(exists=False))
@click.option("--resolution", default=10_000, show_default=True)
@click.option("--out", default="scan.csv", show_default=True)
@click.option("--figure/--no-figure", default=True, show_default=True)
@_handle_errors
def maxcoh_scan(basis, resolution, out, figure):
    """Scan pure qubit states for maximal coherence; write CSV (+ figure)."""
    b = jsonio.load_basis(basis)
    scan = basis_mod.max_coherent_scan(b, grid_resolution=resolution)
    out = Path(out)
    rows = (
        [_format_float(p[0]), _format_float(p[1]), _format_float(p[2]),
         _format_float(v)]
        for p, v in zip(scan.points, scan.values)
    )
    _write_csv(out, "x,y,z,coherence", rows)
    outputs = [out]
    if figure:
        from . import plots

        fig_path = out.with_suffix(".png")
        plots.save_scan_figure(
            scan.points, scan.values, fig_path, basis_points=b.bloch_points()
        )
        outputs.append(fig_path)
        click.echo(f"figure: {fig_path}")
    _write_manifest("maxcoh-scan", [basis], outputs)
    click.echo(
        f"max coherence: {scan.max_value!r}  maximizers: {len(scan.maximizers)}"
    )


@main.group()
def duality():
    """Wave-particle duality simulator."""


@duality.command("run")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=False))
@click.option("--out", default="duality.json", show_default=True)
@_handle_errors
def duality_run(config_path, out):
    """Evaluate one configuration and report C, P, retain, D, and C + D."""
    cfg = jsonio.load_duality_config(config_path)
    res = duality_mod.run_duality(cfg)
    payload = {
        "coherence": res.coherence,
        "uqsd_bound": res.uqsd_bound,
        "retain_prob": res.retain_prob,
        "distinguishability": res.distinguishability,
        "sum": res.sum,
    }
    jsonio.dump_json(payload, out)
    _write_manifest("duality run", [config_path], [out])
    click.echo(
        f"C: {res.coherence:.6f}  D: {res.distinguishability:.6f}  "
        f"C+D: {res.sum:.6f}"
    )


@duality.command("sweep")
@click.option("--n", "n_samples", default=1000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default="sweep.csv", show_default=True)
@click.option("--workers", default=None, type=int,
              help="Parallel workers (default: LDCOH_WORKERS or 1).")
@click.option("--fixed-r", default=None, type=float,
              help="Freeze R instead of sampling it.")
@click.option("--refine/--no-refine", default=True, show_default=True,
              help="Polish the best candidates with Nelder-Mead.")
@click.option("--figure/--no-figure", default=True, show_default=True)
@_handle_errors
def duality_sweep(n_samples, seed, out, workers, fixed_r, refine, figure):
    """Seeded random sweep over configurations; write CSV (+ figure)."""
    if workers is None:
        workers = int(os.environ.get("LDCOH_WORKERS", "1"))
    optimizer = "nelder-mead-refine" if refine else "random"
    result = duality_mod.complementarity_sweep(
        n_samples=n_samples,
        seed=seed,
        optimizer=optimizer,
        fixed_r=fixed_r,
        workers=workers,
    )
    out = Path(out)
    rows = (
        [str(int(r[0]))] + [_format_float(v) for v in r[1:]]
        for r in result.rows
    )
    _write_csv(out, "sample_id,R,C,P,retain,D,sum", rows)
    outputs = [out]
    if figure:
        from . import plots

        fig_path = out.with_suffix(".png")
        plots.save_sweep_figure(result.rows, fig_path)
        outputs.append(fig_path)
        click.echo(f"figure: {fig_path}")
    summary_path = out.with_suffix(".summary.json")
    jsonio.dump_json(
        {
            "max_sum": result.max_sum,
            "max_c_plus_p": result.max_c_plus_p,
            "refined": result.refined,
            "argmax_config": jsonio.encode_duality_config(result.argmax_config),
        },
        summary_path,
    )
    outputs.append(summary_path)
    _write_manifest("duality sweep", [], outputs, seed=seed)
    click.echo(
        f"max C+D: {result.max_sum!r}  max C+P: {result.max_c_plus_p!r}"
    )


if __name__ == "__main__":
    main()
