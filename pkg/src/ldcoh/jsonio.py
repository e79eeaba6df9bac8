"""JSON (de)serialization for states, bases, Kraus sets, POVMs, and configs.

Complex numbers serialize as two-element arrays [re, im]; matrices as
row-major nested arrays.  Schema problems raise :class:`InputError` so the
CLI can distinguish malformed input (exit 2) from domain failures (exit 1).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .basis import GeneralBasis
from .core import DensityMatrix, PureState
from .duality import DualityConfig
from .kraus import QubitCircleBasis
from .povm import Povm


class InputError(Exception):
    """Malformed or schema-violating input."""


def _fail(path, msg: str) -> "InputError":
    prefix = f"{path}: " if path else ""
    return InputError(prefix + msg)


def complex_to_pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def pair_to_complex(value, path=None) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, (int, float)) for x in value)
    ):
        raise _fail(path, f"expected a [re, im] pair, got {value!r}")
    return complex(value[0], value[1])


def encode_vector(vec: np.ndarray) -> list[list[float]]:
    return [complex_to_pair(z) for z in np.asarray(vec, dtype=complex)]


def decode_vector(value, path=None) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise _fail(path, "expected a non-empty list of [re, im] pairs")
    return np.array([pair_to_complex(z, path) for z in value], dtype=complex)


def encode_matrix(mat: np.ndarray) -> list[list[list[float]]]:
    return [encode_vector(row) for row in np.asarray(mat, dtype=complex)]


def decode_matrix(value, path=None) -> np.ndarray:
    if not isinstance(value, list) or not value:
        raise _fail(path, "expected a non-empty nested list (matrix)")
    rows = [decode_vector(row, path) for row in value]
    width = {row.size for row in rows}
    if len(width) != 1:
        raise _fail(path, "matrix rows have inconsistent lengths")
    return np.stack(rows)


def load_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise _fail(path, f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def dump_json(payload, path) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def decode_state(doc, path=None) -> DensityMatrix:
    """Density matrix from {"matrix": ...} or pure {"amplitudes": ...}.

    Structural problems raise :class:`InputError`; physically invalid values
    (non-Hermitian, wrong trace, ...) propagate as ``ValueError`` so callers
    can report them as domain errors.
    """
    if not isinstance(doc, dict):
        raise _fail(path, "expected a JSON object describing a state")
    if "matrix" in doc:
        return DensityMatrix(decode_matrix(doc["matrix"], path))
    if "amplitudes" in doc:
        return DensityMatrix.from_pure(
            PureState(decode_vector(doc["amplitudes"], path))
        )
    raise _fail(path, 'state object needs a "matrix" or "amplitudes" field')


def load_state(path) -> DensityMatrix:
    return decode_state(load_json(path), path)


def decode_basis(doc, path=None) -> GeneralBasis:
    """Basis from {"dim": d, "states": [[[re,im],...], ...]}."""
    if not isinstance(doc, dict) or "dim" not in doc or "states" not in doc:
        raise _fail(path, 'basis object needs "dim" and "states" fields')
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise _fail(path, f'"dim" must be a positive integer, got {dim!r}')
    if not isinstance(doc["states"], list) or not doc["states"]:
        raise _fail(path, '"states" must be a non-empty list')
    vectors = [decode_vector(s, path) for s in doc["states"]]
    return GeneralBasis(dim, tuple(PureState(v) for v in vectors))


def load_basis(path) -> GeneralBasis:
    return decode_basis(load_json(path), path)


def encode_basis(basis: GeneralBasis) -> dict:
    return {
        "dim": basis.dim,
        "states": [encode_vector(s.amplitudes) for s in basis.states],
    }


def decode_circle_basis(doc, path=None) -> QubitCircleBasis:
    if not isinstance(doc, dict) or "theta" not in doc or "phis" not in doc:
        raise _fail(path, 'circle basis needs "theta" and "phis" fields')
    phis = doc["phis"]
    if not isinstance(phis, list) or len(phis) != 3:
        raise _fail(path, '"phis" must list exactly three azimuths')
    if not isinstance(doc["theta"], (int, float)) or not all(
        isinstance(p, (int, float)) for p in phis
    ):
        raise _fail(path, "circle basis angles must be numbers")
    return QubitCircleBasis(float(doc["theta"]), tuple(float(p) for p in phis))


def load_kraus_list(path) -> list[np.ndarray]:
    doc = load_json(path)
    if isinstance(doc, dict) and "kraus" in doc:
        doc = doc["kraus"]
    if not isinstance(doc, list) or not doc:
        raise _fail(path, 'expected a list of matrices (or {"kraus": [...]})')
    return [decode_matrix(m, path) for m in doc]


def encode_povm(povm: Povm) -> dict:
    return {
        "effects": [encode_matrix(e) for e in povm.effects()],
        "measurement_ops": [encode_matrix(a) for a in povm.measurement_ops],
        "ignored": sorted(povm.ignored),
    }


def decode_povm(doc, path=None) -> Povm:
    if not isinstance(doc, dict) or "measurement_ops" not in doc:
        raise _fail(path, 'POVM object needs a "measurement_ops" field')
    ops = tuple(decode_matrix(m, path) for m in doc["measurement_ops"])
    ignored = frozenset(int(i) for i in doc.get("ignored", []))
    return Povm(measurement_ops=ops, ignored=ignored)


def decode_duality_config(doc, path=None) -> DualityConfig:
    """Config from {"alpha": [re,im], "beta": [re,im], "r": R, "detectors": [...]}."""
    if not isinstance(doc, dict):
        raise _fail(path, "expected a JSON object describing a configuration")
    for key in ("alpha", "beta", "r", "detectors"):
        if key not in doc:
            raise _fail(path, f'configuration is missing the "{key}" field')
    if not isinstance(doc["detectors"], list) or len(doc["detectors"]) != 3:
        raise _fail(path, '"detectors" must list exactly three states')
    if not isinstance(doc["r"], (int, float)):
        raise _fail(path, '"r" must be a number')
    alpha = pair_to_complex(doc["alpha"], path)
    beta = pair_to_complex(doc["beta"], path)
    vectors = [decode_vector(d, path) for d in doc["detectors"]]
    return DualityConfig(
        alpha=alpha,
        beta=beta,
        r=float(doc["r"]),
        detectors=tuple(PureState(v) for v in vectors),
    )


def load_duality_config(path) -> DualityConfig:
    return decode_duality_config(load_json(path), path)


def encode_duality_config(cfg: DualityConfig) -> dict:
    return {
        "alpha": complex_to_pair(cfg.alpha),
        "beta": complex_to_pair(cfg.beta),
        "r": cfg.r,
        "detectors": [encode_vector(d.amplitudes) for d in cfg.detectors],
    }
