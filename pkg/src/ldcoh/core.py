"""Dense complex linear algebra for small-dimension quantum states.

Everything here is plain numpy at d <= 8: state/operator containers with
validated invariants, Hermitian eigen-based norms, and the qubit Bloch-ball
maps used throughout the rest of the package.  All containers are immutable
after construction and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Default tolerances: the tight ones guard algebraic identities (Hermiticity,
# unit norm/trace), the looser one guards eigenvalue nonnegativity.
HERMITIAN_ATOL = 1e-12
NORM_ATOL = 1e-12
PSD_ATOL = 1e-10

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


def _frozen_complex(values, shape=None) -> np.ndarray:
    arr = np.array(values, dtype=complex)
    if shape is not None and arr.shape != shape:
        raise ValueError(f"expected shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError("entries must be finite (no NaN/Inf)")
    arr.setflags(write=False)
    return arr


def as_square_matrix(a) -> np.ndarray:
    """Coerce to a finite square complex matrix."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError("matrix entries must be finite (no NaN/Inf)")
    return arr


def require_hermitian(a, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``a`` as an ndarray after checking Hermiticity within ``atol``."""
    arr = as_square_matrix(a)
    if np.max(np.abs(arr - arr.conj().T)) > atol:
        raise ValueError("matrix is not Hermitian within tolerance")
    return arr


def trace_norm(a, atol: float = HERMITIAN_ATOL) -> float:
    """Trace norm (sum of absolute eigenvalues) of a Hermitian matrix.

    Raises ``ValueError`` for non-square or non-Hermitian input.
    """
    arr = require_hermitian(a, atol=atol)
    return float(np.sum(np.abs(np.linalg.eigvalsh(arr))))


def is_psd(a, tol: float = PSD_ATOL) -> bool:
    """True iff the Hermitian matrix ``a`` has min eigenvalue >= -tol."""
    arr = require_hermitian(a, atol=max(tol, HERMITIAN_ATOL))
    return bool(np.min(np.linalg.eigvalsh(arr)) >= -tol)


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit-norm complex amplitude vector."""

    amplitudes: np.ndarray
    atol: float = field(default=NORM_ATOL, repr=False, compare=False)

    def __post_init__(self):
        arr = _frozen_complex(np.ravel(np.asarray(self.amplitudes)))
        if arr.size == 0:
            raise ValueError("amplitudes must be non-empty")
        norm = np.linalg.norm(arr)
        if abs(norm - 1.0) > self.atol:
            raise ValueError(f"state norm {norm!r} is not 1 within {self.atol}")
        object.__setattr__(self, "amplitudes", arr)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def overlap(self, other: "PureState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    @staticmethod
    def normalized(values) -> "PureState":
        arr = np.ravel(np.asarray(values, dtype=complex))
        norm = np.linalg.norm(arr)
        if norm <= 0.0 or not np.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return PureState(arr / norm)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Unit-trace positive-semidefinite Hermitian operator."""

    matrix: np.ndarray
    hermitian_atol: float = field(default=HERMITIAN_ATOL, repr=False, compare=False)
    psd_atol: float = field(default=PSD_ATOL, repr=False, compare=False)

    def __post_init__(self):
        arr = require_hermitian(self.matrix, atol=self.hermitian_atol)
        tr = np.trace(arr).real
        if abs(tr - 1.0) > self.hermitian_atol * 10:
            raise ValueError(f"trace {tr!r} is not 1 within tolerance")
        if np.min(np.linalg.eigvalsh(arr)) < -self.psd_atol:
            raise ValueError("matrix has an eigenvalue below -psd_atol")
        # Store the Hermitian average so downstream algebra sees an exactly
        # Hermitian operator.
        sym = (arr + arr.conj().T) / 2.0
        object.__setattr__(self, "matrix", _frozen_complex(sym))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @staticmethod
    def from_pure(state: PureState) -> "DensityMatrix":
        return DensityMatrix(state.projector())


@dataclass(frozen=True)
class BlochVector:
    """Real 3-vector inside the closed unit ball."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        vec = np.array([self.x, self.y, self.z], dtype=float)
        if not np.all(np.isfinite(vec)):
            raise ValueError("Bloch components must be finite")
        if np.linalg.norm(vec) > 1.0 + PSD_ATOL:
            raise ValueError("Bloch vector lies outside the unit ball")

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))


def bloch_of(rho: DensityMatrix) -> BlochVector:
    """Bloch vector of a qubit density matrix, r_k = tr(rho sigma_k)."""
    if rho.dim != 2:
        raise ValueError(f"Bloch representation requires dim 2, got {rho.dim}")
    m = rho.matrix
    return BlochVector(
        x=float(np.trace(m @ SIGMA_X).real),
        y=float(np.trace(m @ SIGMA_Y).real),
        z=float(np.trace(m @ SIGMA_Z).real),
    )


def state_of(b: BlochVector) -> DensityMatrix:
    """Qubit density matrix (I + r . sigma)/2 for a Bloch vector r."""
    m = (np.eye(2, dtype=complex) + b.x * SIGMA_X + b.y * SIGMA_Y + b.z * SIGMA_Z) / 2.0
    return DensityMatrix(m)


def qubit_ket(theta: float, phi: float) -> PureState:
    """Pure qubit state cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return PureState(
        np.array([np.cos(theta / 2.0), np.exp(1j * phi) * np.sin(theta / 2.0)])
    )


def basis_ket(dim: int, index: int) -> PureState:
    """Computational basis state |index> in dimension ``dim``."""
    if not 0 <= index < dim:
        raise ValueError(f"index {index} out of range for dim {dim}")
    amp = np.zeros(dim, dtype=complex)
    amp[index] = 1.0
    return PureState(amp)


def hermitian_to_real_vec(h: np.ndarray) -> np.ndarray:
    """Isometric real embedding of a Hermitian matrix.

    Concatenates the real diagonal with sqrt(2)-scaled real and imaginary
    upper-triangle entries, so Euclidean distance in the image equals the
    Frobenius distance between the matrices.
    """
    arr = np.asarray(h, dtype=complex)
    d = arr.shape[0]
    iu = np.triu_indices(d, k=1)
    return np.concatenate(
        [
            arr.diagonal().real,
            np.sqrt(2.0) * arr[iu].real,
            np.sqrt(2.0) * arr[iu].imag,
        ]
    )


def real_vec_to_hermitian(v: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`hermitian_to_real_vec`."""
    v = np.asarray(v, dtype=float)
    if v.size != dim * dim:
        raise ValueError(f"expected {dim * dim} components, got {v.size}")
    out = np.zeros((dim, dim), dtype=complex)
    out[np.diag_indices(dim)] = v[:dim]
    iu = np.triu_indices(dim, k=1)
    n_off = iu[0].size
    re = v[dim : dim + n_off] / np.sqrt(2.0)
    im = v[dim + n_off :] / np.sqrt(2.0)
    out[iu] += re + 1j * im
    out[(iu[1], iu[0])] += re - 1j * im
    return out
