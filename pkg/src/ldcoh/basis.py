"""Coherence resource theory over a general (possibly overcomplete) basis.

A "basis" here is any spanning set of n >= d unit vectors in C^d; when n > d
the set is linearly dependent and its members cannot all be unambiguously
discriminated.  Free states are probabilistic mixtures of the basis
projectors; everything else is resourceful.  This module provides free-set
membership, distance-based coherence measures, a maximally-coherent-state
grid scan for qubits, and a monotonicity probe under certified incoherent
channels.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .core import (
    BlochVector,
    DensityMatrix,
    PureState,
    basis_ket,
    bloch_of,
    hermitian_to_real_vec,
    qubit_ket,
)
from .simplex_lsq import SimplexLstsq, project_to_simplex

MEMBERSHIP_TOL = 1e-8


class SpanningResult(NamedTuple):
    spanning: bool
    independent: bool


@dataclass(frozen=True, eq=False)
class GeneralBasis:
    """Ordered list of n >= d unit vectors intended to span C^d."""

    dim: int
    states: tuple[PureState, ...]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        states = tuple(self.states)
        if not states:
            raise ValueError("basis must contain at least one state")
        if any(s.dim != self.dim for s in states):
            raise ValueError("all basis states must match the basis dimension")
        if len(states) < self.dim:
            raise ValueError(
                f"need at least dim={self.dim} states, got {len(states)}"
            )
        object.__setattr__(self, "states", states)

    @property
    def size(self) -> int:
        return len(self.states)

    def amplitude_matrix(self) -> np.ndarray:
        """Stacked amplitudes, one state per row (n x d)."""
        return np.stack([s.amplitudes for s in self.states])

    def projectors(self) -> np.ndarray:
        """All rank-1 projectors as an (n, d, d) array."""
        if "projectors" not in self._cache:
            self._cache["projectors"] = np.stack(
                [s.projector() for s in self.states]
            )
        return self._cache["projectors"]

    def bloch_points(self) -> np.ndarray:
        """Bloch vectors of the basis states (qubit only), shape (n, 3)."""
        if self.dim != 2:
            raise ValueError("Bloch points require dim 2")
        if "bloch" not in self._cache:
            self._cache["bloch"] = np.stack(
                [bloch_of(DensityMatrix.from_pure(s)).as_array()
                 for s in self.states]
            )
        return self._cache["bloch"]

    def frobenius_solver(self) -> SimplexLstsq:
        """Simplex LSQ over the real embedding of the projectors."""
        if "frob" not in self._cache:
            m = np.stack(
                [hermitian_to_real_vec(p) for p in self.projectors()], axis=1
            )
            self._cache["frob"] = SimplexLstsq(m)
        return self._cache["frob"]

    def bloch_solver(self) -> SimplexLstsq:
        """Simplex LSQ over the Bloch points (qubit only)."""
        if "bloch_solver" not in self._cache:
            self._cache["bloch_solver"] = SimplexLstsq(self.bloch_points().T)
        return self._cache["bloch_solver"]

    def with_state(self, state: PureState) -> "GeneralBasis":
        return GeneralBasis(self.dim, self.states + (state,))


@dataclass(frozen=True)
class MembershipResult:
    """Outcome of the free-set feasibility problem."""

    is_free: bool
    weights: np.ndarray | None
    residual: float


def pauli_octahedron_basis() -> GeneralBasis:
    """The six Pauli eigenstates; its free set is the stabilizer octahedron."""
    return GeneralBasis(
        2,
        (
            basis_ket(2, 0),                      # |0>
            basis_ket(2, 1),                      # |1>
            qubit_ket(np.pi / 2, 0.0),            # |+>_x
            qubit_ket(np.pi / 2, np.pi),          # |->_x
            qubit_ket(np.pi / 2, np.pi / 2),      # |+>_y
            qubit_ket(np.pi / 2, 3 * np.pi / 2),  # |->_y
        ),
    )


def is_spanning(basis: GeneralBasis, rtol: float = 1e-10) -> SpanningResult:
    """Whether the states span C^d, and whether they are linearly independent."""
    amp = basis.amplitude_matrix()
    rank = int(np.linalg.matrix_rank(amp, tol=rtol * max(amp.shape)))
    spanning = rank == basis.dim
    return SpanningResult(spanning, spanning and basis.size == basis.dim)


def _require_spanning(basis: GeneralBasis):
    if not is_spanning(basis).spanning:
        raise ValueError("basis states do not span the space")


def membership(
    rho: DensityMatrix, basis: GeneralBasis, tol: float = MEMBERSHIP_TOL
) -> MembershipResult:
    """Decide whether ``rho`` is a mixture of the basis projectors.

    Minimizes the Frobenius norm of (sum_i p_i |psi_i><psi_i| - rho) over the
    probability simplex and reports the optimum; ``is_free`` iff the residual
    is at most ``tol``.  The returned weights are one optimal decomposition
    (the nearest free state's weights when ``rho`` is resourceful); for
    linearly dependent bases the decomposition need not be unique.
    """
    return membership_batch([rho], basis, tol=tol)[0]


def membership_batch(
    rhos: Sequence[DensityMatrix], basis: GeneralBasis, tol: float = MEMBERSHIP_TOL
) -> list[MembershipResult]:
    """Vectorized :func:`membership` over many states sharing one basis."""
    _require_spanning(basis)
    for rho in rhos:
        if rho.dim != basis.dim:
            raise ValueError("state dimension does not match basis")
    targets = np.stack(
        [hermitian_to_real_vec(rho.matrix) for rho in rhos], axis=1
    )
    weights, residuals = basis.frobenius_solver().solve_batch(targets)
    return [
        MembershipResult(bool(res <= tol), weights[:, j].copy(), float(res))
        for j, res in enumerate(residuals)
    ]


def coherence_trace(
    rho: DensityMatrix,
    basis: GeneralBasis,
    rel_tol: float = 1e-9,
    max_iter: int = 100_000,
) -> float:
    """Trace-norm distance from ``rho`` to the free set.

    For qubits this is computed exactly: the trace distance equals the
    Euclidean distance in the Bloch ball, so the measure is the projection
    distance of the state's Bloch vector onto the convex hull of the basis
    Bloch points (a quadratic program over the simplex).  For d > 2 the
    trace norm is minimized over the simplex by projected subgradient
    descent restarted from the Frobenius minimizer; iteration stops when the
    best value changes by less than ``rel_tol`` (relative) over a sweep or
    after ``max_iter`` iterations.
    """
    _require_spanning(basis)
    if rho.dim != basis.dim:
        raise ValueError("state dimension does not match basis")
    if basis.dim == 2:
        target = bloch_of(rho).as_array()
        _, dist = basis.bloch_solver().solve(target)
        return float(dist)
    return _coherence_trace_highdim(rho, basis, rel_tol, max_iter)


def _coherence_trace_highdim(rho, basis, rel_tol, max_iter):
    projectors = basis.projectors()
    weights, _ = basis.frobenius_solver().solve(
        hermitian_to_real_vec(rho.matrix)
    )

    def value_and_subgrad(p):
        x = rho.matrix - np.einsum("i,ijk->jk", p, projectors)
        evals, evecs = np.linalg.eigh(x)
        sign = evecs @ np.diag(np.sign(evals)) @ evecs.conj().T
        grad = -np.einsum("jk,ikj->i", sign, projectors).real
        return float(np.sum(np.abs(evals))), grad

    p = weights
    best = value_and_subgrad(p)[0]
    check_every = 200
    last_best = best
    for it in range(1, max_iter + 1):
        f, g = value_and_subgrad(p)
        best = min(best, f)
        gnorm = np.linalg.norm(g)
        if gnorm < 1e-15:
            break
        step = 0.5 / (gnorm * math.sqrt(it))
        p = project_to_simplex(p - step * g)
        if it % check_every == 0:
            if abs(last_best - best) <= rel_tol * max(1.0, last_best):
                break
            last_best = best
    return min(best, value_and_subgrad(p)[0])


def coherence_generic(
    rho: DensityMatrix, basis: GeneralBasis, distance: str = "trace"
) -> float:
    """Distance-to-free-set coherence for a chosen contractive distance.

    ``distance`` is one of ``"trace"`` or ``"frobenius"`` (alias
    ``"hilbert-schmidt"``).
    """
    key = distance.lower().replace("_", "-")
    if key == "trace":
        return coherence_trace(rho, basis)
    if key in ("frobenius", "hilbert-schmidt"):
        result = membership(rho, basis)
        return result.residual
    raise ValueError(f"unknown distance selector: {distance!r}")


def fibonacci_sphere(n: int) -> np.ndarray:
    """Golden-angle spiral of ``n`` near-uniform points on the unit sphere."""
    k = np.arange(n)
    z = 1.0 - (2.0 * k + 1.0) / n
    radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    golden = np.pi * (3.0 - np.sqrt(5.0))
    phi = golden * k
    return np.stack([radius * np.cos(phi), radius * np.sin(phi), z], axis=1)


@dataclass(frozen=True, eq=False)
class ScanResult:
    """Full grid of pure-state coherences and the near-maximal subset."""

    points: np.ndarray             # (N, 3) Bloch vectors of the grid states
    values: np.ndarray             # (N,) trace-norm coherences
    max_value: float
    maximizers: tuple[tuple[BlochVector, float], ...]


def max_coherent_scan(
    basis: GeneralBasis, grid_resolution: int = 10_000, window: float = 1e-6
) -> ScanResult:
    """Scan pure qubit states for maximal coherence on a Fibonacci grid.

    Returns every grid state whose coherence lies within ``window`` of the
    grid maximum.  Depending on the basis the maximizers may form a single
    cluster, a curve, or cover a great circle.
    """
    if basis.dim != 2:
        raise ValueError("the grid scan is defined for qubit bases only")
    _require_spanning(basis)
    points = fibonacci_sphere(grid_resolution)
    _, values = basis.bloch_solver().solve_batch(points.T)
    max_value = float(values.max())
    mask = values >= max_value - window
    maximizers = tuple(
        (BlochVector(*points[i]), float(values[i])) for i in np.flatnonzero(mask)
    )
    return ScanResult(points, values, max_value, maximizers)


def monotonicity_probe(
    rho: DensityMatrix,
    basis: GeneralBasis,
    channel: Sequence[np.ndarray],
    completeness_atol: float = 1e-10,
) -> tuple[float, float]:
    """Coherence before and after a certified incoherent channel.

    The channel must be trace-preserving and every Kraus operator must pass
    the vertex-image incoherence check for ``basis``; any violation raises.
    The caller asserts the monotonicity ``after <= before``.
    """
    from . import kraus as _kraus  # local import! kraus depends on this module

    ops = [np.asarray(k, dtype=complex) for k in channel]
    total = sum(k.conj().T @ k for k in ops)
    if np.max(np.abs(total - np.eye(basis.dim))) > completeness_atol:
        raise ValueError("channel is not trace-preserving within tolerance")
    for i, k in enumerate(ops):
        check = _kraus.vertex_image_check(k, basis)
        if not check.incoherent:
            raise ValueError(
                f"Kraus operator {i} is not incoherent for this basis "
                f"(vertex {check.failing_vertex} leaves the free set)"
            )
    before = coherence_trace(rho, basis)
    after = coherence_trace(_kraus.channel_apply(ops, rho), basis)
    return before, after
