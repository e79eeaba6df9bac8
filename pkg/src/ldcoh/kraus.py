"""Free-operation machinery: incoherence checks for Kraus operators.

Two complementary certifiers live here.  ``kraus_circle_condition`` evaluates
an algebraic necessary condition for a single qubit Kraus operator relative
to a three-state "circle" basis (three distinct pure qubit states sharing a
polar angle).  ``vertex_image_check`` is an exact certifier for any basis:
because rho -> K rho K† / tr(...) is projective-linear, the normalized images
of the free set form the convex hull of the normalized vertex images, so a
Kraus operator preserves the free set under post-selection iff every basis
projector with non-vanishing image maps back into the free set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import GeneralBasis, MEMBERSHIP_TOL, membership_batch
from .core import DensityMatrix, PureState, qubit_ket


@dataclass(frozen=True)
class QubitCircleBasis:
    """Three distinct pure qubit states with a common polar angle theta.

    Any three distinct pure qubit states lie on some circle of the Bloch
    sphere; in a suitable frame they read cos(theta/2)|0> +
    e^{i phi_k} sin(theta/2)|1> with pairwise distinct azimuths.
    """

    theta: float
    phis: tuple[float, float, float]

    def __post_init__(self):
        if not 0.0 < self.theta < np.pi:
            raise ValueError("theta must lie strictly inside (0, pi)")
        phis = tuple(float(p) for p in self.phis)
        if len(phis) != 3:
            raise ValueError("exactly three azimuths are required")
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(np.exp(1j * phis[i]) - np.exp(1j * phis[j])) < 1e-12:
                    raise ValueError("azimuths must be pairwise distinct mod 2*pi")
        object.__setattr__(self, "phis", phis)

    def states(self) -> tuple[PureState, PureState, PureState]:
        return tuple(qubit_ket(self.theta, phi) for phi in self.phis)

    def to_general_basis(self) -> GeneralBasis:
        return GeneralBasis(2, self.states())


@dataclass(frozen=True)
class CircleConditionResult:
    """Coefficients of the affine identity A + B p1 + C p2 = 0.

    A free input state of a circle basis has the same diagonal as every other
    free state, so preserving freeness forces the diagonal-matching identity
    to hold for all mixing weights (p1, p2); ``satisfied`` reports whether
    all three coefficients vanish (scaled tolerance, so the flag is invariant
    under K -> lam K).  ``delta`` is the off-diagonal combination
    conj(K00) K01 tan^2(theta/2) - conj(K10) K11 whose vanishing makes B and C
    collapse; ``generic_form`` evaluates the rearranged expression
    |K00|^2 - |K11|^2 + |K01|^2/kappa - |K10|^2 kappa, defined only when both
    off-diagonal products are nonzero.
    """

    satisfied: bool
    delta: complex
    abc: tuple[float, float, float]
    kappa: complex | None
    generic_form: complex | None


def kraus_circle_condition(
    k: np.ndarray, basis: QubitCircleBasis, tol: float = 1e-10
) -> CircleConditionResult:
    """Necessary condition for a 2x2 Kraus operator to preserve the free set."""
    k = np.asarray(k, dtype=complex)
    if k.shape != (2, 2):
        raise ValueError("a 2x2 Kraus operator is required")
    half = basis.theta / 2.0
    t2 = np.tan(half) ** 2
    ct = 1.0 / np.tan(half)
    phi1, phi2, phi3 = basis.phis

    upper = np.conj(k[0, 0]) * k[0, 1]
    lower = np.conj(k[1, 0]) * k[1, 1]
    delta = upper * t2 - lower

    a = (
        abs(k[0, 0]) ** 2
        - abs(k[1, 1]) ** 2
        + abs(k[0, 1]) ** 2 * t2
        - abs(k[1, 0]) ** 2 * ct ** 2
        + 2.0 * ct * (delta * np.exp(1j * phi3)).real
    )
    b = 2.0 * ct * (delta * (np.exp(1j * phi1) - np.exp(1j * phi3))).real
    c = 2.0 * ct * (delta * (np.exp(1j * phi2) - np.exp(1j * phi3))).real

    scale = max(1.0, float(np.sum(np.abs(k) ** 2)))
    satisfied = max(abs(a), abs(b), abs(c)) <= tol * scale

    kappa = None
    generic = None
    if abs(upper) > 0.0 and abs(lower) > 0.0:
        kappa = upper / lower
        generic = (
            abs(k[0, 0]) ** 2
            - abs(k[1, 1]) ** 2
            + abs(k[0, 1]) ** 2 / kappa
            - abs(k[1, 0]) ** 2 * kappa
        )
    return CircleConditionResult(
        satisfied=bool(satisfied),
        delta=complex(delta),
        abc=(float(a), float(b), float(c)),
        kappa=kappa,
        generic_form=generic,
    )


@dataclass(frozen=True)
class VertexImageResult:
    incoherent: bool
    failing_vertex: int | None
    vacuous: bool = False


def vertex_image_check(
    k: np.ndarray,
    basis: GeneralBasis,
    membership_tol: float = MEMBERSHIP_TOL,
    trace_tol: float = 1e-10,
) -> VertexImageResult:
    """Exact incoherence certificate via normalized vertex images.

    ``k`` preserves the free set under post-selection iff, for every basis
    projector P_i with tr(K P_i K†) > ``trace_tol``, the normalized image is
    itself free.  Vertices with vanishing image contribute no outcome and are
    skipped; if every image vanishes (e.g. K = 0) the check is vacuously true
    and flagged as such.
    """
    k = np.asarray(k, dtype=complex)
    if k.shape != (basis.dim, basis.dim):
        raise ValueError("Kraus operator shape does not match the basis")
    images = []
    indices = []
    for i, p in enumerate(basis.projectors()):
        out = k @ p @ k.conj().T
        tr = float(np.trace(out).real)
        if tr <= trace_tol:
            continue
        images.append(DensityMatrix(out / tr))
        indices.append(i)
    if not images:
        return VertexImageResult(incoherent=True, failing_vertex=None, vacuous=True)
    results = membership_batch(images, basis, tol=membership_tol)
    for idx, res in zip(indices, results):
        if not res.is_free:
            return VertexImageResult(incoherent=False, failing_vertex=idx)
    return VertexImageResult(incoherent=True, failing_vertex=None)


def channel_apply(
    channel, rho: DensityMatrix, completeness_atol: float = 1e-10
) -> DensityMatrix:
    """Apply a trace-preserving Kraus channel to ``rho``."""
    ops = [np.asarray(k, dtype=complex) for k in channel]
    if not ops:
        raise ValueError("channel must contain at least one Kraus operator")
    d = rho.dim
    total = sum(k.conj().T @ k for k in ops)
    if np.max(np.abs(total - np.eye(d))) > completeness_atol:
        raise ValueError("Kraus operators do not satisfy the completeness relation")
    out = sum(k @ rho.matrix @ k.conj().T for k in ops)
    out = out / np.trace(out).real
    return DensityMatrix(out)


def random_kraus_operator(rng: np.random.Generator, dim: int = 2) -> np.ndarray:
    """Ginibre-distributed Kraus operator scaled to unit operator norm."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return g / np.linalg.svd(g, compute_uv=False)[0]


def random_incoherent_channel(
    basis: GeneralBasis, rng: np.random.Generator, max_branches: int = 3
) -> list[np.ndarray]:
    """Sample a trace-preserving channel that is incoherent by construction.

    Mixes an optional identity branch with "replacer" branches of the form
    sqrt(w) |psi_a><e| for basis states psi_a and an orthonormal frame {e}:
    every branch maps each free state onto a basis projector (or leaves it
    untouched), so each branch passes the vertex-image check.
    """
    d = basis.dim
    n_groups = int(rng.integers(1, max_branches + 1))
    raw = rng.random(n_groups + 1)
    weights = raw / raw.sum()
    id_weight, group_weights = weights[0], weights[1:]
    if rng.random() < 0.5:
        # Drop the identity branch half of the time.
        group_weights = weights[1:] / weights[1:].sum()
        id_weight = 0.0
    ops: list[np.ndarray] = []
    if id_weight > 0.0:
        phase = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi))
        ops.append(np.sqrt(id_weight) * phase * np.eye(d, dtype=complex))
    # Haar frame: orthonormal columns of a random unitary.
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    frame = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    for w in group_weights:
        for col in range(d):
            target = basis.states[int(rng.integers(basis.size))]
            bra = frame[:, col].conj()
            ops.append(np.sqrt(w) * np.outer(target.amplitudes, bra))
    return ops
