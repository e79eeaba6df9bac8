"""POVMs whose outcomes reproduce the states of a spanning set.

For any spanning set there is a generalized measurement with measurement
operators A_i = sqrt(d p~_i) |psi_i><psi_i| provided weights p~ > 0 exist with
sum_i p~_i |psi_i><psi_i| = I/d.  When the maximally mixed state is not such a
mixture the set is extended with additional pure states (whose outcomes are
then ignored).  Feeding the measurement a full-rank state and forgetting the
outcome produces exactly the free states of the basis; partial blocking of
the non-ignored outcomes selects which mixture is produced.

The module also hosts a three-outcome qubit POVM built from operators
proportional to the projectors of a symmetric state triple.  A state counts
as incoherent for a measurement-based coherence notion when the cross
products of distinct measurement operators through the state vanish;
``search_povm_free_state`` shows that for this POVM no qubit state satisfies
all cross-term conditions, whereas the mixture-based free set of the same
triple is never empty.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .basis import GeneralBasis, is_spanning
from .core import (
    BlochVector,
    DensityMatrix,
    PureState,
    PAULIS,
    hermitian_to_real_vec,
    qubit_ket,
    real_vec_to_hermitian,
)

MIN_OUTCOME_WEIGHT = 1e-6
COMPLETENESS_ATOL = 1e-10


@dataclass(frozen=True, eq=False)
class Povm:
    """Measurement operators A_i with effects E_i = A_i† A_i summing to I."""

    measurement_ops: tuple[np.ndarray, ...]
    ignored: frozenset[int] = field(default_factory=frozenset)
    completeness_atol: float = COMPLETENESS_ATOL

    def __post_init__(self):
        ops = tuple(np.asarray(a, dtype=complex) for a in self.measurement_ops)
        if not ops:
            raise ValueError("POVM must contain at least one outcome")
        d = ops[0].shape[0]
        total = sum(a.conj().T @ a for a in ops)
        if np.max(np.abs(total - np.eye(d))) > self.completeness_atol:
            raise ValueError("POVM effects do not sum to the identity")
        for a in ops:
            eff = a.conj().T @ a
            if np.min(np.linalg.eigvalsh((eff + eff.conj().T) / 2)) < -1e-10:
                raise ValueError("POVM effect is not positive semidefinite")
        bad = [i for i in self.ignored if not 0 <= i < len(ops)]
        if bad:
            raise ValueError(f"ignored indices out of range: {bad}")
        object.__setattr__(self, "measurement_ops", ops)
        object.__setattr__(self, "ignored", frozenset(self.ignored))

    @property
    def dim(self) -> int:
        return self.measurement_ops[0].shape[0]

    @property
    def size(self) -> int:
        return len(self.measurement_ops)

    def effects(self) -> tuple[np.ndarray, ...]:
        return tuple(a.conj().T @ a for a in self.measurement_ops)

    def active_indices(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.size) if i not in self.ignored)

    def completeness_residual(self) -> float:
        total = sum(e for e in self.effects())
        return float(np.linalg.norm(total - np.eye(self.dim)))


@dataclass(frozen=True, eq=False)
class BuildPovmResult:
    povm: Povm
    extension: tuple[PureState, ...]
    weights: np.ndarray


def _moment_system(projectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rows: real embedding of each projector (columns) plus the sum row."""
    d = projectors.shape[1]
    cols = np.stack([hermitian_to_real_vec(p) for p in projectors], axis=1)
    a = np.vstack([cols, np.ones((1, cols.shape[1]))])
    b = np.concatenate([hermitian_to_real_vec(np.eye(d) / d), [1.0]])
    return a, b


def _maximin_lp(projectors: np.ndarray):
    """maximize min_i p_i subject to sum_i p_i P_i = I/d, sum p = 1.

    Returns (t_star, p, dual_matrix) where dual_matrix is the Hermitian
    reconstruction of the moment-constraint marginals (None if unavailable);
    t_star is -inf when the moment system is infeasible.
    """
    n = projectors.shape[0]
    d = projectors.shape[1]
    a_eq_p, b_eq = _moment_system(projectors)
    a_eq = np.hstack([a_eq_p, np.zeros((a_eq_p.shape[0], 1))])
    a_ub = np.hstack([-np.eye(n), np.ones((n, 1))])   # t - p_i <= 0
    c = np.zeros(n + 1)
    c[-1] = -1.0
    bounds = [(None, None)] * n + [(None, 1.0)]
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.zeros(n),
        A_eq=a_eq,
        b_eq=b_eq,
        bounds=bounds,
        method="highs",
    )
    if not res.success:
        return -np.inf, None, None
    dual = None
    marginals = getattr(getattr(res, "eqlin", None), "marginals", None)
    if marginals is not None:
        dual = real_vec_to_hermitian(np.asarray(marginals[: d * d]), d)
        dual = (dual + dual.conj().T) / 2
    return float(res.x[-1]), res.x[:-1], dual


def _extension_candidates(
    basis_states: list[PureState], dual: np.ndarray | None, dim: int
) -> list[PureState]:
    candidates: list[PureState] = []
    projectors = np.stack([s.projector() for s in basis_states])
    if dual is not None and np.linalg.norm(dual) > 1e-14:
        traceless = dual - np.trace(dual) / dim * np.eye(dim)
        if np.linalg.norm(traceless) > 1e-14:
            _, vecs = np.linalg.eigh(traceless)
            candidates.extend(PureState(vecs[:, k]) for k in range(dim))
    # Direction in which the barycenter fails to reach I/d.
    residual = np.eye(dim) / dim - projectors.mean(axis=0)
    if np.linalg.norm(residual) > 1e-14:
        _, vecs = np.linalg.eigh(residual)
        candidates.append(PureState(vecs[:, -1]))
        candidates.append(PureState(vecs[:, 0]))
    return candidates


def _spectral_completion(basis_states: list[PureState], dim: int) -> list[PureState]:
    """States completing any set to one whose hull strictly contains I/d."""
    sigma = np.stack([s.projector() for s in basis_states]).mean(axis=0)
    lam_max = float(np.linalg.eigvalsh(sigma)[-1])
    mu = min(0.5, 1.0 / (2.0 * dim * lam_max))
    t = (np.eye(dim) / dim - mu * sigma) / (1.0 - mu)
    vals, vecs = np.linalg.eigh(t)
    if vals.min() <= 0.0:
        raise RuntimeError("spectral completion produced a non-positive mixture")
    return [PureState(vecs[:, k]) for k in range(dim)]


def build_povm(
    basis: GeneralBasis,
    min_weight: float = MIN_OUTCOME_WEIGHT,
    max_rounds: int | None = None,
) -> BuildPovmResult:
    """Construct the POVM whose outcomes are the basis states.

    Solves the max-min linear program for weights p~ with
    sum_i p~_i |psi_i><psi_i| = I/d; while the optimum min weight stays at or
    below ``min_weight`` the set is extended, first with single pure states
    along the violated direction of the LP dual (evaluating each candidate by
    re-solving the LP and keeping the best), then, if progress stalls, with
    the eigenstates of an explicit completing mixture, which always succeeds.
    Measurement operators are A_i = sqrt(d p~_i)|psi_i><psi_i| and extension
    outcomes are marked ignored.
    """
    if not is_spanning(basis).spanning:
        raise ValueError("basis states do not span the space")
    d = basis.dim
    states = list(basis.states)
    n_original = len(states)
    if max_rounds is None:
        max_rounds = d * d + 2

    t_star, weights, dual = _maximin_lp(np.stack([s.projector() for s in states]))
    rounds = 0
    while t_star <= min_weight:
        rounds += 1
        appended = False
        if rounds <= max_rounds:
            best = (t_star, None, None, None)
            for cand in _extension_candidates(states, dual, d):
                trial = np.stack([s.projector() for s in states + [cand]])
                t_trial, w_trial, dual_trial = _maximin_lp(trial)
                if t_trial > best[0] + 1e-12:
                    best = (t_trial, cand, w_trial, dual_trial)
            if best[1] is not None:
                states.append(best[1])
                t_star, weights, dual = best[0], best[2], best[3]
                appended = True
        if not appended:
            states.extend(_spectral_completion(states, d))
            t_star, weights, dual = _maximin_lp(
                np.stack([s.projector() for s in states])
            )
            if t_star <= min_weight:
                raise RuntimeError("failed to find strictly positive POVM weights")

    projectors = np.stack([s.projector() for s in states])
    weights = _refine_weights(projectors, np.asarray(weights, dtype=float))
    if weights.min() <= 0.0:
        raise RuntimeError("weight refinement left a non-positive weight")
    ops = tuple(
        np.sqrt(d * w) * p for w, p in zip(weights, projectors)
    )
    povm = Povm(
        measurement_ops=ops,
        ignored=frozenset(range(n_original, len(states))),
    )
    return BuildPovmResult(
        povm=povm,
        extension=tuple(states[n_original:]),
        weights=weights,
    )


def _refine_weights(projectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Minimal-norm correction putting the LP weights exactly on the moment flat."""
    a, b = _moment_system(projectors)
    gap = a @ weights - b
    delta, *_ = np.linalg.lstsq(a, gap, rcond=None)
    refined = weights - delta
    residual = np.linalg.norm(a @ refined - b)
    if residual > 1e-11:
        raise RuntimeError(f"moment refinement did not converge: {residual}")
    return refined


def as_blocking_profile(q, n_active: int) -> np.ndarray:
    """Validate a probability vector over the non-ignored outcomes."""
    arr = np.asarray(q, dtype=float).ravel()
    if arr.size != n_active:
        raise ValueError(
            f"blocking profile needs {n_active} weights, got {arr.size}"
        )
    if arr.min() < -1e-12:
        raise ValueError("blocking weights must be nonnegative")
    arr = np.clip(arr, 0.0, None)
    total = arr.sum()
    if abs(total - 1.0) > 1e-10:
        raise ValueError("blocking weights must sum to 1")
    return arr / total


def generate_incoherent(
    povm: Povm, blocking, rho: DensityMatrix | None = None
) -> DensityMatrix:
    """Measure ``rho``, block outcomes per ``blocking``, forget the record.

    ``blocking`` is the probability vector q over the non-ignored outcomes;
    the output is sum_i q_i (A_i rho A_i†)/tr(A_i rho A_i†).  With the default
    maximally mixed input every normalized outcome equals the corresponding
    basis projector, so the output is the free state with weights exactly q.
    """
    if rho is None:
        rho = DensityMatrix(np.eye(povm.dim) / povm.dim)
    if rho.dim != povm.dim:
        raise ValueError("state dimension does not match the POVM")
    active = povm.active_indices()
    q = as_blocking_profile(blocking, len(active))
    outcomes = []
    kept = []
    for pos, i in enumerate(active):
        a = povm.measurement_ops[i]
        out = a @ rho.matrix @ a.conj().T
        tr = float(np.trace(out).real)
        if tr <= 1e-14:
            if q[pos] > 0.0:
                warnings.warn(
                    f"outcome {i} has zero probability on this input; "
                    "its blocking weight is redistributed",
                    RuntimeWarning,
                    stacklevel=2,
                )
            continue
        outcomes.append(out / tr)
        kept.append(pos)
    if not kept:
        raise ValueError("every non-ignored outcome has zero probability")
    q_kept = q[kept]
    q_kept = q_kept / q_kept.sum()
    mix = sum(w * o for w, o in zip(q_kept, outcomes))
    return DensityMatrix(mix)


@dataclass(frozen=True, eq=False)
class CrossTermSearchResult:
    """Search for a state making all distinct-outcome cross terms vanish."""

    free_state_exists: bool
    min_violation: float
    argmin: BlochVector


def symmetric_triple(theta: float) -> tuple[PureState, PureState, PureState]:
    """States |0>, cos(t/2)|0> +- sin(t/2)|1> on a great circle."""
    return (
        PureState(np.array([1.0, 0.0], dtype=complex)),
        qubit_ket(theta, 0.0),
        qubit_ket(-theta, 0.0),
    )


def three_outcome_circle_povm(theta: float) -> tuple[list[np.ndarray], tuple[PureState, ...]]:
    """Measurement operators proportional to the symmetric-triple projectors.

    Requires theta in (pi/2, pi) so the first coefficient
    sqrt(1 - cot^2(theta/2)) is real.
    """
    if not np.pi / 2 < theta < np.pi:
        raise ValueError("theta must lie in (pi/2, pi)")
    chi = symmetric_triple(theta)
    half = theta / 2.0
    cot2 = 1.0 / np.tan(half) ** 2
    csc2 = 1.0 / np.sin(half) ** 2
    ops = [
        np.sqrt(1.0 - cot2) * chi[0].projector(),
        np.sqrt(csc2 / 2.0) * chi[1].projector(),
        np.sqrt(csc2 / 2.0) * chi[2].projector(),
    ]
    total = sum(b.conj().T @ b for b in ops)
    if np.max(np.abs(total - np.eye(2))) > COMPLETENESS_ATOL:
        raise RuntimeError("three-outcome POVM failed the completeness identity")
    return ops, chi


def search_povm_free_state(theta: float) -> CrossTermSearchResult:
    """Minimize the cross-term violations over the whole Bloch ball.

    The vanishing cross-term conditions <chi_i|rho|chi_j> = 0 for i != j are
    six real affine equations in the Bloch vector; the minimal violation over
    all qubit states is the exact solution of the corresponding trust-region
    least squares over the unit ball.  A positive minimum certifies that no
    state is incoherent in the measurement-based sense.
    """
    _, chi = three_outcome_circle_povm(theta)
    rows = []
    rhs = []
    for i, j in ((0, 1), (1, 2), (2, 0)):
        bra = chi[i].amplitudes.conj()
        ket = chi[j].amplitudes
        coeffs = np.array([bra @ (s @ ket) for s in PAULIS]) / 2.0
        const = (bra @ ket) / 2.0
        rows.append(coeffs.real)
        rows.append(coeffs.imag)
        rhs.append(-const.real)
        rhs.append(-const.imag)
    a = np.array(rows)
    b = np.array(rhs)
    r = _ball_constrained_lstsq(a, b)
    violation = float(np.linalg.norm(a @ r - b))
    return CrossTermSearchResult(
        free_state_exists=violation <= 1e-9,
        min_violation=violation,
        argmin=BlochVector(*r),
    )


def _ball_constrained_lstsq(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """argmin ||A r - b|| over the closed unit ball (trust-region subproblem)."""
    r, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.linalg.norm(r) <= 1.0:
        return r
    gram = a.T @ a
    atb = a.T @ b

    def radius(lam):
        return np.linalg.norm(np.linalg.solve(gram + lam * np.eye(3), atb))

    lo, hi = 0.0, 1.0
    while radius(hi) > 1.0:
        hi *= 2.0
        if hi > 1e12:
            break
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if radius(mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return np.linalg.solve(gram + hi * np.eye(3), atb)
