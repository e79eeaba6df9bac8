"""Three-path double-slit simulation with linearly dependent path states.

An input qubit alpha|0> + beta|1> passes a partially transmitting element
that leaks the |0> beam through a Hadamard with probability 1-R, so the
quanton superposes the linearly dependent triple {|0>, |+>, |1>}.  Each path
marks one of three detector states in C^3.  Wave behaviour is the trace-norm
coherence of the quanton state with respect to {|0>, |1>, |+>}; particle
behaviour is the retained-probability-weighted unambiguous-discrimination
bound for the phase-damped detector states.  The sweep utilities sample
random configurations (optionally with derivative-free refinement) to probe
the complementarity of the two quantities.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from .basis import GeneralBasis, coherence_trace
from .core import DensityMatrix, PureState, basis_ket, qubit_ket

GRAM_DET_MIN = 1e-10
SWEEP_GRAM_DET_MIN = 1e-6


@lru_cache(maxsize=1)
def path_basis() -> GeneralBasis:
    """The linearly dependent path triple {|0>, |1>, |+>}."""
    return GeneralBasis(
        2, (basis_ket(2, 0), basis_ket(2, 1), qubit_ket(np.pi / 2, 0.0))
    )


@dataclass(frozen=True, eq=False)
class DualityConfig:
    """Input amplitudes, non-leak probability R, and the marked detector states."""

    alpha: complex
    beta: complex
    r: float
    detectors: tuple[PureState, PureState, PureState]

    def __post_init__(self):
        alpha = complex(self.alpha)
        beta = complex(self.beta)
        if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-10:
            raise ValueError("|alpha|^2 + |beta|^2 must equal 1")
        if not 0.0 <= self.r <= 1.0:
            raise ValueError("R must lie in [0, 1]")
        detectors = tuple(self.detectors)
        if len(detectors) != 3 or any(d.dim != 3 for d in detectors):
            raise ValueError("three detector states in C^3 are required")
        gram = np.array(
            [[di.overlap(dj) for dj in detectors] for di in detectors]
        )
        if abs(np.linalg.det(gram)) <= GRAM_DET_MIN:
            raise ValueError("detector states are (near-)linearly dependent")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "detectors", detectors)


@dataclass(frozen=True)
class DualityResult:
    """Coherence C, UQSD bound P, retained probability, and D = retain * P."""

    coherence: float
    uqsd_bound: float
    retain_prob: float
    distinguishability: float
    sum: float


def joint_state(cfg: DualityConfig) -> PureState:
    """Normalized quanton-detector state on C^2 (x) C^3 (index 3q + k)."""
    plus = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    system_terms = (
        cfg.alpha * np.sqrt(cfg.r) * np.array([1.0, 0.0], dtype=complex),
        cfg.alpha * np.sqrt(1.0 - cfg.r) * plus,
        cfg.beta * np.array([0.0, 1.0], dtype=complex),
    )
    amp = np.zeros((2, 3), dtype=complex)
    for k, sys_vec in enumerate(system_terms):
        amp += sys_vec[:, None] * cfg.detectors[k].amplitudes[None, :]
    norm = np.linalg.norm(amp)
    if norm <= 1e-15:
        raise ValueError("joint state has vanishing norm")
    return PureState(amp.ravel() / norm)


def orthogonal_complement(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Unit vector in C^3 orthogonal to both ``u`` and ``v``."""
    a, b = u.conj(), v.conj()
    w = np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    )
    norm = np.linalg.norm(w)
    if norm <= 1e-12:
        raise ValueError("vectors are (near-)parallel; no unique complement")
    return w / norm


def gram_schmidt_perp(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Normalized component of ``v`` orthogonal to the unit vector ``u``."""
    w = v - u * np.vdot(u, v)
    norm = np.linalg.norm(w)
    if norm <= 1e-12:
        raise ValueError("vectors are (near-)parallel")
    return w / norm


@dataclass(frozen=True, eq=False)
class DetectorPovm:
    """Unambiguous path-discrimination POVM for three detector states.

    Each conclusive operator projects onto the direction orthogonal to the
    other two detector states, scaled by the largest c keeping the
    inconclusive operator positive semidefinite.
    """

    a0: np.ndarray
    a_plus: np.ndarray
    a1: np.ndarray
    a_unknown: np.ndarray
    c: float
    directions: tuple[PureState, PureState, PureState]


def detector_povm(
    detectors: tuple[PureState, PureState, PureState],
    psd_atol: float = 1e-10,
) -> DetectorPovm:
    """Build the conclusive/inconclusive POVM from the detector triple."""
    d0, dp, d1 = (d.amplitudes for d in detectors)
    w0 = orthogonal_complement(dp, d1)   # clicks only on the |0> path marker
    wp = orthogonal_complement(d1, d0)   # clicks only on the |+> path marker
    w1 = orthogonal_complement(d0, dp)   # clicks only on the |1> path marker
    projectors = [np.outer(w, w.conj()) for w in (w0, wp, w1)]
    s = projectors[0] + projectors[1] + projectors[2]
    lam_max = float(np.linalg.eigvalsh(s)[-1])
    c = 1.0 / lam_max
    a_ops = [c * p for p in projectors]
    a_unknown = np.eye(3, dtype=complex) - c * s
    a_unknown = (a_unknown + a_unknown.conj().T) / 2
    if np.min(np.linalg.eigvalsh(a_unknown)) < -psd_atol:
        raise RuntimeError("inconclusive operator lost positive semidefiniteness")
    return DetectorPovm(
        a0=a_ops[0],
        a_plus=a_ops[1],
        a1=a_ops[2],
        a_unknown=a_unknown,
        c=c,
        directions=(PureState(w0), PureState(wp), PureState(w1)),
    )


@dataclass(frozen=True, eq=False)
class PhaseDampResult:
    rho_prime: DensityMatrix
    probs: np.ndarray
    retain_prob: float


def phase_damp(rho_d: DensityMatrix, povm: DetectorPovm) -> PhaseDampResult:
    """Dephase the detector state onto the conclusive directions.

    Discards the inconclusive outcome: with probability retain = 1 -
    tr(rho A_?) the state collapses onto one of the conclusive rank-1
    directions with weights p_i proportional to tr(A_i rho).
    """
    if rho_d.dim != 3:
        raise ValueError("detector state must live in C^3")
    retain = 1.0 - float(np.trace(rho_d.matrix @ povm.a_unknown).real)
    if retain <= 1e-14:
        raise ValueError(
            "all information falls in the discarded outcome; "
            "the configuration is degenerate"
        )
    raw = np.array(
        [
            float(np.trace(rho_d.matrix @ a).real)
            for a in (povm.a0, povm.a_plus, povm.a1)
        ]
    )
    probs = np.clip(raw, 0.0, None) / retain
    probs = probs / probs.sum()
    mix = sum(
        p * w.projector() for p, w in zip(probs, povm.directions)
    )
    return PhaseDampResult(
        rho_prime=DensityMatrix(mix), probs=probs, retain_prob=float(retain)
    )


def uqsd_bound(
    probs, directions: tuple[PureState, PureState, PureState]
) -> float:
    """Upper bound on unambiguous discrimination of the dephased directions."""
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    w0, wp, w1 = directions
    value = 1.0 - (2.0 / 3.0) * (
        np.sqrt(p[0] * p[1]) * abs(w0.overlap(wp))
        + np.sqrt(p[1] * p[2]) * abs(wp.overlap(w1))
        + np.sqrt(p[2] * p[0]) * abs(w1.overlap(w0))
    )
    return float(np.clip(value, 0.0, 1.0))


def run_duality(cfg: DualityConfig) -> DualityResult:
    """Full pipeline: joint state, reduced states, coherence, and D = retain * P."""
    psi = joint_state(cfg).amplitudes.reshape(2, 3)
    rho_q = DensityMatrix(psi @ psi.conj().T)
    rho_d = DensityMatrix(psi.T @ psi.conj())
    coherence = coherence_trace(rho_q, path_basis())
    povm = detector_povm(cfg.detectors)
    damped = phase_damp(rho_d, povm)
    p_bound = uqsd_bound(damped.probs, povm.directions)
    distinguishability = damped.retain_prob * p_bound
    return DualityResult(
        coherence=float(coherence),
        uqsd_bound=float(p_bound),
        retain_prob=float(damped.retain_prob),
        distinguishability=float(distinguishability),
        sum=float(coherence + distinguishability),
    )


# --- seeded sampling -------------------------------------------------------

def sample_config(
    seed: int, sample_id: int, fixed_r: float | None = None
) -> DualityConfig:
    """Deterministic per-sample configuration, independent of worker layout."""
    rng = np.random.default_rng(
        np.random.SeedSequence(entropy=seed, spawn_key=(sample_id,))
    )
    amp = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    amp /= np.linalg.norm(amp)
    r = float(fixed_r) if fixed_r is not None else float(rng.uniform())
    while True:
        vecs = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        vecs /= np.linalg.norm(vecs, axis=1)[:, None]
        gram = vecs @ vecs.conj().T
        if abs(np.linalg.det(gram)) > SWEEP_GRAM_DET_MIN:
            break
    detectors = tuple(PureState(v) for v in vecs)
    return DualityConfig(
        alpha=complex(amp[0]), beta=complex(amp[1]), r=r, detectors=detectors
    )


def _sweep_rows(args) -> np.ndarray:
    seed, start, stop, fixed_r = args
    rows = np.empty((stop - start, 7))
    for offset, i in enumerate(range(start, stop)):
        cfg = sample_config(seed, i, fixed_r)
        res = run_duality(cfg)
        rows[offset] = (
            i,
            cfg.r,
            res.coherence,
            res.uqsd_bound,
            res.retain_prob,
            res.distinguishability,
            res.sum,
        )
    return rows


# --- chart for derivative-free refinement ----------------------------------

def encode_config(cfg: DualityConfig) -> np.ndarray:
    """Gauge-fixed real chart of a configuration (11 parameters).

    Fixes the global phase of (alpha, beta) and rotates detector space so
    d0 = e1 and d+ lies in span{e1, e2}; the remaining freedoms are the
    mixing angle and relative phase of the amplitudes, R, the complex overlap
    <d0|d+>, and the three complex coordinates of d1 in the canonical frame.
    """
    a = float(np.arctan2(abs(cfg.beta), abs(cfg.alpha)))
    phase_ref = np.angle(cfg.alpha) if abs(cfg.alpha) > 1e-12 else 0.0
    phi = float(np.angle(cfg.beta) - phase_ref) if abs(cfg.beta) > 1e-12 else 0.0
    r_param = float(np.arcsin(np.sqrt(np.clip(cfg.r, 0.0, 1.0))))

    d0, dp, d1 = (d.amplitudes for d in cfg.detectors)
    g = np.vdot(d0, dp)
    denom = np.sqrt(max(1e-15, 1.0 - abs(g) ** 2))
    gx = g.real / denom
    gy = g.imag / denom

    f1 = d0
    f2 = gram_schmidt_perp(d0, dp)
    f3 = orthogonal_complement(f1, f2)
    v = np.array([np.vdot(f1, d1), np.vdot(f2, d1), np.vdot(f3, d1)])
    return np.array(
        [a, phi, r_param, gx, gy,
         v[0].real, v[0].imag, v[1].real, v[1].imag, v[2].real, v[2].imag]
    )


def decode_config(params, fixed_r: float | None = None) -> DualityConfig:
    """Inverse of :func:`encode_config` up to the gauge freedoms."""
    p = np.asarray(params, dtype=float)
    alpha = complex(np.cos(p[0]))
    beta = complex(np.sin(p[0]) * np.exp(1j * p[1]))
    # Trig renormalization keeps |alpha|^2 + |beta|^2 = 1 exactly.
    r = float(fixed_r) if fixed_r is not None else float(np.sin(p[2]) ** 2)

    g = (p[3] + 1j * p[4]) / np.sqrt(1.0 + p[3] ** 2 + p[4] ** 2)
    d0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    dp = np.array([g, np.sqrt(1.0 - abs(g) ** 2), 0.0], dtype=complex)
    v = np.array([p[5] + 1j * p[6], p[7] + 1j * p[8], p[9] + 1j * p[10]])
    norm = np.linalg.norm(v)
    if norm <= 1e-12:
        raise ValueError("third detector parameterization collapsed to zero")
    d1 = v / norm
    return DualityConfig(
        alpha=alpha,
        beta=beta,
        r=r,
        detectors=(PureState(d0), PureState(dp), PureState(d1)),
    )


def _refine_objective(params, fixed_r):
    try:
        return -run_duality(decode_config(params, fixed_r)).sum
    except (ValueError, np.linalg.LinAlgError):
        return 1e3


@dataclass(frozen=True, eq=False)
class SweepResult:
    """Outcome of a seeded complementarity sweep."""

    rows: np.ndarray               # columns: sample_id, R, C, P, retain, D, sum
    max_sum: float
    argmax_config: DualityConfig
    max_c_plus_p: float
    refined: bool


def complementarity_sweep(
    n_samples: int,
    seed: int,
    optimizer: str = "nelder-mead-refine",
    fixed_r: float | None = None,
    workers: int = 1,
    top_k: int = 10,
    refine_maxiter: int = 200,
) -> SweepResult:
    """Sample configurations, track max(C + D) and max(C + P).

    Sampling is deterministic given ``seed`` regardless of ``workers``.  With
    ``optimizer="nelder-mead-refine"`` the ``top_k`` candidates by C + D are
    polished with Nelder-Mead (``refine_maxiter`` iterations) on the
    gauge-fixed chart; ``optimizer="random"`` skips refinement.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    if optimizer not in ("random", "nelder-mead-refine"):
        raise ValueError(f"unknown optimizer: {optimizer!r}")

    bounds = np.linspace(0, n_samples, max(1, min(workers * 4, n_samples)) + 1)
    chunks = [
        (seed, int(lo), int(hi), fixed_r)
        for lo, hi in zip(bounds[:-1], bounds[1:])
        if int(hi) > int(lo)
    ]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(_sweep_rows, chunks))
    else:
        pieces = [_sweep_rows(chunk) for chunk in chunks]
    rows = np.vstack(pieces)

    sums = rows[:, 6]
    c_plus_p = rows[:, 2] + rows[:, 3]
    best_idx = int(np.argmax(sums))
    max_sum = float(sums[best_idx])
    argmax_config = sample_config(seed, int(rows[best_idx, 0]), fixed_r)
    max_c_plus_p = float(c_plus_p.max())

    refined = False
    if optimizer == "nelder-mead-refine":
        refined = True
        order = np.argsort(sums)[::-1][: min(top_k, n_samples)]
        for idx in order:
            cfg = sample_config(seed, int(rows[int(idx), 0]), fixed_r)
            x0 = encode_config(cfg)
            res = minimize(
                _refine_objective,
                x0,
                args=(fixed_r,),
                method="Nelder-Mead",
                options={"maxiter": refine_maxiter, "xatol": 1e-10, "fatol": 1e-12},
            )
            if -res.fun > max_sum:
                max_sum = float(-res.fun)
                argmax_config = decode_config(res.x, fixed_r)
    return SweepResult(
        rows=rows,
        max_sum=max_sum,
        argmax_config=argmax_config,
        max_c_plus_p=max_c_plus_p,
        refined=refined,
    )
