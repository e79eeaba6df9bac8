"""Least squares over the probability simplex.

Solves min_p ||M p - b||_2 subject to p >= 0, sum(p) = 1.  For small column
counts (n <= MAX_ENUM) the solver enumerates candidate supports and solves the
equality-constrained KKT system on each, which is exact: the optimum is a
convex combination of at most rank(M)+1 columns (Caratheodory), so some
affinely independent support reproduces it, and on such a support the bordered
KKT system is nonsingular.  Larger problems fall back to an accelerated
projected-gradient scheme with a documented stopping rule.
"""

from __future__ import annotations

import numpy as np

MAX_ENUM = 14
_FEAS_ATOL = 1e-10


def project_to_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection of ``v`` onto the probability simplex."""
    v = np.asarray(v, dtype=float)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, v.size + 1)
    cond = u + (1.0 - css) / idx > 0
    rho = idx[cond][-1]
    lam = (1.0 - css[rho - 1]) / rho
    return np.maximum(v + lam, 0.0)


class SimplexLstsq:
    """Reusable simplex-constrained least-squares solver for a fixed ``M``.

    Precomputes per-support KKT pseudo-inverses once so that repeated solves
    against many right-hand sides (grids, sampling campaigns) are cheap.
    """

    def __init__(self, m: np.ndarray):
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[1] == 0:
            raise ValueError("M must be a 2-d matrix with at least one column")
        self.m = m
        self.n = m.shape[1]
        self.gram = m.T @ m
        self._supports: list[np.ndarray] | None = None
        self._kkt_pinv: list[np.ndarray] | None = None
        if self.n <= MAX_ENUM:
            self._prepare_enumeration()

    def _prepare_enumeration(self):
        supports = []
        pinvs = []
        for mask in range(1, 1 << self.n):
            idx = np.array([i for i in range(self.n) if mask >> i & 1])
            k = idx.size
            kkt = np.zeros((k + 1, k + 1))
            kkt[:k, :k] = 2.0 * self.gram[np.ix_(idx, idx)]
            kkt[:k, k] = 1.0
            kkt[k, :k] = 1.0
            supports.append(idx)
            pinvs.append(np.linalg.pinv(kkt, rcond=1e-12))
        self._supports = supports
        self._kkt_pinv = pinvs

    def solve(self, b: np.ndarray) -> tuple[np.ndarray, float]:
        """Return (weights, residual) for a single target ``b``."""
        b = np.asarray(b, dtype=float)
        if self._supports is None:
            return self._solve_pg(b)
        c = self.m.T @ b
        best_obj = np.inf
        best_idx = None
        best_q = None
        for idx, pinv in zip(self._supports, self._kkt_pinv):
            k = idx.size
            rhs = np.append(2.0 * c[idx], 1.0)
            q = pinv[:k] @ rhs
            if q.min() < -_FEAS_ATOL:
                continue
            q = np.clip(q, 0.0, None)
            q /= q.sum()
            diff = self.m[:, idx] @ q - b
            obj = diff @ diff
            if obj < best_obj:
                best_obj, best_idx, best_q = obj, idx, q
        weights = np.zeros(self.n)
        weights[best_idx] = best_q
        return weights, float(np.sqrt(max(best_obj, 0.0)))

    def solve_batch(self, bs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Solve for every column of ``bs``; returns (weights (n,N), residuals (N,))."""
        bs = np.asarray(bs, dtype=float)
        if bs.ndim != 2 or bs.shape[0] != self.m.shape[0]:
            raise ValueError("targets must have shape (m, N)")
        if self._supports is None:
            cols = [self._solve_pg(bs[:, j]) for j in range(bs.shape[1])]
            weights = np.stack([c[0] for c in cols], axis=1)
            residuals = np.array([c[1] for c in cols])
            return weights, residuals

        n_targets = bs.shape[1]
        c = self.m.T @ bs                       # (n, N)
        bsq = np.einsum("ij,ij->j", bs, bs)     # (N,)
        best_obj = np.full(n_targets, np.inf)
        best_w = np.zeros((self.n, n_targets))
        rhs_ones = np.ones((1, n_targets))
        for idx, pinv in zip(self._supports, self._kkt_pinv):
            k = idx.size
            rhs = np.vstack([2.0 * c[idx], rhs_ones])
            q = pinv[:k] @ rhs                  # (k, N)
            feasible = q.min(axis=0) >= -_FEAS_ATOL
            if not feasible.any():
                continue
            q = np.clip(q, 0.0, None)
            sums = q.sum(axis=0)
            sums[sums <= 0.0] = 1.0
            q /= sums
            g_ss = self.gram[np.ix_(idx, idx)]
            obj = (
                np.einsum("kK,kj,Kj->j", g_ss, q, q)
                - 2.0 * np.einsum("kj,kj->j", c[idx], q)
                + bsq
            )
            # The expanded form cancels catastrophically near zero; recompute
            # tiny objectives from the actual residual vector so near-hull
            # targets are resolved far below the tolerance scale.
            small = feasible & (obj < 4e-13)
            if small.any():
                cols = np.flatnonzero(small)
                diff = self.m[:, idx] @ q[:, cols] - bs[:, cols]
                obj[cols] = np.einsum("ij,ij->j", diff, diff)
            better = feasible & (obj < best_obj)
            if better.any():
                best_obj[better] = obj[better]
                best_w[:, better] = 0.0
                best_w[np.ix_(idx, np.flatnonzero(better))] = q[:, better]
        residuals = np.sqrt(np.clip(best_obj, 0.0, None))
        return best_w, residuals

    def _solve_pg(self, b: np.ndarray, max_iter: int = 100_000,
                  rel_tol: float = 1e-12) -> tuple[np.ndarray, float]:
        # FISTA with simplex projection; only used beyond the enumeration limit.
        lam = np.linalg.eigvalsh(self.gram)[-1]
        step = 1.0 / (2.0 * max(lam, 1e-30))
        c = self.m.T @ b

        def objective(p):
            diff = self.m @ p - b
            return float(diff @ diff)

        p = np.full(self.n, 1.0 / self.n)
        y = p.copy()
        t = 1.0
        f_prev = objective(p)
        for _ in range(max_iter):
            grad = 2.0 * (self.gram @ y - c)
            p_next = project_to_simplex(y - step * grad)
            t_next = (1.0 + np.sqrt(1.0 + 4.0 * t * t)) / 2.0
            y = p_next + ((t - 1.0) / t_next) * (p_next - p)
            p, t = p_next, t_next
            f = objective(p)
            if abs(f_prev - f) <= rel_tol * max(1.0, abs(f_prev)):
                break
            f_prev = f
        return p, float(np.sqrt(max(objective(p), 0.0)))
