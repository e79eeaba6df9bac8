"""Acceptance suite: one test per release criterion, printed pass/fail.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Tolerances are pinned here and are not meant to be tuned.
"""

import functools
import sys
import time

import numpy as np

from ldcoh import (
    DensityMatrix,
    DualityConfig,
    GeneralBasis,
    QubitCircleBasis,
    basis_ket,
    bloch_of,
    build_povm,
    coherence_trace,
    kraus_circle_condition,
    max_coherent_scan,
    membership_batch,
    monotonicity_probe,
    pauli_octahedron_basis,
    qubit_ket,
    random_incoherent_channel,
    random_kraus_operator,
    run_duality,
    search_povm_free_state,
    state_of,
    three_outcome_circle_povm,
    membership,
    vertex_image_check,
)
from ldcoh.core import BlochVector
from ldcoh.duality import complementarity_sweep
from oracles import (
    cvxpy_hull_distance,
    grid_hull_distance,
    octahedron_l1,
    random_basis,
    random_bloch_in_ball,
    random_density,
    random_qubit_basis,
)


def criterion(num, name):
    def decorate(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                func(*args, **kwargs)
            except BaseException:
                _report(f"ACCEPTANCE {num} ({name}): FAIL")
                raise
            _report(f"ACCEPTANCE {num} ({name}): PASS")

        return wrapper

    return decorate


def _report(line):
    # bypass pytest's capture so the per-criterion line always shows
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()


@criterion(1, "octahedron membership oracle, 10^4 states in < 10 s")
def test_octahedron_oracle():
    rng = np.random.default_rng(2024)
    basis = pauli_octahedron_basis()
    states, inside = [], []
    while len(states) < 10_000:
        v = random_bloch_in_ball(rng)
        l1 = octahedron_l1(v)
        if abs(l1 - 1.0) < 1e-6:
            continue
        states.append(state_of(BlochVector(*v)))
        inside.append(l1 <= 1.0)
    start = time.perf_counter()
    results = membership_batch(states, basis)
    elapsed = time.perf_counter() - start
    mismatches = sum(
        1 for res, flag in zip(results, inside) if res.is_free != flag
    )
    assert mismatches == 0, f"{mismatches} of 10^4 disagree with the l1 rule"
    assert elapsed < 10.0, f"membership took {elapsed:.1f}s"


@criterion(2, "qubit coherence vs grid oracle (1e-4) and exact QP (1e-8)")
def test_coherence_against_oracles():
    rng = np.random.default_rng(2025)
    worst_grid, worst_qp = 0.0, 0.0
    for _ in range(10):
        basis = random_qubit_basis(rng, int(rng.integers(3, 7)))
        pts = basis.bloch_points()
        for _ in range(10):
            rho = random_density(rng)
            value = coherence_trace(rho, basis)
            target = bloch_of(rho).as_array()
            grid = grid_hull_distance(target, pts, rng, n_grid=100_000)
            exact = cvxpy_hull_distance(target, pts)
            worst_grid = max(worst_grid, abs(value - grid))
            worst_qp = max(worst_qp, abs(value - exact))
    assert worst_grid < 1e-4, f"grid oracle deviation {worst_grid:.2e}"
    assert worst_qp < 1e-8, f"exact QP deviation {worst_qp:.2e}"


@criterion(3, "maximally coherent state sets for the two reference bases")
def test_maximally_coherent_scans():
    five = GeneralBasis(
        2,
        (
            basis_ket(2, 0),
            basis_ket(2, 1),
            qubit_ket(np.pi / 2, 0.0),
            qubit_ket(np.pi / 2, np.pi),
            qubit_ket(np.pi / 2, np.pi / 2),
        ),
    )
    scan = max_coherent_scan(five)
    assert scan.maximizers
    target = np.array([0.0, -1.0, 0.0])
    for point, _ in scan.maximizers:
        angle = np.degrees(
            np.arccos(np.clip(point.as_array() @ target, -1.0, 1.0))
        )
        assert angle < 2.0, f"maximizer {angle:.2f} deg away from (0,-1,0)"

    triangle = GeneralBasis(
        2, (basis_ket(2, 0), basis_ket(2, 1), qubit_ket(np.pi / 2, 0.0))
    )
    scan = max_coherent_scan(triangle, grid_resolution=100_000)
    pts = np.array([p.as_array() for p, _ in scan.maximizers])
    values = np.array([v for _, v in scan.maximizers])
    assert np.all(np.abs(values - 1.0) < 1e-6), "maxima not equal to 1"
    ts = np.radians(np.linspace(90.0, 270.0, 3601))
    arc = np.stack([np.cos(ts), np.sin(ts), np.zeros_like(ts)], axis=1)
    angles = np.degrees(np.arccos(np.clip(pts @ arc.T, -1.0, 1.0)))
    hausdorff = max(angles.min(axis=0).max(), angles.min(axis=1).max())
    assert hausdorff < 3.0, f"Hausdorff distance {hausdorff:.2f} deg"


@criterion(4, "vertex-certified operators satisfy the circle condition")
def test_circle_condition_necessity():
    rng = np.random.default_rng(2026)
    total, certified, violations = 0, 0, 0
    for _ in range(100):
        theta = rng.uniform(0.2, np.pi - 0.2)
        phi2, phi3 = np.sort(rng.uniform(0.15, 2 * np.pi - 0.15, 2))
        if abs(phi2 - phi3) < 0.1:
            phi3 = phi2 + 0.1
        circle = QubitCircleBasis(theta, (0.0, phi2, phi3))
        general = circle.to_general_basis()
        operators = [random_kraus_operator(rng) for _ in range(94)]
        operators.append(np.eye(2, dtype=complex))
        a, b = rng.uniform(0.0, 2 * np.pi, 2)
        operators.append(np.diag([np.exp(1j * a), np.exp(1j * b)]))
        for _ in range(4):
            v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            v /= np.linalg.norm(v)
            target = general.states[int(rng.integers(3))].amplitudes
            operators.append(np.outer(target, v.conj()))
        for k in operators:
            total += 1
            if vertex_image_check(k, general).incoherent:
                certified += 1
                abc = kraus_circle_condition(k, circle).abc
                if max(abs(x) for x in abc) >= 1e-8:
                    violations += 1
    assert total == 10_000
    assert certified > 100, f"only {certified} operators were certified"
    assert violations == 0, f"{violations} certified operators violate the condition"


@criterion(5, "POVM construction on 50 random spanning sets")
def test_povm_construction():
    rng = np.random.default_rng(2027)
    for _ in range(50):
        dim = int(rng.integers(2, 4))
        n = int(rng.integers(dim, 7))
        basis = random_basis(rng, dim, n)
        built = build_povm(basis)
        assert built.povm.completeness_residual() < 1e-10
        mixed = np.eye(dim) / dim
        for i, state in enumerate(basis.states):
            a = built.povm.measurement_ops[i]
            out = a @ mixed @ a.conj().T
            out /= np.trace(out).real
            assert np.max(np.abs(out - state.projector())) < 1e-10

    triangle = GeneralBasis(
        2, (basis_ket(2, 0), qubit_ket(np.pi / 2, 0.0), basis_ket(2, 1))
    )
    built = build_povm(triangle)
    assert len(built.extension) == 1, "triangle case must add exactly one state"


@criterion(6, "measurement-based free set empty while mixture free set is not")
def test_cross_term_counterexample():
    for theta in (0.55 * np.pi, 0.7 * np.pi, 0.9 * np.pi):
        result = search_povm_free_state(theta)
        assert not result.free_state_exists
        assert result.min_violation > 1e-3, (
            f"violation {result.min_violation:.2e} at theta={theta:.3f}"
        )
        _, chi = three_outcome_circle_povm(theta)
        basis = GeneralBasis(2, chi)
        for state in chi:
            assert membership(DensityMatrix.from_pure(state), basis).is_free


@criterion(7, "complementarity bound over 10^5 samples (+ strata, boundary)")
def test_complementarity_bound():
    start = time.perf_counter()
    workers = 2

    sweep = complementarity_sweep(
        100_000, seed=42, optimizer="nelder-mead-refine", workers=workers
    )
    assert sweep.max_sum <= 1.0 + 1e-6, f"max C+D = {sweep.max_sum!r}"

    # independence of R: per-stratum maxima at fixed non-leak probability
    for r in (0.0, 0.3, 0.7, 1.0):
        stratum = complementarity_sweep(
            10_000, seed=43, optimizer="nelder-mead-refine",
            fixed_r=r, workers=workers,
        )
        assert stratum.max_sum <= 1.0 + 1e-6, (
            f"stratum R={r}: max C+D = {stratum.max_sum!r}"
        )

    # boundary configuration saturates the bound
    boundary = DualityConfig(
        alpha=1.0, beta=0.0, r=1.0,
        detectors=tuple(basis_ket(3, k) for k in range(3)),
    )
    res = run_duality(boundary)
    assert abs(res.sum - 1.0) < 1e-9

    # no such complementarity for C + P: exceeded within 10^4 samples
    c_plus_p = sweep.rows[:10_000, 2] + sweep.rows[:10_000, 3]
    assert c_plus_p.max() > 1.0, f"max C+P = {c_plus_p.max()!r}"

    elapsed = time.perf_counter() - start
    assert elapsed < 300.0, f"complementarity suite took {elapsed:.0f}s"


@criterion(8, "coherence monotone under certified incoherent channels")
def test_monotonicity_bound():
    rng = np.random.default_rng(2028)
    for _ in range(100):
        basis = random_qubit_basis(rng, int(rng.integers(3, 7)))
        channel = random_incoherent_channel(basis, rng)
        rho = random_density(rng)
        before, after = monotonicity_probe(rho, basis, channel)
        assert after <= before + 1e-7, (
            f"coherence increased: {before!r} -> {after!r}"
        )
