import numpy as np
import pytest

from ldcoh import (
    DensityMatrix,
    DualityConfig,
    PureState,
    basis_ket,
    detector_povm,
    is_psd,
    joint_state,
    phase_damp,
    run_duality,
    uqsd_bound,
)
from ldcoh.duality import (
    complementarity_sweep,
    decode_config,
    encode_config,
    gram_schmidt_perp,
    sample_config,
)


def orthonormal_detectors():
    return tuple(basis_ket(3, k) for k in range(3))


def overlapping_detectors(s: float):
    """Three unit vectors with equal real pairwise overlap s."""
    u = np.array([1.0, 0.0, 0.0], dtype=complex)
    f = [np.array([0.0, 1.0, 0.0], dtype=complex),
         np.array([0.0, 0.0, 1.0], dtype=complex),
         np.array([0.0, 1.0, 1.0], dtype=complex) / np.sqrt(2.0)]
    # v_i = sqrt(s) u + sqrt(1-s) g_i with g_i orthonormal and g_i ⊥ u
    g = [f[0], f[1], (f[0] + f[1]) / np.sqrt(2.0)]
    # replace g_2 by a vector orthonormal to g_0, g_1 is impossible in the
    # 2-dim complement; instead build the standard symmetric triple
    del g
    # symmetric construction: overlaps <v_i|v_j> = s exactly for the
    # three vectors sqrt(s) u + sqrt(1-s) e_i with e_i the orthonormal pair
    # complement is only 2-dim, so use phases: e_k -> exp(2 pi i k/3) pattern
    omega = np.exp(2j * np.pi / 3)
    vs = []
    for k in range(3):
        tail = np.array([omega ** k, omega ** (2 * k)], dtype=complex) / np.sqrt(2.0)
        v = np.concatenate([[np.sqrt(s)], np.sqrt(1.0 - s) * tail])
        vs.append(PureState(v))
    return tuple(vs)


def test_overlapping_detectors_construction():
    for s in (0.2, 0.5):
        dets = overlapping_detectors(s)
        for i in range(3):
            for j in range(i + 1, 3):
                ov = dets[i].overlap(dets[j])
                assert abs(abs(ov) - abs(s + (1 - s) * (-0.5))) < 1e-12


def test_config_validation():
    e = orthonormal_detectors()
    with pytest.raises(ValueError):
        DualityConfig(alpha=1.0, beta=0.5, r=0.5, detectors=e)
    with pytest.raises(ValueError):
        DualityConfig(alpha=1.0, beta=0.0, r=1.5, detectors=e)
    with pytest.raises(ValueError):
        DualityConfig(alpha=1.0, beta=0.0, r=0.5, detectors=(e[0], e[0], e[0]))


def test_joint_state_single_terms():
    e = orthonormal_detectors()
    psi = joint_state(DualityConfig(alpha=1.0, beta=0.0, r=1.0, detectors=e))
    expected = np.zeros(6, dtype=complex)
    expected[0] = 1.0  # |0>|d0>
    assert np.max(np.abs(psi.amplitudes - expected)) < 1e-14

    psi = joint_state(DualityConfig(alpha=0.0, beta=1.0, r=0.37, detectors=e))
    expected = np.zeros(6, dtype=complex)
    expected[5] = 1.0  # |1>|d1>
    assert np.max(np.abs(psi.amplitudes - expected)) < 1e-14


def test_joint_state_leaked_superposition_norm():
    # alpha = beta = 1/sqrt2, R = 0: (|+>|d+> + |1>|d1>)/sqrt2, already
    # normalized because orthogonal detectors kill the <+|1> cross term
    e = orthonormal_detectors()
    a = 1.0 / np.sqrt(2.0)
    psi = joint_state(DualityConfig(alpha=a, beta=a, r=0.0, detectors=e))
    plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
    expected = np.zeros(6, dtype=complex)
    expected[1] = a * plus[0]   # |0>|d+>
    expected[4] = a * plus[1]   # |1>|d+>
    expected[5] = a             # |1>|d1>
    assert np.max(np.abs(psi.amplitudes - expected)) < 1e-14


def test_detector_povm_orthonormal_case():
    povm = detector_povm(orthonormal_detectors())
    assert abs(povm.c - 1.0) < 1e-12
    assert np.max(np.abs(povm.a_unknown)) < 1e-12
    for a, det in zip((povm.a0, povm.a_plus, povm.a1), orthonormal_detectors()):
        assert np.max(np.abs(a - det.projector())) < 1e-12


def test_detector_povm_overlapping_case():
    povm = detector_povm(overlapping_detectors(0.4))
    assert povm.c < 1.0
    assert np.max(np.abs(povm.a_unknown)) > 1e-3
    total = povm.a0 + povm.a_plus + povm.a1 + povm.a_unknown
    assert np.max(np.abs(total - np.eye(3))) < 1e-12
    # maximal scaling: A_? is PSD with minimal eigenvalue pinned at zero
    evals = np.linalg.eigvalsh(povm.a_unknown)
    assert is_psd(povm.a_unknown)
    assert -1e-10 <= evals[0] <= 1e-8


def test_detector_povm_first_display_identity():
    # c (I - |d+><d+| - |d+perp><d+perp|) equals the rank-1 conclusive form
    rng = np.random.default_rng(60)
    for _ in range(50):
        vecs = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        vecs /= np.linalg.norm(vecs, axis=1)[:, None]
        gram = vecs @ vecs.conj().T
        if abs(np.linalg.det(gram)) < 1e-3:
            continue
        detectors = tuple(PureState(v) for v in vecs)
        povm = detector_povm(detectors)
        d0, dp, d1 = vecs
        dp_perp = gram_schmidt_perp(dp, d1)
        alt_a0 = povm.c * (
            np.eye(3) - np.outer(dp, dp.conj()) - np.outer(dp_perp, dp_perp.conj())
        )
        assert np.max(np.abs(alt_a0 - povm.a0)) < 1e-10


def test_detector_povm_completeness_on_random_triples():
    rng = np.random.default_rng(61)
    count = 0
    while count < 1000:
        vecs = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        vecs /= np.linalg.norm(vecs, axis=1)[:, None]
        gram = vecs @ vecs.conj().T
        if abs(np.linalg.det(gram)) < 1e-6:
            continue
        count += 1
        povm = detector_povm(tuple(PureState(v) for v in vecs))
        total = povm.a0 + povm.a_plus + povm.a1 + povm.a_unknown
        assert np.linalg.norm(total - np.eye(3)) < 1e-10
        assert np.linalg.eigvalsh(povm.a_unknown)[0] >= -1e-10


def test_detector_povm_rejects_dependent_states():
    e = orthonormal_detectors()
    with pytest.raises(ValueError):
        detector_povm((e[0], e[0], e[1]))


def test_phase_damp_orthonormal_detectors():
    e = orthonormal_detectors()
    povm = detector_povm(e)
    rho = DensityMatrix(np.diag([0.5, 0.3, 0.2]).astype(complex))
    damped = phase_damp(rho, povm)
    assert abs(damped.retain_prob - 1.0) < 1e-12
    assert np.allclose(damped.probs, [0.5, 0.3, 0.2], atol=1e-12)


def test_phase_damp_concentrated_state():
    e = orthonormal_detectors()
    cfg = DualityConfig(alpha=1.0, beta=0.0, r=1.0, detectors=e)
    psi = joint_state(cfg).amplitudes.reshape(2, 3)
    rho_d = DensityMatrix(psi.T @ psi.conj())
    damped = phase_damp(rho_d, detector_povm(e))
    assert np.allclose(damped.probs, [1.0, 0.0, 0.0], atol=1e-12)


def test_phase_damp_probs_normalized_generic():
    rng = np.random.default_rng(62)
    for i in range(50):
        cfg = sample_config(99, i)
        psi = joint_state(cfg).amplitudes.reshape(2, 3)
        rho_d = DensityMatrix(psi.T @ psi.conj())
        damped = phase_damp(rho_d, detector_povm(cfg.detectors))
        assert abs(damped.probs.sum() - 1.0) < 1e-12
        assert 0.0 <= damped.retain_prob <= 1.0 + 1e-12


def test_phase_damp_degenerate_configuration_raises():
    # coplanar (but pairwise independent) detectors: all conclusive
    # directions coincide, so a state in the detector plane is never retained
    d0 = np.array([1.0, 0.0, 0.0], dtype=complex)
    dp = np.array([np.sqrt(0.5), np.sqrt(0.5), 0.0], dtype=complex)
    d1 = np.array([np.sqrt(0.5), -np.sqrt(0.5), 0.0], dtype=complex)
    povm = detector_povm((PureState(d0), PureState(dp), PureState(d1)))
    rho = DensityMatrix(np.outer(d0, d0.conj()))
    with pytest.raises(ValueError):
        phase_damp(rho, povm)


def test_uqsd_bound_examples():
    e = orthonormal_detectors()
    assert uqsd_bound([0.2, 0.3, 0.5], e) == 1.0
    dets = overlapping_detectors(0.3)
    assert uqsd_bound([1.0, 0.0, 0.0], dets) == 1.0
    # uniform probabilities, equal overlaps s: bound = 1 - (2/3) s
    s = abs(0.3 + 0.7 * (-0.5))
    value = uqsd_bound([1 / 3, 1 / 3, 1 / 3], dets)
    assert abs(value - (1.0 - 2.0 / 3.0 * s)) < 1e-12


def test_run_duality_boundary_saturation():
    cfg = DualityConfig(
        alpha=1.0, beta=0.0, r=1.0, detectors=orthonormal_detectors()
    )
    res = run_duality(cfg)
    assert res.coherence == 0.0
    assert abs(res.uqsd_bound - 1.0) < 1e-12
    assert abs(res.retain_prob - 1.0) < 1e-12
    assert abs(res.sum - 1.0) < 1e-9


def test_run_duality_ranges_and_product_identity():
    for i in range(100):
        res = run_duality(sample_config(7, i))
        for value in (res.coherence, res.uqsd_bound, res.retain_prob,
                      res.distinguishability):
            assert -1e-12 <= value <= 1.0 + 1e-10
        assert abs(res.distinguishability - res.retain_prob * res.uqsd_bound) < 1e-12
        assert res.sum <= 1.0 + 1e-6


def test_run_duality_global_phase_invariance():
    cfg = sample_config(13, 5)
    phase = np.exp(1j * 1.234)
    shifted = DualityConfig(
        alpha=phase * cfg.alpha,
        beta=phase * cfg.beta,
        r=cfg.r,
        detectors=cfg.detectors,
    )
    a, b = run_duality(cfg), run_duality(shifted)
    assert abs(a.coherence - b.coherence) < 1e-12
    assert abs(a.distinguishability - b.distinguishability) < 1e-12


def test_overlapping_detectors_give_coherence():
    # the imaginary relative phase pushes the reduced state off the plane
    # spanned by the path-basis Bloch points, so the coherence is large,
    # while the overlapping detectors leave little which-path information
    a = 1.0 / np.sqrt(2.0)
    cfg = DualityConfig(
        alpha=a, beta=1j * a, r=1.0, detectors=overlapping_detectors(0.9)
    )
    res = run_duality(cfg)
    assert res.coherence > 0.1
    assert res.distinguishability < 0.5
    assert res.sum <= 1.0 + 1e-9


def test_encode_decode_round_trip():
    for i in range(20):
        cfg = sample_config(21, i)
        again = decode_config(encode_config(cfg))
        r1, r2 = run_duality(cfg), run_duality(again)
        assert abs(r1.sum - r2.sum) < 1e-9
        assert abs(r1.coherence - r2.coherence) < 1e-9


def test_sweep_determinism_and_refinement():
    a = complementarity_sweep(150, seed=3, optimizer="random")
    b = complementarity_sweep(150, seed=3, optimizer="random")
    assert np.array_equal(a.rows, b.rows)
    refined = complementarity_sweep(150, seed=3, optimizer="nelder-mead-refine")
    assert refined.max_sum >= a.max_sum - 1e-12
    assert refined.max_sum <= 1.0 + 1e-6
    assert np.array_equal(refined.rows, a.rows)


def test_sweep_worker_invariance():
    a = complementarity_sweep(120, seed=4, optimizer="random", workers=1)
    b = complementarity_sweep(120, seed=4, optimizer="random", workers=2)
    assert np.array_equal(a.rows, b.rows)


def test_sweep_fixed_r():
    res = complementarity_sweep(100, seed=5, optimizer="random", fixed_r=0.3)
    assert np.allclose(res.rows[:, 1], 0.3)
    assert res.max_sum <= 1.0 + 1e-6


def test_sweep_rejects_bad_arguments():
    with pytest.raises(ValueError):
        complementarity_sweep(0, seed=1)
    with pytest.raises(ValueError):
        complementarity_sweep(10, seed=1, optimizer="annealing")
