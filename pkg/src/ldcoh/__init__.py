"""Coherence resource theory over general (possibly linearly dependent) bases.

Subpackages: :mod:`ldcoh.core` (state types, norms, Bloch maps),
:mod:`ldcoh.basis` (free-set membership and coherence measures),
:mod:`ldcoh.kraus` (incoherent-operation checks), :mod:`ldcoh.povm`
(measurement construction and incoherent-state generation),
:mod:`ldcoh.duality` (wave-particle duality simulation), and
:mod:`ldcoh.cli` (command-line entry points).
"""

from .basis import (
    GeneralBasis,
    MembershipResult,
    ScanResult,
    coherence_generic,
    coherence_trace,
    is_spanning,
    max_coherent_scan,
    membership,
    membership_batch,
    monotonicity_probe,
    pauli_octahedron_basis,
)
from .core import (
    BlochVector,
    DensityMatrix,
    PureState,
    basis_ket,
    bloch_of,
    is_psd,
    qubit_ket,
    state_of,
    trace_norm,
)
from .duality import (
    DetectorPovm,
    DualityConfig,
    DualityResult,
    SweepResult,
    complementarity_sweep,
    detector_povm,
    joint_state,
    path_basis,
    phase_damp,
    run_duality,
    uqsd_bound,
)
from .kraus import (
    CircleConditionResult,
    QubitCircleBasis,
    VertexImageResult,
    channel_apply,
    kraus_circle_condition,
    random_incoherent_channel,
    random_kraus_operator,
    vertex_image_check,
)
from .povm import (
    BuildPovmResult,
    CrossTermSearchResult,
    Povm,
    build_povm,
    generate_incoherent,
    search_povm_free_state,
    three_outcome_circle_povm,
)

__version__ = "0.1.0"

__all__ = [
    "BlochVector",
    "BuildPovmResult",
    "CircleConditionResult",
    "CrossTermSearchResult",
    "DensityMatrix",
    "DetectorPovm",
    "DualityConfig",
    "DualityResult",
    "GeneralBasis",
    "MembershipResult",
    "Povm",
    "PureState",
    "QubitCircleBasis",
    "ScanResult",
    "SweepResult",
    "VertexImageResult",
    "basis_ket",
    "bloch_of",
    "build_povm",
    "channel_apply",
    "coherence_generic",
    "coherence_trace",
    "complementarity_sweep",
    "detector_povm",
    "generate_incoherent",
    "is_psd",
    "is_spanning",
    "joint_state",
    "kraus_circle_condition",
    "max_coherent_scan",
    "membership",
    "membership_batch",
    "monotonicity_probe",
    "path_basis",
    "pauli_octahedron_basis",
    "phase_damp",
    "qubit_ket",
    "random_incoherent_channel",
    "random_kraus_operator",
    "run_duality",
    "search_povm_free_state",
    "state_of",
    "three_outcome_circle_povm",
    "trace_norm",
    "uqsd_bound",
    "vertex_image_check",
]
