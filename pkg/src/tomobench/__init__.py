"""Benchmark harness comparing linear-inversion and maximum-likelihood quantum
state tomography under product-Pauli measurements."""

from .estimators import (
    LinEstimate,
    MleEstimate,
    lin_estimate,
    log_likelihood,
    mle_estimate,
    pauli_expectation_estimates,
    r_operator,
)
from .harness import RunRecord, ScenarioConfig, ScenarioResult, emit_outputs, run_scenario
from .linalg import (
    NotHermitianError,
    NotPositiveSemidefinite,
    eig_hermitian,
    is_physical,
    kron,
    min_eigenvalue,
    sqrt_psd,
    trace_product,
)
from .metrics import (
    ScenarioStats,
    aggregate,
    fidelity_pure,
    fidelity_uhlmann,
    histogram,
    purity,
    trace_distance,
)
from .qubit import (
    Bb84Counts,
    NegativePseudoCount,
    bb84_constraints,
    bb84_discard_fix,
    tetrahedron_physical,
    tetrahedron_pom,
)
from .simulate import (
    CountDataset,
    RunSeed,
    pseudo_counts,
    relative_frequencies,
    simulate_counts,
)
from .states import (
    PauliPom,
    StateSpec,
    build_product_pauli_pom,
    ghz_ket,
    haar_random_ket,
    make_state,
    pauli_word_matrix,
    target_ket,
    w_ket,
)

__version__ = "0.1.0"
