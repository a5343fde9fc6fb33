"""Two-species polariton mixture in a gain/loss double well.

Coupled-mode simulation at three tiers (reservoir-resolved, fixed gain/loss,
imbalance/phase), closed-form linear solutions, fixed-point stability
analysis, and the effective two-qubit swap gate with its averaged fidelity.
"""

from .gate import (
    BASIS_LABELS,
    GATE_BASIS_AMPLITUDE,
    BrokenPhaseError,
    EmptyWellError,
    FidelityReport,
    TwoQubitAmplitudes,
    amplitudes_from_fields,
    basis_initial_state,
    gate_fidelity,
    gate_matrix,
    gate_trajectory,
    linear_gate_matrix,
    optimal_swap_time,
    score_swap_gate,
    table1_reference,
    target_iswap,
    target_swap,
    two_qubit_state,
    xy_spin_evolution,
)
from .integrate import (
    IntegratorConfig,
    StepUnderflowError,
    Trajectory,
    convergence_order,
    integrate,
    simulate_full,
    simulate_reduced,
    simulate_zphi,
)
from .linear import linear_eigenvalues, min_transfer_deficit, propagator
from .model import (
    FieldState,
    ModelParams,
    Observables,
    ReservoirParams,
    ReservoirSite,
    ReservoirState,
    SingularStateError,
    ZPhiState,
    gain_loss_coefficient,
    observables,
    pump_rate_for_gain,
    rhs_full,
    rhs_reduced,
    rhs_zphi,
    steady_reservoir_population,
    wrap_phase,
)
from .stability import (
    GammaSweep,
    NoFixedPointError,
    StabilityReport,
    bifurcation_gamma,
    classify,
    find_fixed_points,
    jacobian_numeric,
    stability_eigenvalues_analytic,
    sweep_gamma,
    trivial_fixed_point,
)

__version__ = "0.1.0"
