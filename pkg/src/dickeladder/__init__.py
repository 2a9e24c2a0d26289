"""Collective-spin ladder model for generating maximally spin-squeezed
Dicke states in dressed three-level trapped ions.

The package builds the (N+1)-dimensional effective Hamiltonian over the
pair-transfer ladder of 2N ions, simulates square-pulse and swept
(adiabatic passage) protocols, optimizes the pulse detuning per ion
number, and validates everything against independent full-model oracles.
"""

from .dynamics import (
    LadderState,
    PropagationError,
    PulseSchedule,
    SimulationTrace,
    fidelity,
    initial_state,
    propagate,
)
from .ladder import (
    EffectiveParams,
    EigensolverError,
    LadderMatrix,
    MinGapResult,
    SpectrumResult,
    build_via_closed_form,
    build_via_projection,
    detuning_diagonal,
    min_gap,
    spectrum_scan,
    v_element,
)
from .optimize import (
    OptimizationResult,
    PowerLawFit,
    ScalingStudy,
    fit_power_law,
    optimize_detuning,
    scaling_study,
)
from .oracle import (
    LeakageStudy,
    SymmetricOperator,
    SymmetricRegister,
    build_symmetric_hamiltonian,
    full_tensor_check,
    ladder_equivalence_check,
    leakage_study,
    symmetric_register,
    validation_report,
)
from .spin_algebra import SpinLabel, binomial, p_coeff, wigner_d_half_pi

__version__ = "0.1.0"

__all__ = [
    "EffectiveParams",
    "EigensolverError",
    "LadderMatrix",
    "LadderState",
    "LeakageStudy",
    "MinGapResult",
    "OptimizationResult",
    "PowerLawFit",
    "PropagationError",
    "PulseSchedule",
    "ScalingStudy",
    "SimulationTrace",
    "SpectrumResult",
    "SpinLabel",
    "SymmetricOperator",
    "SymmetricRegister",
    "binomial",
    "build_symmetric_hamiltonian",
    "build_via_closed_form",
    "build_via_projection",
    "detuning_diagonal",
    "fidelity",
    "fit_power_law",
    "full_tensor_check",
    "initial_state",
    "ladder_equivalence_check",
    "leakage_study",
    "min_gap",
    "optimize_detuning",
    "p_coeff",
    "propagate",
    "scaling_study",
    "spectrum_scan",
    "symmetric_register",
    "v_element",
    "validation_report",
    "wigner_d_half_pi",
]
