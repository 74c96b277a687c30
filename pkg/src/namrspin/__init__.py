"""Frequency disorder, phonon-mediated spin gates and their compensation in resonator chains."""

from namrspin.chain_model import (
    CONSTANTS,
    CouplingGraph,
    FrequencySample,
    PhysicalConstants,
    QuadraticForm,
    ResonatorSpec,
    build_chain_coupling,
    build_lattice_coupling,
    build_quadratic_form,
    sample_errors,
    spin_resonator_coupling,
    trial_stream,
    zero_point_amplitude,
)
from namrspin.compensation import (
    CompensationSchedule,
    PairCoupling,
    build_schedule,
    execute_schedule,
    naive_protocol_residual,
    pair_coupling,
    verify_compensation,
)
from namrspin.experiments import (
    EnsembleResult,
    FitResult,
    ensemble_fidelity,
    linear_fit,
    max_chain_length,
    sweep_fidelity_vs_n,
)
from namrspin.mode_solver import (
    CollectiveModes,
    analytic_uniform_dispersion,
    collective_frequencies,
    mode_shift_statistics,
    symmetric_eigen,
)
from namrspin.spin_dynamics import (
    IsingCouplings,
    ModeSpinWeights,
    SpinState,
    coupling_fluctuation,
    effective_couplings,
    fidelity,
    fidelity_vs_time,
    gate_fidelity,
    ising_evolve,
    mode_spin_weights,
)

__version__ = "0.1.0"
