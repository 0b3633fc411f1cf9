"""Numerical laboratory for integrable Hamiltonians coupled to a single thermostat."""

from .model import (
    DomainError,
    HomogeneousSpec,
    HypothesisError,
    PhaseState,
    PotentialSpec,
    QuadratureError,
    ThermostatSpec,
    equations_of_motion,
    hamiltonian_energy,
    homogeneous_action_check,
    homogeneous_normalization,
    instantaneous_temperature,
)
from .equilibria import (
    EquilibriumPoint,
    NoSolutionError,
    homogeneous_s0,
    lift_to_phase,
    perturbed_start,
    solve_equilibrium,
)
from .linear_analysis import (
    HessianIndefiniteError,
    LinearModel,
    linearize,
    nose_frequency_approx,
    paper_thermostat_frequency,
)
from .integrators import (
    IntegratorSpec,
    Trajectory,
    Unsplittable,
    integrate,
    integrate_homogeneous,
    split_flows,
    step,
)
from .spectral import (
    RatioEstimate,
    Spectrum,
    amplitude_spectrum,
    dominant_peak,
    measure_frequency_ratio,
)
from .diagnostics import (
    DriftReport,
    birkhoff_average,
    drift_report,
    mean_temperature_identity_check,
)

__version__ = "0.1.0"
