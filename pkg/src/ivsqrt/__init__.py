"""Inverse-square-root level-crossing two-state model.

Closed-form amplitudes built from Hermite functions of complex order, the
bi-confluent Heun machinery that produces them, and an ODE integrator used as
an independent check.
"""
from .closed_form import (
    AmplitudePair,
    FundamentalParams,
    SolutionCoefficients,
    a1_from_a2,
    a2_fundamental_hermite,
    a2_fundamental_quasienergy,
    a2_general,
    amplitudes,
    approx_strong_field,
    approx_weak_field,
    fundamental_params,
    limit_a1_at_zero,
    rabi_solution,
    scattering_a2_at_zero,
    solve_ivp_coefficients,
)
from .field import (
    DerivedParams,
    FieldConfig,
    c1_normalization,
    crossing_time,
    derived_params,
    detuning,
    dimensionless_params,
    lz_parameter,
    phase,
    quasi_energies,
)
from .oracle import IntegrationSpec, Trajectory, integrate_two_state, residual_eq3
from .specfun import EvalPolicy, erfc_complex, gamma_complex, hermite_h, kummer_m, recip_gamma

__all__ = [name for name in dir() if not name.startswith("_")]
