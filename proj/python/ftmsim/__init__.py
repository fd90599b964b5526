"""Monitored qubit under a finite-time measurement in a thermal Ohmic bath.

Thin wrapper over the C++ core: closed noiseless propagators, the four
hybrid master-equation scenarios, the exact splitting sum for the dephasing
bath with the x apparatus, and the weak-measurement synthesis/fitting chain.
"""

from ftmsim._core import (
    DensityMatrix,
    Diagnostics,
    ExpectationLine,
    FitResult,
    FtmError,
    ModelParams,
    SamplePoint,
    SplittingOutput,
    SyntheticExperiment,
    Trajectory,
    __version__,
    apply_weak_meas,
    b_of_tau,
    dephasing_exponent,
    expected_sigma_z,
    fit_lambda_squared,
    measurement_duration,
    min_eigenvalue,
    propagate_x_meas,
    propagate_z_meas,
    solve,
    splitting_trajectory,
    synthesize_experiment,
    to_x_basis,
)

__all__ = [
    "DensityMatrix",
    "Diagnostics",
    "ExpectationLine",
    "FitResult",
    "FtmError",
    "ModelParams",
    "SamplePoint",
    "SplittingOutput",
    "SyntheticExperiment",
    "Trajectory",
    "__version__",
    "apply_weak_meas",
    "b_of_tau",
    "dephasing_exponent",
    "expected_sigma_z",
    "fit_lambda_squared",
    "measurement_duration",
    "min_eigenvalue",
    "propagate_x_meas",
    "propagate_z_meas",
    "solve",
    "splitting_trajectory",
    "synthesize_experiment",
    "to_x_basis",
]
