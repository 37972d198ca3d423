"""Quantum (TMSV) versus classically-correlated noise radar analysis."""

__version__ = "0.1.0"

from .channel import Hypothesis, RadarScenario, simulate_scenario, target_return
from .correlations import (
    CorrelationReport,
    correlation_matrix,
    extract_cross_correlation,
    kappa_ccn,
    kappa_tmsv,
    pipeline_advantage,
    quantum_advantage,
    quantum_advantage_idler_amplified,
)
from .detection import DetectionConfig, RocCurve, kappa_het, roc_analytic, roc_empirical, wilks_statistic
from .gaussian import (
    GaussianState,
    apply_amplifier,
    apply_beamsplitter,
    apply_phase,
    make_thermal,
    make_tmsv,
    partial_trace,
    ppt_min_symplectic,
    symplectic_eigenvalues,
    tensor,
    thermal_photon_number,
)
from .sources import SourceSpec, build_source, solve_power_constraint
from .asymptotics import (
    SteinReport,
    d_ccn_first_order,
    d_tmsv_first_order,
    relative_entropy_gaussian,
    relative_entropy_variance_gaussian,
    stein_exponent,
)
