"""Spectral paraproduct calculus and renormalized rough-noise heat solvers.

Everything lives on the periodic grid of ``Grid``; fields carry their
spectrum, the dyadic machinery splits it into annular blocks, and the solver
layer combines both with seeded noise draws.  The names re-exported here are
the stable surface; the submodules stay importable for the specialized
pieces (estimate specs, CSV export, trajectory files).
"""
from .dyadic import DyadicPartition, weighted_norms
from .grid import (
    Grid,
    GridMismatchError,
    NonFiniteFieldError,
    RealField,
    from_spectral,
    load_field,
    multiply,
    save_field,
    to_spectral,
)
from .heat import (
    NumericalBlowUpError,
    Trajectory,
    duhamel,
    duhamel_static,
    heat,
    load_trajectory,
    save_trajectory,
)
from .inequalities import estimate_constant, registered_suite, spectral_field
from .noise import (
    CnEvaluator,
    EnhancedNoise,
    NoiseSample,
    enhance,
    load_bundle,
    lowpass_sample,
    renorm_constant,
    sample_white_noise,
    save_bundle,
)
from .nonlinearity import NonlinearitySpec, nonlinearity
from .paraproducts import bony, commutator_com, para_gt, para_lt, resonant
from .solver import (
    BudgetReport,
    ParameterBudget,
    audit_budget,
    kappa_threshold,
    max_principle_monitor,
    solve_naive,
    solve_paracontrolled,
    solve_renormalized,
)
from .studies import (
    convergence_study,
    divergence_study,
    emit_plotdata,
    inequality_study,
    max_principle_study,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetReport",
    "CnEvaluator",
    "DyadicPartition",
    "EnhancedNoise",
    "Grid",
    "GridMismatchError",
    "NoiseSample",
    "NonFiniteFieldError",
    "NonlinearitySpec",
    "NumericalBlowUpError",
    "ParameterBudget",
    "RealField",
    "Trajectory",
    "audit_budget",
    "bony",
    "commutator_com",
    "convergence_study",
    "divergence_study",
    "duhamel",
    "duhamel_static",
    "emit_plotdata",
    "enhance",
    "estimate_constant",
    "from_spectral",
    "heat",
    "inequality_study",
    "kappa_threshold",
    "load_bundle",
    "load_field",
    "load_trajectory",
    "lowpass_sample",
    "max_principle_monitor",
    "max_principle_study",
    "multiply",
    "nonlinearity",
    "para_gt",
    "para_lt",
    "registered_suite",
    "renorm_constant",
    "resonant",
    "sample_white_noise",
    "save_bundle",
    "save_field",
    "save_trajectory",
    "solve_naive",
    "solve_paracontrolled",
    "solve_renormalized",
    "spectral_field",
    "to_spectral",
    "weighted_norms",
]
