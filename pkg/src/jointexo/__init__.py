"""Partial identification of the average causal effect in a quantum
instrumental network, and the resulting falsification of joint exogeneity.
"""

from .classical import (
    ResponseFunctionModel,
    SampledDataset,
    classical_observed,
    classical_true_ace,
    random_model,
    sample_dataset,
)
from .errors import (
    CapacityError,
    JointExoError,
    NumericalError,
    ShapeError,
    SolverError,
    SolverStallError,
    ValidationError,
)
from .lp import (
    AssumptionSet,
    BoundsResult,
    CounterfactualIndex,
    ace_bounds,
    build_lp,
    decode_index,
    encode_index,
)
from .quantum import (
    DensityOperator,
    InterventionalDistribution,
    ObservedDistribution,
    Povm,
    QuantumInstrumentalScenario,
    bell_preset,
    born_distribution,
    check_marginal_exogeneity,
    interventional_distribution,
    potential_outcome_marginal,
    random_scenario,
    true_ace,
    validate_scenario,
)
from .report import FalsificationReport, Verdict, falsify_pipeline, parse_report, render_report
from .simplex import LinearProgram, Sense, Solution, Status, enumerate_vertices, solve

__version__ = "0.1.0"
