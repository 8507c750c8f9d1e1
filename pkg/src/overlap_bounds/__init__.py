"""Numerical toolkit for overlap-based inequalities and the quantum decay bounds they imply."""

from .bounds import (
    AuxPair,
    BoundReport,
    cauchy_coefficients,
    csi,
    icsi,
    icsi_single_aux,
    improved_triangle,
    moment_bound,
    optimal_alpha,
    parent_aux_bound,
    projector_tightened_csi,
    triangle_usi,
)
from .dynamics import (
    DecayTrace,
    GaussianPacketModel,
    NLevelModel,
    RecurrenceSummary,
    TwoLevelModel,
    decay_lower_bound,
    evolve,
    gaussian_exact,
    gaussian_lower_bound,
    recurrence_summary,
    short_time_series,
    sine_upper_bound,
    small_time_limit_check,
    speed_limit_times,
    survival,
    trace,
    two_level_closed_form,
)
from .linspace import (
    Operator,
    SpaceMetric,
    State,
    centered,
    expectation,
    grid_state,
    inner,
    moment,
    norm,
    normalize,
    overlap,
    project_out,
    std_dev,
)
from .uncertainty import (
    EckartInput,
    OverlapDiagnostics,
    best_shared_aux,
    eckart_complementary,
    eckart_lower,
    eckart_verify,
    iusi,
    modified_upi,
    modified_upi_single,
    orthogonal_floor,
    uncertainty_sum,
    upi,
)

__version__ = "0.1.0"
