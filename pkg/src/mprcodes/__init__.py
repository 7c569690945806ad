"""Non-adaptive conflict resolution on a multiple-access channel where up to
d simultaneous transmissions succeed.

Schedules are binary matrices (rows = slots, columns = stations). The package
simulates the channel, verifies KG codes, generalized selectors and locally
thin codes exhaustively, builds KG codes from random selectors, and evaluates
the associated length bounds.
"""
from .core import (
    KGParams,
    ScheduleMatrix,
    SelectorParams,
    column_submatrix,
    make_matrix,
    read_matrix,
    restricted_row_weight,
    stack,
    write_matrix,
)
from .channel import residual_active, resolves, simulate, staged_simulate
from .verify import (
    VerificationReport,
    is_kg_def,
    is_kg_sim,
    is_locally_thin_exact,
    is_locally_thin_leq,
    is_selector,
)
from .construct import build_kg, build_staged, gen_selector, minimal_t_search, plan_selector
from .bounds import (
    claim1_rate,
    p1p2,
    tkg_upper_explicit,
    tlt_lower_exact,
    tlt_lower_leq,
    tsel_upper,
)

__version__ = "0.1.0"
