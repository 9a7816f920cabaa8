"""Executable toolkit for (weakly) norming linear systems over prime fields."""

from linnorm.errors import (
    BudgetExceeded,
    DimensionMismatch,
    NotAGraph,
    NotApplicable,
    ParseError,
    RankTooHigh,
    SearchFailed,
)
from linnorm.fq import (
    FqMatrix,
    FqScalar,
    LinearSystem,
    RowSpaceProfile,
    is_schatten_vector,
    kernel_basis,
    row_space_profile,
    rref,
)

__version__ = "0.1.0"
