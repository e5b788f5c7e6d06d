"""Date arithmetic with explicit rounding, and a static check that a date
computation does not depend on the rounding mode used for invalid days."""

from .core import (
    BOTTOM,
    Bottom,
    Date,
    Period,
    RoundingMode,
    add_days,
    add_months,
    add_period,
    add_years,
    is_ambiguous,
    is_leap,
    nb_days,
    round_date,
    valid,
)

__version__ = "0.1.0"

__all__ = [
    "BOTTOM",
    "Bottom",
    "Date",
    "Period",
    "RoundingMode",
    "add_days",
    "add_months",
    "add_period",
    "add_years",
    "is_ambiguous",
    "is_leap",
    "nb_days",
    "round_date",
    "valid",
    "__version__",
]
