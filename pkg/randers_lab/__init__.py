from .errors import (LabError, InvalidArgumentError, EvaluationError, DegenerateMetricError, SweepFailureError,
                     ValidationError, DIVERGENT, is_divergent)
from .lab import Lab
from .settings import Settings


__all__ = [
    "Lab",
    "Settings",
    "LabError",
    "InvalidArgumentError",
    "EvaluationError",
    "DegenerateMetricError",
    "SweepFailureError",
    "ValidationError",
    "DIVERGENT",
    "is_divergent",
]
