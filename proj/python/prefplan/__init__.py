"""Preference-aware planning over action-language domains."""

from ._core import (
    PlanningError,
    Problem,
    __version__,
    compare,
    count_trajectories,
    emit,
    explain,
    load_domain,
    plan,
)

__all__ = [
    "PlanningError",
    "Problem",
    "__version__",
    "compare",
    "count_trajectories",
    "emit",
    "explain",
    "load_domain",
    "plan",
]
