"""Anytime sampling-based optimal path planning in R^d.

The main planner searches bidirectionally with lazily computed, collision-
unaware heuristic trees that meet in the middle and share information; an
asymmetric single-lazy-tree baseline is included for head-to-head runs.
"""

from .ait import AitPlanner
from .planner import A, B, Planner, PlannerConfig, Solution, Termination, Vertex
from .sampling import SamplerConfig, VariationalSchedule
from .space import Bounds, Obstacle, ProblemDef

__all__ = [
    "A", "B", "AitPlanner", "Bounds", "Obstacle", "Planner", "PlannerConfig",
    "ProblemDef", "SamplerConfig", "Solution", "Termination",
    "VariationalSchedule", "Vertex",
]

__version__ = "0.1.0"
