"""2D convex minimization by halving the region a gradient direction rules out.

Core solvers live in `halving` (squares) and `triangle` (right triangles),
with classical baselines in `baselines` and a certified Lagrange dual solver
in `dual`. The HTTP service and its request models are under `service`; the
command line lives in `cli`.
"""

__version__ = "0.1.0"

from .baselines import ellipsoid_solve, gradient_descent_solve
from .dual import DualProblem, DualSolution, FunctionTerms, ProblemSpec, dual_solve, load_problem
from .geometry import AxisBox, Point2, RightTriangle, Segment, Trapezoid
from .halving import (Budget, Solution, inexact_budget_ok, required_delta,
                      required_iterations, solve)
from .oracle import (CallCounters, CorpusEntry, Oracle, PerturbedOracle, RunOracle,
                     Side, corpus, max_affine)
from .triangle import solve_triangle

__all__ = [
    "AxisBox", "Budget", "CallCounters", "CorpusEntry", "DualProblem", "DualSolution",
    "FunctionTerms", "Oracle", "PerturbedOracle", "Point2", "ProblemSpec",
    "RightTriangle", "RunOracle", "Segment", "Side", "Solution", "Trapezoid",
    "__version__", "corpus", "dual_solve", "ellipsoid_solve", "gradient_descent_solve",
    "inexact_budget_ok", "load_problem", "max_affine", "required_delta",
    "required_iterations", "solve", "solve_triangle",
]
