"""Methods for n k-similar / k-diverse solution sets."""
from .base import (COMPLETE_METHODS, METHODS, Infeasible, MethodFailure, NotFound, SearchConfig,
                   SolutionSet, UnsupportedMeasure, enumerate_solutions, satisfies)
from .clique import find_clique
from .close import solve_closest, solve_k_close, solve_k_close_set, solve_maximal
from .offline import solve_offline
from .online import solve_incremental, solve_iterative
from .optimize import binary_search, optimize_most, solve
from .reformulation import Reformulation, reformulate, solve_reformulation

SOLVERS = {
    "offline": solve_offline,
    "reformulate": solve_reformulation,
    "iterative": solve_iterative,
    "incremental": solve_incremental,
}
