from .api import (
    SAT, UNSAT, Assumptions, ExternalAssignment, Model, NO_ASSUMPTIONS, SolveResult,
    compare_costs, consequences, cost, cost_key, enumerate_stable, optimize, project,
)
from .reference import (
    BRUTE_FORCE_LIMIT, TooLarge, brute_force_stable, desugar_choices, is_stable,
    minimal_model, reduct, with_assignment,
)
