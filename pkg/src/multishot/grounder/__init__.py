from .arith import EvalError, eval_term, expand_term
from .depgraph import dependency_graph, tarjan
from .ground import (
    AtomBase, GroundingResult, GroundProgramWithExternals, GroundRule, MinimizeGroundElement,
    choice, constraint, dump_rules, heads, is_aux, make_rule, normal, sort_rules,
)
from .instantiate import DEFAULT_INSTANCE_CAP, GroundingError, instantiate, next_aux_id
from .simplify import simplify_with_facts
