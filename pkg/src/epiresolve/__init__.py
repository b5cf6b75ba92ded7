"""Workbench for epistemic logic with resolution operators.

Formulas of epistemic logic with distributed knowledge, common knowledge,
resolution and public announcement, evaluated over finite Kripke models
whose relations are equivalence relations, plus the group-resolved model
update, reduction normal form, bisimulation checking, and bounded model
search.
"""

from .syntax import (
    Agent,
    And,
    Ann,
    Atom,
    Bot,
    C,
    D,
    E,
    FALSE,
    Formula,
    Group,
    Iff,
    Implies,
    K,
    LanguageTag,
    Neg,
    Or,
    ParseError,
    R,
    TRUE,
    Top,
    agents,
    as_group,
    atoms,
    closure,
    delta,
    group_key,
    language_of,
    parse,
    push_modal,
    reduce,
    render,
    subformulas,
)
from .kripke import (
    Model,
    Partition,
    PreModel,
    all_groups,
    as_premodel,
    common_relation,
    group_relation,
    is_pseudo,
    iterated_relation,
    load_model,
    model_from_dict,
    model_to_dict,
    resolve,
    resolve_pre,
    restrict,
    save_model,
    validate,
)
from .checker import (
    Evaluator,
    PointedModel,
    PseudoEvaluator,
    equivalent_on,
    extension,
    points_of,
    satisfies,
    satisfies_pseudo,
)
from .bisim import (
    bisimilar_pre,
    duplicate_state,
    is_pre_bisimulation,
    is_trans_bisimulation,
    trans_bisimilar,
    witness_to_pairs,
)
from .search import (
    FormulaGen,
    SearchBounds,
    SearchOutcome,
    check_rule_rrc,
    check_schema,
    enumerate_models,
    enumerate_pseudo_models,
    find_countermodel,
    find_model,
    schema_builders,
    set_partitions,
)
from .fixtures import fig1, fig1_core, fixture_path

__version__ = "0.1.0"
