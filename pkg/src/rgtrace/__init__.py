"""Rely-guarantee verification kernel over bounded trace languages.

Programs denote finite sets of words whose letters are state pairs;
parallel composition is the shuffle of such words, interference is a
relation iterated alongside the program, and a Jones-style quintuple is
decided by bounded, exhaustive trace reasoning.
"""

from .interference import (
    Relation,
    Rely,
    StateSpace,
    atomic_identities,
    check_con_axioms,
    check_pi_image_kleene,
    check_rg_axioms,
    consistent,
    consistent_part,
    derived_rely_facts,
    eq_consistent,
    id_relation,
    leq_consistent,
    lift,
    quintuple_holds,
    quintuple_refine_holds,
    rely_lang,
    rely_shuffle,
    top_relation,
)
from .lang import (
    EPSILON,
    BoundMismatchError,
    Lang,
    Letter,
    Word,
    concat,
    format_word,
    lang,
    leq,
    meet,
    one,
    plus,
    residual_left,
    residual_par,
    residual_right,
    restrict,
    serialize,
    shuffle,
    star,
    union,
    universe,
    word_shuffle,
    zero,
)
from .programs import (
    And,
    Assign,
    Atomic,
    BinExpr,
    BoolLit,
    Choice,
    Cmp,
    Command,
    Expr,
    If,
    Lit,
    Loop,
    Not,
    Or,
    Par,
    Pred,
    Seq,
    Skip,
    Test,
    Var,
    While,
    assign_lang,
    decreasing,
    denote,
    end_lang,
    eval_expr,
    eval_pred,
    increasing,
    mumble_close,
    mumble_word,
    pred_states,
    preserves,
    stutter_eq,
    subst,
    test_lang,
    unchanged,
)
from .report import CheckResult, Report
from .syntax import ParseError, build_relation, parse_pred, parse_program, parse_spec
from .verify import (
    BruteOutcome,
    NodeReport,
    OutlineError,
    ProofNode,
    Quintuple,
    StateSpec,
    brute_node,
    check_bruteforce,
    check_outline,
    end_spec,
    findp_scaled,
    findp_suite,
    reachable_end_states,
    test_spec,
)

__version__ = "0.1.0"
