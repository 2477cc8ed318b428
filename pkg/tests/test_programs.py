"""Expressions, predicates, denotations, mumbling and the rely vocabulary."""

import random
from itertools import product

import pytest

from rgtrace.interference import (
    StateSpace,
    consistent,
    consistent_part,
    id_relation,
    leq_consistent,
    lift,
    rely_lang,
    rely_shuffle,
    top_relation,
)
from rgtrace.lang import Lang, concat, lang, leq, meet, one, union
from rgtrace.laws import gen_expr, gen_pred
from rgtrace.programs import (
    And,
    Assign,
    Atomic,
    BinExpr,
    BoolLit,
    Choice,
    Cmp,
    If,
    Lit,
    Not,
    Or,
    Par,
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
    unchanged,
)
from rgtrace.programs import test_lang as tlang

XY = StateSpace(("x", "y"), 4)
X8 = StateSpace(("x",), 8)


# --------------------------------------------------------------------------
# Expressions and predicates

def test_eval_constant_mod():
    assert eval_expr(XY, 0, Lit(7)) == 3  # mod 4
    assert eval_expr(X8, 0, Lit(7)) == 7


def test_eval_variable_read():
    sid = XY.state_id((3, 1))
    assert eval_expr(XY, sid, Var("x")) == 3
    assert eval_expr(XY, sid, Var("y")) == 1


def test_eval_add_without_wraparound():
    sid = X8.state_id((2,))
    assert eval_expr(X8, sid, BinExpr("+", Var("x"), Lit(2))) == 4


def test_eval_ops():
    sid = XY.state_id((3, 2))
    assert eval_expr(XY, sid, BinExpr("-", Var("x"), Var("y"))) == 1
    assert eval_expr(XY, sid, BinExpr("*", Var("x"), Var("y"))) == 2  # 6 mod 4


def test_pred_denotation():
    p = Cmp("<", Var("x"), Var("y"))
    got = pred_states(XY, p)
    expect = {s for s in XY.all_states() if XY.value(s, "x") < XY.value(s, "y")}
    assert got == expect
    assert pred_states(XY, Not(p)) == frozenset(XY.all_states()) - got


def test_pred_connectives():
    p = And(Cmp("=", Var("x"), Lit(1)), Or(Cmp("=", Var("y"), Lit(0)), BoolLit(False)))
    assert pred_states(XY, p) == frozenset({XY.state_id((1, 0))})


# --------------------------------------------------------------------------
# Substitution

def test_subst_inverts_increment():
    # {x : x+2 = 4} is {x = 2} when no wraparound interferes
    p = Cmp("=", Var("x"), Lit(4))
    got = subst(p, "x", BinExpr("+", Var("x"), Lit(2)))
    assert pred_states(X8, got) == frozenset({X8.state_id((2,))})


def test_subst_identity_and_missing_var():
    p = Cmp("=", Var("y"), Lit(1))
    assert subst(p, "x", Lit(0)) == p
    q = Cmp("<", Var("x"), Lit(2))
    assert pred_states(XY, subst(q, "x", Var("x"))) == pred_states(XY, q)


def test_subst_extensional_characterisation():
    rng = random.Random(41)
    for _ in range(80):
        p = gen_pred(rng, XY.variables)
        e = gen_expr(rng, XY.variables)
        var = rng.choice(XY.variables)
        got = pred_states(XY, subst(p, var, e))
        expect = frozenset(
            s
            for s in XY.all_states()
            if XY.updated(s, var, eval_expr(XY, s, e)) in pred_states(XY, p)
        )
        assert got == expect


# --------------------------------------------------------------------------
# Test and end languages

def test_test_lang_true_false():
    assert tlang(XY, BoolLit(True), 3) == lift(id_relation(16), 3)
    assert tlang(XY, BoolLit(False), 3).words == frozenset()


def test_test_lang_subidentity():
    p = Cmp("=", Var("x"), Lit(1))
    assert leq(tlang(XY, p, 3), lift(id_relation(16), 3))


def test_end_lang_membership():
    sp = StateSpace(("x",), 2)
    got = end_lang(sp, Cmp("=", Var("x"), Lit(1)), 2)
    assert ((0, 1),) in got.words
    assert ((1, 1),) in got.words
    assert ((0, 0),) not in got.words
    assert ((1, 0), (0, 1)) in got.words  # inconsistent words are members too
    assert () not in got.words
    assert end_lang(sp, BoolLit(False), 2).words == frozenset()


def test_test_below_end():
    sp = StateSpace(("x",), 3)
    p = Cmp("<", Var("x"), Lit(2))
    assert leq(tlang(sp, p, 2), end_lang(sp, p, 2))


# --------------------------------------------------------------------------
# Mumbling

def test_mumble_word_no_chain():
    w = ((0, 1),)
    assert mumble_word(w) == {w}
    assert mumble_word(((0, 1), (2, 0))) == {((0, 1), (2, 0))}


def test_mumble_word_single_contraction():
    w = ((0, 1), (1, 2))
    assert mumble_word(w) == {w, ((0, 2),)}


def test_mumble_word_nested_contractions():
    w = ((0, 1), (1, 2), (2, 0))
    got = mumble_word(w)
    assert got == {
        w,
        ((0, 2), (2, 0)),
        ((0, 1), (1, 0)),
        ((0, 0),),
    }


def test_mumble_close_idempotent_and_monotone():
    rng = random.Random(43)
    for _ in range(60):
        words = [
            tuple((rng.randrange(3), rng.randrange(3)) for _ in range(rng.randint(0, 3)))
            for _ in range(rng.randint(0, 4))
        ]
        x = Lang(frozenset(words), 3)
        cx = mumble_close(x)
        assert mumble_close(cx) == cx
        assert leq(x, cx)
        y = union(x, Lang(frozenset({((0, 1),)}), 3))
        assert leq(cx, mumble_close(y))


def test_mumble_keeps_endpoints_of_consistent_words():
    w = ((0, 1), (1, 2), (2, 2))
    for m in mumble_word(w):
        assert m[0][0] == 0
        assert m[-1][1] == 2


def test_test_composition_laws():
    sp = StateSpace(("x",), 4)
    p = Cmp("<", Var("x"), Lit(3))
    q = Cmp("<", Var("x"), Lit(2))
    tp, tq = tlang(sp, p, 3), tlang(sp, q, 3)
    tpq = tlang(sp, And(p, q), 3)
    chain = mumble_close(concat(tp, tq, 3))
    assert leq_consistent(tpq, chain)
    # and the stuttered converse
    assert leq_consistent(
        rely_shuffle(id_relation(4), chain, 3),
        rely_shuffle(id_relation(4), tpq, 3),
    )
    # meet of tests is the test of the meet
    assert meet(tp, tq) == tpq


def test_end_then_test_law():
    sp = StateSpace(("x",), 3)
    p = Cmp("<", Var("x"), Lit(2))
    q = Cmp("=", Var("x"), Lit(1))
    lhs = mumble_close(concat(end_lang(sp, p, 3), tlang(sp, q, 3), 3))
    assert leq_consistent(lhs, end_lang(sp, And(p, q), 3))


def test_end_absorption():
    sp = StateSpace(("x",), 3)
    p = Cmp("<", Var("x"), Lit(2))
    good = pred_states(sp, p)
    rel = frozenset({(0, 1), (1, 0), (2, 2)})  # preserves x < 2
    assert all(b in good for (a, b) in rel if a in good)
    endp = end_lang(sp, p, 3)
    assert leq_consistent(mumble_close(concat(endp, rely_lang(rel, 3), 3)), endp)


# --------------------------------------------------------------------------
# Stuttering

def test_stutter_eq_reflexive():
    rng = random.Random(44)
    sp = StateSpace(("x",), 2)
    for _ in range(20):
        words = [
            tuple((rng.randrange(2), rng.randrange(2)) for _ in range(rng.randint(0, 2)))
            for _ in range(rng.randint(0, 3))
        ]
        x = Lang(frozenset(words), 3)
        assert stutter_eq(sp, x, x, 3)


def test_stutter_eq_epsilon_vs_full_test():
    # enumeration refutes full equality here: the empty word survives the
    # consistency filter on the skip side but stutter-padding the test
    # side never produces a word shorter than one letter
    sp = StateSpace(("x",), 2)
    full_test = tlang(sp, BoolLit(True), 3)
    assert not stutter_eq(sp, one(3), full_test, 3)
    padded_test = rely_shuffle(id_relation(2), full_test, 3)
    padded_skip = rely_shuffle(id_relation(2), one(3), 3)
    assert leq_consistent(padded_test, padded_skip)
    diff = consistent_part(padded_skip).words - consistent_part(padded_test).words
    assert diff == {()}


def test_stutter_eq_distinguishes():
    sp = StateSpace(("x",), 2)
    x = lang([[(0, 1)]], 3)
    assert not stutter_eq(sp, x, one(3), 3)


# --------------------------------------------------------------------------
# Assignment

def test_assign_constant_ends_with_value():
    sp = StateSpace(("x", "y"), 3)
    got = assign_lang(sp, "x", Lit(2), 3)
    for w in consistent_part(got).words:
        assert sp.value(w[-1][1], "x") == 2


def test_assign_increment_reaches_target():
    got = assign_lang(X8, "x", BinExpr("+", Var("x"), Lit(2)), 3)
    start = X8.state_id((2,))
    finals = {
        w[-1][1]
        for w in consistent_part(got).words
        if w[0][0] == start
    }
    assert finals == {X8.state_id((4,))}


def test_assign_word_shapes():
    sp = StateSpace(("x",), 2)
    got = assign_lang(sp, "x", Lit(1), 3)
    # read-then-write pairs plus their fused single-step contractions
    assert ((0, 0), (0, 1)) in got.words
    assert ((0, 0), (1, 1)) in got.words  # write fires after interference
    assert ((0, 1),) in got.words
    assert ((1, 1),) in got.words


def test_assign_guarantee_frame():
    sp = StateSpace(("x", "y"), 3)
    frame = rely_lang(unchanged(sp, ("y",)), 3)
    got = assign_lang(sp, "x", BinExpr("+", Var("x"), Lit(1)), 3)
    assert leq(got, frame)


# --------------------------------------------------------------------------
# Denotation

def test_denote_skip_and_test():
    sp = StateSpace(("x",), 2)
    assert denote(sp, Skip(), 3) == one(3)
    p = Cmp("=", Var("x"), Lit(0))
    assert denote(sp, Test(p), 3) == tlang(sp, p, 3)


def test_denote_seq_choice_par_regressions():
    sp = StateSpace(("x",), 2)
    a = Test(Cmp("=", Var("x"), Lit(0)))
    b = Atomic(frozenset({(0, 1)}))
    da, db = denote(sp, a, 3), denote(sp, b, 3)
    assert denote(sp, Seq(a, b), 3) == mumble_close(concat(da, db, 3))
    assert denote(sp, Choice(a, b), 3) == union(da, db)
    from rgtrace.lang import shuffle

    assert denote(sp, Par(a, b), 3) == mumble_close(shuffle(da, db, 3))


def test_denote_if_true_branch():
    sp = StateSpace(("x",), 2)
    x_cmd = Atomic(frozenset({(0, 1)}))
    y_cmd = Atomic(frozenset({(1, 0)}))
    got = denote(sp, If(BoolLit(True), x_cmd, y_cmd), 3)
    expect = mumble_close(
        concat(tlang(sp, BoolLit(True), 3), denote(sp, x_cmd, 3), 3)
    )
    assert got == expect
    assert stutter_eq(sp, got, mumble_close(concat(denote(sp, Test(BoolLit(True)), 3), denote(sp, x_cmd, 3), 3)), 3)


def test_denote_while_false_collapses_to_exit_test():
    sp = StateSpace(("x",), 2)
    body = Atomic(frozenset({(0, 1)}))
    got = denote(sp, While(BoolLit(False), body), 3)
    assert got == tlang(sp, BoolLit(True), 3)


def test_denote_while_unfolds_once():
    sp = StateSpace(("x",), 3)
    cond = Cmp("=", Var("x"), Lit(0))
    body = Assign("x", BinExpr("+", Var("x"), Lit(1)))
    got = consistent_part(denote(sp, While(cond, body), 4))
    # from x=0: one iteration then the exit test at x=1
    runs = {w for w in got.words if w[0][0] == 0}
    finals = {w[-1][1] for w in runs}
    assert finals == {1}
    # from x=2 the loop exits straight away by its test
    assert ((2, 2),) in got.words


# --------------------------------------------------------------------------
# Interference vocabulary

def test_unchanged_extremes():
    sp = StateSpace(("x", "y"), 2)
    assert unchanged(sp, ()) == top_relation(4)
    assert unchanged(sp, ("x", "y")) == id_relation(4)


def test_unchanged_fixes_variable():
    sp = StateSpace(("x", "y"), 3)
    for a, b in unchanged(sp, ("x",)):
        assert sp.value(a, "x") == sp.value(b, "x")


def test_preserves_extremes_and_reflexivity():
    sp = StateSpace(("x",), 3)
    assert preserves(sp, BoolLit(True)) == top_relation(3)
    assert preserves(sp, BoolLit(False)) == top_relation(3)
    rng = random.Random(50)
    for _ in range(20):
        p = gen_pred(rng, sp.variables)
        rel = preserves(sp, p)
        assert id_relation(3) <= rel


def test_increasing_decreasing():
    sp = StateSpace(("x", "y"), 3)
    inc, dec = increasing(sp, "x"), decreasing(sp, "x")
    for a, b in inc:
        assert sp.value(a, "x") <= sp.value(b, "x")
    assert inc & dec == unchanged(sp, ("x",))
    assert unchanged(sp, ("x",)) <= inc
    # a strict write below the current value sits inside decreasing
    a = sp.state_id((2, 1))
    assert (a, sp.updated(a, "x", 0)) in dec
    assert (a, sp.updated(a, "x", 0)) not in inc
