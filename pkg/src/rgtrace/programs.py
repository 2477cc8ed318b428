"""Programs as trace languages.

Expressions and predicates are small ASTs evaluated over a finite state
space (arithmetic is mod the domain size, so evaluation is total).
Commands denote bounded languages compositionally; every node's language
is closed under mumbling (contracting a chained pair of adjacent letters
into its composite), so tests compose sequentially the way they should.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Union

from .interference import Relation, StateSpace, eq_consistent, id_relation, rely_shuffle
from .lang import Lang, Word, concat, one, shuffle, star, union

# --------------------------------------------------------------------------
# Expressions

@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinExpr:
    op: str  # '+', '-', '*'
    left: "Expr"
    right: "Expr"


Expr = Union[Lit, Var, BinExpr]


def eval_expr(space: StateSpace, sid: int, e: Expr) -> int:
    n = space.domain_size
    match e:
        case Lit(value):
            return value % n
        case Var(name):
            return space.value(sid, name)
        case BinExpr("+", left, right):
            return (eval_expr(space, sid, left) + eval_expr(space, sid, right)) % n
        case BinExpr("-", left, right):
            return (eval_expr(space, sid, left) - eval_expr(space, sid, right)) % n
        case BinExpr("*", left, right):
            return (eval_expr(space, sid, left) * eval_expr(space, sid, right)) % n
    raise TypeError(f"not an expression: {e!r}")


def expr_vars(e: Expr) -> frozenset[str]:
    match e:
        case Lit(_):
            return frozenset()
        case Var(name):
            return frozenset({name})
        case BinExpr(_, left, right):
            return expr_vars(left) | expr_vars(right)
    raise TypeError(f"not an expression: {e!r}")


def subst_expr(e: Expr, var: str, replacement: Expr) -> Expr:
    match e:
        case Lit(_):
            return e
        case Var(name):
            return replacement if name == var else e
        case BinExpr(op, left, right):
            return BinExpr(op, subst_expr(left, var, replacement), subst_expr(right, var, replacement))
    raise TypeError(f"not an expression: {e!r}")


# --------------------------------------------------------------------------
# Predicates

@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # '=', '<', '<='
    left: Expr
    right: Expr


@dataclass(frozen=True)
class And:
    left: "Pred"
    right: "Pred"


@dataclass(frozen=True)
class Or:
    left: "Pred"
    right: "Pred"


@dataclass(frozen=True)
class Not:
    body: "Pred"


Pred = Union[BoolLit, Cmp, And, Or, Not]

TRUE = BoolLit(True)
FALSE = BoolLit(False)


def eval_pred(space: StateSpace, sid: int, p: Pred) -> bool:
    match p:
        case BoolLit(value):
            return value
        case Cmp("=", left, right):
            return eval_expr(space, sid, left) == eval_expr(space, sid, right)
        case Cmp("<", left, right):
            return eval_expr(space, sid, left) < eval_expr(space, sid, right)
        case Cmp("<=", left, right):
            return eval_expr(space, sid, left) <= eval_expr(space, sid, right)
        case And(left, right):
            return eval_pred(space, sid, left) and eval_pred(space, sid, right)
        case Or(left, right):
            return eval_pred(space, sid, left) or eval_pred(space, sid, right)
        case Not(body):
            return not eval_pred(space, sid, body)
    raise TypeError(f"not a predicate: {p!r}")


@lru_cache(maxsize=None)
def pred_states(space: StateSpace, p: Pred) -> frozenset[int]:
    """Eager denotation: the set of state ids satisfying p."""
    return frozenset(s for s in space.all_states() if eval_pred(space, s, p))


def pred_vars(p: Pred) -> frozenset[str]:
    match p:
        case BoolLit(_):
            return frozenset()
        case Cmp(_, left, right):
            return expr_vars(left) | expr_vars(right)
        case And(left, right) | Or(left, right):
            return pred_vars(left) | pred_vars(right)
        case Not(body):
            return pred_vars(body)
    raise TypeError(f"not a predicate: {p!r}")


def subst(p: Pred, var: str, e: Expr) -> Pred:
    """Syntactic substitution of e for var; [[subst(p,x,e)]] = {s : s[x:=e(s)] in [[p]]}."""
    match p:
        case BoolLit(_):
            return p
        case Cmp(op, left, right):
            return Cmp(op, subst_expr(left, var, e), subst_expr(right, var, e))
        case And(left, right):
            return And(subst(left, var, e), subst(right, var, e))
        case Or(left, right):
            return Or(subst(left, var, e), subst(right, var, e))
        case Not(body):
            return Not(subst(body, var, e))
    raise TypeError(f"not a predicate: {p!r}")


# --------------------------------------------------------------------------
# Commands

@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class Assign:
    var: str
    expr: Expr


@dataclass(frozen=True)
class Seq:
    first: "Command"
    second: "Command"


@dataclass(frozen=True)
class Choice:
    left: "Command"
    right: "Command"


@dataclass(frozen=True)
class If:
    cond: Pred
    then: "Command"
    orelse: "Command"


@dataclass(frozen=True)
class While:
    cond: Pred
    body: "Command"


@dataclass(frozen=True)
class Par:
    left: "Command"
    right: "Command"


@dataclass(frozen=True)
class Atomic:
    relation: Relation


@dataclass(frozen=True)
class Test:
    pred: Pred


@dataclass(frozen=True)
class Loop:
    """Unbounded iteration of the body (no exit test); outline-level only."""

    body: "Command"


Command = Union[Skip, Assign, Seq, Choice, If, While, Par, Atomic, Test, Loop]


def command_vars(c: Command) -> frozenset[str]:
    match c:
        case Skip() | Atomic(_):
            return frozenset()
        case Assign(var, e):
            return frozenset({var}) | expr_vars(e)
        case Seq(a, b) | Choice(a, b) | Par(a, b):
            return command_vars(a) | command_vars(b)
        case If(p, a, b):
            return pred_vars(p) | command_vars(a) | command_vars(b)
        case While(p, a):
            return pred_vars(p) | command_vars(a)
        case Test(p):
            return pred_vars(p)
        case Loop(a):
            return command_vars(a)
    raise TypeError(f"not a command: {c!r}")


# --------------------------------------------------------------------------
# Test / end languages, mumbling, stuttering

def test_lang(space: StateSpace, p: Pred, bound: int) -> Lang:
    """Identity steps on the states satisfying p (a sub-identity language)."""
    return Lang(frozenset(((s, s),) for s in pred_states(space, p)), bound)


def end_lang(space: StateSpace, p: Pred, bound: int) -> Lang:
    """Every nonempty word whose final post-state satisfies p.

    The empty word has no final state and is excluded.  Enumerates the
    full word universe, so feasible only for small state counts.
    """
    good = pred_states(space, p)
    letters = [(a, b) for a in space.all_states() for b in space.all_states()]
    ending = [(a, b) for (a, b) in letters if b in good]
    words: set[Word] = set()
    for length in range(1, bound + 1):
        for prefix in product(letters, repeat=length - 1):
            for last in ending:
                words.add(prefix + (last,))
    return Lang(frozenset(words), bound)


def mumble_word(w: Word) -> frozenset[Word]:
    """Closure of a word under contracting chained adjacent letters.

    If u (a,b)(b,c) v is in the set then so is u (a,c) v; the word itself
    is always included.
    """
    seen: set[Word] = {tuple(w)}
    frontier = [tuple(w)]
    while frontier:
        cur = frontier.pop()
        for k in range(len(cur) - 1):
            if cur[k][1] == cur[k + 1][0]:
                contracted = cur[:k] + ((cur[k][0], cur[k + 1][1]),) + cur[k + 2 :]
                if contracted not in seen:
                    seen.add(contracted)
                    frontier.append(contracted)
    return frozenset(seen)


def mumble_close(x: Lang) -> Lang:
    """Union of the mumble closures of the members; never grows lengths."""
    out: set[Word] = set()
    for w in x.words:
        out |= mumble_word(w)
    return Lang(frozenset(out), x.bound)


def stutter_eq(space: StateSpace, x: Lang, y: Lang, bound: int) -> bool:
    """Equality up to stuttering: pad both sides with identity steps and
    compare the consistent parts."""
    ident = id_relation(space.num_states)
    return eq_consistent(
        rely_shuffle(ident, x, bound), rely_shuffle(ident, y, bound)
    )


# --------------------------------------------------------------------------
# Assignment and denotation

def write_lang(space: StateSpace, var: str, value: int, bound: int) -> Lang:
    """The atomic update var <- value, applied in any state."""
    return Lang(
        frozenset(((s, space.updated(s, var, value)),) for s in space.all_states()),
        bound,
    )


def assign_lang(space: StateSpace, var: str, e: Expr, bound: int) -> Lang:
    """x := e as (evaluate in some state) then (atomically write the value).

    Union over all values v of test{s : e(s) = v} . (x <- v), mumble
    closed, so the read and the write may also appear fused into a single
    step when nothing happens in between.
    """
    fibers: dict[int, list[int]] = {}
    for s in space.all_states():
        fibers.setdefault(eval_expr(space, s, e), []).append(s)
    words: set[Word] = set()
    for v, states in fibers.items():
        for s in states:
            read = (s, s)
            for t in space.all_states():
                words.add((read, (t, space.updated(t, var, v))))
    return mumble_close(Lang(frozenset(words), bound))


def denote(space: StateSpace, c: Command, bound: int) -> Lang:
    """Compositional denotation, mumble closed at every node."""
    match c:
        case Skip():
            return one(bound)
        case Assign(var, e):
            return assign_lang(space, var, e, bound)
        case Seq(a, b):
            return mumble_close(
                concat(denote(space, a, bound), denote(space, b, bound), bound)
            )
        case Choice(a, b):
            return union(denote(space, a, bound), denote(space, b, bound))
        case If(p, a, b):
            then_part = concat(test_lang(space, p, bound), denote(space, a, bound), bound)
            else_part = concat(
                test_lang(space, Not(p), bound), denote(space, b, bound), bound
            )
            return mumble_close(union(then_part, else_part))
        case While(p, a):
            body = mumble_close(
                concat(test_lang(space, p, bound), denote(space, a, bound), bound)
            )
            looped = mumble_close(star(body, bound))
            return mumble_close(
                concat(looped, test_lang(space, Not(p), bound), bound)
            )
        case Par(a, b):
            return mumble_close(
                shuffle(denote(space, a, bound), denote(space, b, bound), bound)
            )
        case Atomic(rel):
            return Lang(frozenset(((a, b),) for a, b in rel), bound)
        case Test(p):
            return test_lang(space, p, bound)
        case Loop(a):
            return mumble_close(star(denote(space, a, bound), bound))
    raise TypeError(f"not a command: {c!r}")


# --------------------------------------------------------------------------
# Interference vocabulary

def interference_relation(
    space: StateSpace,
    unchanged_vars: tuple[str, ...] = (),
    increasing_vars: tuple[str, ...] = (),
    decreasing_vars: tuple[str, ...] = (),
) -> Relation:
    """Pairs where the listed variables are fixed / monotone; others free.

    Built by varying only the unconstrained coordinates, so the cost is
    the size of the result rather than num_states squared.
    """
    n = space.domain_size
    pairs: set[tuple[int, int]] = set()
    for s in space.all_states():
        choice_sets = []
        for var in space.variables:
            v = space.value(s, var)
            if var in unchanged_vars or (var in increasing_vars and var in decreasing_vars):
                choice_sets.append((v,))
            elif var in increasing_vars:
                choice_sets.append(tuple(range(v, n)))
            elif var in decreasing_vars:
                choice_sets.append(tuple(range(0, v + 1)))
            else:
                choice_sets.append(tuple(range(n)))
        for combo in product(*choice_sets):
            pairs.add((s, space.state_id(combo)))
    return frozenset(pairs)


def unchanged(space: StateSpace, variables) -> Relation:
    """Steps that fix every listed variable; an empty list allows anything."""
    return interference_relation(space, unchanged_vars=tuple(variables))


def preserves(space: StateSpace, p: Pred) -> Relation:
    """Steps that cannot falsify p (vacuous from states violating p)."""
    good = pred_states(space, p)
    return frozenset(
        (a, b)
        for a in space.all_states()
        for b in space.all_states()
        if a not in good or b in good
    )


def increasing(space: StateSpace, var: str) -> Relation:
    """Steps under which var never decreases (order on 0..N-1)."""
    return interference_relation(space, increasing_vars=(var,))


def decreasing(space: StateSpace, var: str) -> Relation:
    """Steps under which var never increases."""
    return interference_relation(space, decreasing_vars=(var,))
