"""Proof-outline engine.

A quintuple here keeps the rely and guarantee as state relations and the
pre/postcondition as predicates tagged ``test`` or ``end``; the program
is a command AST.  Outline nodes apply the rely-guarantee inference
rules; leaves are discharged by bounded brute force.

Brute force does not materialise languages.  The direct encoding
p . (r || x) <= q (up to consistency) quantifies over consistent words
only, and those are exactly the runs of a small-step execution of the
command interleaved with rely steps: a consistent word of the shuffle
consumes program letters whose pre-state is the current state.  Mumbled
words correspond to runs of adjacent program steps fused into one
letter, so the search charges one letter per burst of program steps.
Rely self-loops are dropped (stuttering never changes a reachable end
state or enables a new step).  The search is a multi-source BFS over
(continuation, state) configurations; if it saturates within the budget
the verdict covers every bound, otherwise the outcome is flagged
bound-insufficient.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from .interference import (
    Relation,
    StateSpace,
    compose,
    id_relation,
    is_transitive,
)
from .lang import Lang, Letter, Word, format_word
from .programs import (
    And,
    Assign,
    Atomic,
    BinExpr,
    BoolLit,
    Choice,
    Cmp,
    Command,
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
    end_lang,
    eval_expr,
    expr_vars,
    interference_relation,
    pred_states,
    preserves,
    subst,
    test_lang,
    unchanged,
)

# --------------------------------------------------------------------------
# Specifications and quintuples

TEST = "test"
END = "end"


@dataclass(frozen=True)
class StateSpec:
    """A pre/postcondition: a predicate read as a test or an end language."""

    kind: str
    pred: Pred

    def __post_init__(self) -> None:
        if self.kind not in (TEST, END):
            raise ValueError(f"kind must be 'test' or 'end', got {self.kind!r}")

    def states(self, space: StateSpace) -> frozenset[int]:
        return pred_states(space, self.pred)

    def lang(self, space: StateSpace, bound: int) -> Lang:
        if self.kind == TEST:
            return test_lang(space, self.pred, bound)
        return end_lang(space, self.pred, bound)


def end_spec(pred: Pred) -> StateSpec:
    return StateSpec(END, pred)


def test_spec(pred: Pred) -> StateSpec:
    return StateSpec(TEST, pred)


@dataclass(frozen=True)
class Quintuple:
    """rely, guar |- {pre} prog {post}; None stands for the full relation."""

    rely: Relation | None
    guar: Relation | None
    pre: StateSpec
    post: StateSpec
    prog: Command


@dataclass
class ProofNode:
    rule: str
    conclusion: Quintuple
    premises: list["ProofNode"] = field(default_factory=list)


class OutlineError(ValueError):
    """Malformed outline: wrong rule arity or program shape."""


# --------------------------------------------------------------------------
# Relation and spec helpers tolerant of the None-as-top convention

def rel_leq(space: StateSpace, a: Relation | None, b: Relation | None) -> bool:
    if b is None:
        return True
    if a is None:
        return len(b) == space.num_states ** 2
    return a <= b


def rel_eq(space: StateSpace, a: Relation | None, b: Relation | None) -> bool:
    return rel_leq(space, a, b) and rel_leq(space, b, a)


def rel_meet(a: Relation | None, b: Relation | None) -> Relation | None:
    if a is None:
        return b
    if b is None:
        return a
    return a & b


def rel_join(a: Relation | None, b: Relation | None) -> Relation | None:
    if a is None or b is None:
        return None
    return a | b


def spec_leq(space: StateSpace, a: StateSpec, b: StateSpec) -> bool:
    """Language inclusion between tagged predicates, decided on states.

    test(P) sits below both test(Q) and end(Q) iff P <= Q; an end
    language fits inside a test language only when it is empty, because
    its multi-letter words have nowhere to go.
    """
    sa, sb = a.states(space), b.states(space)
    if a.kind == END and b.kind == TEST:
        return not sa
    return sa <= sb


def spec_eq(space: StateSpace, a: StateSpec, b: StateSpec) -> bool:
    return spec_leq(space, a, b) and spec_leq(space, b, a)


def spec_meet(a: StateSpec, b: StateSpec) -> StateSpec:
    kind = TEST if TEST in (a.kind, b.kind) else END
    return StateSpec(kind, And(a.pred, b.pred))


def stable_under(space: StateSpace, spec: StateSpec, rely: Relation | None) -> bool:
    """The side condition  pre . r <= pre  decided relationally.

    For an end spec the rely must preserve the predicate's states; for a
    test spec any rely step from a satisfying state (self-loops included)
    creates a two-letter word outside the test language.  Exact for
    bounds >= 2.
    """
    good = spec.states(space)
    if spec.kind == END:
        if rely is None:
            return good == frozenset(space.all_states()) or not good
        return all(b in good for (a, b) in rely if a in good)
    if rely is None:
        return not good
    return all(a not in good for (a, _) in rely)


# --------------------------------------------------------------------------
# Small-step execution of commands

@dataclass(frozen=True)
class PendingWrite:
    """Residue of an assignment whose value has been read but not written."""

    var: str
    value: int


Cont = object  # Command | PendingWrite | None (None = finished)


def can_finish(c: Cont) -> bool:
    """Whether the empty word belongs to the continuation's denotation."""
    match c:
        case None | Skip() | Loop(_):
            return True
        case Seq(a, b) | Par(a, b):
            return can_finish(a) and can_finish(b)
        case Choice(a, b):
            return can_finish(a) or can_finish(b)
        case _:
            return False


def _seq(a: Cont, b: Cont) -> Cont:
    if a is None:
        return b
    if b is None:
        return a
    return Seq(a, b)


def _par(a: Cont, b: Cont) -> Cont:
    if a is None:
        return b
    if b is None:
        return a
    return Par(a, b)


def micro_steps(space: StateSpace, c: Cont, sid: int) -> Iterator[tuple[int, Cont]]:
    """One program letter (sid, next_sid) from the current state.

    Yields (next_sid, next_continuation); None means the command is done.
    Only letters whose pre-state is the current state are produced, which
    is exactly what survives the consistency filter.
    """
    match c:
        case None | Skip():
            return
        case PendingWrite(var, value):
            yield space.updated(sid, var, value), None
        case Assign(var, e):
            yield sid, PendingWrite(var, eval_expr(space, sid, e))
        case Test(p):
            if sid in pred_states(space, p):
                yield sid, None
        case Atomic(rel):
            for a, b in rel:
                if a == sid:
                    yield b, None
        case Seq(a, b):
            for nxt, ca in micro_steps(space, a, sid):
                yield nxt, _seq(ca, b)
            if can_finish(a):
                yield from micro_steps(space, b, sid)
        case Choice(a, b):
            yield from micro_steps(space, a, sid)
            yield from micro_steps(space, b, sid)
        case If(p, a, b):
            yield sid, (a if sid in pred_states(space, p) else b)
        case While(p, body):
            if sid in pred_states(space, p):
                yield sid, _seq(body, c)
            else:
                yield sid, None
        case Loop(body):
            for nxt, cb in micro_steps(space, body, sid):
                yield nxt, _seq(cb, c)
        case Par(a, b):
            for nxt, ca in micro_steps(space, a, sid):
                yield nxt, _par(ca, b)
            for nxt, cb in micro_steps(space, b, sid):
                yield nxt, _par(a, cb)
        case _:
            raise TypeError(f"not a continuation: {c!r}")


def command_step_letters(space: StateSpace, c: Command) -> frozenset[Letter]:
    """Every letter a small-step execution of c could emit, from any state.

    This covers unreachable read/write combinations as well, matching the
    letters occurring in the full denotation; used for the literal
    guarantee inclusion without materialising words.
    """
    letters: set[Letter] = set()
    seen: set[Cont] = set()
    stack: list[Cont] = [_normalize(c)]
    while stack:
        cont = stack.pop()
        if cont is None or cont in seen:
            continue
        seen.add(cont)
        for sid in space.all_states():
            for nxt, cont2 in micro_steps(space, cont, sid):
                letters.add((sid, nxt))
                if cont2 is not None and cont2 not in seen:
                    stack.append(cont2)
    return frozenset(letters)


def _normalize(c: Command) -> Cont:
    return None if isinstance(c, Skip) else c


# --------------------------------------------------------------------------
# Brute-force discharge

@dataclass
class BruteOutcome:
    passed: bool
    saturated: bool
    witness: Word | None = None
    reason: str = ""
    end_states: frozenset[int] = frozenset()

    @property
    def bound_insufficient(self) -> bool:
        return self.passed and not self.saturated


def _rely_successors(space: StateSpace, rely: Relation | None) -> dict[int, list[int]]:
    succ: dict[int, list[int]] = {}
    if rely is None:
        everything = list(space.all_states())
        for s in everything:
            succ[s] = [t for t in everything if t != s]
        return succ
    for a, b in rely:
        if a != b:
            succ.setdefault(a, []).append(b)
    return succ


class _Explorer:
    """Interned small-step graph of one command over one state space.

    Continuations are assigned dense integer ids so configurations hash
    as int pairs; micro-step fans and burst closures (everything
    reachable by chained program steps, fused into one trace letter) are
    cached per configuration.
    """

    def __init__(self, space: StateSpace, prog: Command):
        self.space = space
        self._ids: dict[Cont, int] = {None: 0}
        self._conts: list[Cont] = [None]
        self.finishes: list[bool] = [True]
        self.start = self.intern(_normalize(prog))
        self._steps: dict[tuple[int, int], tuple[tuple[int, int], ...]] = {}
        self._bursts: dict[tuple[int, int], tuple[tuple[tuple[int, int], ...], tuple[Letter, ...]]] = {}

    def intern(self, cont: Cont) -> int:
        cid = self._ids.get(cont)
        if cid is None:
            cid = len(self._conts)
            self._ids[cont] = cid
            self._conts.append(cont)
            self.finishes.append(can_finish(cont))
        return cid

    def steps(self, cid: int, sid: int) -> tuple[tuple[int, int], ...]:
        """(next_state, next_continuation_id) fan of single program steps."""
        key = (cid, sid)
        out = self._steps.get(key)
        if out is None:
            out = tuple(
                (nxt, self.intern(cont2))
                for nxt, cont2 in micro_steps(self.space, self._conts[cid], sid)
            )
            self._steps[key] = out
        return out

    def burst(self, cid: int, sid: int) -> tuple[tuple[tuple[int, int], ...], tuple[Letter, ...]]:
        """Configurations reachable by one or more chained program steps,
        plus every single-step letter emitted along the way."""
        key = (cid, sid)
        out = self._bursts.get(key)
        if out is None:
            configs: set[tuple[int, int]] = set()
            letters: set[Letter] = set()
            seen: set[tuple[int, int]] = {key}
            stack = [key]
            while stack:
                c0, s0 = stack.pop()
                for s1, c1 in self.steps(c0, s0):
                    letters.add((s0, s1))
                    cfg = (c1, s1)
                    configs.add(cfg)
                    if cfg not in seen:
                        seen.add(cfg)
                        stack.append(cfg)
            out = (tuple(configs), tuple(letters))
            self._bursts[key] = out
        return out


def check_bruteforce(space: StateSpace, q: Quintuple, bound: int) -> BruteOutcome:
    """Decide a quintuple by pruned consistent-trace search.

    The budget is bound - 1 letters: the shortest precondition witness is
    a single letter ending in a satisfying state.  Each explored edge is
    a non-stuttering rely step or a burst of program steps fused into one
    letter; burst-internal letters are checked against the guarantee
    individually (fused letters are their compositions, covered whenever
    the guarantee is transitive — every vocabulary relation is).

    A guarantee witness is a consistent run prefix ending in the
    offending step, not necessarily a completed program word.
    """
    if bound < 2:
        raise ValueError("brute-force discharge needs bound >= 2")
    pre_states = q.pre.states(space)
    post_states = q.post.states(space)
    test_post = q.post.kind == TEST
    budget = bound - 1
    rely_succ = _rely_successors(space, q.rely)
    guar = q.guar

    ex = _Explorer(space, q.prog)
    visited: dict[tuple[int, int], int] = {}
    parent: dict[tuple[int, int], tuple[tuple[int, int] | None, Letter | None]] = {}
    frontier: list[tuple[int, int]] = []
    for s in sorted(pre_states):
        cfg = (ex.start, s)
        if cfg not in visited:
            visited[cfg] = 0
            parent[cfg] = (None, None)
            frontier.append(cfg)

    end_states: set[int] = set()

    def trace_to(cfg: tuple[int, int], extra: tuple[Letter, ...] = ()) -> Word:
        letters: list[Letter] = []
        cur = cfg
        while True:
            prev, letter = parent[cur]
            if prev is None:
                origin = cur[1]
                break
            letters.append(letter)  # type: ignore[arg-type]
            cur = prev
        letters.reverse()
        return ((origin, origin), *letters, *extra)

    def done_violation(cfg: tuple[int, int], depth: int) -> BruteOutcome | None:
        cid, sid = cfg
        if not ex.finishes[cid]:
            return None
        end_states.add(sid)
        if test_post:
            if depth > 0:
                return BruteOutcome(
                    False, True, trace_to(cfg), "word longer than any test", frozenset(end_states)
                )
            if q.pre.kind == END and space.num_states > 1 and pre_states:
                other = next(t for t in space.all_states() if t != sid)
                return BruteOutcome(
                    False,
                    True,
                    ((other, sid),),
                    "end precondition contributes non-identity letters",
                    frozenset(end_states),
                )
            if sid not in post_states:
                return BruteOutcome(
                    False, True, trace_to(cfg), "final state violates postcondition",
                    frozenset(end_states),
                )
            return None
        if sid not in post_states:
            return BruteOutcome(
                False, True, trace_to(cfg), "final state violates postcondition",
                frozenset(end_states),
            )
        return None

    depth = 0
    saturated = True
    while frontier:
        for cfg in frontier:
            bad = done_violation(cfg, depth)
            if bad is not None:
                return bad
        if depth >= budget:
            saturated = _probe_saturation(ex, frontier, visited, rely_succ, guar)
            break
        nxt_frontier: list[tuple[int, int]] = []
        for cfg in frontier:
            cid, sid = cfg
            for t in rely_succ.get(sid, ()):
                cfg2 = (cid, t)
                if cfg2 not in visited:
                    visited[cfg2] = depth + 1
                    parent[cfg2] = (cfg, (sid, t))
                    nxt_frontier.append(cfg2)
            configs, letters = ex.burst(cid, sid)
            if guar is not None:
                for letter in letters:
                    if letter not in guar:
                        prefix: tuple[Letter, ...]
                        if letter[0] == sid:
                            prefix = (letter,)
                        else:
                            prefix = ((sid, letter[0]), letter)
                        return BruteOutcome(
                            False,
                            saturated,
                            trace_to(cfg, prefix),
                            "program step violates guarantee",
                            frozenset(end_states),
                        )
            for cfg2 in configs:
                if cfg2 not in visited:
                    visited[cfg2] = depth + 1
                    parent[cfg2] = (cfg, (sid, cfg2[1]))
                    nxt_frontier.append(cfg2)
        frontier = nxt_frontier
        depth += 1

    return BruteOutcome(True, saturated, None, "", frozenset(end_states))


def _probe_saturation(
    ex: _Explorer,
    frontier: list[tuple[int, int]],
    visited: dict[tuple[int, int], int],
    rely_succ: dict[int, list[int]],
    guar: Relation | None,
) -> bool:
    """True when the cut-off frontier can produce nothing new.

    Everything below the frontier was fully expanded, so the search is
    saturated iff each frontier configuration's successors are already
    visited and its program letters already satisfy the guarantee; then
    longer traces only revisit known configurations and the bounded
    verdict extends to every bound.
    """
    for cid, sid in frontier:
        for t in rely_succ.get(sid, ()):
            if (cid, t) not in visited:
                return False
        configs, letters = ex.burst(cid, sid)
        if guar is not None and any(letter not in guar for letter in letters):
            return False
        if any(cfg not in visited for cfg in configs):
            return False
    return True


def reachable_end_states(
    space: StateSpace,
    rely: Relation | None,
    pre_states: frozenset[int],
    prog: Command,
    bound: int,
) -> tuple[frozenset[int], bool]:
    """End states of all consistent rely-interleaved runs, plus saturation.

    The strongest bounded end-postcondition: a quintuple with these pre
    states passes the brute-force check iff its post covers this set.
    """
    rely_succ = _rely_successors(space, rely)
    ex = _Explorer(space, prog)
    visited: dict[tuple[int, int], int] = {(ex.start, s): 0 for s in pre_states}
    frontier = list(visited)
    ends: set[int] = set()
    budget = bound - 1
    depth = 0
    saturated = True
    while frontier:
        for cid, sid in frontier:
            if ex.finishes[cid]:
                ends.add(sid)
        if depth >= budget:
            saturated = _probe_saturation(ex, frontier, visited, rely_succ, None)
            break
        nxt: list[tuple[int, int]] = []
        for cid, sid in frontier:
            for t in rely_succ.get(sid, ()):
                cfg = (cid, t)
                if cfg not in visited:
                    visited[cfg] = depth + 1
                    nxt.append(cfg)
            configs, _letters = ex.burst(cid, sid)
            for cfg in configs:
                if cfg not in visited:
                    visited[cfg] = depth + 1
                    nxt.append(cfg)
        frontier = nxt
        depth += 1
    return frozenset(ends), saturated


def check_guarantee_letters(
    space: StateSpace, prog: Command, guar: Relation | None
) -> Letter | None:
    """Literal guarantee check over every emittable step, reachable or not.

    Returns an offending letter, or None when the guarantee holds.  Exact
    for transitive guarantees; otherwise the letters are closed under
    chained composition first, which can only over-reject.
    """
    if guar is None:
        return None
    letters = command_step_letters(space, prog)
    if not is_transitive(guar):
        letters = _chain_closure(letters)
    for letter in sorted(letters):
        if letter not in guar:
            return letter
    return None


def _chain_closure(letters: frozenset[Letter]) -> frozenset[Letter]:
    out = set(letters)
    while True:
        extra = compose(frozenset(out), frozenset(out)) - out
        if not extra:
            return frozenset(out)
        out |= extra


# --------------------------------------------------------------------------
# Rule applications

@dataclass
class SideCondition:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.detail:
            d["detail"] = self.detail
        return d


def _arity(node: ProofNode, n: int) -> None:
    if len(node.premises) != n:
        raise OutlineError(f"{node.rule} rule takes {n} premises, got {len(node.premises)}")


def apply_skip(space: StateSpace, node: ProofNode, bound: int) -> list[SideCondition]:
    _arity(node, 0)
    c = node.conclusion
    if not isinstance(c.prog, Skip):
        raise OutlineError("skip rule applies to the skip program")
    return [
        SideCondition("post_equals_pre", spec_eq(space, c.pre, c.post)),
        SideCondition("pre_stable_under_rely", stable_under(space, c.pre, c.rely)),
    ]


def apply_weakening(space: StateSpace, node: ProofNode, bound: int) -> list[SideCondition]:
    _arity(node, 1)
    c, p = node.conclusion, node.premises[0].conclusion
    if c.prog != p.prog:
        raise OutlineError("weakening cannot change the program")
    return [
        SideCondition("rely_strengthens", rel_leq(space, c.rely, p.rely)),
        SideCondition("guarantee_weakens", rel_leq(space, p.guar, c.guar)),
        SideCondition("pre_strengthens", spec_leq(space, c.pre, p.pre)),
        SideCondition("post_weakens", spec_leq(space, p.post, c.post)),
    ]


def apply_sequential(space: StateSpace, node: ProofNode, bound: int) -> list[SideCondition]:
    _arity(node, 2)
    c = node.conclusion
    p1, p2 = (n.conclusion for n in node.premises)
    if not isinstance(c.prog, Seq) or c.prog.first != p1.prog or c.prog.second != p2.prog:
        raise OutlineError("sequential rule needs premises for both halves of a Seq program")
    return [
        SideCondition(
            "same_rely",
            rel_eq(space, c.rely, p1.rely) and rel_eq(space, c.rely, p2.rely),
        ),
        SideCondition(
            "same_guarantee",
            rel_eq(space, c.guar, p1.guar) and rel_eq(space, c.guar, p2.guar),
        ),
        SideCondition("pre_matches_first", spec_eq(space, c.pre, p1.pre)),
        SideCondition("midcondition_agrees", spec_eq(space, p1.post, p2.pre)),
        SideCondition("post_matches_second", spec_eq(space, c.post, p2.post)),
    ]


def apply_parallel(space: StateSpace, node: ProofNode, bound: int) -> list[SideCondition]:
    _arity(node, 2)
    c = node.conclusion
    p1, p2 = (n.conclusion for n in node.premises)
    if not isinstance(c.prog, Par) or c.prog.left != p1.prog or c.prog.right != p2.prog:
        raise OutlineError("parallel rule needs premises for both branches of a Par program")
    return [
        SideCondition("left_guarantee_below_right_rely", rel_leq(space, p1.guar, p2.rely)),
        SideCondition("right_guarantee_below_left_rely", rel_leq(space, p2.guar, p1.rely)),
        SideCondition("rely_is_meet", rel_eq(space, c.rely, rel_meet(p1.rely, p2.rely))),
        SideCondition("guarantee_is_join", rel_eq(space, c.guar, rel_join(p1.guar, p2.guar))),
        SideCondition("pre_is_meet", spec_eq(space, c.pre, spec_meet(p1.pre, p2.pre))),
        SideCondition("post_is_meet", spec_eq(space, c.post, spec_meet(p1.post, p2.post))),
    ]


def apply_choice(space: StateSpace, node: ProofNode, bound: int) -> list[SideCondition]:
    _arity(node, 2)
    c = node.conclusion
    p1, p2 = (n.conclusion for n in node.premises)
    if not isinstance(c.prog, Choice) or c.prog.left != p1.prog or c.prog.right != p2.prog:
        raise OutlineError("choice rule needs premises for both branches of a Choice program")

    def matches(p: Quintuple) -> bool:
        return (
            rel_eq(space, c.rely, p.rely)
            and rel_eq(space, c.guar, p.guar)
            and spec_eq(space, c.pre, p.pre)
            and spec_eq(space, c.post, p.post)
        )

    return [
        SideCondition("left_premise_matches", matches(p1)),
        SideCondition("right_premise_matches", matches(p2)),
    ]


def apply_star(space: StateSpace, node: ProofNode, bound: int) -> list[SideCondition]:
    _arity(node, 1)
    c, p = node.conclusion, node.premises[0].conclusion
    if not isinstance(c.prog, Loop) or c.prog.body != p.prog:
        raise OutlineError("star rule applies to a Loop program whose body matches the premise")
    invariant = (
        spec_eq(space, c.pre, c.post)
        and spec_eq(space, c.pre, p.pre)
        and spec_eq(space, p.pre, p.post)
    )
    return [
        SideCondition("invariant_shared", invariant),
        SideCondition("same_rely", rel_eq(space, c.rely, p.rely)),
        SideCondition("same_guarantee", rel_eq(space, c.guar, p.guar)),
        SideCondition("pre_stable_under_rely", stable_under(space, c.pre, c.rely)),
    ]


def apply_assign(space: StateSpace, node: ProofNode, bound: int) -> list[SideCondition]:
    """Assignment axiom:  {end(P[x:=e])} x := e {end(P)}   under the rely
    that fixes the variables of e and preserves both conditions, with the
    guarantee that every other variable stays unchanged."""
    _arity(node, 0)
    c = node.conclusion
    if not isinstance(c.prog, Assign):
        raise OutlineError("assignment axiom applies to an Assign program")
    var, e = c.prog.var, c.prog.expr
    sides = [SideCondition("specs_are_end", c.pre.kind == END and c.post.kind == END)]
    pre_expected = subst(c.post.pred, var, e)
    sides.append(
        SideCondition(
            "pre_is_substituted_post",
            pred_states(space, c.pre.pred) == pred_states(space, pre_expected),
        )
    )
    axiom_rely = (
        unchanged(space, sorted(expr_vars(e)))
        & preserves(space, c.post.pred)
        & preserves(space, pre_expected)
    )
    sides.append(SideCondition("rely_within_axiom", rel_leq(space, c.rely, axiom_rely)))
    others = tuple(v for v in space.variables if v != var)
    sides.append(
        SideCondition(
            "guarantee_covers_frame", rel_leq(space, unchanged(space, others), c.guar)
        )
    )
    return sides


RULES: dict[str, Callable[[StateSpace, ProofNode, int], list[SideCondition]]] = {
    "skip": apply_skip,
    "weakening": apply_weakening,
    "sequential": apply_sequential,
    "parallel": apply_parallel,
    "choice": apply_choice,
    "star": apply_star,
    "assign": apply_assign,
}


# --------------------------------------------------------------------------
# Outline checking

@dataclass
class NodeReport:
    rule: str
    passed: bool
    sides: list[SideCondition] = field(default_factory=list)
    brute: BruteOutcome | None = None
    children: list["NodeReport"] = field(default_factory=list)
    error: str = ""

    @property
    def bound_insufficient(self) -> bool:
        own = self.brute.bound_insufficient if self.brute else False
        return own or any(ch.bound_insufficient for ch in self.children)

    def to_dict(self) -> dict:
        d: dict = {
            "rule": self.rule,
            "verdict": "pass" if self.passed else "fail",
            "side_conditions": [s.to_dict() for s in self.sides],
        }
        if self.error:
            d["error"] = self.error
        if self.brute is not None:
            b: dict = {
                "verdict": "pass" if self.brute.passed else "fail",
                "saturated": self.brute.saturated,
            }
            if self.brute.witness is not None:
                b["witness"] = format_word(self.brute.witness)
            if self.brute.reason:
                b["reason"] = self.brute.reason
            d["brute_force"] = b
        if self.children:
            d["premises"] = [ch.to_dict() for ch in self.children]
        return d

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        mark = "ok  " if self.passed else "FAIL"
        lines = [f"{pad}[{mark}] {self.rule}"]
        if self.error:
            lines.append(f"{pad}      error: {self.error}")
        for s in self.sides:
            smark = "ok" if s.passed else "FAIL"
            lines.append(f"{pad}      side {s.name}: {smark}")
        if self.brute is not None and self.brute.witness is not None:
            lines.append(
                f"{pad}      witness: {format_word(self.brute.witness)} ({self.brute.reason})"
            )
        if self.brute is not None and self.brute.bound_insufficient:
            lines.append(f"{pad}      bound insufficient: search cut off before saturation")
        for ch in self.children:
            lines.append(ch.render(indent + 1))
        return "\n".join(lines)


def check_outline(
    space: StateSpace,
    root: ProofNode,
    bound: int,
    parallel_leaves: bool = False,
) -> NodeReport:
    """Recursively apply rules and discharge brute-force leaves.

    Leaves are independent, so with ``parallel_leaves`` they run on a
    thread pool; results are merged back in outline order either way, so
    reports are deterministic.
    """
    leaves: list[ProofNode] = []

    def collect(node: ProofNode) -> None:
        if node.rule == "brute":
            leaves.append(node)
        for ch in node.premises:
            collect(ch)

    collect(root)
    outcomes: dict[int, BruteOutcome] = {}
    if parallel_leaves and leaves:
        with ThreadPoolExecutor() as pool:
            results = pool.map(
                lambda n: check_bruteforce(space, n.conclusion, bound), leaves
            )
        for node, outcome in zip(leaves, results):
            outcomes[id(node)] = outcome

    def visit(node: ProofNode) -> NodeReport:
        if node.rule == "brute":
            if node.premises:
                return NodeReport(node.rule, False, error="brute-force leaves take no premises")
            outcome = outcomes.get(id(node)) or check_bruteforce(space, node.conclusion, bound)
            return NodeReport(node.rule, outcome.passed, brute=outcome)
        rule = RULES.get(node.rule)
        if rule is None:
            return NodeReport(node.rule, False, error=f"unknown rule {node.rule!r}")
        try:
            sides = rule(space, node, bound)
        except OutlineError as exc:
            return NodeReport(node.rule, False, error=str(exc))
        children = [visit(ch) for ch in node.premises]
        ok = all(s.passed for s in sides) and all(ch.passed for ch in children)
        return NodeReport(node.rule, ok, sides=sides, children=children)

    return visit(root)


def brute_node(
    rely: Relation | None,
    guar: Relation | None,
    pre: StateSpec,
    post: StateSpec,
    prog: Command,
) -> ProofNode:
    return ProofNode("brute", Quintuple(rely, guar, pre, post, prog))


# --------------------------------------------------------------------------
# FINDP, desk scale

@dataclass
class FindpCase:
    pattern: tuple[bool, ...]
    outline: NodeReport
    goal: Quintuple

    @property
    def passed(self) -> bool:
        return self.outline.passed

    @property
    def bound_insufficient(self) -> bool:
        return self.outline.bound_insufficient


@dataclass
class FindpReport:
    cases: list[FindpCase]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def bound_insufficient(self) -> bool:
        return any(c.bound_insufficient for c in self.cases)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "bound_insufficient": self.bound_insufficient,
            "cases": [
                {"pattern": list(c.pattern), "outline": c.outline.to_dict()}
                for c in self.cases
            ],
        }


def _eq(var: str, value: int) -> Pred:
    return Cmp("=", Var(var), Lit(value))


def _ors(preds: Sequence[Pred]) -> Pred:
    if not preds:
        return BoolLit(False)
    out = preds[0]
    for p in preds[1:]:
        out = Or(out, p)
    return out


def _ands(preds: Sequence[Pred]) -> Pred:
    if not preds:
        return BoolLit(True)
    out = preds[0]
    for p in preds[1:]:
        out = And(out, p)
    return out


def findp_program(pattern: Sequence[bool]) -> Command:
    """The two-thread least-index search over a fixed array.

    The array is baked in: testing the element at the current index
    becomes a predicate on the index variable.  The even searcher walks
    ia = 0, 2, ...; the odd searcher walks ib = 1, 3, ...; each stops as
    soon as its own bound or the other thread's find cuts it off, and the
    final step stores f = min(fa, fb).
    """
    n = len(pattern)
    hit_a = _ors([_eq("ia", k) for k in range(0, n, 2) if pattern[k]])
    hit_b = _ors([_eq("ib", k) for k in range(1, n, 2) if pattern[k]])
    branch_a = Seq(
        Assign("ia", Lit(0)),
        While(
            And(Cmp("<", Var("ia"), Var("fa")), Cmp("<", Var("ia"), Var("fb"))),
            If(hit_a, Assign("fa", Var("ia")), Assign("ia", BinExpr("+", Var("ia"), Lit(2)))),
        ),
    )
    branch_b = Seq(
        Assign("ib", Lit(1)),
        While(
            And(Cmp("<", Var("ib"), Var("fa")), Cmp("<", Var("ib"), Var("fb"))),
            If(hit_b, Assign("fb", Var("ib")), Assign("ib", BinExpr("+", Var("ib"), Lit(2)))),
        ),
    )
    take_min = If(
        Cmp("<=", Var("fa"), Var("fb")),
        Assign("f", Var("fa")),
        Assign("f", Var("fb")),
    )
    return Seq(
        Assign("fa", Lit(n)),
        Seq(Assign("fb", Lit(n)), Seq(Par(branch_a, branch_b), take_min)),
    )


def findp_goal_pred(pattern: Sequence[bool]) -> Pred:
    """Either f is the least satisfying index, or f is the array length."""
    n = len(pattern)
    least = next((k for k, hit in enumerate(pattern) if hit), None)
    found = _eq("f", least) if least is not None else BoolLit(False)
    return Or(found, _eq("f", n))


def _branch_posts(pattern: Sequence[bool]) -> tuple[Pred, Pred]:
    """Postconditions for the two searchers, with interference windows.

    Each searcher either reports the least index of its parity or keeps
    the array length; keeping the length is also allowed when the other
    thread's find cut the search off at or below that least index.
    """
    n = len(pattern)
    least_even = next((k for k in range(0, n, 2) if pattern[k]), None)
    least_odd = next((k for k in range(1, n, 2) if pattern[k]), None)

    def post(found_var: str, other_var: str, least: int | None) -> Pred:
        missed = _eq(found_var, n)
        if least is None:
            return missed
        cut_off = Cmp("<=", Var(other_var), Lit(least))
        return Or(_eq(found_var, least), And(missed, cut_off))

    return post("fa", "fb", least_even), post("fb", "fa", least_odd)


def findp_scaled(
    array: Sequence[int],
    sat: Callable[[int], bool],
    bound: int = 12,
    domain_size: int = 5,
) -> FindpCase:
    """Build and check the proof outline for one array instance.

    ``sat`` is the predicate on array values; only its truth pattern on
    the array enters the construction.  The outline is a sequential
    chain: initialise both bounds, run the two searchers under the
    parallel rule with brute-forced leaves (each leaf also validating
    that the branch leaves the other side's variables unchanged and only
    ever decreases its own find), then store the minimum and reach the
    disjunctive goal.  A search cut off by the bound is reported as
    bound-insufficient, never passed silently.
    """
    if len(array) > 3:
        raise ValueError("desk-scale search supports arrays of length <= 3")
    pattern = tuple(bool(sat(v)) for v in array)
    n = len(pattern)
    space = StateSpace(("ia", "ib", "fa", "fb", "f"), domain_size)
    prog = findp_program(pattern)

    seq_outer = prog
    assert isinstance(seq_outer, Seq)
    init_a, seq_inner = seq_outer.first, seq_outer.second
    assert isinstance(seq_inner, Seq)
    init_b, seq_par = seq_inner.first, seq_inner.second
    assert isinstance(seq_par, Seq)
    par_cmd, min_cmd = seq_par.first, seq_par.second
    assert isinstance(par_cmd, Par)

    post_a, post_b = _branch_posts(pattern)
    guar_a = interference_relation(
        space, unchanged_vars=("ib", "fb", "f"), decreasing_vars=("fa",)
    )
    guar_b = interference_relation(
        space, unchanged_vars=("ia", "fa", "f"), decreasing_vars=("fb",)
    )
    init = _ands([_eq("fa", n), _eq("fb", n)])
    ident = id_relation(space.num_states)
    goal_pred = findp_goal_pred(pattern)
    goal = Quintuple(ident, None, end_spec(BoolLit(True)), end_spec(goal_pred), prog)

    leaf_a = brute_node(guar_b, guar_a, end_spec(_eq("fa", n)), end_spec(post_a), par_cmd.left)
    leaf_b = brute_node(guar_a, guar_b, end_spec(_eq("fb", n)), end_spec(post_b), par_cmd.right)
    par_node = ProofNode(
        "parallel",
        Quintuple(
            rel_meet(guar_b, guar_a),
            rel_join(guar_a, guar_b),
            spec_meet(end_spec(_eq("fa", n)), end_spec(_eq("fb", n))),
            spec_meet(end_spec(post_a), end_spec(post_b)),
            par_cmd,
        ),
        [leaf_a, leaf_b],
    )
    par_weakened = ProofNode(
        "weakening",
        Quintuple(ident, None, end_spec(init), end_spec(And(post_a, post_b)), par_cmd),
        [par_node],
    )
    min_leaf = brute_node(
        ident, None, end_spec(And(post_a, post_b)), end_spec(goal_pred), min_cmd
    )
    init_a_leaf = brute_node(ident, None, end_spec(BoolLit(True)), end_spec(_eq("fa", n)), init_a)
    init_b_leaf = brute_node(ident, None, end_spec(_eq("fa", n)), end_spec(init), init_b)
    tail = ProofNode(
        "sequential",
        Quintuple(ident, None, end_spec(init), end_spec(goal_pred), seq_par),
        [par_weakened, min_leaf],
    )
    mid = ProofNode(
        "sequential",
        Quintuple(ident, None, end_spec(_eq("fa", n)), end_spec(goal_pred), seq_inner),
        [init_b_leaf, tail],
    )
    root = ProofNode("sequential", goal, [init_a_leaf, mid])

    outline = check_outline(space, root, bound)
    return FindpCase(pattern, outline, goal)


def findp_suite(length: int = 2, bound: int = 12, domain_size: int = 5) -> FindpReport:
    """Every truth pattern on an array of the given length."""
    cases = []
    for bits in range(2 ** length):
        pattern = [bool(bits >> k & 1) for k in range(length)]
        values = [1 if hit else 0 for hit in pattern]
        cases.append(findp_scaled(values, lambda v: v == 1, bound=bound, domain_size=domain_size))
    return FindpReport(cases)
