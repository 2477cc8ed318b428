"""Seeded randomized law sweeps.

Each suite draws random languages, relations, predicates or programs and
evaluates a fixed battery of algebraic laws, reporting one aggregated
verdict per law with the first counterexample found.  The CLI runs these
with modest trial counts; the acceptance tests crank the counts up.
"""

from __future__ import annotations

import math
import random

from .interference import (
    Relation,
    StateSpace,
    atomic_identities,
    check_con_axioms,
    check_pi_image_kleene,
    check_rely_closure,
    check_rg_axioms,
    consistent,
    consistent_part,
    derived_rely_facts,
    id_relation,
    iter_consistent_words,
    leq_consistent,
    quintuple_holds,
    quintuple_refine_holds,
    rely_lang,
    rely_shuffle,
    transitive_closure,
)
from .lang import (
    Lang,
    Word,
    all_letters,
    concat,
    leq,
    meet,
    one,
    plus,
    residual_left,
    residual_par,
    residual_right,
    restrict,
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
    denote,
    end_lang,
    expr_vars,
    mumble_close,
    pred_states,
    preserves,
    subst,
    test_lang,
    unchanged,
)
from .report import Report
from .verify import (
    ProofNode,
    Quintuple,
    RULES,
    check_bruteforce,
    command_step_letters,
    end_spec,
    reachable_end_states,
    rel_join,
    rel_meet,
)

# --------------------------------------------------------------------------
# Generators

def gen_word(rng: random.Random, n_states: int, max_len: int) -> Word:
    length = rng.randint(0, max_len)
    return tuple(
        (rng.randrange(n_states), rng.randrange(n_states)) for _ in range(length)
    )


def gen_lang(
    rng: random.Random,
    n_states: int,
    bound: int,
    max_words: int = 6,
    allow_empty: bool = True,
) -> Lang:
    low = 0 if allow_empty else 1
    count = rng.randint(low, max_words)
    return Lang(frozenset(gen_word(rng, n_states, bound) for _ in range(count)), bound)


def gen_relation(rng: random.Random, n_states: int, max_pairs: int | None = None) -> Relation:
    pool = all_letters(n_states)
    cap = len(pool) if max_pairs is None else min(max_pairs, len(pool))
    return frozenset(rng.sample(pool, rng.randint(0, cap)))


def gen_expr(rng: random.Random, variables: tuple[str, ...], depth: int = 2) -> Expr:
    if depth == 0 or rng.random() < 0.4:
        if variables and rng.random() < 0.6:
            return Var(rng.choice(variables))
        return Lit(rng.randrange(0, 5))
    op = rng.choice("+-*")
    return BinExpr(op, gen_expr(rng, variables, depth - 1), gen_expr(rng, variables, depth - 1))


def gen_pred(rng: random.Random, variables: tuple[str, ...], depth: int = 2) -> Pred:
    if depth == 0 or rng.random() < 0.35:
        if rng.random() < 0.1:
            return BoolLit(rng.random() < 0.5)
        op = rng.choice(["=", "<", "<="])
        return Cmp(op, gen_expr(rng, variables, 1), gen_expr(rng, variables, 1))
    roll = rng.random()
    if roll < 0.4:
        return And(gen_pred(rng, variables, depth - 1), gen_pred(rng, variables, depth - 1))
    if roll < 0.8:
        return Or(gen_pred(rng, variables, depth - 1), gen_pred(rng, variables, depth - 1))
    return Not(gen_pred(rng, variables, depth - 1))


def gen_command(
    rng: random.Random, space: StateSpace, depth: int = 3, allow_par: bool = True
) -> Command:
    variables = space.variables
    if depth == 0 or rng.random() < 0.35:
        roll = rng.random()
        if roll < 0.15:
            return Skip()
        if roll < 0.55:
            return Assign(rng.choice(variables), gen_expr(rng, variables, 1))
        if roll < 0.8:
            return Test(gen_pred(rng, variables, 1))
        return Atomic(gen_relation(rng, space.num_states, max_pairs=4))
    roll = rng.random()
    sub = lambda: gen_command(rng, space, depth - 1, allow_par)  # noqa: E731
    if roll < 0.35:
        return Seq(sub(), sub())
    if roll < 0.55:
        return Choice(sub(), sub())
    if roll < 0.7:
        return If(gen_pred(rng, variables, 1), sub(), sub())
    if roll < 0.85 and allow_par:
        return Par(sub(), sub())
    return While(
        gen_pred(rng, variables, 1),
        gen_command(rng, space, 0, allow_par),
    )


def states_pred(space: StateSpace, states: frozenset[int]) -> Pred:
    """A predicate whose denotation is exactly the given state set."""
    clauses = []
    for sid in sorted(states):
        values = space.values(sid)
        eqs: Pred = BoolLit(True)
        conj = [Cmp("=", Var(v), Lit(val)) for v, val in zip(space.variables, values)]
        eqs = conj[0]
        for c in conj[1:]:
            eqs = And(eqs, c)
        clauses.append(eqs)
    if not clauses:
        return BoolLit(False)
    out = clauses[0]
    for c in clauses[1:]:
        out = Or(out, c)
    return out


# --------------------------------------------------------------------------
# Aggregation helper

class _Sweep:
    """Accumulates per-law verdicts across randomized trials."""

    def __init__(self) -> None:
        self.results: dict[str, tuple[bool, Word | None, str]] = {}
        self.order: list[str] = []

    def check(self, name: str, ok: bool, witness: Word | None = None, note: str = "") -> None:
        if name not in self.results:
            self.order.append(name)
            self.results[name] = (True, None, "")
        if not ok and self.results[name][0]:
            self.results[name] = (False, witness, note)

    def eq(self, name: str, x: Lang, y: Lang, note: str = "") -> None:
        if x.words == y.words:
            self.check(name, True)
        else:
            extra = (x.words - y.words) or (y.words - x.words)
            self.check(name, False, min(extra), note)

    def le(self, name: str, x: Lang, y: Lang, note: str = "") -> None:
        if leq(x, y):
            self.check(name, True)
        else:
            self.check(name, False, min(x.words - y.words), note)

    def absorb(self, report: Report) -> None:
        for res in report.checks:
            self.check(res.name, res.passed, res.witness, res.note)

    def report(self, trials: int) -> Report:
        rep = Report()
        for name in self.order:
            ok, witness, note = self.results[name]
            detail = f"{trials} trials" if ok else note
            rep.add(name, ok, witness, detail)
        return rep


# --------------------------------------------------------------------------
# Language-algebra sweep

def language_law_suite(
    rng: random.Random, trials: int, n_states: int = 3, bound: int = 4
) -> Report:
    """Dioid, trioid, bounded-Kleene, interchange and truncation laws on
    random languages over alphabets up to n_states^2."""
    sw = _Sweep()
    for _ in range(trials):
        ns = rng.randint(2, n_states)
        L = rng.randint(2, bound)
        x = gen_lang(rng, ns, L)
        y = gen_lang(rng, ns, L)
        z = gen_lang(rng, ns, L)
        _language_laws_once(sw, rng, ns, L, x, y, z)
    return sw.report(trials)


def _language_laws_once(
    sw: _Sweep, rng: random.Random, ns: int, L: int, x: Lang, y: Lang, z: Lang
) -> None:
    zero_l, one_l = zero(L), one(L)

    # join-semilattice with least element, distributive meet
    sw.eq("union_commutative", union(x, y), union(y, x))
    sw.eq("union_associative", union(union(x, y), z), union(x, union(y, z)))
    sw.eq("union_idempotent", union(x, x), x)
    sw.eq("union_unit", union(x, zero_l), x)
    sw.eq("meet_absorption", union(x, meet(x, y)), x)
    sw.eq("meet_distributes", meet(x, union(y, z)), union(meet(x, y), meet(x, z)))

    # sequential monoid with annihilation and distributivity
    sw.eq("concat_associative", concat(concat(x, y, L), z, L), concat(x, concat(y, z, L), L))
    sw.eq("concat_unit_left", concat(one_l, x, L), x)
    sw.eq("concat_unit_right", concat(x, one_l, L), x)
    sw.eq("concat_zero_right", concat(x, zero_l, L), zero_l)
    sw.eq("concat_zero_left", concat(zero_l, x, L), zero_l)
    sw.eq(
        "concat_distributes_left",
        concat(x, union(y, z), L),
        union(concat(x, y, L), concat(x, z, L)),
    )
    sw.eq(
        "concat_distributes_right",
        concat(union(x, y), z, L),
        union(concat(x, z, L), concat(y, z, L)),
    )

    # commutative shuffle monoid sharing the unit and zero
    sw.eq("shuffle_commutative", shuffle(x, y, L), shuffle(y, x, L))
    sw.eq(
        "shuffle_associative",
        shuffle(shuffle(x, y, L), z, L),
        shuffle(x, shuffle(y, z, L), L),
    )
    sw.eq("shuffle_unit", shuffle(x, one_l, L), x)
    sw.eq("shuffle_zero", shuffle(x, zero_l, L), zero_l)
    sw.eq(
        "shuffle_distributes",
        shuffle(x, union(y, z), L),
        union(shuffle(x, y, L), shuffle(x, z, L)),
    )

    # interchange
    w = gen_lang(rng, ns, L)
    sw.le(
        "interchange",
        concat(shuffle(w, x, L), shuffle(y, z, L), L),
        shuffle(concat(w, y, L), concat(x, z, L), L),
    )

    # bounded Kleene star
    sx = star(x, L)
    sw.eq("star_left_unfold", union(one_l, concat(x, sx, L)), sx)
    sw.eq("star_right_unfold", union(one_l, concat(sx, x, L)), sx)
    sw.eq("star_of_zero", star(zero_l, L), one_l)
    sw.eq("plus_vs_star", union(one_l, plus(x, L)), sx)

    # induction, on constructed instances so the antecedent holds
    yy = z
    while True:
        grown = union(yy, concat(x, yy, L))
        if grown.words == yy.words:
            break
        yy = grown
    sw.check("star_induction_left", leq(concat(sx, z, L), yy))
    yy = z
    while True:
        grown = union(yy, concat(yy, x, L))
        if grown.words == yy.words:
            break
        yy = grown
    sw.check("star_induction_right", leq(concat(z, sx, L), yy))

    # generalized while rule: close x under x.t.y, then iterate
    t = gen_lang(rng, ns, L, max_words=3)
    t2 = gen_lang(rng, ns, L, max_words=3)
    xx = x
    while True:
        grown = union(xx, concat(concat(xx, t, L), y, L))
        if grown.words == xx.words:
            break
        xx = grown
    loop = star(concat(t, y, L), L)
    sw.le("generalized_while", concat(concat(xx, loop, L), t2, L), concat(xx, t2, L))

    # word-level shuffle invariants
    u = gen_word(rng, ns, min(L, 3))
    v = gen_word(rng, ns, min(L, 3))
    inter = word_shuffle(u, v)
    sw.check("word_shuffle_lengths", all(len(s) == len(u) + len(v) for s in inter))
    sw.check("word_shuffle_count", len(inter) <= math.comb(len(u) + len(v), len(u)))

    # truncation coherence for the positive operations
    if L > 2:
        Lp = L - 1
        xs, ys = restrict(x, Lp), restrict(y, Lp)
        sw.eq("truncation_concat", restrict(concat(x, y, L), Lp), concat(x, y, Lp))
        sw.eq("truncation_shuffle", restrict(shuffle(x, y, L), Lp), shuffle(x, y, Lp))
        sw.eq("truncation_star", restrict(star(x, L), Lp), star(restrict(x, Lp), Lp))
        sw.eq("truncation_union", restrict(union(x, y), Lp), union(xs, ys))
        sw.eq("truncation_meet", restrict(meet(x, y), Lp), meet(xs, ys))


def residual_law_suite(
    rng: random.Random, trials: int, n_states: int = 2, bound: int = 3
) -> Report:
    """Galois adjunctions for both sequential residuals and the parallel
    residual, checked by enumeration over the bounded universe."""
    sw = _Sweep()
    for _ in range(trials):
        ns = rng.randint(2, n_states)
        L = rng.randint(2, bound)
        x = gen_lang(rng, ns, L, max_words=4)
        y = gen_lang(rng, ns, L, max_words=4)
        z = gen_lang(rng, ns, L, max_words=8)
        top = universe(ns, L)

        rl = residual_left(z, y, L, ns)
        sw.check("galois_left", leq(concat(x, y, L), z) == leq(x, rl))
        sw.le("residual_left_sound", concat(rl, y, L), z)
        sw.eq("residual_left_top", residual_left(top, y, L, ns), top)
        sw.eq("residual_left_unit", residual_left(z, one(L), L, ns), z)

        rr = residual_right(x, z, L, ns)
        sw.check("galois_right", leq(concat(x, y, L), z) == leq(y, rr))
        sw.le("residual_right_sound", concat(x, rr, L), z)
        sw.eq("residual_right_unit", residual_right(one(L), z, L, ns), z)
        sw.eq("residual_right_top", residual_right(x, top, L, ns), top)

        rp = residual_par(x, z, L, ns)
        sw.check("galois_par", leq(shuffle(x, y, L), z) == leq(y, rp))
        sw.le("residual_par_sound", shuffle(x, rp, L), z)
        sw.eq("residual_par_unit", residual_par(one(L), z, L, ns), z)
        sw.eq("residual_par_top", residual_par(x, top, L, ns), top)
    return sw.report(trials)


# --------------------------------------------------------------------------
# Interference sweep

def interference_axiom_suite(
    rng: random.Random, trials: int, n_states: int = 3, bound: int = 4
) -> Report:
    """Rely axioms and derived facts, consistency axioms, the retraction's
    algebra, atomicity identities, closure of the rely class, and the
    shuffle-by-insertion cross-check."""
    sw = _Sweep()
    for _ in range(trials):
        # keep the heavy alphabet/bound combinations rare
        ns = rng.choice([2, 2, 2, 3, 3, min(3, n_states)])
        L = rng.choice([2, 3, 3, min(4, bound)])
        r1 = gen_relation(rng, ns, max_pairs=5)
        r2 = gen_relation(rng, ns, max_pairs=5)
        x = gen_lang(rng, ns, L, max_words=4)
        y = gen_lang(rng, ns, L, max_words=4)
        z = gen_lang(rng, ns, L, max_words=4)

        sw.absorb(check_rg_axioms(r1, r2, x, y, L))
        sw.absorb(derived_rely_facts(r1, L))
        sw.absorb(check_con_axioms(x, y, z, L))
        sw.absorb(check_pi_image_kleene(x, y, z, L))
        sw.absorb(atomic_identities(r1, r2, L))
        sw.absorb(check_rely_closure(r1, r2, L))

        px = consistent_part(x)
        sw.eq("retraction_idempotent", consistent_part(px), px)
        sw.le("retraction_decreasing", px, x)
        sw.check(
            "retraction_monotone",
            leq(px, consistent_part(union(x, y))),
        )

        sw.eq(
            "rely_shuffle_cross_check",
            rely_shuffle(r1, x, L),
            shuffle(rely_lang(r1, L), x, L),
        )
    return sw.report(trials)


def decider_agreement_suite(
    rng: random.Random, trials: int, n_states: int = 2, bound: int = 3
) -> Report:
    """The direct and the residual-encoding quintuple deciders agree."""
    sw = _Sweep()
    for _ in range(trials):
        ns = rng.randint(2, n_states)
        L = rng.randint(2, bound)
        p = gen_lang(rng, ns, L, max_words=3)
        q = gen_lang(rng, ns, L, max_words=6)
        x = gen_lang(rng, ns, L, max_words=3)
        r = gen_relation(rng, ns, max_pairs=3)
        g = gen_relation(rng, ns)
        direct = quintuple_holds(p, r, x, q, g, L)
        refine = quintuple_refine_holds(p, r, x, q, g, L, ns)
        sw.check("decider_agreement", direct == refine, note=f"direct={direct} refine={refine}")
    return sw.report(trials)


# --------------------------------------------------------------------------
# Program-model laws (tests, mumbling, stuttering, end, assignment)

def _law_space(rng: random.Random) -> StateSpace:
    # up to two variables over domains up to four; at most sixteen states
    if rng.random() < 0.5:
        return StateSpace(("x",), rng.randint(2, 4))
    return StateSpace(("x", "y"), rng.randint(2, 4))


def _consistent_members_end(space: StateSpace, states: frozenset[int], length: int):
    """Consistent words of length <= length ending in the given states."""
    n = space.num_states
    for w in iter_consistent_words(n, length):
        if w[-1][1] in states:
            yield w


def program_law_suite(rng: random.Random, trials: int, bound: int = 3) -> Report:
    """Laws for tests, mumbling, stuttering, end languages and absorption.

    At up to four states both sides are materialised; on larger spaces
    the consistent side is enumerated directly (full end languages over
    a 256-letter alphabet are out of reach), which decides the same
    inclusion because only consistent words enter it.
    """
    sw = _Sweep()
    for _ in range(trials):
        space = _law_space(rng)
        n = space.num_states
        L = bound
        p = gen_pred(rng, space.variables)
        q = gen_pred(rng, space.variables)
        rel = gen_relation(rng, n, max_pairs=max(3, n))
        tp = test_lang(space, p, L)
        tq = test_lang(space, q, L)
        tpq = test_lang(space, And(p, q), L)
        seq_tests = mumble_close(concat(tp, tq, L))

        # mumbling shrinks the two-step test chain onto the meet
        sw.check("test_meet_below_chain", leq_consistent(tpq, seq_tests))

        # stuttering gives the converse direction
        ident = id_relation(n)
        lhs = rely_shuffle(ident, seq_tests, L)
        rhs = rely_shuffle(ident, tpq, L)
        sw.check("chain_below_test_meet_stuttered", leq_consistent(lhs, rhs))

        # tests are sub-identities and land in end languages
        good_q = pred_states(space, q)
        sw.check(
            "test_below_end",
            all(w[-1][1] in good_q for w in test_lang(space, q, L).words),
        )

        good_p = pred_states(space, p)
        good_pq = pred_states(space, And(p, q))
        if n <= 4:
            endp = end_lang(space, p, L)
            sw.check(
                "end_then_test",
                leq_consistent(
                    mumble_close(concat(endp, tq, L)), end_lang(space, And(p, q), L)
                ),
            )
        else:
            ok = True
            witness = None
            for u in _consistent_members_end(space, good_p, L - 1):
                s = u[-1][1]
                if s in good_q and s not in good_pq:
                    ok, witness = False, u + ((s, s),)
                    break
            sw.check("end_then_test", ok, witness)

        # absorption of preserved interference into the end language
        preserved = all(b in good_p for (a, b) in rel if a in good_p)
        if preserved:
            if n <= 4:
                endp = end_lang(space, p, L)
                absorbed = mumble_close(concat(endp, rely_lang(rel, L), L))
                sw.check("end_absorbs_rely", leq_consistent(absorbed, endp))
            else:
                reached = set(good_p)
                frontier = set(good_p)
                ok = True
                for _ in range(L - 1):
                    frontier = {b for (a, b) in rel if a in frontier}
                    if not frontier <= good_p:
                        ok = False
                        break
                    reached |= frontier
                sw.check("end_absorbs_rely", ok)
    return sw.report(trials)


def assignment_rule_suite(rng: random.Random, trials: int) -> Report:
    """The assignment axiom under its stated rely and guarantee.

    Post-anchored: {end(subst(P, x, e))} x := e {end(P)} with the rely
    fixing the variables of e and preserving both conditions, and the
    guarantee keeping every other variable unchanged.
    """
    sw = _Sweep()
    for _ in range(trials):
        space = _law_space(rng)
        L = rng.randint(3, 5)
        post = gen_pred(rng, space.variables)
        var = rng.choice(space.variables)
        e = gen_expr(rng, space.variables)
        pre = subst(post, var, e)
        rely = (
            unchanged(space, sorted(expr_vars(e)))
            & preserves(space, post)
            & preserves(space, pre)
        )
        others = tuple(v for v in space.variables if v != var)
        guar = unchanged(space, others)
        quint = Quintuple(rely, guar, end_spec(pre), end_spec(post), Assign(var, e))
        out = check_bruteforce(space, quint, L)
        sw.check("assignment_rule", out.passed, out.witness)

        letters = command_step_letters(space, Assign(var, e))
        sw.check("assignment_frame", all(letter in guar for letter in letters))
    return sw.report(trials)


# --------------------------------------------------------------------------
# Rule-soundness regression: premises true by brute force imply the
# conclusion true by brute force, for every inference rule.

def _guar_for(space: StateSpace, prog: Command) -> Relation:
    base = command_step_letters(space, prog) | id_relation(space.num_states)
    return transitive_closure(base)


def _apply_ok(space: StateSpace, node: ProofNode, bound: int) -> bool:
    sides = RULES[node.rule](space, node, bound)
    return all(s.passed for s in sides)


def rule_soundness_suite(rng: random.Random, trials_per_rule: int, bound: int = 4) -> Report:
    """For every rule: build instances whose premises and side conditions
    pass by brute force, then require the conclusion to pass as well."""
    sw = _Sweep()
    for _ in range(trials_per_rule):
        space = StateSpace(("x", "y"), rng.randint(2, 3))
        n = space.num_states
        L = bound

        # skip
        rel = gen_relation(rng, n, max_pairs=4)
        seed_states = frozenset(rng.sample(range(n), rng.randint(0, n)))
        closed = set(seed_states)
        while True:
            grown = closed | {b for (a, b) in rel if a in closed}
            if grown == closed:
                break
            closed = grown
        spec = end_spec(states_pred(space, frozenset(closed)))
        node = ProofNode("skip", Quintuple(rel, None, spec, spec, Skip()))
        if _apply_ok(space, node, L):
            out = check_bruteforce(space, node.conclusion, L)
            sw.check("skip_sound", out.passed, out.witness)

        # assignment axiom
        post = gen_pred(rng, space.variables)
        var = rng.choice(space.variables)
        e = gen_expr(rng, space.variables)
        pre_pred = subst(post, var, e)
        rely = (
            unchanged(space, sorted(expr_vars(e)))
            & preserves(space, post)
            & preserves(space, pre_pred)
        )
        others = tuple(v for v in space.variables if v != var)
        node = ProofNode(
            "assign",
            Quintuple(
                rely, unchanged(space, others), end_spec(pre_pred), end_spec(post), Assign(var, e)
            ),
        )
        if _apply_ok(space, node, L):
            out = check_bruteforce(space, node.conclusion, L)
            sw.check("assign_sound", out.passed, out.witness)

        # sequential: premises made true by taking reachable ends as posts
        rel = gen_relation(rng, n, max_pairs=3)
        a = gen_command(rng, space, depth=2)
        b = gen_command(rng, space, depth=2)
        guar = _guar_for(space, Seq(a, b))
        pre_states = frozenset(rng.sample(range(n), rng.randint(1, n)))
        mid_states, _ = reachable_end_states(space, rel, pre_states, a, L)
        post_states, _ = reachable_end_states(space, rel, mid_states, b, L)
        pre = end_spec(states_pred(space, pre_states))
        mid = end_spec(states_pred(space, mid_states))
        post = end_spec(states_pred(space, post_states))
        n1 = ProofNode("brute", Quintuple(rel, guar, pre, mid, a))
        n2 = ProofNode("brute", Quintuple(rel, guar, mid, post, b))
        node = ProofNode("sequential", Quintuple(rel, guar, pre, post, Seq(a, b)), [n1, n2])
        if (
            _apply_ok(space, node, L)
            and check_bruteforce(space, n1.conclusion, L).passed
            and check_bruteforce(space, n2.conclusion, L).passed
        ):
            out = check_bruteforce(space, node.conclusion, L)
            sw.check("sequential_sound", out.passed, out.witness)

        # choice
        post_states = frozenset(mid_states | post_states)
        qa, _ = reachable_end_states(space, rel, pre_states, a, L)
        qb, _ = reachable_end_states(space, rel, pre_states, b, L)
        joint = end_spec(states_pred(space, frozenset(qa | qb)))
        n1 = ProofNode("brute", Quintuple(rel, guar, pre, joint, a))
        n2 = ProofNode("brute", Quintuple(rel, guar, pre, joint, b))
        node = ProofNode("choice", Quintuple(rel, guar, pre, joint, Choice(a, b)), [n1, n2])
        if (
            _apply_ok(space, node, L)
            and check_bruteforce(space, n1.conclusion, L).passed
            and check_bruteforce(space, n2.conclusion, L).passed
        ):
            out = check_bruteforce(space, node.conclusion, L)
            sw.check("choice_sound", out.passed, out.witness)

        # parallel: each branch's guarantee is the other's rely
        pa = gen_command(rng, space, depth=1)
        pb = gen_command(rng, space, depth=1)
        ga = _guar_for(space, pa)
        gb = _guar_for(space, pb)
        sa = frozenset(rng.sample(range(n), rng.randint(1, n)))
        sb = frozenset(rng.sample(range(n), rng.randint(1, n)))
        qa, _ = reachable_end_states(space, gb, sa, pa, L)
        qb, _ = reachable_end_states(space, ga, sb, pb, L)
        pna = ProofNode(
            "brute",
            Quintuple(gb, ga, end_spec(states_pred(space, sa)), end_spec(states_pred(space, qa)), pa),
        )
        pnb = ProofNode(
            "brute",
            Quintuple(ga, gb, end_spec(states_pred(space, sb)), end_spec(states_pred(space, qb)), pb),
        )
        conclusion = Quintuple(
            rel_meet(gb, ga),
            rel_join(ga, gb),
            end_spec(And(states_pred(space, sa), states_pred(space, sb))),
            end_spec(And(states_pred(space, qa), states_pred(space, qb))),
            Par(pa, pb),
        )
        node = ProofNode("parallel", conclusion, [pna, pnb])
        if (
            _apply_ok(space, node, L)
            and check_bruteforce(space, pna.conclusion, L).passed
            and check_bruteforce(space, pnb.conclusion, L).passed
        ):
            out = check_bruteforce(space, conclusion, L)
            sw.check("parallel_sound", out.passed, out.witness)

        # star: invariant closed under both the body and the rely
        body = gen_command(rng, space, depth=1)
        rel = gen_relation(rng, n, max_pairs=3)
        guar = _guar_for(space, body)
        inv = set(rng.sample(range(n), rng.randint(1, n)))
        while True:
            reach, _ = reachable_end_states(space, rel, frozenset(inv), body, L)
            grown = inv | set(reach) | {t for (s, t) in rel if s in inv}
            if grown == inv:
                break
            inv = grown
        inv_spec = end_spec(states_pred(space, frozenset(inv)))
        premise = ProofNode("brute", Quintuple(rel, guar, inv_spec, inv_spec, body))
        node = ProofNode(
            "star", Quintuple(rel, guar, inv_spec, inv_spec, Loop(body)), [premise]
        )
        if _apply_ok(space, node, L) and check_bruteforce(space, premise.conclusion, L).passed:
            out = check_bruteforce(space, node.conclusion, L)
            sw.check("star_sound", out.passed, out.witness)

        # weakening: shrink the rely and pre, grow the guarantee and post
        prog = gen_command(rng, space, depth=2)
        rel = gen_relation(rng, n, max_pairs=3)
        guar = _guar_for(space, prog)
        pre_states = frozenset(rng.sample(range(n), rng.randint(1, n)))
        post_states, _ = reachable_end_states(space, rel, pre_states, prog, L)
        premise = ProofNode(
            "brute",
            Quintuple(
                rel,
                guar,
                end_spec(states_pred(space, pre_states)),
                end_spec(states_pred(space, post_states)),
                prog,
            ),
        )
        sub_rely = frozenset(pair for pair in rel if rng.random() < 0.7)
        sub_pre = frozenset(s for s in pre_states if rng.random() < 0.7)
        wide_post = post_states | frozenset(rng.sample(range(n), rng.randint(0, n)))
        wide_guar = transitive_closure(guar | gen_relation(rng, n, max_pairs=2))
        conclusion = Quintuple(
            sub_rely,
            wide_guar,
            end_spec(states_pred(space, sub_pre)),
            end_spec(states_pred(space, frozenset(wide_post))),
            prog,
        )
        node = ProofNode("weakening", conclusion, [premise])
        if _apply_ok(space, node, L) and check_bruteforce(space, premise.conclusion, L).passed:
            out = check_bruteforce(space, conclusion, L)
            sw.check("weakening_sound", out.passed, out.witness)
    return sw.report(trials_per_rule)
