"""Relations, relies, consistency, the retraction and the quintuple deciders."""

import random

import pytest

from rgtrace.interference import (
    Rely,
    StateSpace,
    atomic_identities,
    check_con_axioms,
    check_pi_image_kleene,
    check_rely_closure,
    check_rg_axioms,
    compose,
    consistent,
    consistent_part,
    derived_rely_facts,
    eq_consistent,
    id_relation,
    is_transitive,
    iter_consistent_words,
    leq_consistent,
    lift,
    quintuple_holds,
    quintuple_refine_holds,
    rely_lang,
    rely_shuffle,
    top_relation,
    transitive_closure,
)
from rgtrace.lang import Lang, concat, lang, leq, one, shuffle, star, union, zero
from rgtrace.laws import gen_lang, gen_relation


# --------------------------------------------------------------------------
# State spaces

def test_state_space_enumeration():
    sp = StateSpace(("x", "y"), 3)
    assert sp.num_states == 9
    for sid in sp.all_states():
        assert sp.state_id(sp.values(sid)) == sid
    assert sp.value(sp.state_id((2, 1)), "x") == 2
    assert sp.value(sp.state_id((2, 1)), "y") == 1


def test_state_space_update():
    sp = StateSpace(("x", "y"), 4)
    sid = sp.state_id((1, 2))
    assert sp.values(sp.updated(sid, "x", 3)) == (3, 2)
    assert sp.values(sp.updated(sid, "y", 0)) == (1, 0)
    # arithmetic wraps into the domain
    assert sp.values(sp.updated(sid, "x", 5)) == (1, 2)


def test_state_space_rejects_bad_input():
    with pytest.raises(KeyError):
        StateSpace(("x",), 2).value(0, "nope")
    with pytest.raises(ValueError):
        StateSpace(("x", "x"), 2)


# --------------------------------------------------------------------------
# Lift and relies

def test_lift_examples():
    assert lift(frozenset(), 3) == zero(3)
    assert lift(id_relation(2), 3).words == {((0, 0),), ((1, 1),)}
    assert lift(frozenset({(0, 1)}), 3).words == {((0, 1),)}


def test_rely_lang_is_star_of_lift():
    rng = random.Random(4)
    for _ in range(40):
        rel = gen_relation(rng, 2, max_pairs=3)
        assert rely_lang(rel, 3) == star(lift(rel, 3), 3)


def test_rely_materialize():
    rel = frozenset({(0, 1)})
    assert Rely(rel).materialize(2).words == {(), ((0, 1),), ((0, 1), (0, 1))}


# --------------------------------------------------------------------------
# Consistency and the retraction

def test_consistent_examples():
    assert consistent(((0, 1), (1, 2)))
    assert not consistent(((0, 1), (2, 2)))
    assert consistent(())


def test_six_word_language_has_one_consistent_member():
    words = [
        [(0, 0), (0, 1), (1, 2)],
        [(0, 1), (0, 1), (1, 2)],
        [(1, 1), (0, 1), (1, 2)],
        [(0, 0), (2, 1), (1, 2)],
        [(0, 1), (2, 1), (1, 2)],
        [(1, 1), (2, 1), (1, 2)],
    ]
    x = lang(words, 3)
    assert consistent_part(x).words == {((0, 0), (0, 1), (1, 2))}


def test_retraction_properties():
    rng = random.Random(8)
    for _ in range(60):
        x = gen_lang(rng, 3, 3)
        y = gen_lang(rng, 3, 3)
        px = consistent_part(x)
        assert consistent_part(px) == px
        assert leq(px, x)
        assert leq(px, consistent_part(union(x, y)))


def test_leq_consistent():
    inconsistent_only = lang([[(0, 1), (0, 1)]], 2)
    assert leq_consistent(inconsistent_only, zero(2))
    x = lang([[(0, 1)]], 2)
    assert leq_consistent(x, x)
    assert eq_consistent(inconsistent_only, zero(2))


def test_iter_consistent_words_counts():
    # chained words of length k over n states: n^(k+1)
    got = list(iter_consistent_words(2, 2))
    assert len(got) == 2 ** 2 + 2 ** 3
    assert all(consistent(w) for w in got)


# --------------------------------------------------------------------------
# Insertion-based shuffle against a rely

def test_rely_shuffle_matches_general_shuffle():
    rng = random.Random(12)
    for _ in range(60):
        ns = rng.choice([2, 3])
        L = rng.choice([2, 3])
        rel = gen_relation(rng, ns, max_pairs=4)
        x = gen_lang(rng, ns, L, max_words=4)
        assert rely_shuffle(rel, x, L) == shuffle(rely_lang(rel, L), x, L)


def test_rely_shuffle_empty_relation_is_identity():
    x = lang([[(0, 1)], []], 3)
    assert rely_shuffle(frozenset(), x, 3) == x


# --------------------------------------------------------------------------
# Axiom suites

def test_rg_axioms_stuttering_rely():
    sp_states = 3
    r = Rely(id_relation(sp_states))
    rng = random.Random(1)
    x = gen_lang(rng, sp_states, 3, max_words=3)
    y = gen_lang(rng, sp_states, 3, max_words=3)
    rep = check_rg_axioms(r, r, x, y, 3)
    assert rep.passed, rep.render()


def test_rg_axioms_randomized():
    rng = random.Random(77)
    for _ in range(25):
        r1 = gen_relation(rng, 3, max_pairs=4)
        r2 = gen_relation(rng, 3, max_pairs=4)
        x = gen_lang(rng, 3, 3, max_words=3)
        y = gen_lang(rng, 3, 3, max_words=3)
        rep = check_rg_axioms(r1, r2, x, y, 3)
        assert rep.passed, rep.render()


def test_derived_rely_facts():
    rng = random.Random(6)
    for _ in range(25):
        rel = gen_relation(rng, 3, max_pairs=4)
        rep = derived_rely_facts(rel, 3)
        assert rep.passed, rep.render()
        assert leq(one(3), rely_lang(rel, 3))


def test_con_axioms_randomized():
    rng = random.Random(15)
    for _ in range(40):
        x, y, z = (gen_lang(rng, 2, 3, max_words=4) for _ in range(3))
        rep = check_con_axioms(x, y, z, 3)
        assert rep.passed, rep.render()


def test_pi_image_kleene_randomized():
    rng = random.Random(16)
    for _ in range(40):
        x, y, z = (gen_lang(rng, 2, 3, max_words=4) for _ in range(3))
        rep = check_pi_image_kleene(x, y, z, 3)
        assert rep.passed, rep.render()


def test_atomic_identities_degenerate_and_random():
    rep = atomic_identities(frozenset(), frozenset(), 3)
    assert rep.passed
    rng = random.Random(19)
    for _ in range(30):
        r = gen_relation(rng, 3, max_pairs=4)
        s = gen_relation(rng, 3, max_pairs=4)
        rep = atomic_identities(r, s, 3)
        assert rep.passed, rep.render()


def test_atomic_single_step_shape():
    # interleaving one atomic step into a rely factors as rely;step;rely
    r = frozenset({(0, 0)})
    s = frozenset({(0, 1)})
    lhs = rely_shuffle(r, lift(s, 3), 3)
    rl = rely_lang(r, 3)
    rhs = concat(concat(rl, lift(s, 3), 3), rl, 3)
    assert lhs == rhs


def test_rely_closure_under_meet_and_shuffle():
    rng = random.Random(29)
    for _ in range(30):
        r = gen_relation(rng, 2, max_pairs=3)
        s = gen_relation(rng, 2, max_pairs=3)
        rep = check_rely_closure(r, s, 3)
        assert rep.passed, rep.render()


# --------------------------------------------------------------------------
# Relation utilities

def test_compose_and_transitivity():
    r = frozenset({(0, 1), (1, 2)})
    assert compose(r, r) == frozenset({(0, 2)})
    assert not is_transitive(r)
    assert transitive_closure(r) == frozenset({(0, 1), (1, 2), (0, 2)})
    assert is_transitive(top_relation(3))
    assert is_transitive(id_relation(3))


# --------------------------------------------------------------------------
# Quintuple deciders

def test_quintuple_skip_instance():
    # skip under a stuttering rely, with an end-shaped precondition:
    # appending identity steps cannot change the final state
    ident = id_relation(2)
    ending_in_zero = [w for w in iter_consistent_words(2, 3) if w[-1][1] == 0]
    p = lang(ending_in_zero, 3)
    assert leq_consistent(concat(p, rely_lang(ident, 3), 3), p)
    assert quintuple_holds(p, ident, one(3), p, top_relation(2), 3)


def test_quintuple_skip_fails_without_stability():
    # a single-letter precondition is not stable under appended stutters
    ident = id_relation(2)
    p = lang([[(0, 0)], [(1, 1)], [(0, 1)]], 3)
    assert not quintuple_holds(p, ident, one(3), p, top_relation(2), 3)


def test_quintuple_zero_program_always_holds():
    rng = random.Random(31)
    for _ in range(20):
        p = gen_lang(rng, 2, 3)
        q = gen_lang(rng, 2, 3)
        r = gen_relation(rng, 2)
        g = gen_relation(rng, 2)
        assert quintuple_holds(p, r, zero(3), q, g, 3)
        assert quintuple_refine_holds(p, r, zero(3), q, g, 3, 2)


def test_quintuple_guarantee_side_is_literal():
    # the program's letters must all come from the guarantee
    p = one(3)
    q = Lang(frozenset({(), ((0, 1),)}), 3)
    x = lang([[(0, 1)]], 3)
    r = frozenset()
    assert quintuple_holds(p, r, x, q, frozenset({(0, 1)}), 3)
    assert not quintuple_holds(p, r, x, q, frozenset({(1, 0)}), 3)


def test_deciders_agree_randomized():
    rng = random.Random(37)
    for _ in range(120):
        ns = 2
        L = rng.randint(2, 3)
        p = gen_lang(rng, ns, L, max_words=3)
        q = gen_lang(rng, ns, L, max_words=6)
        x = gen_lang(rng, ns, L, max_words=3)
        r = gen_relation(rng, ns, max_pairs=3)
        g = gen_relation(rng, ns)
        assert quintuple_holds(p, r, x, q, g, L) == quintuple_refine_holds(
            p, r, x, q, g, L, ns
        )
