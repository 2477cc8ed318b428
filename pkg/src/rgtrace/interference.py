"""Rely-guarantee layer over the trace algebra.

Finite state spaces, state relations and their lift to one-letter
languages, the consistency filter on words, and the interference axioms
as executable checks.  A rely (or guarantee) is stored intensionally as a
relation R; its language is the star of the lifted relation, i.e. every
word whose letters all come from R.  Materialisation is exponential in
the bound and meant for small alphabets; the verifier module avoids it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator

from .lang import (
    EPSILON,
    Lang,
    Word,
    concat,
    leq,
    meet,
    one,
    plus,
    star,
    union,
    iter_words,
)
from .report import Report

Relation = frozenset[tuple[int, int]]


def relation(pairs: Iterable[Iterable[int]]) -> Relation:
    return frozenset((int(a), int(b)) for a, b in pairs)


def id_relation(n_states: int) -> Relation:
    return frozenset((s, s) for s in range(n_states))


def top_relation(n_states: int) -> Relation:
    return frozenset((a, b) for a in range(n_states) for b in range(n_states))


def compose(r: Relation, s: Relation) -> Relation:
    succ: dict[int, list[int]] = {}
    for a, b in s:
        succ.setdefault(a, []).append(b)
    return frozenset((a, c) for a, b in r for c in succ.get(b, ()))


def is_transitive(r: Relation) -> bool:
    return compose(r, r) <= r


def transitive_closure(r: Relation) -> Relation:
    out = set(r)
    while True:
        extra = compose(frozenset(out), frozenset(out)) - out
        if not extra:
            return frozenset(out)
        out |= extra


@dataclass(frozen=True)
class StateSpace:
    """Variables over a common finite domain; states are all valuations.

    State ids enumerate valuations in mixed radix: the value of
    ``variables[i]`` occupies digit i (least significant first).
    """

    variables: tuple[str, ...]
    domain_size: int

    def __post_init__(self) -> None:
        if self.domain_size < 1:
            raise ValueError("domain_size must be >= 1")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        object.__setattr__(self, "variables", tuple(self.variables))

    @property
    def num_states(self) -> int:
        return self.domain_size ** len(self.variables)

    def index_of(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise KeyError(f"unknown variable {var!r}") from None

    def value(self, sid: int, var: str) -> int:
        return (sid // self.domain_size ** self.index_of(var)) % self.domain_size

    def values(self, sid: int) -> tuple[int, ...]:
        n = self.domain_size
        out = []
        for _ in self.variables:
            out.append(sid % n)
            sid //= n
        return tuple(out)

    def state_id(self, values: Iterable[int]) -> int:
        vals = tuple(values)
        if len(vals) != len(self.variables):
            raise ValueError("one value per variable required")
        sid = 0
        for v in reversed(vals):
            sid = sid * self.domain_size + v % self.domain_size
        return sid

    def updated(self, sid: int, var: str, value: int) -> int:
        weight = self.domain_size ** self.index_of(var)
        old = (sid // weight) % self.domain_size
        return sid + (value % self.domain_size - old) * weight

    def all_states(self) -> range:
        return range(self.num_states)

    def state_dict(self, sid: int) -> dict[str, int]:
        return dict(zip(self.variables, self.values(sid)))


@dataclass(frozen=True)
class Rely:
    """Intensional rely/guarantee condition: the star of a lifted relation."""

    relation: Relation

    def materialize(self, bound: int) -> Lang:
        return rely_lang(self.relation, bound)


def _rel(r: "Rely | Relation") -> Relation:
    return r.relation if isinstance(r, Rely) else r


def lift(rel: Relation, bound: int) -> Lang:
    """One-letter words, one per pair of the relation."""
    return Lang(frozenset(((a, b),) for a, b in rel), bound)


def rely_lang(rel: Relation, bound: int) -> Lang:
    """star(lift(rel)): every word built from the relation's pairs."""
    letters = [((a, b),) for a, b in rel]
    words: set[Word] = {EPSILON}
    level: list[Word] = [EPSILON]
    for _ in range(bound):
        level = [w + a for w in level for a in letters]
        words.update(level)
        if not level:
            break
    return Lang(frozenset(words), bound)


def consistent(word: Word) -> bool:
    """Adjacent letters chain: each pre-state equals the previous post-state."""
    return all(word[k][1] == word[k + 1][0] for k in range(len(word) - 1))


def consistent_part(x: Lang) -> Lang:
    """The retraction onto consistent words (intersection with all chains)."""
    return Lang(frozenset(w for w in x.words if consistent(w)), x.bound)


def leq_consistent(x: Lang, y: Lang) -> bool:
    """Order up to consistency: compare the consistent parts only."""
    return leq(consistent_part(x), consistent_part(y))


def eq_consistent(x: Lang, y: Lang) -> bool:
    return consistent_part(x).words == consistent_part(y).words


def iter_consistent_words(
    n_states: int, bound: int, include_empty: bool = False
) -> Iterator[Word]:
    """All chained words up to the bound: n_states^(len+1) per length."""
    if include_empty:
        yield EPSILON
    for length in range(1, bound + 1):
        for path in product(range(n_states), repeat=length + 1):
            yield tuple((path[k], path[k + 1]) for k in range(length))


def rely_shuffle(rel: "Rely | Relation", x: Lang, bound: int) -> Lang:
    """r || x for a rely r = star(lift(rel)), by letter insertion.

    Interleaving a word with every word over rel is the same as inserting
    arbitrary runs of rel-letters into its gaps, so the shuffle against a
    materialised star never has to be built.  Cost is proportional to the
    output size.  Cross-checked against the general shuffle in the tests.
    """
    letters = [(a, b) for a, b in _rel(rel)]
    out: set[Word] = set()
    for w in x.words:
        if len(w) > bound:
            continue
        n = len(w)
        stack: list[tuple[int, Word]] = [(0, EPSILON)]
        seen: set[tuple[int, Word]] = set()
        while stack:
            idx, built = stack.pop()
            if (idx, built) in seen:
                continue
            seen.add((idx, built))
            remaining = n - idx
            if remaining == 0:
                out.add(built)
            else:
                stack.append((idx + 1, built + (w[idx],)))
            if len(built) + 1 + remaining <= bound:
                for a in letters:
                    stack.append((idx, built + (a,)))
    return Lang(frozenset(out), bound)


def _first_diff(x: Lang, y: Lang) -> Word | None:
    extra = x.words - y.words
    return min(extra) if extra else None


def _leq_check(report: Report, name: str, x: Lang, y: Lang, note: str = "") -> None:
    report.add(name, leq(x, y), _first_diff(x, y), note)


def _eq_check(report: Report, name: str, x: Lang, y: Lang, note: str = "") -> None:
    ok = x.words == y.words
    witness = _first_diff(x, y) or _first_diff(y, x)
    report.add(name, ok, None if ok else witness, note)


def check_rg_axioms(
    r: "Rely | Relation", r2: "Rely | Relation", x: Lang, y: Lang, bound: int
) -> Report:
    """The four interference axioms for relies r, r2 against x, y.

    The sequential-split axiom is an equality, checked as two inclusions
    at the shared bound; the iteration-split axiom is checked as the
    inclusion plus the expected equality.
    """
    rel1, rel2 = _rel(r), _rel(r2)
    rep = Report()
    r1_lang = rely_lang(rel1, bound)

    _leq_check(rep, "rely_par_idem", rely_shuffle(rel1, r1_lang, bound), r1_lang)
    _leq_check(
        rep, "rely_absorb", r1_lang, rely_shuffle(rel1, rely_lang(rel2, bound), bound)
    )

    lhs = rely_shuffle(rel1, concat(x, y, bound), bound)
    rhs = concat(rely_shuffle(rel1, x, bound), rely_shuffle(rel1, y, bound), bound)
    _eq_check(rep, "rely_seq_split", lhs, rhs)

    lhs4 = rely_shuffle(rel1, plus(x, bound), bound)
    rhs4 = plus(rely_shuffle(rel1, x, bound), bound)
    _leq_check(rep, "rely_iter_split", lhs4, rhs4)
    _eq_check(rep, "rely_iter_split_eq", lhs4, rhs4)
    return rep


def derived_rely_facts(r: "Rely | Relation", bound: int) -> Report:
    """Consequences of the axioms: 1 <= r and r* = r.r = r = r || r."""
    rel = _rel(r)
    rep = Report()
    rl = rely_lang(rel, bound)
    _leq_check(rep, "rely_above_unit", one(bound), rl)
    _eq_check(rep, "rely_star_fixed", star(rl, bound), rl)
    _eq_check(rep, "rely_seq_idem", concat(rl, rl, bound), rl)
    _eq_check(rep, "rely_par_idem_eq", rely_shuffle(rel, rl, bound), rl)
    return rep


def check_con_axioms(x: Lang, y: Lang, z: Lang, bound: int) -> Report:
    """Consistency axioms relating star/concat with the retraction."""
    rep = Report()
    px = consistent_part(x)

    sx = star(x, bound)
    spx = star(px, bound)
    rep.add(
        "consistent_star",
        leq_consistent(sx, spx),
        _first_diff(consistent_part(sx), consistent_part(spx)),
    )

    xy = concat(x, y, bound)
    pxy = concat(px, consistent_part(y), bound)
    rep.add(
        "consistent_concat",
        leq_consistent(xy, pxy),
        _first_diff(consistent_part(xy), consistent_part(pxy)),
    )

    # Induction implications; vacuous when the antecedent fails.
    ante_l = leq_consistent(union(z, concat(x, y, bound)), y)
    concl_l = leq_consistent(concat(star(x, bound), z, bound), y)
    rep.add(
        "consistent_induction_left",
        (not ante_l) or concl_l,
        note="" if ante_l else "vacuous",
    )

    ante_r = leq_consistent(union(z, concat(y, x, bound)), y)
    concl_r = leq_consistent(concat(z, star(x, bound), bound), y)
    rep.add(
        "consistent_induction_right",
        (not ante_r) or concl_r,
        note="" if ante_r else "vacuous",
    )
    return rep


def check_pi_image_kleene(x: Lang, y: Lang, z: Lang, bound: int) -> Report:
    """Kleene-algebra checks inside the image of the consistency retraction.

    Elements are consistent parts; products and stars are re-retracted
    after each application.
    """
    a = consistent_part(x)
    b = consistent_part(y)
    c = consistent_part(z)
    rep = Report()

    def cstar(v: Lang) -> Lang:
        return consistent_part(star(v, bound))

    def cconcat(u: Lang, v: Lang) -> Lang:
        return consistent_part(concat(u, v, bound))

    _eq_check(rep, "pi_image_union_closed", union(a, b), consistent_part(union(a, b)))
    _eq_check(rep, "pi_image_meet_closed", meet(a, b), consistent_part(meet(a, b)))
    _eq_check(
        rep,
        "pi_image_star_unfold",
        consistent_part(union(one(bound), cconcat(a, cstar(a)))),
        cstar(a),
    )

    ante = leq(union(c, cconcat(a, b)), b)
    concl = leq(cconcat(cstar(a), c), b)
    rep.add("pi_image_induction_left", (not ante) or concl, note="" if ante else "vacuous")

    ante_r = leq(union(c, cconcat(b, a)), b)
    concl_r = leq(cconcat(c, cstar(a)), b)
    rep.add(
        "pi_image_induction_right", (not ante_r) or concl_r, note="" if ante_r else "vacuous"
    )
    return rep


def atomic_identities(r: Relation, s: Relation, bound: int) -> Report:
    """Interleaving a rely with atomic steps factors through sequencing.

    Checks  r* || <S>  =  r* ; <S> ; r*   and   r* || s* = (r* ; s*)*.
    """
    rep = Report()
    rl = rely_lang(r, bound)
    sl = lift(s, bound)
    lhs1 = rely_shuffle(r, sl, bound)
    rhs1 = concat(concat(rl, sl, bound), rl, bound)
    _eq_check(rep, "atomic_single_step", lhs1, rhs1)

    s_star = rely_lang(s, bound)
    lhs2 = rely_shuffle(r, s_star, bound)
    rhs2 = star(concat(rl, s_star, bound), bound)
    _eq_check(rep, "atomic_star_star", lhs2, rhs2)
    return rep


def check_rely_closure(r: Relation, s: Relation, bound: int) -> Report:
    """Meet and shuffle of two relies are again relies of a single relation."""
    rep = Report()
    _eq_check(
        rep,
        "rely_meet_closed",
        meet(rely_lang(r, bound), rely_lang(s, bound)),
        rely_lang(r & s, bound),
    )
    _eq_check(
        rep,
        "rely_shuffle_closed",
        rely_shuffle(r, rely_lang(s, bound), bound),
        rely_lang(r | s, bound),
    )
    return rep


def quintuple_holds(
    p: Lang,
    r: "Rely | Relation",
    x: Lang,
    q: Lang,
    g: "Rely | Relation",
    bound: int,
) -> bool:
    """Direct decision of   r, g |- {p} x {q}.

    Encoded as  p . (r || x) <= q  up to consistency, together with the
    literal guarantee inclusion  x <= g.  Materialises the guarantee, so
    only suitable for small alphabets.
    """
    lhs = concat(p, rely_shuffle(r, x, bound), bound)
    if not leq_consistent(lhs, q):
        return False
    return leq(x, rely_lang(_rel(g), bound))


def residual_right_consistent(p: Lang, q: Lang, bound: int, n_states: int) -> Lang:
    """{y : p . {y} <= q up to consistency}, over the bounded universe."""
    qw = q.words
    out = set()
    for y in iter_words(n_states, bound):
        ly = len(y)
        ok = True
        for u in p.words:
            if len(u) + ly > bound:
                continue
            w = u + y
            if consistent(w) and w not in qw:
                ok = False
                break
        if ok:
            out.add(y)
    return Lang(frozenset(out), bound)


def residual_par_consistent(
    r: "Rely | Relation", z: Lang, bound: int, n_states: int
) -> Lang:
    """{y : r || {y} <= z up to consistency}, over the bounded universe."""
    rel = _rel(r)
    zw = z.words
    out = set()
    for y in iter_words(n_states, bound):
        mixed = rely_shuffle(rel, Lang(frozenset({y}), bound), bound)
        if all(w in zw for w in mixed.words if consistent(w)):
            out.add(y)
    return Lang(frozenset(out), bound)


def quintuple_refine_holds(
    p: Lang,
    r: "Rely | Relation",
    x: Lang,
    q: Lang,
    g: "Rely | Relation",
    bound: int,
    n_states: int,
) -> bool:
    """Residual encoding of the quintuple:  x <= r/(p -> q) ^ g.

    The residuals are interpreted up to consistency so that the encoding
    agrees with the direct one; the outer inclusion stays plain.
    """
    wlp = residual_right_consistent(p, q, bound, n_states)
    spec = meet(
        residual_par_consistent(r, wlp, bound, n_states),
        rely_lang(_rel(g), bound),
    )
    return leq(x, spec)
