"""Bounded trace-language algebra.

Words are finite tuples of letters; a letter is a pair of state indices
(before, after).  A ``Lang`` is a finite, duplicate-free set of words
together with the length bound under which it is exhaustive: every
operation filters its result to words of length at most that bound, so an
inequality checked at bound L is an exact statement about all words of
length <= L.

Union, sequential product, shuffle (interleaving) product, bounded star
and the three residuals are provided.  All values are immutable and
hashable; operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator

Letter = tuple[int, int]
Word = tuple[Letter, ...]

EPSILON: Word = ()


class BoundMismatchError(ValueError):
    """Raised when a binary operation combines languages at different bounds."""


@dataclass(frozen=True)
class Lang:
    """A finite set of words, exhaustive up to ``bound``."""

    words: frozenset[Word]
    bound: int

    def __post_init__(self) -> None:
        if self.bound < 1:
            raise ValueError(f"bound must be >= 1, got {self.bound}")
        for w in self.words:
            if len(w) > self.bound:
                raise ValueError(f"word of length {len(w)} exceeds bound {self.bound}")

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: Word) -> bool:
        return word in self.words

    def __repr__(self) -> str:
        return f"Lang({len(self.words)} words, bound={self.bound})"


def lang(words: Iterable[Iterable[Iterable[int]]], bound: int) -> Lang:
    """Build a Lang from nested iterables, normalising words to tuples."""
    normal = set()
    for w in words:
        word = tuple((int(a), int(b)) for a, b in w)
        normal.add(word)
    return Lang(frozenset(normal), bound)


def zero(bound: int) -> Lang:
    """The empty language: additive unit and multiplicative annihilator."""
    return Lang(frozenset(), bound)


def one(bound: int) -> Lang:
    """The empty-word language, unit of both products."""
    return Lang(frozenset({EPSILON}), bound)


def _same_bound(x: Lang, y: Lang) -> int:
    if x.bound != y.bound:
        raise BoundMismatchError(f"bounds differ: {x.bound} != {y.bound}")
    return x.bound


def union(x: Lang, y: Lang) -> Lang:
    return Lang(x.words | y.words, _same_bound(x, y))


def meet(x: Lang, y: Lang) -> Lang:
    return Lang(x.words & y.words, _same_bound(x, y))


def leq(x: Lang, y: Lang) -> bool:
    """Language order: x <= y iff x + y = y, i.e. word-set inclusion."""
    _same_bound(x, y)
    return x.words <= y.words


def restrict(x: Lang, bound: int) -> Lang:
    """Truncate to words of length <= bound and retag."""
    return Lang(frozenset(w for w in x.words if len(w) <= bound), bound)


def _buckets(words: Iterable[Word]) -> dict[int, list[Word]]:
    out: dict[int, list[Word]] = {}
    for w in words:
        out.setdefault(len(w), []).append(w)
    return out


def concat(x: Lang, y: Lang, bound: int) -> Lang:
    """Sequential product {uv : u in x, v in y, |uv| <= bound}."""
    by_len = _buckets(y.words)
    out: set[Word] = set()
    for u in x.words:
        room = bound - len(u)
        if room < 0:
            continue
        for ly, ws in by_len.items():
            if ly <= room:
                for v in ws:
                    out.add(u + v)
    return Lang(frozenset(out), bound)


@lru_cache(maxsize=200_000)
def _shuffle_words(u: Word, v: Word) -> frozenset[Word]:
    if not u:
        return frozenset({v})
    if not v:
        return frozenset({u})
    left = {(u[0],) + rest for rest in _shuffle_words(u[1:], v)}
    right = {(v[0],) + rest for rest in _shuffle_words(u, v[1:])}
    return frozenset(left | right)


def word_shuffle(u: Word, v: Word) -> frozenset[Word]:
    """All order-preserving interleavings of two words.

    Defined by the recursion  as || bt = a(s || bt) + b(as || t)  with
    eps || s = {s}.  Every result has length |u| + |v|; the set has at
    most C(|u|+|v|, |u|) members.
    """
    return _shuffle_words(tuple(u), tuple(v))


def shuffle(x: Lang, y: Lang, bound: int) -> Lang:
    """Shuffle product of languages, filtered to the bound."""
    out: set[Word] = set()
    for u in x.words:
        room = bound - len(u)
        if room < 0:
            continue
        for v in y.words:
            if len(v) <= room:
                out |= _shuffle_words(u, v)
    return Lang(frozenset(out), bound)


def star(x: Lang, bound: int) -> Lang:
    """Least fixpoint of S |-> {eps} + x . S inside the bounded universe.

    Iteration terminates because the lattice of bounded languages is
    finite; words of x that are themselves eps contribute nothing new, so
    an x containing eps is handled without special casing.
    """
    by_len = {k: v for k, v in _buckets(x.words).items() if k >= 1}
    words: set[Word] = {EPSILON}
    frontier: set[Word] = {EPSILON}
    while frontier:
        fresh: set[Word] = set()
        for u in frontier:
            room = bound - len(u)
            for lx, ws in by_len.items():
                if lx <= room:
                    for v in ws:
                        w = u + v
                        if w not in words:
                            fresh.add(w)
        words |= fresh
        frontier = fresh
    return Lang(frozenset(words), bound)


def plus(x: Lang, bound: int) -> Lang:
    """x . x*, the strictly-iterating closure."""
    return concat(x, star(x, bound), bound)


def all_letters(n_states: int) -> list[Letter]:
    return [(a, b) for a in range(n_states) for b in range(n_states)]


def iter_words(n_states: int, bound: int) -> Iterator[Word]:
    """Every word over the full alphabet up to the bound, eps included."""
    letters = all_letters(n_states)
    for length in range(bound + 1):
        for combo in product(letters, repeat=length):
            yield combo


def universe(n_states: int, bound: int) -> Lang:
    """The top language: all words of length <= bound.

    Grows as (n_states^2)^bound; intended for small alphabets only.
    """
    return Lang(frozenset(iter_words(n_states, bound)), bound)


def residual_left(z: Lang, y: Lang, bound: int, n_states: int) -> Lang:
    """Largest bounded X with X . y <= z (the residual z <- y).

    A word w qualifies iff every extension wy that still fits the bound
    lands in z.  The result is the bounded-universe relativisation of the
    unbounded residual; compare it with concat/leq only at this bound.
    """
    if z.bound != bound:
        raise BoundMismatchError(f"z computed at bound {z.bound}, residual at {bound}")
    zw = z.words
    out = set()
    for w in iter_words(n_states, bound):
        room = bound - len(w)
        if all(w + v in zw for v in y.words if len(v) <= room):
            out.add(w)
    return Lang(frozenset(out), bound)


def residual_right(x: Lang, z: Lang, bound: int, n_states: int) -> Lang:
    """Largest bounded Y with x . Y <= z (the residual x -> z)."""
    if z.bound != bound:
        raise BoundMismatchError(f"z computed at bound {z.bound}, residual at {bound}")
    zw = z.words
    out = set()
    for w in iter_words(n_states, bound):
        lw = len(w)
        if all(u + w in zw for u in x.words if len(u) + lw <= bound):
            out.add(w)
    return Lang(frozenset(out), bound)


def residual_par(x: Lang, z: Lang, bound: int, n_states: int) -> Lang:
    """Largest bounded Y with x || Y <= z (the residual x / z)."""
    if z.bound != bound:
        raise BoundMismatchError(f"z computed at bound {z.bound}, residual at {bound}")
    zw = z.words
    out = set()
    for w in iter_words(n_states, bound):
        lw = len(w)
        ok = True
        for u in x.words:
            if len(u) + lw > bound:
                continue
            if not _shuffle_words(u, w) <= zw:
                ok = False
                break
        if ok:
            out.add(w)
    return Lang(frozenset(out), bound)


def format_word(w: Word) -> str:
    if not w:
        return "eps"
    return "".join(f"({a},{b})" for a, b in w)


def serialize(x: Lang) -> str:
    """One word per line, letters as (i,j) pairs, lexicographically sorted."""
    return "\n".join(format_word(w) for w in sorted(x.words))
