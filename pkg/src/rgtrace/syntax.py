"""Concrete syntax for programs and specifications.

Programs::

    skip                      x := e                 c1 ; c2
    c1 + c2                   c1 || c2               ( c )
    if P { c1 } else { c2 }   while P { c }

Sequencing binds tighter than choice, which binds tighter than parallel
composition.  Expressions use +, -, * over integer literals and
variables; predicates compare expressions with =, < or <= and combine
with &&, || and !.

Specifications are keyword clauses in any order::

    rely id & unchanged{x,y}
    guar top
    pre  end(x = 2 && y = 2)
    post end(x = 4)

Rely/guarantee vocabulary: ``id``, ``top``, ``unchanged{...}``,
``preserves(P)``, ``increasing(x)``, ``decreasing(x)``, intersected
with ``&``.  A missing rely defaults to ``id``; a missing guarantee
defaults to ``top``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .interference import Relation, StateSpace, id_relation
from .programs import (
    And,
    Assign,
    BinExpr,
    BoolLit,
    Choice,
    Cmp,
    Command,
    Expr,
    If,
    Lit,
    Not,
    Or,
    Par,
    Pred,
    Seq,
    Skip,
    Var,
    While,
    decreasing,
    increasing,
    preserves,
    unchanged,
)
from .verify import END, StateSpec, end_spec, test_spec


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>:=|<=|&&|\|\||[=<!+\-*;(){},&])
    """,
    re.VERBOSE,
)

KEYWORDS = {
    "skip", "if", "else", "while", "true", "false",
    "rely", "guar", "pre", "post", "end", "test",
    "unchanged", "preserves", "increasing", "decreasing", "id", "top",
}


@dataclass(frozen=True)
class Token:
    kind: str  # 'num' | 'ident' | 'op' | 'eof'
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        value = m.group(0)
        kind = m.lastgroup or "op"
        if kind != "ws":
            tokens.append(Token(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.cur.line, self.cur.column)

    def at(self, text: str) -> bool:
        return self.cur.text == text and self.cur.kind in ("op", "ident")

    def eat(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.eat(text):
            raise self.error(f"expected {text!r}, found {self.cur.text!r}")

    def ident(self) -> str:
        tok = self.cur
        if tok.kind != "ident" or tok.text in KEYWORDS:
            raise self.error(f"expected an identifier, found {tok.text!r}")
        self.pos += 1
        return tok.text

    # -- expressions -------------------------------------------------------

    def expr(self) -> Expr:
        out = self.term()
        while self.cur.text in ("+", "-") and self.cur.kind == "op":
            op = self.cur.text
            self.pos += 1
            out = BinExpr(op, out, self.term())
        return out

    def term(self) -> Expr:
        out = self.factor()
        while self.at("*"):
            self.pos += 1
            out = BinExpr("*", out, self.factor())
        return out

    def factor(self) -> Expr:
        tok = self.cur
        if tok.kind == "num":
            self.pos += 1
            return Lit(int(tok.text))
        if tok.kind == "ident" and tok.text not in KEYWORDS:
            self.pos += 1
            return Var(tok.text)
        if self.eat("("):
            out = self.expr()
            self.expect(")")
            return out
        raise self.error(f"expected an expression, found {tok.text!r}")

    # -- predicates ----------------------------------------------------------

    def pred(self) -> Pred:
        out = self.pred_and()
        while self.eat("||"):
            out = Or(out, self.pred_and())
        return out

    def pred_and(self) -> Pred:
        out = self.pred_not()
        while self.eat("&&"):
            out = And(out, self.pred_not())
        return out

    def pred_not(self) -> Pred:
        if self.eat("!"):
            return Not(self.pred_not())
        return self.pred_atom()

    def pred_atom(self) -> Pred:
        if self.eat("true"):
            return BoolLit(True)
        if self.eat("false"):
            return BoolLit(False)
        # A '(' may open a parenthesised predicate or the left expression
        # of a comparison; try the comparison reading first and backtrack.
        save = self.pos
        try:
            return self.comparison()
        except ParseError:
            self.pos = save
        if self.eat("("):
            out = self.pred()
            self.expect(")")
            return out
        raise self.error(f"expected a predicate, found {self.cur.text!r}")

    def comparison(self) -> Pred:
        left = self.expr()
        for op in ("<=", "<", "="):
            if self.eat(op):
                return Cmp(op, left, self.expr())
        raise self.error("expected a comparison operator")

    # -- commands ------------------------------------------------------------

    def command(self) -> Command:
        out = self.cmd_choice()
        while self.eat("||"):
            out = Par(out, self.cmd_choice())
        return out

    def cmd_choice(self) -> Command:
        out = self.cmd_seq()
        while self.eat("+"):
            out = Choice(out, self.cmd_seq())
        return out

    def cmd_seq(self) -> Command:
        out = self.cmd_unit()
        while self.eat(";"):
            out = Seq(out, self.cmd_unit())
        return out

    def cmd_unit(self) -> Command:
        if self.eat("skip"):
            return Skip()
        if self.eat("if"):
            cond = self.pred()
            self.expect("{")
            then = self.command()
            self.expect("}")
            self.expect("else")
            self.expect("{")
            orelse = self.command()
            self.expect("}")
            return If(cond, then, orelse)
        if self.eat("while"):
            cond = self.pred()
            self.expect("{")
            body = self.command()
            self.expect("}")
            return While(cond, body)
        if self.eat("("):
            out = self.command()
            self.expect(")")
            return out
        if self.cur.kind == "ident" and self.cur.text not in KEYWORDS:
            name = self.ident()
            self.expect(":=")
            return Assign(name, self.expr())
        raise self.error(f"expected a command, found {self.cur.text!r}")

    # -- specifications --------------------------------------------------------

    def vocab_term(self) -> tuple:
        if self.eat("id"):
            return ("id",)
        if self.eat("top"):
            return ("top",)
        if self.eat("unchanged"):
            self.expect("{")
            names: list[str] = []
            if not self.at("}"):
                names.append(self.ident())
                while self.eat(","):
                    names.append(self.ident())
            self.expect("}")
            return ("unchanged", tuple(names))
        if self.eat("preserves"):
            self.expect("(")
            p = self.pred()
            self.expect(")")
            return ("preserves", p)
        for kw in ("increasing", "decreasing"):
            if self.eat(kw):
                self.expect("(")
                name = self.ident()
                self.expect(")")
                return (kw, name)
        raise self.error(f"unknown rely/guarantee vocabulary {self.cur.text!r}")

    def vocab_terms(self) -> tuple:
        terms = [self.vocab_term()]
        while self.eat("&"):
            terms.append(self.vocab_term())
        return tuple(terms)

    def state_spec(self) -> StateSpec:
        for kw, build in (("end", end_spec), ("test", test_spec)):
            if self.eat(kw):
                self.expect("(")
                p = self.pred()
                self.expect(")")
                return build(p)
        raise self.error(f"expected end(...) or test(...), found {self.cur.text!r}")


@dataclass(frozen=True)
class SpecText:
    """Parsed specification: vocabulary terms plus tagged pre/post."""

    rely_terms: tuple
    guar_terms: tuple
    pre: StateSpec
    post: StateSpec


def parse_program(text: str) -> Command:
    p = _Parser(text)
    out = p.command()
    if p.cur.kind != "eof":
        raise p.error(f"trailing input {p.cur.text!r}")
    return out


def parse_pred(text: str) -> Pred:
    p = _Parser(text)
    out = p.pred()
    if p.cur.kind != "eof":
        raise p.error(f"trailing input {p.cur.text!r}")
    return out


def parse_spec(text: str) -> SpecText:
    p = _Parser(text)
    rely_terms: tuple | None = None
    guar_terms: tuple | None = None
    pre: StateSpec | None = None
    post: StateSpec | None = None
    while p.cur.kind != "eof":
        if p.eat("rely"):
            rely_terms = p.vocab_terms()
        elif p.eat("guar"):
            guar_terms = p.vocab_terms()
        elif p.eat("pre"):
            pre = p.state_spec()
        elif p.eat("post"):
            post = p.state_spec()
        else:
            raise p.error(f"expected rely/guar/pre/post, found {p.cur.text!r}")
    if pre is None or post is None:
        raise ParseError("specification needs both pre and post", 1, 1)
    if rely_terms is None:
        rely_terms = (("id",),)
    if guar_terms is None:
        guar_terms = (("top",),)
    return SpecText(rely_terms, guar_terms, pre, post)


def build_relation(space: StateSpace, terms: tuple) -> Relation | None:
    """Materialise vocabulary terms; None encodes the full relation."""
    out: Relation | None = None

    def meet(acc: Relation | None, rel: Relation | None) -> Relation | None:
        if rel is None:
            return acc
        return rel if acc is None else acc & rel

    for term in terms:
        match term:
            case ("id",):
                out = meet(out, id_relation(space.num_states))
            case ("top",):
                out = meet(out, None)
            case ("unchanged", names):
                for name in names:
                    space.index_of(name)  # unknown-variable check
                out = meet(out, unchanged(space, names))
            case ("preserves", pred):
                out = meet(out, preserves(space, pred))
            case ("increasing", name):
                out = meet(out, increasing(space, name))
            case ("decreasing", name):
                out = meet(out, decreasing(space, name))
            case _:
                raise ValueError(f"unknown vocabulary term {term!r}")
    return out


# --------------------------------------------------------------------------
# Pretty-printing (inverse of the parsers on the surface grammar)

def expr_text(e: Expr, level: int = 0) -> str:
    # levels: 0 additive, 1 multiplicative, 2 atom
    match e:
        case Lit(v):
            return str(v)
        case Var(name):
            return name
        case BinExpr(op, left, right):
            mine = 1 if op == "*" else 0
            text = f"{expr_text(left, mine)} {op} {expr_text(right, mine + 1)}"
            return f"({text})" if mine < level else text
    raise TypeError(f"not an expression: {e!r}")


def pred_text(p: Pred, level: int = 0) -> str:
    # levels: 0 or, 1 and, 2 not/atom
    match p:
        case BoolLit(v):
            return "true" if v else "false"
        case Cmp(op, left, right):
            return f"{expr_text(left)} {op} {expr_text(right)}"
        case Or(left, right):
            text = f"{pred_text(left, 0)} || {pred_text(right, 1)}"
            return f"({text})" if level > 0 else text
        case And(left, right):
            text = f"{pred_text(left, 1)} && {pred_text(right, 2)}"
            return f"({text})" if level > 1 else text
        case Not(body):
            return f"!{pred_text(body, 2)}"
    raise TypeError(f"not a predicate: {p!r}")


def program_text(c: Command, level: int = 0) -> str:
    # levels: 0 parallel, 1 choice, 2 seq, 3 unit
    match c:
        case Skip():
            return "skip"
        case Assign(var, e):
            return f"{var} := {expr_text(e)}"
        case Par(left, right):
            text = f"{program_text(left, 0)} || {program_text(right, 1)}"
            return f"({text})" if level > 0 else text
        case Choice(left, right):
            text = f"{program_text(left, 1)} + {program_text(right, 2)}"
            return f"({text})" if level > 1 else text
        case Seq(first, second):
            text = f"{program_text(first, 2)} ; {program_text(second, 3)}"
            return f"({text})" if level > 2 else text
        case If(cond, then, orelse):
            return (
                f"if {pred_text(cond)} {{ {program_text(then)} }}"
                f" else {{ {program_text(orelse)} }}"
            )
        case While(cond, body):
            return f"while {pred_text(cond)} {{ {program_text(body)} }}"
    raise TypeError(f"no concrete syntax for {c!r}")
