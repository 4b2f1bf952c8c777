"""Propositional formulas: AST, concrete syntax, evaluation.

Grammar (precedence from tightest: ``!``, ``&``, ``|``, ``->``, ``<->``)::

    formula   := iff
    iff       := imp ("<->" imp)*
    imp       := or ("->" imp)?
    or        := and ("|" and)*
    and       := unary ("&" unary)*
    unary     := "!" unary | atom | "(" formula ")"
    timed     := formula "@" integer ("&" formula "@" integer)*
    condition := item ("," item)*
    item      := timed | "OBS" atoms "=" bits "@" integer
    query     := "P(" [timed ("," timed)*] "|" [condition] ")"

A ``timed`` chain such as ``a@1 & !b@1`` denotes one item ``(a & !b)@1``;
its times must agree.  ``&`` and ``|`` associate to the left, ``->`` to the right.  ``<->`` chains
are parsed right-associatively as well so that printing round-trips.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import FormulaSyntaxError, UnboundAtomError, UnknownTokenError

IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not IDENT_RE.match(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return to_text(self)


Formula = Union[Atom, Not, And, Or, Implies, Iff]


@dataclass(frozen=True)
class TimedFormula:
    """A formula observed at a 1-based time step."""

    formula: Formula
    time: int

    def __post_init__(self):
        if isinstance(self.time, bool) or not isinstance(self.time, int) or self.time < 1:
            raise ValueError(f"time must be an integer >= 1, got {self.time!r}")

    def __str__(self):
        text = to_text(self.formula)
        if not isinstance(self.formula, (Atom, Not)):
            text = f"({text})"
        return f"{text}@{self.time}"


# ---------------------------------------------------------------------------
# semantics

def evaluate(f: Formula, v: Mapping[str, object]) -> bool:
    """Classical truth value of ``f`` under valuation ``v`` (atom name -> 0/1)."""
    if isinstance(f, Atom):
        try:
            return bool(v[f.name])
        except KeyError:
            raise UnboundAtomError(f.name) from None
    if isinstance(f, Not):
        return not evaluate(f.arg, v)
    if isinstance(f, And):
        # evaluate both sides so unbound atoms are always reported
        a, b = evaluate(f.left, v), evaluate(f.right, v)
        return a and b
    if isinstance(f, Or):
        a, b = evaluate(f.left, v), evaluate(f.right, v)
        return a or b
    if isinstance(f, Implies):
        a, b = evaluate(f.left, v), evaluate(f.right, v)
        return (not a) or b
    if isinstance(f, Iff):
        return evaluate(f.left, v) == evaluate(f.right, v)
    raise TypeError(f"not a formula: {f!r}")


def compile_formula(f: Formula, index: Mapping[str, int]) -> Callable[[Sequence[int]], bool]:
    """Close ``f`` over positional bit vectors laid out by ``index``.

    Used by the engine to evaluate one formula over many valuations without
    re-walking the tree through dict lookups.
    """
    if isinstance(f, Atom):
        try:
            i = index[f.name]
        except KeyError:
            raise UnboundAtomError(f.name) from None
        return lambda bits: bits[i] != 0
    if isinstance(f, Not):
        g = compile_formula(f.arg, index)
        return lambda bits: not g(bits)
    a = compile_formula(f.left, index)
    b = compile_formula(f.right, index)
    if isinstance(f, And):
        return lambda bits: a(bits) and b(bits)
    if isinstance(f, Or):
        return lambda bits: a(bits) or b(bits)
    if isinstance(f, Implies):
        return lambda bits: (not a(bits)) or b(bits)
    if isinstance(f, Iff):
        return lambda bits: a(bits) == b(bits)
    raise TypeError(f"not a formula: {f!r}")


def evaluate_bitset(f: Formula, column: Callable[[str], int], full: int) -> int:
    """Evaluate ``f`` over many valuations at once.

    ``column(name)`` returns an int whose bit j is the atom's value in
    valuation j; ``full`` has every valid bit set.  Bit j of the result is
    the truth value of ``f`` in valuation j.
    """
    if isinstance(f, Atom):
        return column(f.name)
    if isinstance(f, Not):
        return full ^ evaluate_bitset(f.arg, column, full)
    a = evaluate_bitset(f.left, column, full)
    b = evaluate_bitset(f.right, column, full)
    if isinstance(f, And):
        return a & b
    if isinstance(f, Or):
        return a | b
    if isinstance(f, Implies):
        return (full ^ a) | b
    if isinstance(f, Iff):
        return full ^ (a ^ b)
    raise TypeError(f"not a formula: {f!r}")


def atoms(f: Formula) -> frozenset:
    """Names of all atoms occurring in ``f``."""
    out = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            out.add(g.name)
        elif isinstance(g, Not):
            stack.append(g.arg)
        else:
            stack.append(g.left)
            stack.append(g.right)
    return frozenset(out)


def literal_of(f: Formula):
    """Return ``(name, polarity)`` if ``f`` is an atom or a negated atom, else None."""
    if isinstance(f, Atom):
        return f.name, True
    if isinstance(f, Not) and isinstance(f.arg, Atom):
        return f.arg.name, False
    return None


def conjuncts(f: Formula) -> list:
    if isinstance(f, And):
        return conjuncts(f.left) + conjuncts(f.right)
    return [f]


def split_literals(items: Iterable[TimedFormula]) -> tuple:
    """Rewrite every conjunction of literals into separate timed literals.

    Items that are not pure conjunctions of literals are kept as they are.
    """
    out = []
    for item in items:
        parts = conjuncts(item.formula)
        if len(parts) > 1 and all(literal_of(p) is not None for p in parts):
            out.extend(TimedFormula(p, item.time) for p in parts)
        else:
            out.append(item)
    return tuple(out)


def observation(atom_names: Sequence[str], bits: str, time: int) -> tuple:
    """Expand a sensor reading such as ``NESW=0011`` at ``time`` into timed literals."""
    if len(atom_names) != len(bits) or set(bits) - {"0", "1"}:
        raise ValueError(f"observation {''.join(atom_names)}={bits} is malformed")
    return tuple(
        TimedFormula(Atom(a) if b == "1" else Not(Atom(a)), time)
        for a, b in zip(atom_names, bits)
    )


# ---------------------------------------------------------------------------
# printing

_PREC = {Iff: 1, Implies: 2, Or: 3, And: 4, Not: 5, Atom: 6}
_OPS = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def to_text(f: Formula) -> str:
    """Canonical text with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        inner = to_text(f.arg)
        if _PREC[type(f.arg)] < _PREC[Not]:
            inner = f"({inner})"
        return "!" + inner
    p = _PREC[type(f)]
    left, right = to_text(f.left), to_text(f.right)
    if isinstance(f, (Implies, Iff)):
        # right-associative
        if _PREC[type(f.left)] <= p:
            left = f"({left})"
        if _PREC[type(f.right)] < p:
            right = f"({right})"
    else:
        if _PREC[type(f.left)] < p:
            left = f"({left})"
        if _PREC[type(f.right)] <= p:
            right = f"({right})"
    return f"{left} {_OPS[type(f)]} {right}"


def condition_text(items: Iterable[TimedFormula]) -> str:
    return ", ".join(str(i) for i in items)


# ---------------------------------------------------------------------------
# lexing / parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<iff><->)|(?P<imp>->)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<int>[0-9]+)|(?P<op>[!&|()@,=\[\]]))"
)


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def tokenize(text: str) -> list:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise UnknownTokenError(f"illegal character {text[pos]!r}", _byte_offset(text, pos), text)
        kind = m.lastgroup
        start = m.start(kind)
        value = m.group(kind)
        if kind == "op":
            kind = value
        elif kind == "iff":
            kind = "<->"
        elif kind == "imp":
            kind = "->"
        tokens.append(Token(kind, value, start))
        pos = m.end()
    tokens.append(Token("EOF", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k=1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def error(self, message, tok=None):
        tok = tok or self.tok
        what = "end of input" if tok.kind == "EOF" else repr(tok.text)
        return FormulaSyntaxError(f"{message}, found {what}", _byte_offset(self.text, tok.pos), self.text)

    def expect(self, kind) -> Token:
        if self.tok.kind != kind:
            raise self.error(f"expected {kind!r}")
        return self.advance()

    def finish(self):
        if self.tok.kind != "EOF":
            raise self.error("unexpected trailing input")

    # formula levels
    def formula(self):
        left = self.imp()
        if self.tok.kind == "<->":
            self.advance()
            return Iff(left, self.formula())
        return left

    def imp(self):
        left = self.disj()
        if self.tok.kind == "->":
            self.advance()
            return Implies(left, self.imp())
        return left

    def disj(self):
        left = self.conj()
        while self.tok.kind == "|":
            self.advance()
            left = Or(left, self.conj())
        return left

    def conj(self):
        left = self.unary()
        while self.tok.kind == "&":
            self.advance()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.tok
        if tok.kind == "!":
            self.advance()
            return Not(self.unary())
        if tok.kind == "ident":
            self.advance()
            return Atom(tok.text)
        if tok.kind == "(":
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        raise self.error("expected atom, '!' or '('")

    def time(self) -> int:
        self.expect("@")
        tok = self.expect("int")
        t = int(tok.text)
        if t < 1:
            raise self.error("time must be >= 1", tok)
        return t

    def timed(self) -> TimedFormula:
        # "a@1 & b@1" is accepted as (a & b)@1; the times must agree
        f = self.formula()
        t = self.time()
        while self.tok.kind == "&":
            self.advance()
            g = self.formula()
            at = self.tok
            u = self.time()
            if u != t:
                raise self.error(f"conjunct at time {u} joined to one at time {t}; use ',' to separate", at)
            f = And(f, g)
        return TimedFormula(f, t)

    def item(self) -> tuple:
        tok = self.tok
        if tok.kind == "ident" and tok.text == "OBS" and self.peek().kind in ("ident", "["):
            self.advance()
            if self.tok.kind == "[":
                self.advance()
                names = [self.expect("ident").text]
                while self.tok.kind == ",":
                    self.advance()
                    names.append(self.expect("ident").text)
                self.expect("]")
            else:
                names = list(self.expect("ident").text)
            self.expect("=")
            bits_tok = self.expect("int")
            t = self.time()
            try:
                return observation(names, bits_tok.text, t)
            except ValueError as exc:
                raise FormulaSyntaxError(str(exc), _byte_offset(self.text, bits_tok.pos), self.text) from None
        return (self.timed(),)

    def condition(self, stop: str) -> tuple:
        items = []
        if self.tok.kind == stop:
            return ()
        items.extend(self.item())
        while self.tok.kind == ",":
            self.advance()
            items.extend(self.item())
        return tuple(items)


def parse(text: str) -> Formula:
    """Parse a formula, e.g. ``parse("r -> w")``."""
    p = _Parser(text)
    f = p.formula()
    p.finish()
    return f


def parse_timed(text: str) -> TimedFormula:
    p = _Parser(text)
    t = p.timed()
    p.finish()
    return t


def parse_condition(text: str) -> tuple:
    """Parse a comma-separated condition; the empty string is the empty condition."""
    p = _Parser(text)
    items = p.condition("EOF")
    p.finish()
    return items


def parse_query(text: str) -> tuple:
    """Parse ``P(targets | condition)`` into ``(targets, condition)``."""
    p = _Parser(text)
    head = p.expect("ident")
    if head.text != "P":
        raise p.error("query must start with 'P('", head)
    p.expect("(")
    targets = []
    if p.tok.kind != "|":
        targets.append(p.timed())
        while p.tok.kind == ",":
            p.advance()
            targets.append(p.timed())
    p.expect("|")
    cond = p.condition(")")
    p.expect(")")
    p.finish()
    return tuple(targets), cond
