"""Boolean feature expressions: literals, negations and conjunctions.

Grammar::

    expr   := term ('&' term)*          ('&' is left-associative)
    term   := ('!')* factor             ('!' binds tighter than '&')
    factor := IDENT | '(' expr ')'
    IDENT  := [A-Za-z_][A-Za-z0-9_-]*

Expressions are immutable values.  Canonical form removes double
negations and orders the two operands of every conjunction by their
canonical serialization, so equal expressions have byte-identical
canonical text.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, TextIO, Union

import numpy as np

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*")


class ExprError(Exception):
    """Base class for expression errors."""


class SyntaxError_(ExprError):
    """Malformed expression text; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class UnknownFeatureError(ExprError):
    """Expression references a name absent from the dataset."""


@dataclass(frozen=True)
class Prim:
    name: str


@dataclass(frozen=True)
class Not:
    child: "FeatureExpr"


@dataclass(frozen=True)
class And:
    left: "FeatureExpr"
    right: "FeatureExpr"


FeatureExpr = Union[Prim, Not, And]


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_-]*)|(?P<op>[!&()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            # skip trailing whitespace
            if text[pos:].strip() == "":
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise SyntaxError_(f"unexpected character {text[bad]!r}", bad)
        if m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        tok = self.peek()
        if tok is not None:
            self.i += 1
        return tok

    def fail(self, message: str):
        tok = self.peek()
        offset = tok[2] if tok is not None else len(self.text)
        raise SyntaxError_(message, offset)

    def parse_expr(self) -> FeatureExpr:
        node = self.parse_term()
        while True:
            tok = self.peek()
            if tok is None or tok[1] != "&":
                return node
            self.next()
            node = And(node, self.parse_term())

    def parse_term(self) -> FeatureExpr:
        negs = 0
        while True:
            tok = self.peek()
            if tok is not None and tok[1] == "!":
                self.next()
                negs += 1
            else:
                break
        node = self.parse_factor()
        for _ in range(negs):
            node = Not(node)
        return node

    def parse_factor(self) -> FeatureExpr:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input")
        kind, value, _ = tok
        if kind == "ident":
            self.next()
            return Prim(value)
        if value == "(":
            self.next()
            node = self.parse_expr()
            closing = self.peek()
            if closing is None or closing[1] != ")":
                self.fail("expected ')'")
            self.next()
            return node
        self.fail(f"unexpected token {value!r}")


def parse(text: str) -> FeatureExpr:
    """Parse expression text, raising SyntaxError_ with a byte offset."""
    parser = _Parser(text)
    node = parser.parse_expr()
    if parser.peek() is not None:
        parser.fail("trailing input")
    return node


# ---------------------------------------------------------------------------
# printing

def to_text(e: FeatureExpr) -> str:
    """Deterministic, re-parseable rendering using '!', '&' and parens."""
    if isinstance(e, Prim):
        return e.name
    if isinstance(e, Not):
        inner = to_text(e.child)
        if isinstance(e.child, And):
            return f"!({inner})"
        return f"!{inner}"
    # '&' is left-associative: only a right-hand conjunction needs parens
    left = to_text(e.left)
    right = to_text(e.right)
    if isinstance(e.right, And):
        right = f"({right})"
    return f"{left} & {right}"


def canonicalize(e: FeatureExpr) -> FeatureExpr:
    """Remove double negations and sort conjunction operands; idempotent."""
    if isinstance(e, Prim):
        return e
    if isinstance(e, Not):
        child = canonicalize(e.child)
        if isinstance(child, Not):
            return child.child
        return Not(child)
    left = canonicalize(e.left)
    right = canonicalize(e.right)
    if to_text(left) <= to_text(right):
        return And(left, right)
    return And(right, left)


def canonical_text(e: FeatureExpr) -> str:
    return to_text(canonicalize(e))


# ---------------------------------------------------------------------------
# evaluation

def evaluate(e: FeatureExpr, dataset) -> np.ndarray:
    """Truth vector of the expression over every individual (bool array)."""
    if isinstance(e, Prim):
        if e.name not in dataset.name_index:
            raise UnknownFeatureError(f"unknown feature {e.name!r}")
        return dataset.column(e.name)
    if isinstance(e, Not):
        return ~evaluate(e.child, dataset)
    return evaluate(e.left, dataset) & evaluate(e.right, dataset)


def support(bits: np.ndarray) -> int:
    return int(np.count_nonzero(bits))


def literal_count(e: FeatureExpr) -> int:
    """Number of distinct leaf literals (primitive plus its immediate sign).

    A primitive leaf directly under a negation counts as the negative
    literal; the same primitive inside a negated conjunction counts as
    positive.  Exact duplicates collapse.
    """
    literals: set[tuple[str, bool]] = set()

    def walk(node: FeatureExpr) -> None:
        if isinstance(node, Prim):
            literals.add((node.name, True))
        elif isinstance(node, Not):
            if isinstance(node.child, Prim):
                literals.add((node.child.name, False))
            else:
                walk(node.child)
        else:
            walk(node.left)
            walk(node.right)

    walk(canonicalize(e))
    return len(literals)


# ---------------------------------------------------------------------------
# feature-set text files: one expression per line, '#' comments, blanks ignored

def iter_feature_lines(lines: Iterable[str]) -> Iterator[FeatureExpr]:
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield parse(line)


def load_feature_file(path) -> list[FeatureExpr]:
    with open(path, "r", encoding="utf-8") as fh:
        return list(iter_feature_lines(fh))


def dump_features(exprs: Iterable[FeatureExpr], out: TextIO) -> None:
    for e in exprs:
        out.write(to_text(e) + "\n")


def save_feature_file(exprs: Iterable[FeatureExpr], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        dump_features(exprs, fh)
