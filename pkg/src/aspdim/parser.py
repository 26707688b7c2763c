"""Parser for the `.lp` dialect.

Grammar: normal/disjunctive rules, constraints, facts, `not`, and the
comparison builtins = != < <= > >= over constants.  `|` separates head
atoms, `:-` starts the body, `.` ends a rule, `%` starts a line comment.
Token rules: constants `[a-z0-9][A-Za-z0-9_]*`, variables `[A-Z_][A-Za-z0-9_]*`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError
from .syntax import Atom, Comparison, Program, Rule, Term, is_variable_name

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<word>[A-Za-z0-9_]+)
  | (?P<punct>:-|!=|<=|>=|=|<|>|\(|\)|,|\.|\|)
    """,
    re.VERBOSE,
)

_COMPARISON_OPS = {"=", "!=", "<", "<=", ">", ">="}


@dataclass(frozen=True)
class _Token:
    kind: str  # "word" | "punct" | "eof"
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, value, line, pos - line_start + 1))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rfind("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str) -> ParseError:
        return ParseError(message, self.cur.line, self.cur.column)

    def advance(self) -> _Token:
        tok = self.cur
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        if self.cur.kind == "punct" and self.cur.text == text:
            return self.advance()
        raise self.error(f"expected {text!r}, found {self.cur.text or 'end of input'!r}")

    def at(self, text: str) -> bool:
        return self.cur.kind == "punct" and self.cur.text == text

    def parse_program(self) -> list[Rule]:
        rules = []
        while self.cur.kind != "eof":
            rules.append(self.parse_rule())
        return rules

    def parse_rule(self) -> Rule:
        head: list[Atom] = []
        body_pos: list[Atom] = []
        body_neg: list[Atom] = []
        comparisons: list[Comparison] = []
        if not self.at(":-"):
            head.append(self.parse_atom())
            while self.at("|"):
                self.advance()
                head.append(self.parse_atom())
        if self.at(":-"):
            self.advance()
            while True:
                self.parse_body_literal(body_pos, body_neg, comparisons)
                if self.at(","):
                    self.advance()
                    continue
                break
        self.expect(".")
        return Rule(frozenset(head), frozenset(body_pos), frozenset(body_neg), tuple(comparisons))

    def parse_body_literal(self, body_pos, body_neg, comparisons) -> None:
        if self.cur.kind == "word" and self.cur.text == "not":
            self.advance()
            body_neg.append(self.parse_atom())
            return
        # An atom or the left side of a comparison; terms need one-token lookahead.
        if self.cur.kind != "word":
            raise self.error(f"expected a literal, found {self.cur.text!r}")
        start = self.advance()
        nxt = self.cur
        if nxt.kind == "punct" and nxt.text in _COMPARISON_OPS:
            self.advance()
            right = self.parse_term()
            comparisons.append(Comparison(self.make_term(start), nxt.text, right))
            return
        self.pos -= 1
        body_pos.append(self.parse_atom())

    def parse_atom(self) -> Atom:
        tok = self.cur
        if tok.kind != "word" or is_variable_name(tok.text):
            raise self.error(f"expected a predicate symbol, found {tok.text or 'end of input'!r}")
        if tok.text[0].isdigit():
            raise self.error(f"predicate symbol cannot start with a digit: {tok.text!r}")
        self.advance()
        args: list[Term] = []
        if self.at("("):
            self.advance()
            args.append(self.parse_term())
            while self.at(","):
                self.advance()
                args.append(self.parse_term())
            self.expect(")")
        return Atom(tok.text, tuple(args))

    def parse_term(self) -> Term:
        if self.cur.kind != "word":
            raise self.error(f"expected a term, found {self.cur.text or 'end of input'!r}")
        return self.make_term(self.advance())

    @staticmethod
    def make_term(tok: _Token) -> Term:
        return Term(tok.text)


def parse_program(text: str) -> Program:
    """Parse source text; rejects syntax errors, unsafe rules, arity clashes."""
    rules = _Parser(_tokenize(text)).parse_program()
    return Program(tuple(rules))


def parse_rule(text: str) -> Rule:
    """Parse a single rule (convenience for tests and construction)."""
    rules = _Parser(_tokenize(text)).parse_program()
    if len(rules) != 1:
        raise ValueError(f"expected exactly one rule, found {len(rules)}")
    return rules[0]
