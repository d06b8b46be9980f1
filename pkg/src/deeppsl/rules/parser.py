"""Line-oriented parser for rule and domain source files.

Rule files:

    # comment
    predicate HasFur/1 : observed
    predicate IsCat/1  : free
    1.0 : HasFur(X) -> IsCat(X)
    0.7 : !A1(I) & B(I) -> !Label(I, "c") | Other(I)

Domain files:

    sort animal = {karl, ralph, "big cat"}
    sig HasFur = (animal)

Variables are leading-uppercase identifiers; constants are lowercase
identifiers or double-quoted strings. Errors carry line and column.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ParseError
from .model import (Constant, Domain, Literal, Predicate, Rule, RuleProgram,
                    Variable)

# token kinds
IDENT = "ident"
NUMBER = "number"
STRING = "string"
SYMBOL = "symbol"
END = "end"

_SYMBOLS = ("->", "(", ")", "{", "}", ",", "&", "|", "!", ":", "=")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize_line(line: str, lineno: int, path: str | None):
    tokens = []
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch in " \t\r":
            i += 1
            continue
        if ch == "#":
            break
        col = i + 1
        if ch == '"':
            j = line.find('"', i + 1)
            if j < 0:
                raise ParseError("unterminated string constant", lineno, col, path)
            tokens.append(Token(STRING, line[i + 1:j], lineno, col))
            i = j + 1
            continue
        if line.startswith("->", i):
            tokens.append(Token(SYMBOL, "->", lineno, col))
            i += 2
            continue
        if ch.isdigit() or (ch in "+-." and i + 1 < n and (line[i + 1].isdigit() or line[i + 1] == ".")):
            j = i + 1
            while j < n and (line[j].isdigit() or line[j] in ".eE" or
                             (line[j] in "+-" and line[j - 1] in "eE")):
                j += 1
            tokens.append(Token(NUMBER, line[i:j], lineno, col))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            tokens.append(Token(IDENT, line[i:j], lineno, col))
            i = j
            continue
        if ch in "(){},&|!:=/":
            tokens.append(Token(SYMBOL, ch, lineno, col))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", lineno, col, path)
    tokens.append(Token(END, "", lineno, n + 1))
    return tokens


class _Cursor:
    def __init__(self, tokens, path):
        self.tokens = tokens
        self.pos = 0
        self.path = path

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != END:
            self.pos += 1
        return tok

    def expect(self, kind, text=None) -> Token:
        tok = self.cur
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            got = tok.text if tok.kind != END else "end of line"
            raise ParseError(f"expected {want!r}, found {got!r}",
                             tok.line, tok.column, self.path)
        return self.advance()

    def fail(self, message):
        tok = self.cur
        raise ParseError(message, tok.line, tok.column, self.path)


def _parse_literal(cur: _Cursor, predicates) -> Literal:
    negated = False
    if cur.cur.kind == SYMBOL and cur.cur.text == "!":
        cur.advance()
        negated = True
    name_tok = cur.expect(IDENT)
    pred = predicates.get(name_tok.text)
    if pred is None:
        raise ParseError(f"unknown predicate {name_tok.text!r}",
                         name_tok.line, name_tok.column, cur.path)
    cur.expect(SYMBOL, "(")
    args = []
    if not (cur.cur.kind == SYMBOL and cur.cur.text == ")"):
        while True:
            tok = cur.cur
            if tok.kind == STRING:
                args.append(Constant(tok.text))
                cur.advance()
            elif tok.kind == IDENT:
                if tok.text[0].isupper():
                    args.append(Variable(tok.text))
                else:
                    args.append(Constant(tok.text))
                cur.advance()
            else:
                cur.fail("expected a variable or constant argument")
            if cur.cur.kind == SYMBOL and cur.cur.text == ",":
                cur.advance()
                continue
            break
    cur.expect(SYMBOL, ")")
    if len(args) != pred.arity:
        raise ParseError(
            f"{pred.name} expects {pred.arity} argument(s), got {len(args)}",
            name_tok.line, name_tok.column, cur.path)
    return Literal(predicate=pred, args=tuple(args), negated=negated)


def _parse_predicate_decl(cur: _Cursor, predicates, path):
    cur.expect(IDENT, "predicate")
    name_tok = cur.expect(IDENT)
    cur.expect(SYMBOL, "/")
    arity_tok = cur.expect(NUMBER)
    try:
        arity = int(arity_tok.text)
        if arity < 0:
            raise ValueError
    except ValueError:
        raise ParseError(f"bad arity {arity_tok.text!r}",
                         arity_tok.line, arity_tok.column, path) from None
    cur.expect(SYMBOL, ":")
    kind_tok = cur.expect(IDENT)
    if kind_tok.text not in ("observed", "free"):
        raise ParseError("predicate kind must be 'observed' or 'free'",
                         kind_tok.line, kind_tok.column, path)
    if name_tok.text in predicates:
        raise ParseError(f"predicate {name_tok.text!r} declared twice",
                         name_tok.line, name_tok.column, path)
    cur.expect(END)
    predicates[name_tok.text] = Predicate(name_tok.text, arity, kind_tok.text)


def _parse_rule(cur: _Cursor, predicates, path) -> Rule:
    weight_tok = cur.expect(NUMBER)
    try:
        weight = float(weight_tok.text)
    except ValueError:
        raise ParseError(f"bad weight {weight_tok.text!r}",
                         weight_tok.line, weight_tok.column, path) from None
    if weight < 0.0:
        raise ParseError(f"negative rule weight {weight}",
                         weight_tok.line, weight_tok.column, path)
    cur.expect(SYMBOL, ":")
    body = [_parse_literal(cur, predicates)]
    while cur.cur.kind == SYMBOL and cur.cur.text == "&":
        cur.advance()
        body.append(_parse_literal(cur, predicates))
    cur.expect(SYMBOL, "->")
    head = [_parse_literal(cur, predicates)]
    while cur.cur.kind == SYMBOL and cur.cur.text == "|":
        cur.advance()
        head.append(_parse_literal(cur, predicates))
    cur.expect(END)
    return Rule(weight=weight, body=tuple(body), head=tuple(head))


def parse_program(text: str, path: str | None = None) -> RuleProgram:
    """Parse rule source into predicate declarations and rules."""
    predicates: dict[str, Predicate] = {}
    rules: list[Rule] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(raw, lineno, path)
        if tokens[0].kind == END:
            continue
        cur = _Cursor(tokens, path)
        first = tokens[0]
        if first.kind == IDENT and first.text == "predicate":
            _parse_predicate_decl(cur, predicates, path)
        elif first.kind == NUMBER:
            rules.append(_parse_rule(cur, predicates, path))
        else:
            raise ParseError(
                "expected a predicate declaration or a weighted rule",
                first.line, first.column, path)
    return RuleProgram(predicates=predicates, rules=rules)


def _parse_constant_tok(cur: _Cursor):
    tok = cur.cur
    if tok.kind == STRING:
        cur.advance()
        return tok.text
    if tok.kind == IDENT:
        cur.advance()
        return tok.text
    cur.fail("expected a constant")


def parse_domain(text: str, path: str | None = None) -> Domain:
    """Parse 'sort name = {...}' and 'sig Pred = (sort, ...)' declarations."""
    sorts: dict[str, tuple[str, ...]] = {}
    signatures: dict[str, tuple[str, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = _tokenize_line(raw, lineno, path)
        if tokens[0].kind == END:
            continue
        cur = _Cursor(tokens, path)
        first = tokens[0]
        if first.kind == IDENT and first.text == "sort":
            cur.advance()
            name_tok = cur.expect(IDENT)
            cur.expect(SYMBOL, "=")
            cur.expect(SYMBOL, "{")
            constants = [_parse_constant_tok(cur)]
            while cur.cur.kind == SYMBOL and cur.cur.text == ",":
                cur.advance()
                constants.append(_parse_constant_tok(cur))
            cur.expect(SYMBOL, "}")
            cur.expect(END)
            if name_tok.text in sorts:
                raise ParseError(f"sort {name_tok.text!r} declared twice",
                                 name_tok.line, name_tok.column, path)
            if len(set(constants)) != len(constants):
                raise ParseError(f"sort {name_tok.text!r} has duplicate constants",
                                 name_tok.line, name_tok.column, path)
            sorts[name_tok.text] = tuple(constants)
        elif first.kind == IDENT and first.text == "sig":
            cur.advance()
            pred_tok = cur.expect(IDENT)
            cur.expect(SYMBOL, "=")
            cur.expect(SYMBOL, "(")
            arg_sorts = []
            if not (cur.cur.kind == SYMBOL and cur.cur.text == ")"):
                arg_sorts.append(cur.expect(IDENT).text)
                while cur.cur.kind == SYMBOL and cur.cur.text == ",":
                    cur.advance()
                    arg_sorts.append(cur.expect(IDENT).text)
            cur.expect(SYMBOL, ")")
            cur.expect(END)
            if pred_tok.text in signatures:
                raise ParseError(f"signature for {pred_tok.text!r} declared twice",
                                 pred_tok.line, pred_tok.column, path)
            signatures[pred_tok.text] = tuple(arg_sorts)
        else:
            raise ParseError("expected a 'sort' or 'sig' declaration",
                             first.line, first.column, path)
    try:
        return Domain(sorts=sorts, signatures=signatures)
    except ValueError as exc:
        raise ParseError(str(exc), path=path) from None
