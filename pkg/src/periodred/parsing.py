"""Text front end: numbers, polynomials, rational functions, sets, problem files.

The printers live next to the types (``str()`` of each object is its
canonical form); everything printed here parses back to an equal object.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exactnum import AlgNum
from .poly import Poly, RatFunc
from .semialg import BasicSet, Condition, IntegralPiece, SemiAlgSet

__all__ = [
    "ParseError",
    "parse_algnum",
    "parse_poly",
    "parse_ratfunc",
    "parse_set",
    "parse_problem",
    "Problem",
    "infer_vars",
]

_PREFERRED = ("x", "y", "z", "t", "s", "u", "v", "w")


class ParseError(ValueError):
    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>>=|<=|≥|≤|==|[-+*/^(){},|<>=]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _tokenize(text: str, line: int = 1, col0: int = 1) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = len(text[pos:]) - len(text[pos:].lstrip()) + pos
            raise ParseError(f"unexpected character {text[bad]!r}", line, col0 + bad)
        kind = m.lastgroup
        tok = m.group(kind)
        start = m.start(kind)
        if tok == "≥":
            tok = ">="
        elif tok == "≤":
            tok = "<="
        elif tok == "==":
            tok = "="
        toks.append(_Tok(kind, tok, start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, vars, line: int = 1, col0: int = 1):
        self.text = text
        self.line = line
        self.col0 = col0
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        self.vars = tuple(vars)

    # -- token helpers ------------------------------------------------------
    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str, tok: _Tok | None = None):
        tok = tok or self.tok
        raise ParseError(msg, self.line, self.col0 + tok.pos)

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {found!r}")

    def at_end(self) -> bool:
        return self.tok.kind == "end"

    # -- expressions --------------------------------------------------------
    def const(self, c) -> RatFunc:
        return RatFunc.from_poly(Poly.const(c, self.vars))

    def expr(self) -> RatFunc:
        left = self.term()
        while True:
            if self.accept("+"):
                left = left + self.term()
            elif self.accept("-"):
                left = left - self.term()
            else:
                return left

    def term(self) -> RatFunc:
        left = self.unary()
        while True:
            if self.accept("*"):
                left = left * self.unary()
            elif self.tok.kind == "op" and self.tok.text == "/":
                tok = self.tok
                self.i += 1
                right = self.unary()
                if right.num.is_zero():
                    self.error("division by zero", tok)
                left = left / right
            else:
                return left

    def unary(self) -> RatFunc:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.accept("^"):
            neg = self.accept("-")
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                self.error("exponent must be an integer")
            self.i += 1
            k = int(tok.text)
            if neg:
                if base.num.is_zero():
                    self.error("zero raised to a negative power", tok)
                k = -k
            return base ** k
        return base

    def atom(self) -> RatFunc:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return self.const(Fraction(tok.text))
        if tok.kind == "name":
            self.i += 1
            if tok.text == "sqrt":
                self.expect("(")
                arg = self.tok
                if arg.kind != "num" or not arg.text.isdigit():
                    self.error("sqrt takes a nonnegative integer literal")
                self.i += 1
                self.expect(")")
                return self.const(AlgNum(0, 1, int(arg.text)) if int(arg.text) else AlgNum(0))
            if tok.text not in self.vars:
                self.error(f"unknown variable {tok.text!r}", tok)
            return RatFunc.from_poly(Poly.var(tok.text, self.vars))
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        self.error(f"unexpected {tok.text or 'end of input'!r}")

    # -- sets ---------------------------------------------------------------
    def relation(self):
        if self.tok.kind == "op" and self.tok.text in (">", ">=", "<", "<=", "="):
            r = self.tok.text
            self.i += 1
            return r
        return None

    def polynomial(self, r: RatFunc, tok: _Tok) -> Poly:
        if not r.is_polynomial():
            self.error("sign conditions must be polynomial", tok)
        return r.num * r.den.constant_value().inverse()

    def conditions(self) -> list[Condition]:
        tok = self.tok
        left = self.polynomial(self.expr(), tok)
        rel = self.relation()
        if rel is None:
            self.error("expected a relation")
        out = []
        while rel is not None:
            tok = self.tok
            right = self.polynomial(self.expr(), tok)
            out.append(Condition(left - right, rel))
            left = right
            rel = self.relation()
        return out

    def basic(self) -> BasicSet:
        self.expect("{")
        conds = []
        if not self.accept("}"):
            conds.extend(self.conditions())
            while self.accept(","):
                conds.extend(self.conditions())
            self.expect("}")
        return BasicSet(self.vars, conds)

    def semialg(self) -> SemiAlgSet:
        if self.tok.kind == "name" and self.tok.text == "empty":
            self.i += 1
            return SemiAlgSet.empty(self.vars)
        pieces = [self.basic()]
        while self.accept("|"):
            pieces.append(self.basic())
        return SemiAlgSet(self.vars, pieces)

    def finish(self):
        if not self.at_end():
            self.error(f"unexpected trailing {self.tok.text!r}")


def infer_vars(*texts: str) -> tuple[str, ...]:
    names = []
    for text in texts:
        for m in re.finditer(r"[A-Za-z_][A-Za-z_0-9]*", text):
            n = m.group()
            if n not in ("sqrt", "empty") and n not in names:
                names.append(n)

    def key(n):
        if n in _PREFERRED:
            return (0, _PREFERRED.index(n), 0, n)
        m = re.fullmatch(r"([A-Za-z_]+)(\d+)", n)
        if m:
            return (1, 0, int(m.group(2)), m.group(1))
        return (2, 0, 0, n)

    return tuple(sorted(names, key=key))


def parse_algnum(text: str) -> AlgNum:
    p = _Parser(text, ())
    r = p.expr()
    p.finish()
    if not r.is_polynomial():
        p.error("not a constant")
    return r.num.constant_value() / r.den.constant_value()


def parse_ratfunc(text: str, vars=None) -> RatFunc:
    vars = tuple(vars) if vars is not None else infer_vars(text)
    p = _Parser(text, vars)
    r = p.expr()
    p.finish()
    return r


def parse_poly(text: str, vars=None) -> Poly:
    vars = tuple(vars) if vars is not None else infer_vars(text)
    p = _Parser(text, vars)
    tok = p.tok
    r = p.expr()
    p.finish()
    return p.polynomial(r, tok)


def parse_set(text: str, vars=None) -> SemiAlgSet:
    vars = tuple(vars) if vars is not None else infer_vars(text)
    p = _Parser(text, vars)
    s = p.semialg()
    p.finish()
    return s


@dataclass
class Problem:
    vars: tuple[str, ...]
    domain: SemiAlgSet
    integrand: RatFunc
    radicand: int = 0
    hints: dict = field(default_factory=dict)
    name: str = ""

    @property
    def dimension(self) -> int:
        return len(self.vars)

    def piece(self) -> IntegralPiece:
        return IntegralPiece(self.domain, self.integrand)


_KEYS = ("name", "vars", "domain", "integrand", "radicand", "hints")


def parse_problem(text: str) -> Problem:
    """Parse ``key: value`` lines; indented lines continue the previous value."""
    entries: dict[str, tuple[str, int, int]] = {}
    last = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if raw[:1].isspace() and last is not None:
            value, ln, col = entries[last]
            entries[last] = (value + " " + line.strip(), ln, col)
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value'", lineno, 1)
        key, value = line.split(":", 1)
        key = key.strip().lower()
        if key not in _KEYS:
            raise ParseError(f"unknown key {key!r}", lineno, 1)
        col = line.index(":") + 2 + (len(value) - len(value.lstrip()))
        entries[key] = (value.strip(), lineno, col)
        last = key
    for required in ("domain", "integrand"):
        if required not in entries:
            raise ParseError(f"missing key {required!r}", 1, 1)
    if "vars" in entries:
        vtext, ln, col = entries["vars"]
        vars = tuple(v.strip() for v in vtext.replace(",", " ").split())
        for v in vars:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v) or v in ("sqrt", "empty"):
                raise ParseError(f"bad variable name {v!r}", ln, col)
    else:
        vars = infer_vars(entries["domain"][0], entries["integrand"][0])
    radicand = 0
    if "radicand" in entries:
        rtext, ln, col = entries["radicand"]
        if not rtext.isdigit():
            raise ParseError("radicand must be a nonnegative integer", ln, col)
        radicand = int(rtext)

    def sub(key, fn):
        text_, ln, col = entries[key]
        p = _Parser(text_, vars, ln, col)
        out = fn(p)
        p.finish()
        return out

    domain = sub("domain", lambda p: p.semialg())
    integrand = sub("integrand", lambda p: p.expr())
    hints = {}
    if "hints" in entries:
        for item in entries["hints"][0].split(","):
            if "=" in item:
                k, v = item.split("=", 1)
                hints[k.strip()] = v.strip()
    name = entries.get("name", ("", 0, 0))[0]
    return Problem(vars, domain, integrand, radicand, hints, name)
