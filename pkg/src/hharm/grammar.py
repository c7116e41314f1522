"""Text grammar for polynomial input.

::

    rational ::= int | int "/" int
    atom     ::= rational | var | "(" expr ")"
    power    ::= atom ["^" uint]
    term     ::= power {"*" power}
    expr     ::= ["+"|"-"] term {("+"|"-") term}

There is no implicit multiplication; whitespace between tokens is ignored.
The canonical printer (``str(poly)``) emits terms in canonical order with
explicit ``*``, and ``parse_poly(str(p), sig) == p`` for every polynomial.
"""

from __future__ import annotations

from fractions import Fraction

from .poly import Polynomial, Signature


class ParseError(ValueError):
    """Syntax or name error, pointing at a byte offset in the input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


def _byte_offset(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", _byte_offset(text, i))
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, signature: Signature):
        self.text = text
        self.signature = signature
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            self.fail(f"expected {kind}, found {tok[1]!r}" if tok[0] != "end" else f"expected {kind}, found end of input")
        self.pos += 1
        return tok

    def fail(self, message):
        raise ParseError(message, _byte_offset(self.text, self.tokens[self.pos][2]))

    def parse(self) -> Polynomial:
        value = self.expr()
        if self.peek()[0] != "end":
            self.fail(f"unexpected trailing input {self.peek()[1]!r}")
        return value

    def expr(self) -> Polynomial:
        negate = False
        if self.peek()[0] in ("+", "-"):
            negate = self.take()[0] == "-"
        value = self.term()
        if negate:
            value = -value
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value - rhs if op == "-" else value + rhs
        return value

    def term(self) -> Polynomial:
        value = self.power()
        while self.peek()[0] == "*":
            self.take()
            value = value * self.power()
        return value

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            if self.peek()[0] == "-":
                self.fail("negative exponent")
            tok = self.take("int")
            return base ** int(tok[1])
        return base

    def atom(self) -> Polynomial:
        kind, value, offset = self.peek()
        if kind == "int":
            self.take()
            num = int(value)
            if self.peek()[0] == "/":
                self.take()
                den_tok = self.take("int")
                den = int(den_tok[1])
                if den == 0:
                    raise ParseError("zero denominator", _byte_offset(self.text, den_tok[2]))
                return Polynomial.constant(self.signature, Fraction(num, den))
            return Polynomial.constant(self.signature, num)
        if kind == "name":
            self.take()
            try:
                index = self.signature.index(value)
            except KeyError:
                raise ParseError(f"unknown variable {value!r}", _byte_offset(self.text, offset)) from None
            return Polynomial.variable(self.signature, index)
        if kind == "(":
            self.take()
            inner = self.expr()
            self.take(")")
            return inner
        self.fail(f"expected a rational, variable or '(', found {value!r}" if kind != "end" else "unexpected end of input")


def parse_poly(text: str, signature: Signature) -> Polynomial:
    """Parse UTF-8 text into an exact polynomial over the given signature."""
    return _Parser(text, signature).parse()
