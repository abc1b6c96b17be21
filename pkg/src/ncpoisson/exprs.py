"""The small expression grammar shared by quiver documents and the CLI.

Expressions are rational combinations of products of generators:
rationals (``3``, ``-1/2``), idempotents ``e(v)``, products by juxtaposition
``a.b`` (read right to left, like the algebra product), tensor pairs
``x # y``, sums and differences.  Parentheses group subexpressions.
"""

from __future__ import annotations

from fractions import Fraction

from .ncalg import Gen, NCElement, TensorElement, Word, idword


class ExprError(ValueError):
    """Malformed expression."""


_PUNCT = {"+", "-", ".", "#", "(", ")", "/"}


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(ch)
            i += 1
            continue
        if ch.isalnum() or ch in "_*":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] in "_*"):
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        raise ExprError(f"unexpected character {ch!r} at position {i}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[str], symbols: dict[str, Gen], vertices: set[str]):
        self.tokens = tokens
        self.pos = 0
        self.symbols = symbols
        self.vertices = vertices

    def peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> str:
        if self.pos >= len(self.tokens):
            raise ExprError("unexpected end of expression")
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.next()
        if got != tok:
            raise ExprError(f"expected {tok!r}, got {got!r}")

    # expr := ['-'] term (('+'|'-') term)*
    def expr(self):
        negate = False
        if self.peek() in ("+", "-"):
            negate = self.next() == "-"
        acc = self.term()
        if negate:
            acc = _negate(acc)
        while self.peek() in ("+", "-"):
            op = self.next()
            rhs = self.term()
            if op == "-":
                rhs = _negate(rhs)
            acc = _add(acc, rhs)
        return acc

    # term := product ['#' product]
    def term(self):
        left = self.product()
        if self.peek() == "#":
            self.next()
            right = self.product()
            if not isinstance(left, NCElement) or not isinstance(right, NCElement):
                raise ExprError("nested tensors are not supported")
            return TensorElement.of(left, right)
        return left

    # product := factor ('.' factor)*
    def product(self):
        acc = self.factor()
        while self.peek() == ".":
            self.next()
            rhs = self.factor()
            acc = _mul(acc, rhs)
        return acc

    def factor(self):
        tok = self.next()
        if tok == "(":
            val = self.expr()
            self.expect(")")
            return val
        if tok == "e" and self.peek() == "(":
            self.next()
            vtx = self.next()
            self.expect(")")
            if vtx not in self.vertices:
                raise ExprError(f"unknown vertex {vtx!r}")
            return NCElement.idempotent(vtx)
        if tok.lstrip("-").isdigit():
            num = int(tok)
            if self.peek() == "/":
                self.next()
                den = self.next()
                if not den.isdigit() or int(den) == 0:
                    raise ExprError(f"invalid denominator {den!r}")
                return Fraction(num, int(den))
            return Fraction(num)
        if tok in self.symbols:
            return NCElement.generator(self.symbols[tok])
        raise ExprError(f"unknown symbol {tok!r}")


def _negate(x):
    if isinstance(x, Fraction):
        return -x
    return -x


def _add(x, y):
    if isinstance(x, Fraction) and isinstance(y, Fraction):
        return x + y
    if type(x) is not type(y):
        raise ExprError("cannot add values of different kinds")
    return x + y


def _mul(x, y):
    if isinstance(x, Fraction):
        if isinstance(y, Fraction):
            return x * y
        return y.scale(x)
    if isinstance(y, Fraction):
        return x.scale(y)
    if isinstance(x, NCElement) and isinstance(y, NCElement):
        return x * y
    raise ExprError("cannot multiply these values")


def parse_expression(
    text: str, symbols: dict[str, Gen], vertices: set[str]
) -> NCElement | TensorElement:
    """Parse an expression over the given generators and vertices."""
    parser = _Parser(_tokenize(text), symbols, vertices)
    val = parser.expr()
    if parser.peek() is not None:
        raise ExprError(f"trailing input at token {parser.peek()!r}")
    if isinstance(val, Fraction):
        raise ExprError("bare scalar is not an algebra element; multiply by e(v)")
    return val


def parse_nc(text: str, symbols: dict[str, Gen], vertices: set[str]) -> NCElement:
    val = parse_expression(text, symbols, vertices)
    if not isinstance(val, NCElement):
        raise ExprError("expected an algebra element, got a tensor")
    return val


def parse_tensor(text: str, symbols: dict[str, Gen], vertices: set[str]) -> TensorElement:
    val = parse_expression(text, symbols, vertices)
    if isinstance(val, NCElement):
        raise ExprError("expected a tensor expression x # y")
    return val


def _render_word(w: Word) -> str:
    if not w.gens:
        return f"e({w.vertex})"
    return ".".join(g.name for g in w.gens)


def _render_coeff(c: Fraction, body: str) -> str:
    if c == 1:
        return body
    if c == -1:
        return f"-{body}"
    return f"{c}.{body}"


def render_nc(x: NCElement) -> str:
    """Render an element back into the expression grammar (round-trips)."""
    if x.is_zero():
        return "0"
    parts = []
    for w in sorted(x.terms, key=Word.sort_key):
        parts.append(_render_coeff(x.terms[w], _render_word(w)))
    return _join(parts)


def render_tensor(t: TensorElement) -> str:
    if t.is_zero():
        return "0"
    parts = []
    for (u, v) in sorted(t.terms, key=lambda p: (p[0].sort_key(), p[1].sort_key())):
        body = f"{_render_word(u)} # {_render_word(v)}"
        c = t.terms[(u, v)]
        if c == 1:
            parts.append(body)
        elif c == -1:
            parts.append(f"-({body})")
        else:
            parts.append(f"{c}.({body})")
    return _join(parts)


def _join(parts: list[str]) -> str:
    out = parts[0]
    for p in parts[1:]:
        if p.startswith("-"):
            out += f" - {p[1:]}"
        else:
            out += f" + {p}"
    return out
