"""Lattice-linear expressions: AST, parser, printer, evaluation.

An expression is built from positional variables t1..tn with rational
scaling, addition, and the binary lattice joins/meets.  Absolute value,
positive/negative part, and subtraction are surface syntax only; the
parser expands them, so the core AST has exactly five node kinds.

Grammar (whitespace-insensitive)::

    expr     := term (("+" | "-") term)*
    term     := meetchain ("\\/" meetchain)*
    meetchain:= factor ("/\\" factor)*
    factor   := rational "*" factor | "|" expr "|" | factor "^+"
              | factor "^-" | "(" expr ")" | var
    var      := "t" positive-integer
    rational := ["-"] integer | ["-"] integer "/" positive-integer

"/\\" binds tighter than "\\/"; both bind tighter than "+"/"-"; all are
left-associative.  The leading "-" on a rational is accepted so that
printed negative coefficients round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ArityError, DimensionError, ExprSyntaxError
from .qmath import to_fraction


@dataclass(frozen=True)
class Var:
    """Positional variable t<index>, 1-based."""

    index: int


@dataclass(frozen=True)
class Scale:
    """Rational multiple of a subexpression."""

    coeff: Fraction
    child: "Expr"


@dataclass(frozen=True)
class Add:
    """Sum of two subexpressions."""

    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sup:
    """Pointwise maximum (lattice join)."""

    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Inf:
    """Pointwise minimum (lattice meet)."""

    left: "Expr"
    right: "Expr"


Expr = Var | Scale | Add | Sup | Inf


def abs_expr(e: Expr) -> Expr:
    """|e| as core syntax: e join (-1)*e."""
    return Sup(e, Scale(Fraction(-1), e))


def pos_part(e: Expr) -> Expr:
    """e^+ as core syntax: e join 0*e."""
    return Sup(e, Scale(Fraction(0), e))


def neg_part(e: Expr) -> Expr:
    """e^- as core syntax: (-1)*e join 0*e."""
    return Sup(Scale(Fraction(-1), e), Scale(Fraction(0), e))


def sub_expr(left: Expr, right: Expr) -> Expr:
    """left - right as core syntax: left + (-1)*right."""
    return Add(left, Scale(Fraction(-1), right))


def max_var_index(e: Expr) -> int:
    match e:
        case Var(index=i):
            return i
        case Scale(child=c):
            return max_var_index(c)
        case Add(left=l, right=r) | Sup(left=l, right=r) | Inf(left=l, right=r):
            return max(max_var_index(l), max_var_index(r))
    raise TypeError(f"not an expression node: {e!r}")


def var_indices(e: Expr) -> frozenset[int]:
    """Set of variable indices that occur syntactically in e."""
    match e:
        case Var(index=i):
            return frozenset((i,))
        case Scale(child=c):
            return var_indices(c)
        case Add(left=l, right=r) | Sup(left=l, right=r) | Inf(left=l, right=r):
            return var_indices(l) | var_indices(r)
    raise TypeError(f"not an expression node: {e!r}")


def node_count(e: Expr) -> int:
    match e:
        case Var():
            return 1
        case Scale(child=c):
            return 1 + node_count(c)
        case Add(left=l, right=r) | Sup(left=l, right=r) | Inf(left=l, right=r):
            return 1 + node_count(l) + node_count(r)
    raise TypeError(f"not an expression node: {e!r}")


def eval_expr(e: Expr, x) -> Fraction:
    """Evaluate at a rational vector; length must cover every variable."""
    xs = tuple(to_fraction(v) for v in x)

    def rec(node: Expr) -> Fraction:
        match node:
            case Var(index=i):
                if i > len(xs):
                    raise DimensionError(
                        f"variable t{i} needs a vector of length >= {i}, got {len(xs)}"
                    )
                return xs[i - 1]
            case Scale(coeff=c, child=ch):
                return to_fraction(c) * rec(ch)
            case Add(left=l, right=r):
                return rec(l) + rec(r)
            case Sup(left=l, right=r):
                return max(rec(l), rec(r))
            case Inf(left=l, right=r):
                return min(rec(l), rec(r))
        raise TypeError(f"not an expression node: {node!r}")

    return rec(e)


def eval_coordinatewise(e: Expr, vectors, dim: int) -> tuple[Fraction, ...]:
    """Evaluate with vector-valued variables, lattice ops acting per coordinate.

    This is evaluation inside the coordinate lattice R^dim: Add is vector
    addition, Sup/Inf are coordinatewise max/min.
    """
    vecs = [tuple(to_fraction(v) for v in w) for w in vectors]
    for w in vecs:
        if len(w) != dim:
            raise DimensionError(f"expected vectors of length {dim}, got {len(w)}")

    def rec(node: Expr) -> tuple[Fraction, ...]:
        match node:
            case Var(index=i):
                if i > len(vecs):
                    raise ArityError(
                        f"variable t{i} has no image among {len(vecs)} vectors"
                    )
                return vecs[i - 1]
            case Scale(coeff=c, child=ch):
                cc = to_fraction(c)
                return tuple(cc * v for v in rec(ch))
            case Add(left=l, right=r):
                return tuple(a + b for a, b in zip(rec(l), rec(r)))
            case Sup(left=l, right=r):
                return tuple(max(a, b) for a, b in zip(rec(l), rec(r)))
            case Inf(left=l, right=r):
                return tuple(min(a, b) for a, b in zip(rec(l), rec(r)))
        raise TypeError(f"not an expression node: {node!r}")

    return rec(e)


def substitute(e: Expr, images) -> Expr:
    """Replace t_i by images[i-1]; the result ranges over the images' arity."""
    imgs = tuple(images)

    def rec(node: Expr) -> Expr:
        match node:
            case Var(index=i):
                if i > len(imgs):
                    raise ArityError(
                        f"variable t{i} has no image among {len(imgs)} expressions"
                    )
                return imgs[i - 1]
            case Scale(coeff=c, child=ch):
                return Scale(c, rec(ch))
            case Add(left=l, right=r):
                return Add(rec(l), rec(r))
            case Sup(left=l, right=r):
                return Sup(rec(l), rec(r))
            case Inf(left=l, right=r):
                return Inf(rec(l), rec(r))
        raise TypeError(f"not an expression node: {node!r}")

    return rec(e)


# ---------------------------------------------------------------------------
# tokenizer / parser
# ---------------------------------------------------------------------------

_SIMPLE_TOKENS = {"+": "PLUS", "-": "MINUS", "*": "STAR", "|": "PIPE",
                  "(": "LPAREN", ")": "RPAREN"}


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _SIMPLE_TOKENS:
            tokens.append((_SIMPLE_TOKENS[ch], None, i))
            i += 1
            continue
        if ch == "\\":
            if text.startswith("\\/", i):
                tokens.append(("SUP", None, i))
                i += 2
                continue
            raise ExprSyntaxError("stray backslash", i)
        if ch == "/":
            if text.startswith("/\\", i):
                tokens.append(("INF", None, i))
                i += 2
                continue
            tokens.append(("SLASH", None, i))
            i += 1
            continue
        if ch == "^":
            if text.startswith("^+", i):
                tokens.append(("POSPART", None, i))
                i += 2
                continue
            if text.startswith("^-", i):
                tokens.append(("NEGPART", None, i))
                i += 2
                continue
            raise ExprSyntaxError("'^' must be followed by '+' or '-'", i)
        if ch == "t":
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise ExprSyntaxError("'t' must be followed by a variable index", i)
            index = int(text[i + 1 : j])
            if index < 1:
                raise ExprSyntaxError("variable indices start at t1", i)
            tokens.append(("VAR", index, i))
            i = j
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", int(text[i:j]), i))
            i = j
            continue
        raise ExprSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("EOF", None, n))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.next()
        if tok[0] != kind:
            raise ExprSyntaxError(f"expected {what}", tok[2])
        return tok

    def parse_expr(self) -> Expr:
        node = self.parse_sup()
        while self.peek()[0] in ("PLUS", "MINUS"):
            op = self.next()[0]
            right = self.parse_sup()
            node = Add(node, right) if op == "PLUS" else sub_expr(node, right)
        return node

    def parse_sup(self) -> Expr:
        node = self.parse_inf()
        while self.peek()[0] == "SUP":
            self.next()
            node = Sup(node, self.parse_inf())
        return node

    def parse_inf(self) -> Expr:
        node = self.parse_factor()
        while self.peek()[0] == "INF":
            self.next()
            node = Inf(node, self.parse_factor())
        return node

    def parse_factor(self) -> Expr:
        node = self.parse_primary()
        while self.peek()[0] in ("POSPART", "NEGPART"):
            kind = self.next()[0]
            node = pos_part(node) if kind == "POSPART" else neg_part(node)
        return node

    def parse_rational(self, negative: bool) -> Fraction:
        tok = self.expect("INT", "an integer")
        num = -tok[1] if negative else tok[1]
        if self.peek()[0] == "SLASH":
            self.next()
            den_tok = self.expect("INT", "a positive denominator")
            if den_tok[1] == 0:
                raise ExprSyntaxError("zero denominator", den_tok[2])
            return Fraction(num, den_tok[1])
        return Fraction(num)

    def parse_primary(self) -> Expr:
        kind, value, at = self.peek()
        if kind == "VAR":
            self.next()
            return Var(value)
        if kind in ("INT", "MINUS"):
            negative = kind == "MINUS"
            if negative:
                self.next()
            coeff = self.parse_rational(negative)
            self.expect("STAR", "'*' after a coefficient")
            return Scale(coeff, self.parse_factor())
        if kind == "PIPE":
            self.next()
            inner = self.parse_expr()
            self.expect("PIPE", "a closing '|'")
            return abs_expr(inner)
        if kind == "LPAREN":
            self.next()
            inner = self.parse_expr()
            self.expect("RPAREN", "a closing ')'")
            return inner
        raise ExprSyntaxError("expected a variable, coefficient, '|', or '('", at)


def parse(text: str, arity: int) -> Expr:
    """Parse expression text; every variable index must be <= arity."""
    if arity < 1:
        raise ArityError("arity must be at least 1")
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    kind, _, at = parser.peek()
    if kind != "EOF":
        raise ExprSyntaxError("unexpected trailing input", at)
    highest = max_var_index(node)
    if highest > arity:
        raise ArityError(
            f"variable t{highest} exceeds declared arity {arity}"
        )
    return node


# ---------------------------------------------------------------------------
# printer
# ---------------------------------------------------------------------------


def _format_coeff(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def _left_spine(node: Expr, kind) -> list[Expr]:
    parts: list[Expr] = []
    while isinstance(node, kind):
        parts.append(node.right)
        node = node.left
    parts.append(node)
    parts.reverse()
    return parts


def print_expr(e: Expr) -> str:
    """Canonical text form; parse(print_expr(e)) reproduces e exactly."""

    def wrap(node: Expr) -> str:
        if isinstance(node, Var):
            return render(node)
        return f"({render(node)})"

    def render(node: Expr) -> str:
        match node:
            case Var(index=i):
                return f"t{i}"
            case Scale(coeff=c, child=ch):
                return f"{_format_coeff(c)}*{wrap(ch)}"
            case Add():
                terms = _left_spine(node, Add)
                out = [wrap(terms[0])]
                for term in terms[1:]:
                    if isinstance(term, Scale) and Fraction(term.coeff) == -1:
                        out.append(f" - {wrap(term.child)}")
                    else:
                        out.append(f" + {wrap(term)}")
                return "".join(out)
            case Sup():
                return " \\/ ".join(wrap(p) for p in _left_spine(node, Sup))
            case Inf():
                return " /\\ ".join(wrap(p) for p in _left_spine(node, Inf))
        raise TypeError(f"not an expression node: {node!r}")

    return render(e)
