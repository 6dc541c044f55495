"""Weighted models over the one-letter alphabet.

Unary weighted automata compute ``I^T M^n F``; unary weighted context-free
grammars are evaluated by a dynamic program over the word length; the WMSO
fragment here has constants, ``+``, ``*`` and the sum/product quantifiers.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .convert import _check_affine, affine_normalize, linear_matrix
from .engines import PolySystem
from .errors import ArityMismatch, ParseError
from .polycore import MultiPoly

__all__ = ["UnaryWeightedAutomaton", "wa_eval", "wa_from_linear_system",
           "wa_to_linear_system", "WcfgRule", "WcfgUnary", "wcfg_weights",
           "wcfg_eval", "wcfg_catalan_view", "catalan_grammar",
           "WmsoExpr", "Const", "Add", "Mul", "SumQ", "ProdQ", "wmso_eval",
           "parse_wmso", "wmso_nn"]


def _frac_list(v):
    return [Fraction(x) for x in v]


@dataclass(frozen=True)
class UnaryWeightedAutomaton:
    """``I^T M^n F`` over the rationals."""

    M: tuple
    I: tuple
    F: tuple

    def __post_init__(self):
        M = tuple(tuple(_frac_list(row)) for row in self.M)
        d = len(M)
        if any(len(row) != d for row in M):
            raise ArityMismatch("transition matrix must be square")
        if len(self.I) != d or len(self.F) != d:
            raise ArityMismatch(f"initial and final vectors must have length {d}")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "I", tuple(_frac_list(self.I)))
        object.__setattr__(self, "F", tuple(_frac_list(self.F)))

    @property
    def dimension(self) -> int:
        return len(self.M)


def wa_eval(a: UnaryWeightedAutomaton, n: int) -> Fraction:
    if n < 0:
        raise ValueError("n must be nonnegative")
    d = a.dimension
    row = list(a.I)
    for _ in range(n):
        row = [sum((row[i] * a.M[i][j] for i in range(d)), Fraction(0)) for j in range(d)]
    return sum((x * y for x, y in zip(row, a.F)), Fraction(0))


def wa_from_linear_system(s: PolySystem) -> UnaryWeightedAutomaton:
    """The state at ``n`` is ``I^T M^n``, so ``M`` is the transposed step matrix."""
    _check_affine(s)
    s = affine_normalize(s)
    L = linear_matrix(s)
    k = s.k
    M = [[L[j][i] for j in range(k)] for i in range(k)]
    F = [Fraction(int(i == s.output)) for i in range(k)]
    return UnaryWeightedAutomaton(M, s.init, F)


def wa_to_linear_system(a: UnaryWeightedAutomaton) -> PolySystem:
    """Sequence ``i`` is coordinate ``i`` of ``I^T M^n``.

    When ``F`` is a unit vector its coordinate is the output; otherwise one more
    sequence holding ``<state, F>`` is appended.
    """
    d = a.dimension
    g = MultiPoly.gens(d)
    rules = []
    for j in range(d):
        r = MultiPoly.zero(d)
        for i in range(d):
            if a.M[i][j]:
                r = r + g[i].scale(a.M[i][j])
        rules.append(r)
    units = [i for i, f in enumerate(a.F) if f]
    if len(units) == 1 and a.F[units[0]] == 1:
        return PolySystem(a.I, rules, units[0])
    # y_{n+1} = <state_{n+1}, F> is linear in state_n
    y = MultiPoly.zero(d)
    for r, f in zip(rules, a.F):
        if f:
            y = y + r.scale(f)
    rules = [r.extend(d + 1) for r in rules] + [y.extend(d + 1)]
    y0 = sum((x * f for x, f in zip(a.I, a.F)), Fraction(0))
    return PolySystem(tuple(a.I) + (y0,), rules, d)


# -- grammars -----------------------------------------------------------------

@dataclass(frozen=True)
class WcfgRule:
    """``lhs -> a`` when ``children`` is empty, else ``lhs -> a B C``."""

    lhs: int
    children: tuple
    weight: Fraction

    def __post_init__(self):
        object.__setattr__(self, "weight", Fraction(self.weight))
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) not in (0, 2):
            raise ValueError("rules must have shape N -> a or N -> a N' N''")


@dataclass(frozen=True)
class WcfgUnary:
    nonterminals: tuple
    rules: tuple
    start: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nonterminals", tuple(self.nonterminals))
        object.__setattr__(self, "rules", tuple(self.rules))
        n = len(self.nonterminals)
        for r in self.rules:
            if not all(0 <= i < n for i in (r.lhs, *r.children)):
                raise ArityMismatch("rule refers to an undeclared nonterminal")
        if not 0 <= self.start < n:
            raise ArityMismatch("start symbol out of range")


def catalan_grammar() -> WcfgUnary:
    """``X -> a`` and ``X -> a X X``, both with weight 1."""
    return WcfgUnary(("X",), (WcfgRule(0, (), 1), WcfgRule(0, (0, 0), 1)))


def wcfg_weights(g: WcfgUnary, length: int) -> list:
    """``table[l][N]`` = total weight of derivation trees of ``a^l`` from ``N``, for ``l <= length``."""
    nt = len(g.nonterminals)
    table = [[Fraction(0)] * nt]
    for ell in range(1, length + 1):
        row = [Fraction(0)] * nt
        for r in g.rules:
            if not r.children:
                if ell == 1:
                    row[r.lhs] += r.weight
                continue
            b, c = r.children
            acc = Fraction(0)
            for l1 in range(1, ell - 1):
                acc += table[l1][b] * table[ell - 1 - l1][c]
            row[r.lhs] += r.weight * acc
        table.append(row)
    return table


def wcfg_eval(g: WcfgUnary, n: int) -> Fraction:
    """Weight of the word of length ``n`` from the start symbol."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return wcfg_weights(g, n)[n][g.start]


def wcfg_catalan_view(g: WcfgUnary, n: int) -> Fraction:
    """Shifted view: the binary rule consumes one terminal and every leaf another,
    so a tree with ``n`` binary nodes spells a word of length ``2n + 1``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return wcfg_eval(g, 2 * n + 1)


# -- WMSO fragment -------------------------------------------------------------

class WmsoExpr:
    """Base class; subclasses are frozen dataclasses."""

    def free_vars(self) -> frozenset:
        raise NotImplementedError


@dataclass(frozen=True)
class Const(WmsoExpr):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))

    def free_vars(self):
        return frozenset()

    def __str__(self):
        return str(self.value)


@dataclass(frozen=True)
class Add(WmsoExpr):
    left: WmsoExpr
    right: WmsoExpr

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def __str__(self):
        return f"(+ {self.left} {self.right})"


@dataclass(frozen=True)
class Mul(WmsoExpr):
    left: WmsoExpr
    right: WmsoExpr

    def free_vars(self):
        return self.left.free_vars() | self.right.free_vars()

    def __str__(self):
        return f"(* {self.left} {self.right})"


def _check_binder(var, body, bound=()):
    # a variable may be bound only once along any path
    def walk(e, seen):
        if isinstance(e, (SumQ, ProdQ)):
            if e.var in seen:
                raise ValueError(f"variable {e.var!r} is bound twice on one path")
            walk(e.body, seen | {e.var})
        elif isinstance(e, (Add, Mul)):
            walk(e.left, seen)
            walk(e.right, seen)
    walk(body, frozenset({var}))


@dataclass(frozen=True)
class SumQ(WmsoExpr):
    var: str
    body: WmsoExpr

    def __post_init__(self):
        _check_binder(self.var, self.body)

    def free_vars(self):
        return self.body.free_vars() - {self.var}

    def __str__(self):
        return f"(sum {self.var} {self.body})"


@dataclass(frozen=True)
class ProdQ(WmsoExpr):
    var: str
    body: WmsoExpr

    def __post_init__(self):
        _check_binder(self.var, self.body)

    def free_vars(self):
        return self.body.free_vars() - {self.var}

    def __str__(self):
        return f"(prod {self.var} {self.body})"


def wmso_eval(e: WmsoExpr, n: int) -> Fraction:
    """Over ``a^n`` all positions look alike, so a quantified body has the same
    value at every position: sums give ``n * body`` and products ``body ** n``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if isinstance(e, Const):
        return e.value
    if isinstance(e, Add):
        return wmso_eval(e.left, n) + wmso_eval(e.right, n)
    if isinstance(e, Mul):
        return wmso_eval(e.left, n) * wmso_eval(e.right, n)
    if isinstance(e, SumQ):
        return n * wmso_eval(e.body, n)
    if isinstance(e, ProdQ):
        return wmso_eval(e.body, n) ** n
    raise TypeError(f"not a WMSO expression: {e!r}")


def wmso_nn() -> WmsoExpr:
    """``prod_x sum_y 1``, whose value on ``a^n`` is ``n^n``."""
    return ProdQ("x", SumQ("y", Const(1)))


def _tokens(text):
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch in "()":
            yield ch, line, col
            i += 1
            col += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace() and text[j] not in "()":
            j += 1
        yield text[i:j], line, col
        col += j - i
        i = j


_OPS = {"+": Add, "*": Mul, "sum": SumQ, "prod": ProdQ}


def _atom_value(tok, line, col):
    from .dsl import parse_rational
    try:
        return parse_rational(tok)
    except ParseError:
        raise ParseError(f"expected a rational constant, got {tok!r}", line, col) from None


def parse_wmso(text: str) -> WmsoExpr:
    """S-expressions: ``c``, ``(+ e e)``, ``(* e e)``, ``(sum x e)``, ``(prod x e)``."""
    toks = list(_tokens(text))
    pos = 0

    def expect_more():
        if pos >= len(toks):
            raise ParseError("unexpected end of input", *(toks[-1][1:] if toks else (1, 1)))

    def parse():
        nonlocal pos
        expect_more()
        tok, line, col = toks[pos]
        pos += 1
        if tok == ")":
            raise ParseError("unexpected ')'", line, col)
        if tok != "(":
            return Const(_atom_value(tok, line, col))
        expect_more()
        op, oline, ocol = toks[pos]
        pos += 1
        if op not in _OPS:
            raise ParseError(f"unknown operator {op!r}", oline, ocol)
        if op in ("sum", "prod"):
            expect_more()
            var, vline, vcol = toks[pos]
            pos += 1
            if not var.isidentifier():
                raise ParseError(f"expected a variable name, got {var!r}", vline, vcol)
            body = parse()
            try:
                node = _OPS[op](var, body)
            except ValueError as exc:
                raise ParseError(str(exc), oline, ocol) from None
        else:
            node = _OPS[op](parse(), parse())
        expect_more()
        tok, line, col = toks[pos]
        pos += 1
        if tok != ")":
            raise ParseError(f"expected ')', got {tok!r}", line, col)
        return node

    e = parse()
    if pos != len(toks):
        tok, line, col = toks[pos]
        raise ParseError(f"trailing input {tok!r}", line, col)
    return e
