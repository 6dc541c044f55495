"""Text format for sequence definitions.

Expressions use integers, ``a/b`` fractions, identifiers, ``+ - * / ^`` and
parentheses; ``^`` binds tightest and is right-associative, unary minus binds
looser than ``^`` (``-x^2`` is ``-(x^2)``).  Decimal literals are rejected so
that every value stays exact.

A document is line oriented; ``#`` starts a comment::

    kind: poly_system
    vars: b, c
    init: 1, 1
    output: b
    b' = b*c
    c' = c + 1

Other kinds use ``next = expr`` (linear and simple recurrences over the window
variables), ``name:`` (oracle), ``row:``/``initial:``/``final:`` (automaton),
``X -> a X X : w`` lines (grammar) and ``expr:`` (WMSO s-expression).
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path

from .errors import (NegativeExponent, NonLinearRule, ParseError,
                     UnknownVariable)
from .polycore import MultiPoly

__all__ = ["KINDS", "MAX_EXPONENT", "MAX_TERMS", "MAX_COEFF_BITS", "MAX_DEPTH",
           "ExpressionTooLarge", "parse_rational", "parse_expr",
           "parse_rational_expr", "SequenceDoc", "parse_document", "serialize",
           "load", "build", "to_doc", "load_model"]

KINDS = ("poly_system", "linear_recurrence", "simple_recurrence",
         "rational_system", "oracle", "automaton", "wcfg", "wmso")

MAX_EXPONENT = 10_000
MAX_TERMS = 100_000
MAX_COEFF_BITS = 2 ** 20
MAX_DEPTH = 100


class ExpressionTooLarge(ParseError):
    """The expression is syntactically fine but would exceed a size limit."""


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"(?P<ws>[ \t\r\n]+)|(?P<num>[0-9]+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()])")
_RATIONAL = re.compile(r"[ \t]*([+-]?[0-9]+)(?:[ \t]*/[ \t]*([0-9]+))?[ \t]*")


def parse_rational(text: str, line: int = 1, column: int = 1) -> Fraction:
    """``"3"``, ``"-1/3"``; anything else (decimals included) is a ``ParseError``."""
    m = _RATIONAL.fullmatch(text)
    if not m:
        if re.search(r"[0-9]\.|\.[0-9]", text):
            raise ParseError(f"decimal literal {text.strip()!r}; write an exact fraction", line, column)
        raise ParseError(f"expected a rational literal, got {text.strip()!r}", line, column)
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError("zero denominator in literal", line, column)
    return Fraction(num, den)


def _tokenize(text, line0, col0):
    toks = []
    line, col = line0, col0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            ch = text[pos]
            if ch == "." and (pos + 1 < len(text) and text[pos + 1].isdigit()
                              or pos > 0 and text[pos - 1].isdigit()):
                raise ParseError("decimal literals are not allowed; write an exact fraction", line, col)
            raise ParseError(f"unexpected character {ch!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            toks.append((kind, tok, line, col))
        nl = tok.count("\n")
        if nl:
            line += nl
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    toks.append(("end", "", line, col))
    return toks


class _Parser:
    """Recursive descent over (numerator, denominator) pairs of polynomials."""

    def __init__(self, toks, names, rational):
        self.toks = toks
        self.i = 0
        self.names = names
        self.index = {n: i for i, n in enumerate(names)}
        self.nvars = len(names)
        self.rational = rational
        self.depth = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None, cls=ParseError):
        tok = tok or self.peek()
        raise cls(msg, tok[2], tok[3])

    def parse(self):
        v = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(f"unexpected {tok[1]!r}", tok)
        return v

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.fail(f"expression nested deeper than {MAX_DEPTH} levels", cls=ExpressionTooLarge)

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()
            w = self.term()
            v = self.add(v, w, op[1] == "-", op)
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op = self.take()
            w = self.unary()
            v = self.mul(v, w, op) if op[1] == "*" else self.div(v, w, op)
        return v

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            self.enter()
            n, d = self.unary()
            self.depth -= 1
            return (-n, d) if tok[1] == "-" else (n, d)
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            self.enter()
            e = self.unary()
            self.depth -= 1
            return self.pow(base, e, tok)
        return base

    def atom(self):
        tok = self.take()
        kind, text = tok[0], tok[1]
        if kind == "num":
            nxt = self.peek()
            if nxt[0] == "id" and nxt[3] == tok[3] + len(text) and nxt[2] == tok[2]:
                self.fail(f"unexpected {nxt[1]!r}", nxt)
            return MultiPoly.const(int(text), self.nvars), MultiPoly.const(1, self.nvars)
        if kind == "id":
            if text not in self.index:
                self.fail(f"unknown variable {text!r}", tok, UnknownVariable)
            return MultiPoly.var(self.index[text], self.nvars), MultiPoly.const(1, self.nvars)
        if kind == "op" and text == "(":
            self.enter()
            v = self.expr()
            self.depth -= 1
            close = self.take()
            if close[1] != ")" or close[0] != "op":
                self.fail("expected ')'", close)
            return v
        if kind == "end":
            self.fail("unexpected end of expression", tok)
        self.fail(f"unexpected {text!r}", tok)

    # arithmetic with size checks

    def check(self, p, tok):
        if len(p) > MAX_TERMS:
            self.fail(f"expression has more than {MAX_TERMS} terms", tok, ExpressionTooLarge)
        for c in p.coefficients():
            if c.numerator.bit_length() + c.denominator.bit_length() > MAX_COEFF_BITS:
                self.fail("coefficient too large", tok, ExpressionTooLarge)
        return p

    def product(self, a, b, tok):
        if len(a) * len(b) > 10 * MAX_TERMS:
            self.fail("product too large", tok, ExpressionTooLarge)
        return self.check(a * b, tok)

    def add(self, v, w, negate, tok):
        (n1, d1), (n2, d2) = v, w
        if negate:
            n2 = -n2
        if d1 == d2:
            return self.check(n1 + n2, tok), d1
        return (self.check(self.product(n1, d2, tok) + self.product(n2, d1, tok), tok),
                self.product(d1, d2, tok))

    def mul(self, v, w, tok):
        return self.product(v[0], w[0], tok), self.product(v[1], w[1], tok)

    def div(self, v, w, tok):
        n2, d2 = w
        if n2.is_zero():
            self.fail("division by zero", tok)
        if n2.is_constant() and d2.is_constant():
            q = d2.constant_term() / n2.constant_term()
            return self.check(v[0].scale(q), tok), v[1]
        if not self.rational:
            self.fail("division by a non-constant expression", tok)
        return self.product(v[0], d2, tok), self.product(v[1], n2, tok)

    def pow(self, base, e, tok):
        n, d = e
        if not (n.is_constant() and d.is_constant()):
            self.fail("exponent must be a constant", tok)
        ev = n.constant_term() / d.constant_term()
        if ev.denominator != 1:
            self.fail("exponent must be an integer", tok)
        k = ev.numerator
        if k < 0:
            self.fail("negative exponent", tok, NegativeExponent)
        if k > MAX_EXPONENT:
            self.fail(f"exponent larger than {MAX_EXPONENT}", tok, ExpressionTooLarge)
        out = []
        for p in base:
            if p.is_zero():
                out.append(p ** k)
                continue
            if len(p) == 1:
                (exps, c), = p.terms
                bits = c.numerator.bit_length() + c.denominator.bit_length()
                if bits * k > MAX_COEFF_BITS:
                    self.fail("power too large", tok, ExpressionTooLarge)
                out.append(p ** k)
                continue
            bits = max(c.numerator.bit_length() + c.denominator.bit_length() for c in p.coefficients())
            if k * (bits + len(p).bit_length()) > MAX_COEFF_BITS:
                self.fail("power too large", tok, ExpressionTooLarge)
            if _pow_term_bound(p, k) > MAX_TERMS:
                self.fail(f"power would have more than {MAX_TERMS} terms", tok, ExpressionTooLarge)
            try:
                out.append(self.check(p.pow(k, MAX_TERMS), tok))
            except MemoryError:
                self.fail(f"power has more than {MAX_TERMS} terms", tok, ExpressionTooLarge)
        return tuple(out)


def _pow_term_bound(p: MultiPoly, k: int) -> int:
    """Upper bound on the number of terms of ``p**k``, computed without expanding."""
    exps = [e for e, _ in p.terms]
    used = [i for i in range(p.nvars) if any(e[i] for e in exps)]
    top = [max(e[i] for e in exps) for i in used]
    deg = max(sum(e) for e in exps)
    per_var = 1
    for t in top:
        per_var *= k * t + 1
    return min(comb(k + len(p) - 1, len(p) - 1), comb(k * deg + len(used), len(used)), per_var)


def _names_for(toks, names, nvars):
    if names is not None:
        return tuple(names)
    top = -1
    for kind, text, line, col in toks:
        if kind == "id":
            m = re.fullmatch(r"x(0|[1-9][0-9]*)", text)
            if not m:
                raise UnknownVariable(f"unknown variable {text!r}", line, col)
            i = int(m.group(1))
            if nvars is not None and i >= nvars:
                raise UnknownVariable(f"unknown variable {text!r}", line, col)
            top = max(top, i)
    n = top + 1 if nvars is None else nvars
    if n > 1000:
        raise ExpressionTooLarge("too many variables", 1, 1)
    return tuple(f"x{i}" for i in range(n))


def _parse(text, names, nvars, rational, line, column):
    if not isinstance(text, str):
        raise TypeError("expression text must be a str")
    toks = _tokenize(text, line, column)
    names = _names_for(toks, names, nvars)
    return _Parser(toks, names, rational).parse()


def parse_expr(text: str, names=None, nvars: int | None = None,
               line: int = 1, column: int = 1) -> MultiPoly:
    """Polynomial from text.

    With ``names`` the identifiers are those names in order; without, the
    identifiers must be ``x0, x1, ...`` and the variable count is the largest
    index plus one (or ``nvars`` when given).  Division is allowed only by
    constants.
    """
    n, d = _parse(text, names, nvars, False, line, column)
    return n.scale(1 / d.constant_term())


def parse_rational_expr(text: str, names=None, nvars: int | None = None,
                        line: int = 1, column: int = 1) -> tuple[MultiPoly, MultiPoly]:
    """``(numerator, denominator)`` for a rational expression; the pair is not reduced."""
    n, d = _parse(text, names, nvars, True, line, column)
    if d.is_constant():
        return n.scale(1 / d.constant_term()), MultiPoly.const(1, n.nvars)
    return n, d


# -- documents ----------------------------------------------------------------

@dataclass(frozen=True)
class SequenceDoc:
    """Parsed document; rule and expression text is stored in canonical form."""

    kind: str
    vars: tuple = ()
    init: tuple = ()
    rules: tuple = ()
    output: str | None = None
    name: str | None = None
    rows: tuple = ()
    initial: tuple = ()
    final: tuple = ()
    start: str | None = None
    expr: str | None = None


_HEADERS = {"kind", "vars", "init", "output", "name", "row", "initial", "final",
            "start", "expr"}


def _split_list(value, line, col):
    parts = [p.strip() for p in value.split(",")]
    if parts == [""]:
        return []
    if any(not p for p in parts):
        raise ParseError("empty item in list", line, col)
    return parts


def _rationals(value, line, col):
    return tuple(parse_rational(p, line, col) for p in _split_list(value, line, col))


def _ident(text, line, col):
    if not _IDENT.fullmatch(text):
        raise ParseError(f"invalid name {text!r}", line, col)
    return text


def parse_document(text: str | bytes) -> SequenceDoc:
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8 (byte {exc.start})", 1, 1) from None
    headers: dict = {}
    rows: list = []
    rule_lines: list = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        if "->" in line or "=" in line:
            rule_lines.append((lineno, indent, line.strip()))
            continue
        if ":" not in line:
            raise ParseError("expected 'key: value' or a rule", lineno, indent + 1)
        key, value = line.split(":", 1)
        key = key.strip()
        vcol = len(line) - len(value) + 1 + (len(value) - len(value.lstrip()))
        if key not in _HEADERS:
            raise ParseError(f"unknown header {key!r}", lineno, indent + 1)
        if key == "row":
            rows.append((lineno, vcol, value))
            continue
        if key in headers:
            raise ParseError(f"duplicate header {key!r}", lineno, indent + 1)
        headers[key] = (lineno, vcol, value.strip())
    if "kind" not in headers:
        raise ParseError("missing 'kind:' header", 1, 1)
    kl, kc, kind = headers["kind"]
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}", kl, kc)
    handler = _KIND_PARSERS[kind]
    return handler(headers, rows, rule_lines)


def _need(headers, key, kind):
    if key not in headers:
        raise ParseError(f"{kind} needs a '{key}:' header", 1, 1)
    return headers[key]


def _forbid(headers, rows, allowed, kind):
    for key, (line, col, _) in headers.items():
        if key not in allowed:
            raise ParseError(f"header {key!r} is not used by {kind}", line, col)
    if rows and "row" not in allowed:
        raise ParseError(f"'row:' is not used by {kind}", rows[0][0], rows[0][1])


def _vars(headers, kind):
    line, col, value = _need(headers, "vars", kind)
    names = tuple(_ident(v, line, col) for v in _split_list(value, line, col))
    if not names:
        raise ParseError("need at least one variable", line, col)
    if len(set(names)) != len(names):
        raise ParseError("variable names must be unique", line, col)
    return names


def _init(headers, kind, count):
    line, col, value = _need(headers, "init", kind)
    init = _rationals(value, line, col)
    if len(init) != count:
        raise ParseError(f"expected {count} initial values, got {len(init)}", line, col)
    return init


def _rule_parts(lineno, indent, text):
    if "=" not in text:
        raise ParseError("expected 'name = expression'", lineno, indent + 1)
    lhs, rhs = text.split("=", 1)
    col = indent + len(lhs) + 2 + (len(rhs) - len(rhs.lstrip()))
    return lhs.strip(), rhs.strip(), col


def _parse_system(headers, rows, rule_lines, kind):
    _forbid(headers, rows, {"kind", "vars", "init", "output"}, kind)
    names = _vars(headers, kind)
    init = _init(headers, kind, len(names))
    rules = {}
    for lineno, indent, text in rule_lines:
        lhs, rhs, col = _rule_parts(lineno, indent, text)
        if not lhs.endswith("'") or lhs[:-1].strip() not in names:
            raise ParseError(f"left side must be one of {', '.join(n + chr(39) for n in names)}",
                             lineno, indent + 1)
        var = lhs[:-1].strip()
        if var in rules:
            raise ParseError(f"second rule for {var!r}", lineno, indent + 1)
        if kind == "poly_system":
            p = parse_expr(rhs, names, line=lineno, column=col)
            rules[var] = p.to_str(names)
        else:
            n, d = parse_rational_expr(rhs, names, line=lineno, column=col)
            rules[var] = _rational_text(n, d, names)
    missing = [n for n in names if n not in rules]
    if missing:
        raise ParseError(f"no rule for {', '.join(missing)}", 1, 1)
    output = names[0]
    if "output" in headers:
        line, col, output = headers["output"]
        if output not in names:
            raise UnknownVariable(f"output {output!r} is not a declared variable", line, col)
    return SequenceDoc(kind, names, init, tuple((n, rules[n]) for n in names), output)


def _rational_text(n, d, names):
    if d == 1:
        return n.to_str(names)
    return f"({n.to_str(names)}) / ({d.to_str(names)})"


def _parse_recurrence(headers, rows, rule_lines, kind):
    _forbid(headers, rows, {"kind", "vars", "init"}, kind)
    names = _vars(headers, kind)
    init = _init(headers, kind, len(names))
    if len(rule_lines) != 1:
        raise ParseError("expected exactly one 'next = expression' line", 1, 1)
    lineno, indent, text = rule_lines[0]
    lhs, rhs, col = _rule_parts(lineno, indent, text)
    if lhs != "next":
        raise ParseError("left side must be 'next'", lineno, indent + 1)
    p = parse_expr(rhs, names, line=lineno, column=col)
    if kind == "linear_recurrence" and (p.degree or 0) > 1:
        raise NonLinearRule(0, p.degree)
    return SequenceDoc(kind, names, init, (("next", p.to_str(names)),))


def _parse_oracle(headers, rows, rule_lines, kind):
    _forbid(headers, rows, {"kind", "name"}, kind)
    if rule_lines:
        raise ParseError("oracle documents have no rules", rule_lines[0][0], 1)
    line, col, name = _need(headers, "name", kind)
    if not re.fullmatch(r"[A-Za-z_^][A-Za-z0-9_^]*", name):
        raise ParseError(f"invalid oracle name {name!r}", line, col)
    return SequenceDoc(kind, name=name)


def _parse_automaton(headers, rows, rule_lines, kind):
    _forbid(headers, rows, {"kind", "row", "initial", "final"}, kind)
    if rule_lines:
        raise ParseError("automaton documents have no rules", rule_lines[0][0], 1)
    if not rows:
        raise ParseError("automaton needs at least one 'row:'", 1, 1)
    matrix = tuple(_rationals(v, line, col) for line, col, v in rows)
    d = len(matrix)
    for (line, col, _), r in zip(rows, matrix):
        if len(r) != d:
            raise ParseError(f"row has {len(r)} entries, expected {d}", line, col)
    vecs = []
    for key in ("initial", "final"):
        line, col, value = _need(headers, key, kind)
        v = _rationals(value, line, col)
        if len(v) != d:
            raise ParseError(f"'{key}' has {len(v)} entries, expected {d}", line, col)
        vecs.append(v)
    return SequenceDoc(kind, rows=matrix, initial=vecs[0], final=vecs[1])


def _parse_wcfg(headers, rows, rule_lines, kind):
    _forbid(headers, rows, {"kind", "start"}, kind)
    rules = []
    for lineno, indent, text in rule_lines:
        if "->" not in text:
            raise ParseError("expected 'N -> a' or 'N -> a N N'", lineno, indent + 1)
        lhs, rhs = text.split("->", 1)
        weight = Fraction(1)
        if ":" in rhs:
            rhs, w = rhs.split(":", 1)
            weight = parse_rational(w, lineno, indent + len(lhs) + len(rhs) + 4)
        lhs = _ident(lhs.strip(), lineno, indent + 1)
        parts = rhs.split()
        if not parts or parts[0] != "a":
            raise ParseError("right side must start with the terminal 'a'", lineno, indent + len(lhs) + 3)
        children = tuple(_ident(c, lineno, indent + 1) for c in parts[1:])
        if len(children) not in (0, 2):
            raise ParseError("right side must be 'a' or 'a N N'", lineno, indent + len(lhs) + 3)
        rules.append((lhs, children, weight))
    if not rules:
        raise ParseError("grammar has no rules", 1, 1)
    start = rules[0][0]
    if "start" in headers:
        line, col, start = headers["start"]
        _ident(start, line, col)
    return SequenceDoc(kind, rules=tuple(rules), start=start)


def _parse_wmso(headers, rows, rule_lines, kind):
    from .automata import parse_wmso
    _forbid(headers, rows, {"kind", "expr"}, kind)
    if rule_lines:
        raise ParseError("wmso documents have no rules", rule_lines[0][0], 1)
    line, col, value = _need(headers, "expr", kind)
    try:
        e = parse_wmso(value)
    except ParseError as exc:
        raise ParseError(exc.message, line + exc.line - 1, col + exc.column - 1) from None
    return SequenceDoc(kind, expr=str(e))


_KIND_PARSERS = {
    "poly_system": lambda h, r, ls: _parse_system(h, r, ls, "poly_system"),
    "rational_system": lambda h, r, ls: _parse_system(h, r, ls, "rational_system"),
    "linear_recurrence": lambda h, r, ls: _parse_recurrence(h, r, ls, "linear_recurrence"),
    "simple_recurrence": lambda h, r, ls: _parse_recurrence(h, r, ls, "simple_recurrence"),
    "oracle": lambda h, r, ls: _parse_oracle(h, r, ls, "oracle"),
    "automaton": lambda h, r, ls: _parse_automaton(h, r, ls, "automaton"),
    "wcfg": lambda h, r, ls: _parse_wcfg(h, r, ls, "wcfg"),
    "wmso": lambda h, r, ls: _parse_wmso(h, r, ls, "wmso"),
}


def _fmt(values):
    return ", ".join(str(v) for v in values)


def serialize(doc: SequenceDoc) -> str:
    out = [f"kind: {doc.kind}"]
    k = doc.kind
    if k in ("poly_system", "rational_system"):
        out += [f"vars: {', '.join(doc.vars)}", f"init: {_fmt(doc.init)}", f"output: {doc.output}"]
        out += [f"{n}' = {t}" for n, t in doc.rules]
    elif k in ("linear_recurrence", "simple_recurrence"):
        out += [f"vars: {', '.join(doc.vars)}", f"init: {_fmt(doc.init)}"]
        out += [f"{n} = {t}" for n, t in doc.rules]
    elif k == "oracle":
        out.append(f"name: {doc.name}")
    elif k == "automaton":
        out += [f"row: {_fmt(r)}" for r in doc.rows]
        out += [f"initial: {_fmt(doc.initial)}", f"final: {_fmt(doc.final)}"]
    elif k == "wcfg":
        out.append(f"start: {doc.start}")
        for lhs, children, w in doc.rules:
            out.append(f"{lhs} -> {' '.join(('a',) + children)} : {w}")
    elif k == "wmso":
        out.append(f"expr: {doc.expr}")
    return "\n".join(out) + "\n"


def load(path) -> SequenceDoc:
    return parse_document(Path(path).read_bytes())


def build(doc: SequenceDoc):
    """The model object described by ``doc``."""
    from . import automata, engines
    k = doc.kind
    if k == "poly_system":
        rules = [parse_expr(t, doc.vars) for _, t in doc.rules]
        return engines.PolySystem(doc.init, rules, doc.vars.index(doc.output), doc.vars)
    if k == "rational_system":
        pairs = [parse_rational_expr(t, doc.vars) for _, t in doc.rules]
        return engines.RationalSystem(doc.init, [n for n, _ in pairs], [d for _, d in pairs],
                                      doc.vars.index(doc.output), doc.vars)
    if k == "linear_recurrence":
        p = parse_expr(doc.rules[0][1], doc.vars)
        n = len(doc.vars)
        coeffs = [p.coefficient(tuple(int(i == j) for j in range(n))) for i in range(n)]
        return engines.LinearRecurrence(coeffs, doc.init, p.constant_term())
    if k == "simple_recurrence":
        return engines.SimpleRecurrence(parse_expr(doc.rules[0][1], doc.vars), doc.init)
    if k == "oracle":
        return engines.oracle(doc.name)
    if k == "automaton":
        return automata.UnaryWeightedAutomaton(doc.rows, doc.initial, doc.final)
    if k == "wcfg":
        order: list = []
        for lhs, children, _ in doc.rules:
            for n in (lhs, *children):
                if n not in order:
                    order.append(n)
        if doc.start not in order:
            raise UnknownVariable(f"start symbol {doc.start!r} has no rules", 1, 1)
        rules = [automata.WcfgRule(order.index(lhs), tuple(order.index(c) for c in ch), w)
                 for lhs, ch, w in doc.rules]
        return automata.WcfgUnary(tuple(order), tuple(rules), order.index(doc.start))
    if k == "wmso":
        return automata.parse_wmso(doc.expr)
    raise ValueError(f"unknown kind {k!r}")


def to_doc(obj) -> SequenceDoc:
    """Inverse of :func:`build` for the model types."""
    from . import automata, engines
    if isinstance(obj, engines.PolySystem):
        rules = tuple((n, r.to_str(obj.names)) for n, r in zip(obj.names, obj.rules))
        return SequenceDoc("poly_system", obj.names, obj.init, rules, obj.names[obj.output])
    if isinstance(obj, engines.RationalSystem):
        rules = tuple((n, _rational_text(p, q, obj.names))
                      for n, p, q in zip(obj.names, obj.numerators, obj.denominators))
        return SequenceDoc("rational_system", obj.names, obj.init, rules, obj.names[obj.output])
    if isinstance(obj, engines.LinearRecurrence):
        names = tuple(f"x{i}" for i in range(obj.order))
        return SequenceDoc("linear_recurrence", names, obj.initials,
                           (("next", obj.rule().to_str(names)),))
    if isinstance(obj, engines.SimpleRecurrence):
        names = tuple(f"x{i}" for i in range(obj.order))
        return SequenceDoc("simple_recurrence", names, obj.initials,
                           (("next", obj.rule.to_str(names)),))
    if isinstance(obj, engines.OracleSequence):
        return SequenceDoc("oracle", name=obj.name)
    if isinstance(obj, automata.UnaryWeightedAutomaton):
        return SequenceDoc("automaton", rows=obj.M, initial=obj.I, final=obj.F)
    if isinstance(obj, automata.WcfgUnary):
        nts = obj.nonterminals
        rules = tuple((nts[r.lhs], tuple(nts[c] for c in r.children), r.weight) for r in obj.rules)
        return SequenceDoc("wcfg", rules=rules, start=nts[obj.start])
    if isinstance(obj, automata.WmsoExpr):
        return SequenceDoc("wmso", expr=str(obj))
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_model(path):
    return build(load(path))
