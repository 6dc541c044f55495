"""Sequence definitions and exact evaluators.

A :class:`PolySystem` is ``k`` mutually recursive sequences advanced in
lockstep by ``k`` polynomial rules.  Linear, simple (single sliding-window)
and rational recurrences are separate types with their own evaluators; the
``convert`` module translates between them.  :class:`OracleSequence` wraps a
closed form and is what the search and refutation tools are pointed at.

Values grow fast (``2^(2^n)``), so every evaluator enforces a bit-size ceiling
and raises :class:`~polyrec.errors.OverflowBudget` instead of running out of
memory.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Iterator, Sequence

from .errors import (ArityMismatch, DenominatorVanished, OverflowBudget,
                     UnknownName)
from .polycore import MultiPoly, UniPoly, _lean, default_names

__all__ = [
    "DEFAULT_MAX_BITS", "PolySystem", "LinearRecurrence", "SimpleRecurrence",
    "RationalSystem", "OracleSequence", "Evaluator", "iterate_states",
    "eval_system", "eval_output", "outputs", "eval_linear", "eval_simple",
    "eval_rational", "oracle", "oracle_eval", "builtin", "r_pow_q",
    "BUILTINS", "ORACLES",
]

DEFAULT_MAX_BITS = 2 ** 20


def _bits(v) -> int:
    if isinstance(v, int):
        return v.bit_length()
    return v.numerator.bit_length() + v.denominator.bit_length()


def _check_bits(v, max_bits, step):
    if max_bits is not None and _bits(v) > max_bits:
        raise OverflowBudget(f"value at step {step} exceeds {max_bits} bits")


def _estimate_bits(rule: MultiPoly, bits: Sequence[int]) -> int:
    """Rough size of the largest term of ``rule`` at a point with the given bit sizes."""
    best = 0
    for c, factors in rule._compile():
        b = _bits(c) + sum(bits[i] * k for i, k in factors)
        best = max(best, b)
    return best


def _frac_tuple(values):
    return tuple(Fraction(v) for v in values)


@dataclass(frozen=True)
class PolySystem:
    """Initial values, one rule per sequence, and the index of the output sequence.

    Rules are polynomials in ``k`` variables; variable ``i`` stands for the
    current value of sequence ``i``.  ``output`` is zero-based.
    """

    init: tuple
    rules: tuple
    output: int = 0
    names: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "init", _frac_tuple(self.init))
        object.__setattr__(self, "rules", tuple(self.rules))
        k = len(self.init)
        if len(self.rules) != k:
            raise ArityMismatch(f"{k} initial values but {len(self.rules)} rules")
        for i, r in enumerate(self.rules):
            if r.nvars != k:
                raise ArityMismatch(f"rule {i} has {r.nvars} variables, expected {k}")
        if not 0 <= self.output < max(k, 1):
            raise ArityMismatch(f"output index {self.output} out of range")
        if self.names is None:
            object.__setattr__(self, "names", default_names(k))
        elif len(self.names) != k or len(set(self.names)) != k:
            raise ArityMismatch("need one distinct name per sequence")
        else:
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def k(self) -> int:
        return len(self.init)

    @property
    def max_degree(self) -> int:
        return max((r.degree or 0 for r in self.rules), default=0)

    def step(self, state, max_bits=DEFAULT_MAX_BITS, index=0):
        vals = [_lean(v) if isinstance(v, Fraction) else v for v in state]
        if max_bits is not None:
            bits = [_bits(v) for v in vals]
            for r in self.rules:
                if _estimate_bits(r, bits) > max_bits:
                    raise OverflowBudget(f"value at step {index + 1} would exceed {max_bits} bits")
        new = tuple(r._eval_raw(vals) for r in self.rules)
        for v in new:
            _check_bits(v, max_bits, index + 1)
        return new

    def describe(self) -> str:
        lines = [f"{n}[0] = {v}" for n, v in zip(self.names, self.init)]
        lines += [f"{n}' = {r.to_str(self.names)}" for n, r in zip(self.names, self.rules)]
        lines.append(f"output: {self.names[self.output]}")
        return "\n".join(lines)


def iterate_states(s: PolySystem, max_bits=DEFAULT_MAX_BITS) -> Iterator[tuple]:
    """Stream ``state_0, state_1, ...`` carrying only the current state."""
    state = tuple(_lean(v) for v in s.init)
    n = 0
    while True:
        yield tuple(Fraction(v) for v in state)
        state = s.step(state, max_bits, n)
        n += 1


def eval_system(s: PolySystem, n: int, max_bits=DEFAULT_MAX_BITS) -> tuple:
    if n < 0:
        raise ValueError("n must be nonnegative")
    state = tuple(_lean(v) for v in s.init)
    for i in range(n):
        state = s.step(state, max_bits, i)
    return tuple(Fraction(v) for v in state)


def eval_output(s: PolySystem, n: int, max_bits=DEFAULT_MAX_BITS) -> Fraction:
    return eval_system(s, n, max_bits)[s.output]


def outputs(s: PolySystem, count: int, max_bits=DEFAULT_MAX_BITS) -> list:
    """First ``count`` output values."""
    out = []
    for state, _ in zip(iterate_states(s, max_bits), range(count)):
        out.append(state[s.output])
    return out


class Evaluator:
    """Memoizing evaluator; keeps every state computed so far.

    Not safe to share between threads.
    """

    def __init__(self, system: PolySystem, max_bits=DEFAULT_MAX_BITS):
        self.system = system
        self.max_bits = max_bits
        self._states = [tuple(_lean(v) for v in system.init)]

    def state(self, n: int) -> tuple:
        while len(self._states) <= n:
            m = len(self._states) - 1
            self._states.append(self.system.step(self._states[-1], self.max_bits, m))
        return tuple(Fraction(v) for v in self._states[n])

    def output(self, n: int) -> Fraction:
        return self.state(n)[self.system.output]

    def prefix(self, count: int) -> list:
        if count:
            self.state(count - 1)
        return [Fraction(st[self.system.output]) for st in self._states[:count]]

    __call__ = output


@dataclass(frozen=True)
class LinearRecurrence:
    """``u[n+k] = coeffs[0]*u[n] + ... + coeffs[k-1]*u[n+k-1] + constant``."""

    coeffs: tuple
    initials: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _frac_tuple(self.coeffs))
        object.__setattr__(self, "initials", _frac_tuple(self.initials))
        object.__setattr__(self, "constant", Fraction(self.constant))
        if len(self.coeffs) != len(self.initials):
            raise ArityMismatch("order mismatch between coefficients and initial values")

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def rule(self) -> MultiPoly:
        k = self.order
        p = MultiPoly.const(self.constant, k)
        for i, a in enumerate(self.coeffs):
            p = p + MultiPoly.var(i, k).scale(a)
        return p


@dataclass(frozen=True)
class SimpleRecurrence:
    """``u[n+k] = rule(u[n], ..., u[n+k-1])`` with a polynomial ``rule``."""

    rule: MultiPoly
    initials: tuple

    def __post_init__(self):
        object.__setattr__(self, "initials", _frac_tuple(self.initials))
        if self.rule.nvars != len(self.initials):
            raise ArityMismatch("rule variable count must equal the order")

    @property
    def order(self) -> int:
        return len(self.initials)


def _window_eval(rule: MultiPoly, initials, n, max_bits):
    if n < len(initials):
        return initials[n]
    window = [_lean(v) for v in initials]
    k = len(window)
    for i in range(n - k + 1):
        if max_bits is not None:
            if _estimate_bits(rule, [_bits(v) for v in window]) > max_bits:
                raise OverflowBudget(f"value at index {i + k} would exceed {max_bits} bits")
        nxt = rule._eval_raw(window)
        _check_bits(nxt, max_bits, i + k)
        window = window[1:] + [nxt]
    return Fraction(window[-1])


def eval_linear(r: LinearRecurrence, n: int, max_bits=DEFAULT_MAX_BITS) -> Fraction:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if r.order == 0:
        return r.constant
    return _window_eval(r.rule(), r.initials, n, max_bits)


def eval_simple(r: SimpleRecurrence, n: int, max_bits=DEFAULT_MAX_BITS) -> Fraction:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _window_eval(r.rule, r.initials, n, max_bits)


@dataclass(frozen=True)
class RationalSystem:
    """Like :class:`PolySystem` but rule ``i`` is ``numerators[i] / denominators[i]``."""

    init: tuple
    numerators: tuple
    denominators: tuple
    output: int = 0
    names: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "init", _frac_tuple(self.init))
        object.__setattr__(self, "numerators", tuple(self.numerators))
        object.__setattr__(self, "denominators", tuple(self.denominators))
        k = len(self.init)
        if len(self.numerators) != k or len(self.denominators) != k:
            raise ArityMismatch("need one numerator and one denominator per sequence")
        for i, (q, r) in enumerate(zip(self.numerators, self.denominators)):
            if q.nvars != k or r.nvars != k:
                raise ArityMismatch(f"rule {i} must use {k} variables")
            if r.is_zero():
                raise ZeroDivisionError(f"denominator of rule {i} is the zero polynomial")
        if not 0 <= self.output < max(k, 1):
            raise ArityMismatch(f"output index {self.output} out of range")
        if self.names is None:
            object.__setattr__(self, "names", default_names(k))
        else:
            object.__setattr__(self, "names", tuple(self.names))

    @property
    def k(self):
        return len(self.init)


def eval_rational(s: RationalSystem, n: int, max_bits=DEFAULT_MAX_BITS) -> Fraction:
    """Output at ``n``; raises :class:`DenominatorVanished` naming the step and rule."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    state = list(s.init)
    for m in range(n):
        new = []
        for i, (q, r) in enumerate(zip(s.numerators, s.denominators)):
            den = r.evaluate(state)
            if den == 0:
                raise DenominatorVanished(m, i)
            v = q.evaluate(state) / den
            _check_bits(v, max_bits, m + 1)
            new.append(v)
        state = new
    return state[s.output]


# -- oracles ------------------------------------------------------------------

@dataclass(frozen=True)
class OracleSequence:
    """A sequence given by a closed form ``n -> Fraction``."""

    name: str
    fn: Callable[[int], object] = field(compare=False)

    def __call__(self, n: int) -> Fraction:
        if n < 0:
            raise ValueError("n must be nonnegative")
        return Fraction(self.fn(n))

    def prefix(self, count):
        return [self(n) for n in range(count)]

    @classmethod
    def custom(cls, name, fn):
        return cls(name, fn)

    @classmethod
    def from_system(cls, s: PolySystem, name="system"):
        ev = Evaluator(s)
        return cls(name, ev.output)


def _fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


ORACLES: dict[str, Callable[[int], object]] = {
    # 0^0 is taken to be 1
    "n^n": lambda n: n ** n if n else 1,
    "catalan": lambda n: comb(2 * n, n) // (n + 1),
    "factorial": factorial,
    "power_tower": lambda n: 2 ** (2 ** n),
    "fibonacci": _fib,
    "nsquared": lambda n: n * n,
    "two_pow_nsq": lambda n: 2 ** (n * n),
    "one": lambda n: 1,
}
_ORACLE_ALIASES = {"nn": "n^n", "n_pow_n": "n^n"}


def oracle(name: str) -> OracleSequence:
    key = _ORACLE_ALIASES.get(name, name)
    if key not in ORACLES:
        raise UnknownName(f"unknown oracle {name!r}")
    return OracleSequence(key, ORACLES[key])


def oracle_eval(o: OracleSequence | str, n: int) -> Fraction:
    if isinstance(o, str):
        o = oracle(o)
    return o(n)


# -- builtin systems ----------------------------------------------------------

def _sys(init, rules, names):
    k = len(init)
    g = MultiPoly.gens(k)
    return PolySystem(init, tuple(f(*g) for f in rules), 0, names)


def _fibonacci():
    return _sys((0, 1), (lambda f, g: g, lambda f, g: f + g), ("f", "g"))


def _factorial():
    return _sys((1, 1), (lambda b, c: b * c, lambda b, c: c + 1), ("b", "c"))


def _nsquared():
    return _sys((0, 0, 1), (lambda a, b, c: a + 2 * b + c,
                            lambda a, b, c: b + c,
                            lambda a, b, c: c), ("a", "b", "c"))


def _power_tower():
    return _sys((2,), (lambda a: a ** 2,), ("a",))


def _two_pow_nsq():
    return _sys((1, 1), (lambda d, e: 2 * d * e ** 2, lambda d, e: 2 * e), ("d", "e"))


def _forward_differences(q: UniPoly):
    """``[Q(0), dQ(0), d^2Q(0), ...]`` up to the degree of ``Q``."""
    deg = q.degree or 0
    vals = [Fraction(q(i)) for i in range(deg + 1)]
    out = []
    while vals:
        out.append(vals[0])
        vals = [b - a for a, b in zip(vals, vals[1:])]
    return out


def r_pow_q(r, q) -> PolySystem:
    """System whose output is ``r ** Q(n)``.

    Sequence ``j`` holds ``r ** (d^j Q)(n)`` where ``d`` is the forward
    difference, so each one advances by multiplying with the next; the last is
    constant.  ``Q`` must map naturals to integers.
    """
    r = Fraction(r)
    if r == 0:
        raise ValueError("r = 0 is not supported")
    if not isinstance(q, UniPoly):
        q = UniPoly(q)
    diffs = _forward_differences(q)
    if any(d.denominator != 1 for d in diffs):
        raise ValueError("Q must take integer values on the naturals")
    k = len(diffs)
    g = MultiPoly.gens(k)
    rules = [g[j] * g[j + 1] for j in range(k - 1)] + [g[k - 1]]
    init = [r ** int(d) for d in diffs]
    return PolySystem(init, rules, 0, tuple(f"s{j}" for j in range(k)))


BUILTINS = {
    "fibonacci": _fibonacci,
    "factorial": _factorial,
    "nsquared": _nsquared,
    "power_tower": _power_tower,
    "two_pow_nsq": _two_pow_nsq,
}


def builtin(name: str, *args) -> PolySystem:
    """The example systems from the literature, verbatim, plus ``r_pow_Q(r, Q)``."""
    if name in ("r_pow_Q", "r_pow_q"):
        return r_pow_q(*args)
    if name not in BUILTINS:
        raise UnknownName(f"unknown builtin {name!r}")
    return BUILTINS[name]()
