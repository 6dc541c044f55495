"""Exact polynomial arithmetic over the rationals and over prime fields.

Three value types live here:

* :class:`MultiPoly`: multivariate polynomial with :class:`~fractions.Fraction`
  coefficients, the common currency of the whole package (recurrence rules,
  cancelling candidates, iterated compositions).
* :class:`UniPoly`: univariate polynomial stored as a dense coefficient tuple.
* :class:`ModPoly`: either of the above with coefficients reduced mod a prime.

All three are immutable.  Terms of a :class:`MultiPoly` are kept in descending
graded-lexicographic order with ``x0`` the most significant variable, which
fixes printing, hashing and the column order of every linear system built from
monomials.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement
from math import lcm
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

from sympy import isprime

from .errors import (ArityMismatch, BudgetExceeded, NonIntegerCoefficient,
                     NotPrime, ZeroPolynomial)

__all__ = [
    "MultiPoly", "UniPoly", "ModPoly", "arith", "compose", "evaluate",
    "clear_denominators", "reduce_mod", "monomials_up_to", "grlex_key",
    "default_names", "check_prime",
]


def grlex_key(exps):
    return (sum(exps), exps)


def default_names(nvars):
    return tuple(f"x{i}" for i in range(nvars))


def check_prime(p):
    if not isinstance(p, int) or not isprime(p):
        raise NotPrime(f"{p!r} is not a prime")
    return p


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    raise TypeError(f"exact rational expected, got {type(c).__name__}")


def _lean(c: Fraction):
    # int arithmetic is several times faster than Fraction arithmetic
    return c.numerator if c.denominator == 1 else c


def monomials_up_to(nvars: int, degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors in ``nvars`` variables of total degree <= ``degree``,
    in descending graded-lex order."""
    out = []
    for d in range(degree, -1, -1):
        block = []
        for combo in combinations_with_replacement(range(nvars), d):
            e = [0] * nvars
            for v in combo:
                e[v] += 1
            block.append(tuple(e))
        block.sort(reverse=True)
        out.extend(block)
    return out


class MultiPoly:
    """Polynomial in ``nvars`` variables with exact rational coefficients.

    ``terms`` maps exponent tuples to coefficients; zero coefficients are
    dropped on construction.
    """

    __slots__ = ("nvars", "_terms", "_hash", "_compiled")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | Iterable = ()):
        if nvars < 0:
            raise ValueError("nvars must be nonnegative")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple[int, ...], Fraction] = {}
        for exps, c in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars:
                raise ArityMismatch(f"monomial {exps} does not have {nvars} exponents")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            acc[exps] = acc.get(exps, Fraction(0)) + _as_fraction(c)
        self.nvars = nvars
        self._terms = {e: acc[e] for e in sorted(acc, key=grlex_key, reverse=True) if acc[e] != 0}
        self._hash = None
        self._compiled = None

    @classmethod
    def _raw(cls, nvars, terms):
        # trusted constructor: terms already canonical and nonzero
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._terms = {e: terms[e] for e in sorted(terms, key=grlex_key, reverse=True)}
        obj._hash = None
        obj._compiled = None
        return obj

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, c, nvars):
        c = _as_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, i, nvars):
        if not 0 <= i < nvars:
            raise ArityMismatch(f"variable index {i} out of range for {nvars} variables")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def gens(cls, nvars):
        return tuple(cls.var(i, nvars) for i in range(nvars))

    @classmethod
    def monomial(cls, exps, coeff=1):
        exps = tuple(exps)
        return cls(len(exps), {exps: coeff})

    # -- inspection -----------------------------------------------------
    @property
    def terms(self):
        return tuple(self._terms.items())

    def monomials(self):
        return tuple(self._terms)

    def coefficients(self):
        return tuple(self._terms.values())

    def coefficient(self, exps) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms.items())

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(sum(e) == 0 for e in self._terms)

    @property
    def degree(self) -> int | None:
        """Total degree; ``None`` stands for the degree of the zero polynomial."""
        if not self._terms:
            return None
        return max(sum(e) for e in self._terms)

    def degree_in(self, i) -> int | None:
        if not self._terms:
            return None
        return max(e[i] for e in self._terms)

    def is_homogeneous(self, d=None) -> bool:
        degs = {sum(e) for e in self._terms}
        if d is None:
            return len(degs) <= 1
        return degs <= {d}

    def has_integer_coefficients(self):
        return all(c.denominator == 1 for c in self._terms.values())

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise ArityMismatch(f"variable counts differ: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Rational)):
            return MultiPoly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for e, c in other._terms.items():
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return MultiPoly._raw(self.nvars, acc)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.nvars, {e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c):
        c = _as_fraction(c)
        if not c:
            return MultiPoly.zero(self.nvars)
        return MultiPoly._raw(self.nvars, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._mul(other)

    __rmul__ = __mul__

    def _mul(self, other, max_terms=None):
        acc: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
            if max_terms is not None and len(acc) > max_terms:
                raise BudgetExceeded(f"product exceeds {max_terms} monomials")
        return MultiPoly._raw(self.nvars, {e: c for e, c in acc.items() if c})

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("division of a polynomial by zero")
            return self.scale(Fraction(1) / _as_fraction(other))
        return NotImplemented

    def pow(self, n: int, max_terms=None) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(1, self.nvars)
        base = self
        while n:
            if n & 1:
                result = result._mul(base, max_terms)
            n >>= 1
            if n:
                base = base._mul(base, max_terms)
        return result

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if len(self._terms) == 1:
            (e, c), = self._terms.items()
            return MultiPoly._raw(self.nvars, {tuple(x * n for x in e): c ** n})
        return self.pow(n)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Rational)):
            return self == MultiPoly.const(other, self.nvars)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                # consistent with equality against plain numbers
                self._hash = hash(self.constant_term())
            else:
                self._hash = hash((self.nvars, tuple(self._terms.items())))
        return self._hash

    # -- evaluation and substitution --------------------------------------
    def _compile(self):
        if self._compiled is None:
            self._compiled = tuple(
                (_lean(c), tuple((i, k) for i, k in enumerate(e) if k))
                for e, c in self._terms.items()
            )
        return self._compiled

    def __call__(self, *point):
        return self.evaluate(point)

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at ``point``.  Integer inputs stay on the integer fast path."""
        if len(point) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} values, got {len(point)}")
        vals = [_lean(_as_fraction(v)) for v in point]
        return Fraction(self._eval_raw(vals))

    def _eval_raw(self, vals):
        total = 0
        for c, factors in self._compile():
            t = c
            for i, k in factors:
                t *= vals[i] ** k if k > 1 else vals[i]
            total += t
        return total

    def eval_mod(self, point, p: int) -> int:
        """Value mod ``p``; coefficients must be integral."""
        total = 0
        for c, factors in self._compile():
            if not isinstance(c, int):
                raise NonIntegerCoefficient(f"coefficient {c} is not an integer")
            t = c
            for i, k in factors:
                t = t * pow(point[i], k, p) % p
            total += t
        return total % p

    def compose(self, inners: Sequence["MultiPoly"], max_terms=None) -> "MultiPoly":
        """Substitute ``inners[i]`` for variable ``i``."""
        if len(inners) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} inner polynomials, got {len(inners)}")
        if not inners:
            return MultiPoly.const(self.constant_term(), 0)
        n = inners[0].nvars
        if any(g.nvars != n for g in inners):
            raise ArityMismatch("inner polynomials must share a variable count")
        powers: list[dict[int, MultiPoly]] = [{0: MultiPoly.const(1, n), 1: g} for g in inners]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k // 2)._mul(power(i, k - k // 2), max_terms)
            return cache[k]

        acc: dict = {}
        for e, c in self._terms.items():
            term = MultiPoly.const(c, n)
            for i, k in enumerate(e):
                if k:
                    term = term._mul(power(i, k), max_terms)
            for te, tc in term._terms.items():
                acc[te] = acc.get(te, 0) + tc
            if max_terms is not None and len(acc) > max_terms:
                raise BudgetExceeded(f"composition exceeds {max_terms} monomials")
        return MultiPoly._raw(n, {e: c for e, c in acc.items() if c})

    def extend(self, nvars: int) -> "MultiPoly":
        """Same polynomial viewed in ``nvars >= self.nvars`` variables."""
        if nvars < self.nvars:
            raise ArityMismatch("cannot drop variables")
        pad = (0,) * (nvars - self.nvars)
        return MultiPoly._raw(nvars, {e + pad: c for e, c in self._terms.items()})

    # -- rendering --------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = tuple(names) if names is not None else default_names(self.nvars)
        if len(names) != self.nvars:
            raise ArityMismatch("wrong number of variable names")
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            factors = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
            if not factors:
                body = str(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(a)] + factors)
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiPoly({self.nvars}, {self.to_str()!r})"


class UniPoly:
    """Univariate polynomial; ``coeffs[i]`` is the coefficient of ``x**i``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def x_plus(cls, j):
        return cls([j, 1])

    @classmethod
    def const(cls, c):
        return cls([c])

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def _coerce(self, other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Rational)):
            return UniPoly([other])
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        result, base = UniPoly([1]), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + _lean(c)
        return acc

    def eval_mod(self, x, p):
        acc = 0
        for c in reversed(self.coeffs):
            if c.denominator != 1:
                raise NonIntegerCoefficient(f"coefficient {c} is not an integer")
            acc = (acc * x + c.numerator) % p
        return acc

    def has_integer_coefficients(self):
        return all(c.denominator == 1 for c in self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self == UniPoly([other])
        return NotImplemented

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else Fraction(0))
        return hash(self.coeffs)

    def to_multi(self) -> MultiPoly:
        return MultiPoly(1, {(i,): c for i, c in enumerate(self.coeffs)})

    def __str__(self):
        return self.to_multi().to_str(("x",))

    def __repr__(self):
        return f"UniPoly({str(self)!r})"


class ModPoly:
    """Polynomial over the prime field of size ``modulus``.

    Coefficients are integers in ``1..modulus-1``; ``nvars == 1`` for
    reductions of a :class:`UniPoly`.
    """

    __slots__ = ("modulus", "nvars", "_terms")

    def __init__(self, modulus: int, nvars: int, terms: Mapping[tuple, int]):
        check_prime(modulus)
        self.modulus = modulus
        self.nvars = nvars
        acc = {}
        for e, c in terms.items():
            r = c % modulus
            if r:
                acc[tuple(e)] = r
        self._terms = {e: acc[e] for e in sorted(acc, key=grlex_key, reverse=True)}

    @property
    def terms(self):
        return tuple(self._terms.items())

    def is_zero(self):
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    @property
    def degree(self):
        return max((sum(e) for e in self._terms), default=None)

    def evaluate(self, point) -> int:
        p = self.modulus
        total = 0
        for e, c in self._terms.items():
            t = c
            for v, k in zip(point, e):
                if k:
                    t = t * pow(v, k, p) % p
            total += t
        return total % p

    def __eq__(self, other):
        return (isinstance(other, ModPoly) and self.modulus == other.modulus
                and self.nvars == other.nvars and self._terms == other._terms)

    def __hash__(self):
        return hash((self.modulus, self.nvars, tuple(self._terms.items())))

    def to_str(self, names=None):
        return MultiPoly(self.nvars, self._terms).to_str(names)

    def __repr__(self):
        return f"ModPoly({self.to_str()!r} mod {self.modulus})"


# -- functional surface ------------------------------------------------------

def arith(op: str, a: MultiPoly, b=None) -> MultiPoly:
    """Dispatch ``op`` in ``{'add', 'mul', 'neg', 'scale'}``."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown operation {op!r}")


def compose(outer: MultiPoly, inners: Sequence[MultiPoly], max_terms=None) -> MultiPoly:
    return outer.compose(inners, max_terms=max_terms)


def evaluate(p: MultiPoly, point: Sequence) -> Fraction:
    return p.evaluate(point)


def clear_denominators(p: MultiPoly) -> tuple[int, MultiPoly]:
    """Return ``(s, s*p)`` with ``s`` the least common multiple of the denominators."""
    if p.is_zero():
        raise ZeroPolynomial("cannot clear denominators of the zero polynomial")
    s = lcm(*(c.denominator for c in p.coefficients()))
    return s, p.scale(s)


def reduce_mod(p: MultiPoly | UniPoly, modulus: int) -> ModPoly:
    check_prime(modulus)
    if isinstance(p, UniPoly):
        items = [((i,), c) for i, c in enumerate(p.coeffs)]
        nvars = 1
    else:
        items = list(p.terms)
        nvars = p.nvars
    if any(c.denominator != 1 for _, c in items):
        raise NonIntegerCoefficient("reduction mod p needs integer coefficients")
    return ModPoly(modulus, nvars, {e: c.numerator for e, c in items})

