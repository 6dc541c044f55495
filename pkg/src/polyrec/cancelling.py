"""Cancelling polynomials: search, verification, and the n^n refutation tools.

A cancelling polynomial of a sequence ``u`` is a nonzero ``Q(x0, ..., xk)``
with ``Q(u[n], ..., u[n+k]) = 0`` for every ``n``.  For a poly-recursive
system one exists with ``k`` equal to the number of sequences; it can be found
by composing the rules with themselves and solving a linear system for the
unknown coefficients of ``Q``.

For ``u_n = n^n`` every candidate ``Z`` rewrites as ``sum_i P_i(n)^n Q_i(n)``;
the helpers at the bottom build that decomposition, check the Vandermonde
determinant identity behind it, and scan the congruences mod p that refute any
particular ``Z``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Sequence

from sympy import nextprime

from .engines import (Evaluator, OracleSequence, PolySystem, SimpleRecurrence,
                      oracle)
from .errors import (ArityMismatch, BudgetExceeded, NonIntegerCoefficient,
                     UnderdeterminedSearch, ZeroPolynomial)
from .linalg import det, nullspace
from .polycore import (MultiPoly, UniPoly, check_prime, clear_denominators,
                       monomials_up_to)

__all__ = [
    "DEFAULT_MAX_TERMS", "SAMPLE_MARGIN", "IteratedRules", "iterate_rules",
    "CancellingCertificate", "find_cancelling_symbolic", "SymbolicCheck",
    "verify_symbolic", "EmpiricalCheck", "verify_empirical",
    "find_cancelling_empirical", "SimpleCandidate", "find_simple_recurrence",
    "NNDecomposition", "nn_decompose", "VandermondeCheck", "vandermonde_check",
    "crt_witness", "crt_cross_check", "CongruenceScan", "crt_congruence_scan",
    "NNRefutation", "refute_nn_candidate",
]

DEFAULT_MAX_TERMS = 10 ** 6
SAMPLE_MARGIN = Fraction(5, 4)


@dataclass(frozen=True)
class IteratedRules:
    """``table[t][i]`` advances sequence ``i`` by ``t`` steps from any state."""

    system: PolySystem
    table: tuple

    @property
    def depth(self):
        return len(self.table) - 1

    def __getitem__(self, ti):
        t, i = ti
        return self.table[t][i]


def iterate_rules(s: PolySystem, depth: int, max_terms: int = DEFAULT_MAX_TERMS) -> IteratedRules:
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    level = MultiPoly.gens(s.k)
    table = [level]
    for _ in range(depth):
        level = tuple(r.compose(level, max_terms) for r in s.rules)
        table.append(level)
    return IteratedRules(s, tuple(table))


@dataclass(frozen=True)
class CancellingCertificate:
    """``poly`` in ``width`` variables, integer coefficients.

    ``mode`` is ``"symbolic"`` when the vanishing was proven by composition and
    ``"empirical"`` when it was only checked on the first ``samples`` windows.
    """

    poly: MultiPoly
    mode: str
    samples: int | None = None

    @property
    def width(self):
        return self.poly.nvars

    def __str__(self):
        tag = self.mode if self.samples is None else f"{self.mode}({self.samples})"
        return f"{self.poly} [{tag}]"


def _basis_polys(basis, mons, nvars):
    out = []
    for v in basis:
        out.append(MultiPoly(nvars, {m: c for m, c in zip(mons, v) if c}))
    return out


def _monomial_products(factors: Sequence[MultiPoly], mons, max_terms):
    """``prod_j factors[j] ** mu[j]`` for every exponent vector ``mu`` in ``mons``."""
    n = factors[0].nvars
    memo = {(0,) * len(factors): MultiPoly.const(1, n)}

    def prod(mu):
        if mu not in memo:
            j = max(i for i, e in enumerate(mu) if e)
            prev = mu[:j] + (mu[j] - 1,) + mu[j + 1:]
            memo[mu] = prod(prev)._mul(factors[j], max_terms)
        return memo[mu]

    return [prod(mu) for mu in mons]


def find_cancelling_symbolic(s: PolySystem, degree: int,
                             max_terms: int = DEFAULT_MAX_TERMS) -> list[CancellingCertificate]:
    """All ``Q`` of total degree <= ``degree`` in ``k+1`` variables with
    ``Q(P^(0), ..., P^(k))`` identically zero, as a canonical basis.

    An empty list means nothing exists within the degree bound; a cancelling
    polynomial of higher degree may still exist.
    """
    if degree < 1:
        raise ValueError("degree bound must be at least 1")
    k = s.k
    it = iterate_rules(s, k, max_terms)
    window = [it.table[t][s.output] for t in range(k + 1)]
    mons = monomials_up_to(k + 1, degree)
    products = _monomial_products(window, mons, max_terms)
    row_index: dict = {}
    for p in products:
        for e in p.monomials():
            row_index.setdefault(e, len(row_index))
    if len(row_index) * len(mons) > 50 * max_terms:
        raise BudgetExceeded("linear system for the dependence search is too large")
    rows = [[0] * len(mons) for _ in row_index]
    for j, p in enumerate(products):
        for e, c in p.terms:
            rows[row_index[e]][j] = c
    basis = nullspace(rows, len(mons))
    return [CancellingCertificate(q, "symbolic") for q in _basis_polys(basis, mons, k + 1)]


@dataclass(frozen=True)
class SymbolicCheck:
    passed: bool
    residual: MultiPoly

    def __bool__(self):
        return self.passed


def verify_symbolic(s: PolySystem, q: MultiPoly, max_terms: int = DEFAULT_MAX_TERMS) -> SymbolicCheck:
    """Compose ``q`` with the iterated rules; zero residual proves ``q`` cancels the output."""
    if q.nvars != s.k + 1:
        raise ArityMismatch(f"expected a polynomial in {s.k + 1} variables, got {q.nvars}")
    if q.is_zero():
        raise ZeroPolynomial("a cancelling polynomial must be nonzero")
    it = iterate_rules(s, s.k, max_terms)
    window = [it.table[t][s.output] for t in range(s.k + 1)]
    residual = q.compose(window, max_terms)
    return SymbolicCheck(residual.is_zero(), residual)


def _as_sequence(o) -> OracleSequence:
    if isinstance(o, OracleSequence):
        return o
    if isinstance(o, PolySystem):
        return OracleSequence.from_system(o)
    if isinstance(o, str):
        return oracle(o)
    raise TypeError(f"cannot use {type(o).__name__} as a sequence")


@dataclass(frozen=True)
class EmpiricalCheck:
    passed: bool
    counterexample: int | None = None
    value: Fraction | None = None

    def __bool__(self):
        return self.passed


def verify_empirical(o, q: MultiPoly, samples: int) -> EmpiricalCheck:
    """Check ``q`` on the windows starting at ``n = 0 .. samples-1``."""
    if q.is_zero():
        raise ZeroPolynomial("a cancelling polynomial must be nonzero")
    if samples < 1:
        raise ValueError("samples must be at least 1")
    o = _as_sequence(o)
    w = q.nvars
    vals = [o(n) for n in range(samples + w - 1)]
    for n in range(samples):
        v = q.evaluate(vals[n:n + w])
        if v != 0:
            return EmpiricalCheck(False, n, v)
    return EmpiricalCheck(True)


def _sample_rows(vals, mons, count, width):
    rows = []
    for n in range(count):
        window = [v.numerator if v.denominator == 1 else v for v in vals[n:n + width]]
        pows = [[1] for _ in window]
        row = []
        for mu in mons:
            t = 1
            for j, e in enumerate(mu):
                if e:
                    pw = pows[j]
                    while len(pw) <= e:
                        pw.append(pw[-1] * window[j])
                    t *= pw[e]
            row.append(t)
        rows.append(row)
    return rows


def _min_samples(unknowns):
    return ceil(unknowns * SAMPLE_MARGIN)


def find_cancelling_empirical(o, window: int, degree: int, samples: int) -> list[CancellingCertificate]:
    """Nullspace of the sampled window conditions for ``Q(x0..x_window)``, deg <= ``degree``.

    The conditions are necessary, so an empty result rules out every
    cancelling polynomial within these bounds.  Survivors are re-checked on
    twice as many windows; if any fails the search is redone on the longer
    prefix.
    """
    o = _as_sequence(o)
    width = window + 1
    mons = monomials_up_to(width, degree)
    if samples < _min_samples(len(mons)):
        raise UnderdeterminedSearch(
            f"{samples} samples for {len(mons)} unknowns; need at least {_min_samples(len(mons))}")
    vals = [o(n) for n in range(2 * samples + width - 1)]
    basis = nullspace(_sample_rows(vals, mons, samples, width), len(mons))
    used = samples
    polys = _basis_polys(basis, mons, width)
    if polys and not all(verify_empirical(o, q, 2 * samples) for q in polys):
        used = 2 * samples
        basis = nullspace(_sample_rows(vals, mons, used, width), len(mons))
        polys = _basis_polys(basis, mons, width)
    return [CancellingCertificate(q, "empirical", 2 * samples) for q in polys]


@dataclass(frozen=True)
class SimpleCandidate:
    """A fitted ``u[n+k] = P(u[n..n+k-1])``.

    ``kernel`` lists polynomials in the first ``k`` window variables that vanish
    on the samples; adding any combination of them to ``P`` fits equally well.
    """

    recurrence: SimpleRecurrence
    kernel: tuple
    samples: int

    @property
    def cancelling(self) -> MultiPoly:
        k = self.recurrence.order
        return MultiPoly.var(k, k + 1) - self.recurrence.rule.extend(k + 1)


def find_simple_recurrence(o, order: int, degree: int, samples: int) -> list[SimpleCandidate]:
    """Fit ``u[n+order] = P(u[n], ..., u[n+order-1])`` with ``deg P <= degree``.

    Returns at most one candidate, re-verified on ``2*samples`` terms.
    """
    o = _as_sequence(o)
    if order < 1:
        raise ValueError("order must be at least 1")
    width = order + 1
    mons = [m + (0,) for m in monomials_up_to(order, degree)]
    lead = (0,) * order + (1,)
    cols = [lead] + mons
    if samples < _min_samples(len(cols)):
        raise UnderdeterminedSearch(
            f"{samples} samples for {len(cols)} unknowns; need at least {_min_samples(len(cols))}")
    vals = [o(n) for n in range(2 * samples + width)]

    def fit(count):
        basis = nullspace(_sample_rows(vals, cols, count, width), len(cols))
        head = [v for v in basis if v[0]]
        rest = [v for v in basis if not v[0]]
        return head, rest

    for count in (samples, 2 * samples):
        head, rest = fit(count)
        if not head:
            return []
        v = head[0]
        rule = MultiPoly(order, {m[:order]: Fraction(-c, v[0]) for m, c in zip(cols[1:], v[1:]) if c})
        kernel = tuple(MultiPoly(order, {m[:order]: c for m, c in zip(cols[1:], r[1:]) if c})
                       for r in rest)
        rec = SimpleRecurrence(rule, [o(n) for n in range(order)])
        cand = SimpleCandidate(rec, kernel, 2 * samples)
        polys = [cand.cancelling] + [q.extend(width) for q in kernel]
        if all(verify_empirical(o, q, 2 * samples) for q in polys):
            return [cand]
    return []


# -- n^n machinery ------------------------------------------------------------

@dataclass(frozen=True)
class NNDecomposition:
    """``Z(n^n, ..., (n+k)^(n+k)) = sum_i P_i(n)^n * Q_i(n)`` together with
    ``S = prod P_i * prod_{i<j} (P_i - P_j)``."""

    pairs: tuple
    S: UniPoly
    window: int = 0

    @classmethod
    def from_pairs(cls, pairs, window=0, check=True):
        pairs = tuple((P, Q) for P, Q in pairs)
        Ps = [P for P, _ in pairs]
        if check:
            if any(P.is_zero() or Q.is_zero() for P, Q in pairs):
                raise ZeroPolynomial("all P_i and Q_i must be nonzero")
            if len(set(Ps)) != len(Ps):
                raise ValueError("the P_i must be pairwise distinct")
        S = UniPoly([1])
        for P in Ps:
            S = S * P
        for i in range(len(Ps)):
            for j in range(i + 1, len(Ps)):
                S = S * (Ps[i] - Ps[j])
        return cls(pairs, S, window)

    @property
    def m(self):
        return len(self.pairs)

    def __call__(self, n: int):
        total = 0
        for P, Q in self.pairs:
            total += P(n) ** n * Q(n)
        return total


def _shifted_power(j, e):
    return UniPoly.x_plus(j) ** e


def nn_decompose(z: MultiPoly) -> NNDecomposition:
    """One pair per monomial ``c * prod x_j^d_j``:
    ``P = prod (x+j)^d_j`` and ``Q = c * prod (x+j)^(j*d_j)``."""
    if z.is_zero():
        raise ZeroPolynomial("Z must be nonzero")
    if not z.has_integer_coefficients():
        raise NonIntegerCoefficient("Z must have integer coefficients")
    pairs = []
    for e, c in z.terms:
        P = UniPoly([1])
        Q = UniPoly([c])
        for j, d in enumerate(e):
            if d:
                P = P * _shifted_power(j, d)
                if j:
                    Q = Q * _shifted_power(j, d * j)
        pairs.append((P, Q))
    return NNDecomposition.from_pairs(pairs, window=z.nvars - 1)


@dataclass(frozen=True)
class VandermondeCheck:
    a: int
    det: int
    s_value: int
    sign: int

    @property
    def holds(self) -> bool:
        return self.det == self.sign * self.s_value

    def __bool__(self):
        return self.holds


def vandermonde_check(dec: NNDecomposition, a: int) -> VandermondeCheck:
    """``det [P_j(a)^i]_{i,j=1..m}`` against ``(-1)^(m(m-1)/2) * S(a)``."""
    m = dec.m
    vals = [P(a) for P, _ in dec.pairs]
    D = [[v ** i for v in vals] for i in range(1, m + 1)]
    sign = -1 if (m * (m - 1) // 2) % 2 else 1
    return VandermondeCheck(a, det(D), dec.S(a), sign)


def crt_witness(a: int, b: int, p: int) -> int:
    """Smallest ``n >= 1`` with ``n = a mod p`` and ``n = b mod (p-1)``.

    ``n = 0`` is skipped because ``0^0 = 1`` breaks the Fermat step when ``P(a) = 0 mod p``.
    """
    n = a % p + p * ((b - a) % (p - 1))
    return n if n else p * (p - 1)


def crt_cross_check(dec: NNDecomposition, p: int, a: int, b: int) -> tuple[int, int]:
    """``(sum P_i(n)^n Q_i(n) mod p, sum P_i(a)^b Q_i(a) mod p)`` for the witness ``n``."""
    n = crt_witness(a, b, p)
    lhs = sum(pow(P(n) % p, n, p) * Q(n) for P, Q in dec.pairs) % p
    rhs = sum(pow(P.eval_mod(a, p), b, p) * Q.eval_mod(a, p) for P, Q in dec.pairs) % p
    return lhs, rhs


@dataclass(frozen=True)
class CongruenceScan:
    p: int
    violations: tuple
    checked: int
    complete: bool

    @property
    def all_zero(self) -> bool:
        return self.complete and not self.violations


def crt_congruence_scan(dec: NNDecomposition, p: int, stop_after: int | None = None) -> CongruenceScan:
    """Evaluate ``sum_i P_i(a)^b Q_i(a) mod p`` for ``0 <= a < p``, ``1 <= b < p``.

    A cancelling ``Z`` for ``n^n`` would make every entry zero, so each nonzero
    entry ``(a, b, value)`` refutes it.  ``stop_after`` ends the scan early once
    that many violations are collected.
    """
    check_prime(p)
    violations = []
    checked = 0
    for a in range(p):
        Ps = [P.eval_mod(a, p) for P, _ in dec.pairs]
        Qs = [Q.eval_mod(a, p) for _, Q in dec.pairs]
        pw = [1] * len(Ps)
        for b in range(1, p):
            pw = [x * y % p for x, y in zip(pw, Ps)]
            value = sum(x * q for x, q in zip(pw, Qs)) % p
            checked += 1
            if value:
                violations.append((a, b, value))
                if stop_after is not None and len(violations) >= stop_after:
                    return CongruenceScan(p, tuple(violations), checked, False)
    return CongruenceScan(p, tuple(violations), checked, True)


@dataclass(frozen=True)
class NNRefutation:
    z: MultiPoly
    decomposition: NNDecomposition
    prime: int
    scan: CongruenceScan
    direct: EmpiricalCheck

    @property
    def refuted(self) -> bool:
        return bool(self.scan.violations)

    @property
    def needs_inspection(self) -> bool:
        return not self.refuted


def refute_nn_candidate(z: MultiPoly, stop_after: int | None = 1,
                        direct_samples: int = 50) -> NNRefutation:
    """Refute ``z`` as a cancelling polynomial of ``n^n``.

    The prime is the smallest one exceeding every coefficient of ``S`` and the
    ``Q_i`` and exceeding ``deg S + max deg Q_i``; over that field none of them
    can vanish identically, so the congruence scan must turn up a nonzero entry.
    """
    if z.is_zero():
        raise ZeroPolynomial("Z must be nonzero")
    if not z.has_integer_coefficients():
        z = clear_denominators(z)[1]
    dec = nn_decompose(z)
    polys = [dec.S] + [Q for _, Q in dec.pairs]
    bound = max(abs(c) for P in polys for c in P.coeffs)
    bound = max(bound, dec.S.degree + max(Q.degree for _, Q in dec.pairs))
    p = int(nextprime(int(bound)))
    scan = crt_congruence_scan(dec, p, stop_after)
    direct = verify_empirical(oracle("n^n"), z, direct_samples)
    return NNRefutation(z, dec, p, scan, direct)
