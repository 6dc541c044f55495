"""Residues of integer systems mod p: cycle detection, residue reconstruction,
and Catalan p-block analysis.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .engines import OracleSequence, PolySystem
from .errors import NonIntegerCoefficient, PrimeTooSmall
from .normalize import pipeline
from .polycore import ModPoly, check_prime, reduce_mod

__all__ = ["ModSystem", "PeriodicityReport", "detect_period", "project_period",
           "reconstruct_residues", "output_period", "ScanReport", "oracle_mod_scan",
           "BlockObservation", "BlockReport", "predicted_block_length",
           "catalan_blocks", "catalan_residues"]

DEFAULT_TABLE_LIMIT = 2_000_000


@dataclass(frozen=True)
class ModSystem:
    """Integer poly-recursive system reduced mod a prime."""

    p: int
    rules: tuple
    init: tuple
    output: int = 0

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "init", tuple(int(v) % self.p for v in self.init))
        if len(self.rules) != len(self.init):
            raise ValueError("one rule per sequence")
        object.__setattr__(self, "_compiled", tuple(
            tuple((c, tuple((i, k) for i, k in enumerate(e) if k)) for e, c in r.terms)
            for r in self.rules))

    @classmethod
    def from_system(cls, s: PolySystem, p: int) -> "ModSystem":
        if any(v.denominator != 1 for v in s.init):
            raise NonIntegerCoefficient("initial values must be integers")
        rules = tuple(reduce_mod(r, p) for r in s.rules)
        return cls(p, rules, tuple(v.numerator for v in s.init), s.output)

    @property
    def k(self):
        return len(self.init)

    def step(self, state: tuple) -> tuple:
        p = self.p
        out = []
        for rule in self._compiled:
            total = 0
            for c, factors in rule:
                t = c
                for i, k in factors:
                    t = t * (state[i] if k == 1 else pow(state[i], k, p))
                total += t
            out.append(total % p)
        return tuple(out)

    def states(self) -> Iterator[tuple]:
        state = self.init
        while True:
            yield state
            state = self.step(state)

    def pack(self, state) -> int:
        key = 0
        for v in state:
            key = key * self.p + v
        return key


@dataclass(frozen=True)
class PeriodicityReport:
    """``preperiod``/``period`` are ``None`` when the cutoff was exhausted."""

    preperiod: int | None
    period: int | None
    steps: int
    method: str = "table"

    @property
    def periodic(self) -> bool:
        return self.period is not None


def _brent(m: ModSystem, cutoff: int) -> PeriodicityReport:
    f = m.step
    x0 = m.init
    power = lam = 1
    tortoise, hare = x0, f(x0)
    steps = 1
    limit = 4 * (cutoff + 1)
    while tortoise != hare:
        if steps > limit:
            return PeriodicityReport(None, None, cutoff, "brent")
        if power == lam:
            tortoise = hare
            power *= 2
            lam = 0
        hare = f(hare)
        lam += 1
        steps += 1
    tortoise = hare = x0
    for _ in range(lam):
        hare = f(hare)
    mu = 0
    while tortoise != hare:
        tortoise, hare = f(tortoise), f(hare)
        mu += 1
    if mu + lam > cutoff:
        return PeriodicityReport(None, None, cutoff, "brent")
    return PeriodicityReport(mu, lam, mu + lam, "brent")


def detect_period(m: ModSystem, cutoff: int | None = None,
                  table_limit: int = DEFAULT_TABLE_LIMIT) -> PeriodicityReport:
    """Exact minimal preperiod and period of the state sequence.

    States ``0..cutoff`` are examined (default ``p**k``, enough for a
    guaranteed repeat).  Visited states go into a dict keyed by the packed
    residue vector; past ``table_limit`` entries the search restarts with
    Brent's algorithm, which needs constant memory.
    """
    if cutoff is None:
        cutoff = m.p ** m.k
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    seen: dict[int, int] = {}
    state = m.init
    for n in range(cutoff + 1):
        key = m.pack(state)
        if key in seen:
            return PeriodicityReport(seen[key], n - seen[key], n)
        if len(seen) >= table_limit:
            return _brent(m, cutoff)
        seen[key] = n
        state = m.step(state)
    return PeriodicityReport(None, None, cutoff)


def _divisors(n):
    small = [d for d in range(1, int(n ** 0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def project_period(m: ModSystem, report: PeriodicityReport,
                   index: int | None = None) -> PeriodicityReport:
    """Minimal preperiod/period of one coordinate of a periodic state sequence."""
    if not report.periodic:
        raise ValueError("state report is not periodic")
    if index is None:
        index = m.output
    mu, lam = report.preperiod, report.period
    r = [state[index] for state, _ in zip(m.states(), range(mu + lam))]
    return _minimal_period(r, mu, lam, report)


def reconstruct_residues(original: PolySystem, p: int, count: int | None = None) -> Iterator[int]:
    """Stream ``u_n mod p`` computed entirely in residues.

    The system is normalised (integer initials, homogeneous of degree ``d``,
    integer coefficients after scaling by ``a``), iterated mod ``p``, and each
    scaled residue is multiplied by ``b_n = b ** ((d**n - 1)/(d - 1))`` where
    ``a*b = 1 mod p``; ``b_n`` itself follows ``b_{n+1} = b * b_n**d``.
    """
    check_prime(p)
    norm, meta = pipeline(original)
    if not meta.output_initial_integral:
        raise NonIntegerCoefficient("output sequence must be integral")
    if p <= meta.a:
        raise PrimeTooSmall(f"p = {p} must exceed the scaling constant a = {meta.a}")
    m = ModSystem.from_system(norm, p)
    b = pow(meta.a, -1, p)
    d = meta.d
    bn = 1
    state = m.init
    n = 0
    while count is None or n < count:
        yield bn * state[m.output] % p
        state = m.step(state)
        bn = b * pow(bn, d, p) % p
        n += 1


def output_period(original: PolySystem, p: int, cutoff: int | None = None,
                  table_limit: int = DEFAULT_TABLE_LIMIT) -> tuple[PeriodicityReport, PeriodicityReport]:
    """Periodicity of the normalised state and of the true residues ``u_n mod p``.

    The scaling factor ``b_n`` is carried as one more coordinate (rule
    ``b * x^d``), so the extended state determines the residue and its cycle
    bounds the residue cycle.  The default cutoff is ``p ** (k + 1)`` for the
    extended state.
    """
    check_prime(p)
    norm, meta = pipeline(original)
    if not meta.output_initial_integral:
        raise NonIntegerCoefficient("output sequence must be integral")
    if p <= meta.a:
        raise PrimeTooSmall(f"p = {p} must exceed the scaling constant a = {meta.a}")
    base = ModSystem.from_system(norm, p)
    k = base.k
    rules = [ModPoly(p, k + 1, {e + (0,): c for e, c in r.terms}) for r in base.rules]
    b = pow(meta.a, -1, p)
    rules.append(ModPoly(p, k + 1, {(0,) * k + (meta.d,): b}))
    ext = ModSystem(p, tuple(rules), base.init + (1,), base.output)
    state = detect_period(ext, cutoff, table_limit)
    if not state.periodic:
        return state, state
    mu, lam = state.preperiod, state.period
    r = [st[ext.output] * st[k] % p for st, _ in zip(ext.states(), range(mu + lam))]
    return state, _minimal_period(r, mu, lam, state)


def _minimal_period(r, mu, lam, report):
    cycle = r[mu:]
    for d in _divisors(lam):
        if all(cycle[i] == cycle[(i + d) % lam] for i in range(lam)):
            break
    n0 = mu
    while n0 > 0 and r[n0 - 1] == r[n0 - 1 + d]:
        n0 -= 1
    return PeriodicityReport(n0, d, report.steps, report.method)


def _residue(v: Fraction, p: int) -> int:
    if v.denominator % p == 0:
        raise ZeroDivisionError(f"denominator of {v} is divisible by {p}")
    return v.numerator * pow(v.denominator, -1, p) % p


@dataclass(frozen=True)
class ScanReport:
    residues: tuple
    preperiod: int | None
    period: int | None
    max_period: int

    @property
    def found(self) -> bool:
        return self.period is not None


def oracle_mod_scan(o: OracleSequence, p: int, window: int,
                    max_period: int | None = None,
                    max_preperiod: int | None = None) -> ScanReport:
    """Residues of ``o`` for ``n < window`` plus a periodicity guess.

    A pair ``(preperiod, period)`` is reported only if ``r[n] == r[n + period]``
    holds for every ``n >= preperiod`` inside the window, the period is at most
    ``max_period`` (default ``window // 4``) and the preperiod at most
    ``max_preperiod`` (default ``window // 2``).  Finding nothing is not a proof
    of aperiodicity.
    """
    check_prime(p)
    if window < 1:
        raise ValueError("window must be at least 1")
    if max_period is None:
        max_period = max(1, window // 4)
    if max_preperiod is None:
        max_preperiod = window // 2
    r = [_residue(o(n), p) for n in range(window)]
    for lam in range(1, min(max_period, window - 1) + 1):
        mu = window - lam
        while mu > 0 and r[mu - 1] == r[mu - 1 + lam]:
            mu -= 1
        if mu <= max_preperiod and window - mu >= 2 * lam:
            return ScanReport(tuple(r), mu, lam, max_period)
    return ScanReport(tuple(r), None, None, max_period)


# -- Catalan p-blocks -----------------------------------------------------------

def _split(x: int, p: int) -> tuple[int, int]:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v, x % p


def catalan_residues(p: int) -> Iterator[int]:
    """``C_n mod p`` for ``n = 0, 1, ...`` via ``C_{n+1} = C_n (4n+2)/(n+2)``,
    tracking the p-adic valuation and the unit part separately."""
    v, u = 0, 1
    n = 0
    while True:
        yield 0 if v else u
        v1, u1 = _split(4 * n + 2, p)
        v2, u2 = _split(n + 2, p)
        v += v1 - v2
        u = u * u1 * pow(u2, -1, p) % p
        n += 1


def predicted_block_length(p: int, k: int) -> int:
    """``(p**(m+1) - 3) / 2`` with ``m`` the multiplicity of ``(p+1)/2`` in ``k``."""
    q = (p + 1) // 2
    m = 0
    while k % q == 0:
        k //= q
        m += 1
    return (p ** (m + 1) - 3) // 2


@dataclass(frozen=True)
class BlockObservation:
    k: int
    start: int
    observed: int
    predicted: int


@dataclass(frozen=True)
class BlockReport:
    p: int
    blocks: tuple

    @property
    def all_match(self) -> bool:
        return all(b.observed == b.predicted for b in self.blocks)


def catalan_blocks(p: int, count: int) -> BlockReport:
    """First ``count`` maximal runs of Catalan numbers divisible by ``p``."""
    check_prime(p)
    if p <= 3:
        raise ValueError("p must be a prime > 3")
    blocks = []
    start = None
    for n, r in enumerate(catalan_residues(p)):
        if len(blocks) == count:
            break
        if r == 0:
            if start is None:
                start = n
        elif start is not None:
            k = len(blocks) + 1
            blocks.append(BlockObservation(k, start, n - start, predicted_block_length(p, k)))
            start = None
    return BlockReport(p, tuple(blocks))
