"""System transforms that prepare a poly-recursive system for reduction mod p.

``integerize_initials`` rescales auxiliary sequences so every initial value is
an integer, ``homogenize`` pads every monomial to a common degree ``d`` using
an appended sequence that stays 1, and ``integer_scale`` multiplies every rule
by the smallest ``a`` that clears coefficient denominators.  After the last
step the state at ``n`` is ``a ** ((d**n - 1) // (d - 1))`` times the original.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from math import lcm

from .engines import PolySystem
from .errors import DegreeTooSmall, NonIntegerCoefficient, NotHomogeneous
from .polycore import MultiPoly

__all__ = ["ScalingMeta", "integerize_initials", "homogenize", "integer_scale",
           "pipeline", "is_normalized"]


@dataclass(frozen=True)
class ScalingMeta:
    a: int = 1
    d: int | None = None
    denominators: tuple = ()
    output_initial_integral: bool = True

    def scale_factor(self, n: int) -> int:
        """``a ** ((d**n - 1) / (d - 1))``; only sensible for small ``n``."""
        if self.d is None:
            return 1
        return self.a ** ((self.d ** n - 1) // (self.d - 1))


def integerize_initials(s: PolySystem) -> tuple[PolySystem, ScalingMeta]:
    """Replace auxiliary sequence ``i`` by ``q_i * u_i`` with ``q_i`` the denominator
    of its initial value."""
    k = s.k
    qs = [v.denominator for v in s.init]
    out_ok = qs[s.output] == 1
    if not out_ok:
        warnings.warn("initial value of the output sequence is not an integer; "
                      "only auxiliary sequences are rescaled", stacklevel=2)
        qs[s.output] = 1
    if all(q == 1 for q in qs):
        return s, ScalingMeta(denominators=tuple(qs), output_initial_integral=out_ok)
    subst = [MultiPoly.var(i, k).scale(Fraction(1, q)) for i, q in enumerate(qs)]
    rules = [r.compose(subst).scale(q) for r, q in zip(s.rules, qs)]
    init = [v * q for v, q in zip(s.init, qs)]
    return (replace(s, init=tuple(init), rules=tuple(rules)),
            ScalingMeta(denominators=tuple(qs), output_initial_integral=out_ok))


def homogenize(s: PolySystem, d: int | None = None) -> tuple[PolySystem, ScalingMeta]:
    """Append a sequence constantly 1 (rule ``x^d``) and pad every monomial to degree ``d``."""
    top = s.max_degree
    if d is None:
        d = max(2, top)
    if d < 2 or d < top:
        raise DegreeTooSmall(f"d = {d} must be >= 2 and >= the maximal rule degree {top}")
    k = s.k
    rules = []
    for r in s.rules:
        rules.append(MultiPoly(k + 1, {e + (d - sum(e),): c for e, c in r.terms}))
    rules.append(MultiPoly.var(k, k + 1) ** d)
    names = s.names + (_fresh(s.names),)
    return (PolySystem(s.init + (Fraction(1),), rules, s.output, names),
            ScalingMeta(d=d))


def _fresh(names):
    name, i = "h", 0
    while name in names:
        i += 1
        name = f"h{i}"
    return name


def integer_scale(s: PolySystem) -> tuple[PolySystem, ScalingMeta]:
    """Multiply every rule by the lcm ``a`` of all coefficient denominators."""
    degs = {sum(e) for r in s.rules for e in r.monomials()}
    if len(degs) > 1:
        raise NotHomogeneous(f"rules mix total degrees {sorted(degs)}")
    d = degs.pop() if degs else 2
    if d < 2:
        raise NotHomogeneous(f"common degree must be at least 2, got {d}")
    if any(v.denominator != 1 for v in s.init):
        raise NonIntegerCoefficient("initial values must be integers")
    a = lcm(1, *(c.denominator for r in s.rules for c in r.coefficients()))
    if a == 1:
        return s, ScalingMeta(a=1, d=d)
    return replace(s, rules=tuple(r.scale(a) for r in s.rules)), ScalingMeta(a=a, d=d)


def pipeline(s: PolySystem, d: int | None = None) -> tuple[PolySystem, ScalingMeta]:
    """integerize -> homogenize -> integer_scale, with the merged metadata."""
    s1, m1 = integerize_initials(s)
    s2, m2 = homogenize(s1, d)
    s3, m3 = integer_scale(s2)
    return s3, ScalingMeta(a=m3.a, d=m2.d, denominators=m1.denominators,
                           output_initial_integral=m1.output_initial_integral)


def is_normalized(s: PolySystem, d: int) -> bool:
    """Integer initials, integer coefficients, every monomial of degree ``d``."""
    return (all(v.denominator == 1 for v in s.init)
            and all(r.has_integer_coefficients() and r.is_homogeneous(d) for r in s.rules))
