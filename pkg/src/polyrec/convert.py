"""Conversions between single recurrences and systems of sequences."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .engines import (LinearRecurrence, PolySystem, SimpleRecurrence,
                      eval_system)
from .errors import NonLinearRule
from .linalg import nullspace
from .polycore import MultiPoly

__all__ = ["KernelForm", "single_to_system", "affine_normalize",
           "linear_matrix", "kernel_form", "linear_system_to_single"]


@dataclass(frozen=True)
class KernelForm:
    """Linear form ``a0*u[n] + ... + at*u[n+t]`` vanishing along the sequence."""

    coeffs: tuple

    @property
    def lead(self) -> int:
        return max(i for i, a in enumerate(self.coeffs) if a)

    def __call__(self, window) -> Fraction:
        return sum((a * v for a, v in zip(self.coeffs, window)), Fraction(0))

    def recurrence_coeffs(self) -> tuple:
        t = self.lead
        return tuple(-self.coeffs[i] / self.coeffs[t] for i in range(t))


def single_to_system(r: LinearRecurrence | SimpleRecurrence) -> PolySystem:
    """Shift construction: sequence ``i`` of the system is ``u[n+i]``."""
    k = r.order
    if k < 1:
        raise ValueError("order must be at least 1")
    rule = r.rule() if isinstance(r, LinearRecurrence) else r.rule
    g = MultiPoly.gens(k)
    rules = list(g[1:]) + [rule]
    return PolySystem(r.initials, rules, 0)


def _check_affine(s: PolySystem):
    for i, rule in enumerate(s.rules):
        if (rule.degree or 0) > 1:
            raise NonLinearRule(i, rule.degree)


def affine_normalize(s: PolySystem) -> PolySystem:
    """Move constant terms onto an appended sequence that is constantly 1.

    Systems without constant terms are returned unchanged.
    """
    if all(r.constant_term() == 0 for r in s.rules):
        return s
    k = s.k
    one = MultiPoly.var(k, k + 1)
    rules = []
    for r in s.rules:
        c = r.constant_term()
        rules.append((r - c).extend(k + 1) + one.scale(c))
    rules.append(one)
    names = s.names + (_fresh_name(s.names, "one"),)
    return PolySystem(s.init + (Fraction(1),), rules, s.output, names)


def _fresh_name(names, base):
    name, i = base, 0
    while name in names:
        i += 1
        name = f"{base}{i}"
    return name


def linear_matrix(s: PolySystem) -> list[list[Fraction]]:
    """``M`` with ``state[n+1] = M @ state[n]``; rules must be linear."""
    _check_affine(s)
    k = s.k
    M = []
    for r in s.rules:
        if r.constant_term():
            raise ValueError("affine rule; call affine_normalize first")
        row = [Fraction(0)] * k
        for e, c in r.terms:
            row[e.index(1)] = c
        M.append(row)
    return M


def _row_times(v, M):
    k = len(v)
    return [sum((v[i] * M[i][j] for i in range(k)), Fraction(0)) for j in range(k)]


def kernel_form(s: PolySystem, restrict_to_orbit: bool = False) -> KernelForm:
    """Smallest-width linear form vanishing on every window of the output.

    The rows ``e M^0, e M^1, ...`` express ``u[n+i]`` as a linear function of
    the state at ``n``; widths ``1, 2, ..., k+1`` are tried in turn and the
    first dependency among the rows is returned, normalised so the leading
    coefficient is 1.  That form is valid for every initial state.

    With ``restrict_to_orbit`` the rows are only required to agree on the span
    of the states actually visited, which can give a lower order when the
    initial state lies in a proper invariant subspace.
    """
    _check_affine(s)
    s = affine_normalize(s)
    k = s.k
    M = linear_matrix(s)
    # the visited states span the orbit; pairing w_i with them gives Hankel rows u[i+j]
    states = [eval_system(s, j) for j in range(k)] if restrict_to_orbit else None

    def rows_of(w):
        if states is None:
            return w
        return [sum((a * b for a, b in zip(w, st)), Fraction(0)) for st in states]

    w = [Fraction(0)] * k
    w[s.output] = Fraction(1)
    window = [w]
    for width in range(1, k + 2):
        if width > 1:
            window.append(_row_times(window[-1], M))
        cols = [rows_of(v) for v in window]
        # columns are the window rows; kernel vectors are the form's coefficients
        matrix = [[c[r] for c in cols] for r in range(len(cols[0]))]
        basis = nullspace(matrix, width)
        if basis:
            a = basis[0]
            t = max(i for i, x in enumerate(a) if x)
            return KernelForm(tuple(Fraction(x, a[t]) for x in a[: t + 1]))
    raise AssertionError("k+1 vectors in a k-dimensional space are always dependent")


def linear_system_to_single(s: PolySystem, restrict_to_orbit: bool = False) -> LinearRecurrence:
    """Single recurrence of minimal width for the output of an affine system."""
    form = kernel_form(s, restrict_to_orbit)
    t = form.lead
    coeffs = form.recurrence_coeffs()
    n0 = affine_normalize(s)
    initials = []
    state = n0.init
    for _ in range(t):
        initials.append(state[n0.output])
        state = n0.step(state)
    return LinearRecurrence(coeffs, initials)
