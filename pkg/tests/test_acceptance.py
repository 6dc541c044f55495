"""The eleven acceptance criteria, each with its wall-clock limit.

Every criterion prints one ``PASS``/``FAIL`` line (also repeated in the terminal
summary) whether or not its checks hold.
"""
import random
import time
from contextlib import contextmanager
from fractions import Fraction
from math import factorial

import pytest

from conftest import ACCEPTANCE
from oracles import SEQUENCES, catalan, catalan_blocks_bruteforce, fib, nn, sym_det
from polyrec.automata import wa_eval, wcfg_catalan_view, wmso_eval
from polyrec.cancelling import (NNDecomposition, crt_cross_check, crt_witness,
                                find_cancelling_empirical, find_cancelling_symbolic,
                                find_simple_recurrence, nn_decompose, refute_nn_candidate,
                                vandermonde_check, verify_symbolic)
from polyrec.cli import corpus_path
from polyrec.convert import linear_system_to_single, single_to_system
from polyrec.dsl import build, parse_document, parse_expr
from polyrec.engines import (BUILTINS, PolySystem, RationalSystem, builtin, eval_linear,
                             eval_output, eval_rational, oracle, outputs)
from polyrec.errors import DenominatorVanished, OverflowBudget, ParseError, PolyrecError
from polyrec.linalg import in_span
from polyrec.modular import (ModSystem, catalan_blocks, detect_period, oracle_mod_scan,
                             reconstruct_residues)
from polyrec.normalize import is_normalized, pipeline
from polyrec.polycore import MultiPoly, UniPoly, monomials_up_to


def corpus(name):
    return build(parse_document(corpus_path(name).read_bytes()))


@contextmanager
def criterion(number, title, limit=None):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        in_time = limit is None or elapsed < limit
        verdict = "PASS" if ok and in_time else "FAIL"
        bound = f" (limit {limit:g}s)" if limit else ""
        line = f"{verdict} criterion {number:2d}: {title} [{elapsed:.2f}s{bound}]"
        ACCEPTANCE[number] = line
        print(line)
    assert in_time, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"


def test_c01_builtin_fidelity():
    with criterion(1, "builtin fidelity", 1.0):
        cases = [("fib.seq", "fibonacci", 30), ("factorial.seq", "factorial", 20),
                 ("nsquared.seq", "nsquared", 100), ("power_tower.seq", "power_tower", 6),
                 ("two_pow_nsq.seq", "two_pow_nsq", 12)]
        for path, name, bound in cases:
            want = [SEQUENCES[name](n) for n in range(bound + 1)]
            assert outputs(corpus(path), bound + 1) == want, path
            assert outputs(builtin(name), bound + 1) == want, name


def _random_linear(rng):
    k = rng.randint(1, 4)
    x = MultiPoly.gens(k)
    rules = [sum((rng.randint(-5, 5) * x[j] for j in range(k)), MultiPoly.zero(k))
             for _ in range(k)]
    return PolySystem([rng.randint(-5, 5) for _ in range(k)], rules, rng.randrange(k))


def test_c02_round_trip():
    with criterion(2, "linear system round trip", 5.0):
        rng = random.Random(1)
        for _ in range(100):
            s = _random_linear(rng)
            r = linear_system_to_single(s)
            assert r.order <= s.k
            want = outputs(s, 61, max_bits=None)
            assert outputs(single_to_system(r), 61, max_bits=None) == want
        r = linear_system_to_single(corpus("nsquared.seq"))
        assert r.order <= 3
        assert [eval_linear(r, n) for n in range(101)] == [n * n for n in range(101)]


PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31]


def test_c03_periodicity_pipeline():
    with criterion(3, "normalize, detect period, reconstruct residues", 30.0):
        for name in BUILTINS:
            s = builtin(name)
            t, meta = pipeline(s)
            assert is_normalized(t, meta.d)
            assert all(c.denominator == 1 for r in t.rules for c in r.coefficients())
            assert all(Fraction(v).denominator == 1 for v in t.init)
            for p in PRIMES:
                if p <= meta.a:
                    continue
                m = ModSystem.from_system(t, p)
                rep = detect_period(m, cutoff=p ** m.k + 1)
                assert rep.periodic and rep.preperiod + rep.period <= p ** m.k + 1
                if name == "power_tower":
                    want = [pow(2, 2 ** n, p) for n in range(101)]
                else:
                    want = [SEQUENCES[name](n) % p for n in range(101)]
                assert list(reconstruct_residues(s, p, 101)) == want, (name, p)


def _multiplicity(k, q):
    m = 0
    while k % q == 0:
        k //= q
        m += 1
    return m


def test_c04_catalan_blocks():
    with criterion(4, "Catalan p-blocks and no small period mod 5", 30.0):
        for p in (5, 7, 11):
            rep = catalan_blocks(p, 5)
            assert [(b.start, b.observed) for b in rep.blocks] == catalan_blocks_bruteforce(p, 5)
            for b in rep.blocks:
                m = _multiplicity(b.k, (p + 1) // 2)
                assert b.observed == (p ** (m + 1) - 3) // 2
        scan = oracle_mod_scan(oracle("catalan"), 5, 2000, max_period=200)
        assert not scan.found
        assert list(scan.residues[:50]) == [catalan(n) % 5 for n in range(50)]


def test_c05_factorial_cancelling():
    with criterion(5, "symbolic cancelling polynomial for n!", 5.0):
        s = corpus("factorial.seq")
        text = corpus_path("factorial_cancelling.poly").read_text()
        q = parse_expr(" ".join(ln.split("#")[0] for ln in text.splitlines()), nvars=3)
        assert q == parse_expr("x0*x2 - x1^2 - x0*x1")
        check = verify_symbolic(s, q)
        assert check.passed and check.residual.is_zero()
        certs = find_cancelling_symbolic(s, 2)
        vec = [q.coefficient(e) for e in monomials_up_to(3, 2)]
        assert in_span(vec, [[c.poly.coefficient(e) for e in monomials_up_to(3, 2)] for c in certs])


def test_c06_no_simple_recurrence_for_factorial():
    with criterion(6, "no simple recurrence for n! within k<=3, D<=3", 60.0):
        o = oracle("factorial")
        for k in (1, 2, 3):
            for D in (1, 2, 3):
                assert find_simple_recurrence(o, k, D, 50) == [], (k, D)


def test_c07_nn_has_no_small_cancelling_polynomial():
    with criterion(7, "empty nullspace for n^n at (k,D) = (2,3) and (3,2)", 120.0):
        o = corpus("nn.seq")
        assert o(0) == 1 and o(5) == 5 ** 5
        assert find_cancelling_empirical(o, 2, 3, 60) == []
        assert find_cancelling_empirical(o, 3, 2, 60) == []


def _random_z(rng):
    k = rng.randint(0, 2)
    mons = monomials_up_to(k + 1, 2)
    chosen = rng.sample(mons, min(rng.randint(1, 4), len(mons)))
    return MultiPoly(k + 1, {m: rng.choice([-3, -2, -1, 1, 2, 3]) for m in chosen})


def test_c08_nn_machinery():
    with criterion(8, "decomposition, Vandermonde, CRT and refutation for n^n", 60.0):
        rng = random.Random(8)
        for _ in range(20):
            z = _random_z(rng)
            dec = nn_decompose(z)
            for n in range(16):
                assert z.evaluate([nn(n + j) for j in range(z.nvars)]) == dec(n)
        for _ in range(50):
            m = rng.randint(1, 4)
            Ps = set()
            while len(Ps) < m:
                Ps.add(UniPoly([rng.randint(-6, 6), rng.randint(1, 3)]))
            dec = NNDecomposition.from_pairs([(P, UniPoly([1])) for P in sorted(Ps, key=str)])
            a = rng.randint(-10, 10)
            chk = vandermonde_check(dec, a)
            mat = [[P(a) ** i for P, _ in dec.pairs] for i in range(1, m + 1)]
            assert chk.holds and chk.det == sym_det(mat)
            assert chk.det == (-1) ** (m * (m - 1) // 2) * dec.S(a)
        primes = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31]
        for _ in range(100):
            p = rng.choice(primes)
            dec = nn_decompose(_random_z(rng))
            a, b = rng.randrange(p), rng.randint(1, p - 1)
            n = crt_witness(a, b, p)
            assert n % p == a and n % (p - 1) == b % (p - 1)
            lhs, rhs = crt_cross_check(dec, p, a, b)
            assert lhs == rhs == sum(P(n) ** n * Q(n) for P, Q in dec.pairs) % p
        for _ in range(10):
            r = refute_nn_candidate(_random_z(rng))
            assert r.refuted and not r.needs_inspection


def test_c09_automata_separations():
    with criterion(9, "grammar, WMSO and automaton values", 5.0):
        g = corpus("catalan_grammar.seq")
        assert [wcfg_catalan_view(g, n) for n in range(21)] == [catalan(n) for n in range(21)]
        e = corpus("nn_wmso.seq")
        assert [wmso_eval(e, n) for n in range(13)] == [nn(n) for n in range(13)]
        a = corpus("nsquared_automaton.seq")
        assert [wa_eval(a, n) for n in range(41)] == [n * n for n in range(41)]


def test_c10_rational_catalan():
    with criterion(10, "rational Catalan engine and vanishing denominators", 1.0):
        s = corpus("catalan_rational.seq")
        assert [eval_rational(s, n) for n in range(31)] == [catalan(n) for n in range(31)]
        u, m = MultiPoly.gens(2)
        bad = RationalSystem((1, 0), (u, m + 1), (m - 2, MultiPoly.const(1, 2)))
        with pytest.raises(DenominatorVanished):
            eval_rational(bad, 5)
        assert eval_rational(bad, 2) == Fraction(1, 2)


FUZZ_ALPHABET = b"kindvarsoutput:=,'x0123456789+-*/^() \n#.->abcXY_"


def _fuzz_inputs(rng, seeds, count):
    for i in range(count):
        mode = i % 4
        if mode == 0:
            yield bytes(rng.randrange(256) for _ in range(rng.randint(0, 64)))
        elif mode == 1:
            yield bytes(rng.choice(FUZZ_ALPHABET) for _ in range(rng.randint(0, 64)))
        else:
            data = bytearray(rng.choice(seeds))
            for _ in range(rng.randint(1, 4)):
                j = rng.randrange(len(data) + 1)
                r = rng.random()
                if r < 0.4 and data:
                    del data[min(j, len(data) - 1)]
                elif r < 0.8:
                    data.insert(j, rng.choice(FUZZ_ALPHABET))
                else:
                    data.insert(j, rng.randrange(256))
            yield bytes(data)


def test_c11_robustness():
    with criterion(11, "parser fuzz (100000 inputs) and overflow budget"):
        rng = random.Random(11)
        seeds = [corpus_path(n).read_bytes() for n in
                 ("fib.seq", "factorial.seq", "catalan_rational.seq", "nsquared_automaton.seq",
                  "catalan_grammar.seq", "nn_wmso.seq", "fib_linear.seq", "nn.seq")]
        accepted = rejected = 0
        for blob in _fuzz_inputs(rng, seeds, 100_000):
            try:
                build(parse_document(blob))
                accepted += 1
            except (PolyrecError, ZeroDivisionError):
                rejected += 1
            try:
                parse_expr(blob.decode("latin-1"))
            except (ParseError, ZeroDivisionError):
                pass
        assert accepted + rejected == 100_000 and accepted > 0 and rejected > 0
        with pytest.raises(OverflowBudget):
            eval_output(builtin("power_tower"), 40)
        with pytest.raises(OverflowBudget):
            eval_output(corpus("power_tower.seq"), 40)
