import json
import random
import subprocess
import sys
from fractions import Fraction
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polyrec.cli import SCHEMA_VERSION, corpus_path, main, run
from polyrec.dsl import (ExpressionTooLarge, SequenceDoc, build, parse_document, parse_expr,
                         parse_rational, parse_rational_expr, serialize, to_doc)
from polyrec.engines import builtin, eval_output, outputs
from polyrec.errors import NegativeExponent, ParseError, PolyrecError, UnknownVariable
from polyrec.polycore import MultiPoly

CORPUS = sorted(p.name for p in (resources.files("polyrec") / "corpus").iterdir()
                if p.name.endswith(".seq"))


# -- expressions --------------------------------------------------------------

def test_parse_expr_examples():
    b, c = MultiPoly.gens(2)
    assert parse_expr("b*c", ("b", "c")) == b * c
    x = MultiPoly.gens(3)
    q = parse_expr("x0*x2 - x1^2 - x0*x1")
    assert q == x[0] * x[2] - x[1] ** 2 - x[0] * x[1]
    # printing uses descending graded-lex order
    assert str(q) == "-x0*x1 + x0*x2 - x1^2"
    assert parse_expr(str(q)) == q
    assert parse_expr("((x1))") == MultiPoly.var(1, 2)


def test_precedence_and_unary_minus():
    x = MultiPoly.gens(2)
    assert parse_expr("-x0^2", nvars=2) == -(x[0] ** 2)
    assert parse_expr("2^3^2") == MultiPoly.const(2 ** 9, 0)
    assert parse_expr("0^0") == MultiPoly.const(1, 0)
    assert parse_expr("(x0 - x0)^3").is_zero()
    assert parse_expr("x0 - x1 - 1") == x[0] - x[1] - 1
    assert parse_expr("x0 - (x1 - 1)") == x[0] - x[1] + 1
    assert parse_expr("(x0 + x1)^2 / 4") == (x[0] + x[1]) ** 2 / 4
    assert parse_expr("1/3 * x0", nvars=2) == x[0] / 3
    assert parse_expr("--x0", nvars=2) == x[0]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.fractions(max_denominator=5).filter(lambda f: abs(f) < 50),
                          st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))),
                max_size=6))
def test_print_parse_identity(terms):
    x = MultiPoly.gens(3)
    p = MultiPoly.zero(3)
    for c, (a, b, d) in terms:
        p = p + c * x[0] ** a * x[1] ** b * x[2] ** d
    assert parse_expr(str(p), nvars=3) == p
    names = ("u", "v", "w")
    assert parse_expr(p.to_str(names), names) == p


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as info:
        parse_expr("x0 + * x1")
    assert (info.value.line, info.value.column) == (1, 6)
    with pytest.raises(UnknownVariable) as info:
        parse_expr("b + z", ("b", "c"))
    assert info.value.column == 5
    with pytest.raises(NegativeExponent):
        parse_expr("x0^-1")
    with pytest.raises(ParseError):
        parse_expr("x0^x1")
    with pytest.raises(ParseError):
        parse_expr("(x0")
    with pytest.raises(ParseError):
        parse_expr("x0 / x1")
    with pytest.raises(ParseError) as info:
        parse_expr("x0 / 0")
    assert info.value.column == 4


def test_decimals_rejected():
    for text in ("0.333", "1.5*x0", "x0 + .5"):
        with pytest.raises(ParseError):
            parse_expr(text)
    with pytest.raises(ParseError):
        parse_rational("0.5")
    assert parse_rational(" -1/3 ") == Fraction(-1, 3)


def test_size_limits():
    with pytest.raises(ExpressionTooLarge):
        parse_expr("x0^100000")
    with pytest.raises(ExpressionTooLarge):
        parse_expr("(x0 + x1 + x2 + x3)^500")
    with pytest.raises(ExpressionTooLarge):
        parse_expr("(" * 500 + "x0" + ")" * 500)


def test_rational_expr():
    n, d = parse_rational_expr("C*(4*n + 2)/(n + 2)", ("C", "n"))
    C, m = MultiPoly.gens(2)
    assert n == C * (4 * m + 2) and d == m + 2
    n, d = parse_rational_expr("C/2", ("C", "n"))
    assert n == C / 2 and d == MultiPoly.const(1, 2)


# -- documents ----------------------------------------------------------------

@pytest.mark.parametrize("name", CORPUS)
def test_corpus_round_trip(name):
    doc = parse_document(corpus_path(name).read_bytes())
    again = parse_document(serialize(doc))
    assert again == doc
    assert serialize(again) == serialize(doc)
    model = build(doc)
    assert parse_document(serialize(to_doc(model))) == to_doc(model)


def test_corpus_values():
    assert eval_output(build(parse_document(corpus_path("fib.seq").read_bytes())), 10) == 55
    fact = build(parse_document(corpus_path("factorial.seq").read_bytes()))
    assert outputs(fact, 8) == outputs(builtin("factorial"), 8)


def test_builtins_serialize():
    for name in ("fibonacci", "factorial", "nsquared", "power_tower", "two_pow_nsq"):
        s = builtin(name)
        doc = to_doc(s)
        back = build(parse_document(serialize(doc)))
        assert outputs(back, 6) == outputs(s, 6)


def test_document_errors():
    cases = {
        "vars: a\n": (1, 1),
        "kind: poly_system\nvars: a, b\ninit: 1\na' = a\nb' = b\n": (3, 7),
        "kind: poly_system\nvars: a\ninit: 1\na' = a + q\n": (4, 10),
        "kind: poly_system\nvars: a\ninit: 0.5\na' = a\n": (3, 7),
        "kind: banana\n": (1, 7),
    }
    for text, pos in cases.items():
        with pytest.raises(ParseError) as info:
            parse_document(text)
        assert (info.value.line, info.value.column) == pos, text
    with pytest.raises(ParseError):
        parse_document(b"\xff\xfe kind")


def test_doc_is_plain_data():
    doc = SequenceDoc("oracle", name="catalan")
    assert serialize(doc) == "kind: oracle\nname: catalan\n"
    assert parse_document(serialize(doc)) == doc


def _mutate(rng, text):
    chars = list(text)
    alphabet = "x0123456789+-*/^()= ,:'\n#.abc->"
    for _ in range(rng.randint(1, 6)):
        op = rng.random()
        i = rng.randrange(len(chars) + 1)
        if op < 0.4 and chars:
            del chars[min(i, len(chars) - 1)]
        elif op < 0.8:
            chars.insert(i, rng.choice(alphabet))
        else:
            chars[i:i] = chars[rng.randrange(len(chars) or 1):][:5]
    return "".join(chars)


def test_parser_fuzz_small():
    # larger runs live in the acceptance suite
    rng = random.Random(5)
    seeds = [corpus_path(n).read_text() for n in CORPUS]
    for _ in range(3000):
        text = _mutate(rng, rng.choice(seeds))
        try:
            build(parse_document(text))
        except PolyrecError:
            pass
        except ZeroDivisionError:
            pass
    for _ in range(3000):
        blob = bytes(rng.randrange(256) for _ in range(rng.randint(0, 40)))
        try:
            parse_document(blob)
        except ParseError:
            pass


@settings(max_examples=300, deadline=None)
@given(st.text(alphabet="x0123 +-*/^().", max_size=30))
def test_parse_expr_never_crashes(text):
    try:
        parse_expr(text)
    except (ParseError, ZeroDivisionError):
        pass


# -- command line ---------------------------------------------------------------

def test_cli_eval():
    r = run(["eval", "--file", "fib.seq", "--n", "10"])
    assert r.status == 0 and r.report["value"] == "55"
    assert "value: 55" in r.text


def test_cli_verify():
    r = run(["verify-cancelling", "--file", "factorial.seq", "--poly", "x0*x2 - x1^2 - x0*x1"])
    assert r.status == 0
    assert "symbolic: PASS" in r.text
    r = run(["verify-cancelling", "--file", "factorial.seq", "--poly", "@factorial_cancelling.poly"])
    assert "symbolic: PASS" in r.text
    r = run(["verify-cancelling", "--file", "factorial.seq", "--poly", "x0*x2 - x1^2"])
    assert r.status == 0 and "symbolic: FAIL" in r.text


def test_cli_mod_analyze():
    r = run(["mod-analyze", "--file", "factorial.seq", "--prime", "5", "--format", "json"])
    assert r.status == 0
    doc = json.loads(r.text)
    assert (doc["preperiod"], doc["period"]) == (5, 1)
    assert doc["schema_version"] == SCHEMA_VERSION
    r = run(["mod-analyze", "--file", "catalan.seq", "--prime", "5", "--cutoff", "400",
             "--max-period", "50", "--format", "json"])
    assert r.status == 0 and json.loads(r.text)["found"] is False


def test_cli_every_command_runs():
    calls = [
        ["convert", "--file", "nsquared.seq"],
        ["convert", "--file", "fib_linear.seq"],
        ["normalize", "--file", "factorial.seq"],
        ["catalan-blocks", "--prime", "5", "--n", "3"],
        ["find-cancelling", "--file", "factorial.seq", "--degree", "2"],
        ["find-cancelling", "--file", "nn.seq", "--window", "1", "--degree", "2", "--samples", "20"],
        ["find-simple", "--file", "nsquared_simple.seq", "--window", "3", "--degree", "1",
         "--samples", "20"],
        ["nn-decompose", "--poly", "x0*x1 - x0^2"],
        ["nn-refute", "--poly", "x0*x1 - x0^2"],
        ["wa-eval", "--file", "nsquared_automaton.seq", "--n", "4"],
        ["wcfg-eval", "--file", "catalan_grammar.seq", "--n", "11"],
        ["wmso-eval", "--file", "nn_wmso.seq", "--n", "3"],
        ["wmso-eval", "--expr", "(sum x 1)", "--n", "5"],
        ["eval", "--file", "catalan_rational.seq", "--n", "5"],
        ["eval", "--file", "nn.seq", "--n", "3"],
    ]
    for argv in calls:
        for fmt in ("human", "json"):
            r = run(argv + ["--format", fmt])
            assert r.status == 0, (argv, r.text)
            if fmt == "json":
                doc = json.loads(r.text)
                assert doc["schema_version"] == SCHEMA_VERSION
                assert doc["command"] == argv[0]


def test_cli_values():
    def value(argv):
        return json.loads(run(argv + ["--format", "json"]).text)["value"]
    assert value(["wa-eval", "--file", "nsquared_automaton.seq", "--n", "4"]) == "16"
    doc = json.loads(run(["wcfg-eval", "--file", "catalan_grammar.seq", "--n", "11",
                          "--format", "json"]).text)
    assert doc["length_weight"] == "42" and doc["catalan_view"] == "58786"
    assert value(["wmso-eval", "--file", "nn_wmso.seq", "--n", "3"]) == "27"
    assert value(["eval", "--file", "catalan_rational.seq", "--n", "5"]) == "42"


def test_cli_exit_codes():
    assert run(["eval", "--file", "power_tower.seq", "--n", "40"]).status == 1
    r = run(["eval", "--file", "power_tower.seq", "--n", "40", "--format", "json"])
    assert json.loads(r.text)["error"]["name"] == "OverflowBudget"
    assert run(["eval", "--file", "missing.seq", "--n", "1"]).status == 2
    assert run(["eval", "--file", "fib.seq"]).status == 2
    assert run(["frobnicate"]).status == 2
    assert run([]).status == 2
    assert run(["eval", "--file", "fib.seq", "--n", "ten"]).status == 2
    r = run(["mod-analyze", "--file", "factorial.seq", "--prime", "9", "--format", "json"])
    assert r.status == 1 and json.loads(r.text)["error"]["name"] == "NotPrime"
    r = run(["frobnicate", "--format", "json"])
    assert r.status == 2 and json.loads(r.text)["schema_version"] == SCHEMA_VERSION


def test_cli_parse_error_surfaces(tmp_path):
    bad = tmp_path / "bad.seq"
    bad.write_text("kind: poly_system\nvars: a\ninit: 1\na' = a +\n")
    r = run(["eval", "--file", str(bad), "--n", "2", "--format", "json"])
    assert r.status == 1
    err = json.loads(r.text)["error"]
    assert err["name"] == "ParseError" and "line 4" in err["message"]


def test_cli_json_deterministic():
    argv = ["find-cancelling", "--file", "factorial.seq", "--degree", "2", "--format", "json"]
    assert run(argv).text == run(argv).text
    argv = ["nn-refute", "--poly", "x0*x1 - x0^2", "--format", "json"]
    assert run(argv).text == run(argv).text


def test_main_and_module_entry(capsys):
    assert main(["eval", "--file", "fib.seq", "--n", "10"]) == 0
    assert "55" in capsys.readouterr().out
    proc = subprocess.run([sys.executable, "-m", "polyrec", "eval", "--file", "fib.seq", "--n", "10",
                           "--format", "json"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["value"] == "55"
