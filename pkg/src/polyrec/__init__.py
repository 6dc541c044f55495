"""Exact computation with polynomial recursive sequences.

Sequences defined by systems of polynomial recurrences, their linear and
rational relatives, reductions modulo primes, cancelling polynomials, and the
unary weighted models that sit around them.  All arithmetic is exact.
"""
from .automata import (UnaryWeightedAutomaton, WcfgUnary, catalan_grammar,
                       parse_wmso, wa_eval, wa_from_linear_system,
                       wa_to_linear_system, wcfg_catalan_view, wcfg_eval,
                       wmso_eval, wmso_nn)
from .cancelling import (CancellingCertificate, IteratedRules, NNDecomposition,
                         crt_congruence_scan, crt_cross_check, crt_witness,
                         find_cancelling_empirical, find_cancelling_symbolic,
                         find_simple_recurrence, iterate_rules, nn_decompose,
                         refute_nn_candidate, vandermonde_check,
                         verify_empirical, verify_symbolic)
from .convert import (affine_normalize, kernel_form, linear_system_to_single,
                      single_to_system)
from .dsl import (SequenceDoc, build, load, load_model, parse_document,
                  parse_expr, parse_rational_expr, serialize, to_doc)
from .engines import (Evaluator, LinearRecurrence, OracleSequence, PolySystem,
                      RationalSystem, SimpleRecurrence, builtin, eval_linear,
                      eval_output, eval_rational, eval_simple, eval_system,
                      oracle, oracle_eval, outputs, r_pow_q)
from .errors import *  # noqa: F401,F403
from .modular import (ModSystem, catalan_blocks, detect_period,
                      oracle_mod_scan, output_period, project_period,
                      reconstruct_residues)
from .normalize import homogenize, integer_scale, integerize_initials, pipeline
from .polycore import ModPoly, MultiPoly, UniPoly

__version__ = "0.1.0"
