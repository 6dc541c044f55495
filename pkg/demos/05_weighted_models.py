"""Unary weighted automata, grammars and logic over one-letter words."""
from polyrec import (UnaryWeightedAutomaton, builtin, catalan_grammar, parse_wmso,
                     wa_eval, wa_from_linear_system, wcfg_catalan_view, wcfg_eval, wmso_eval)

# n^2 as I^T M^n F
a = UnaryWeightedAutomaton([[1, 0, 0], [2, 1, 0], [1, 1, 1]], (0, 0, 1), (1, 0, 0))
print("automaton:", [int(wa_eval(a, n)) for n in range(10)])
fa = wa_from_linear_system(builtin("fibonacci"))
print("fibonacci automaton:", [[str(x) for x in row] for row in fa.M], [int(wa_eval(fa, n)) for n in range(10)])

# X -> a | a X X ; trees with n inner nodes spell a^(2n+1)
g = catalan_grammar()
print("grammar, raw lengths 0..9:", [int(wcfg_eval(g, n)) for n in range(10)])
print("grammar, Catalan view:   ", [int(wcfg_catalan_view(g, n)) for n in range(10)])

# prod over positions of (sum over positions of 1) = n^n, beyond any automaton
e = parse_wmso("(prod x (sum y 1))")
print(e, [int(wmso_eval(e, n)) for n in range(8)])
