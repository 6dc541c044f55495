"""Cancelling polynomials: relations that hold on every window of a sequence."""
from polyrec import (builtin, find_cancelling_empirical, find_cancelling_symbolic,
                     find_simple_recurrence, oracle, parse_expr, verify_symbolic)

fact = builtin("factorial")
q = parse_expr("x0*x2 - x1^2 - x0*x1")
chk = verify_symbolic(fact, q)
print("n!: x0*x2 - x1^2 - x0*x1 vanishes identically:", chk.passed)

for cert in find_cancelling_symbolic(fact, 2):
    print("  basis element:", cert)

# a bounded search over sampled windows; an empty result rules out every
# polynomial within the bounds
for k, D in ((1, 4), (2, 3), (3, 2)):
    found = find_cancelling_empirical(oracle("n^n"), k, D, 60)
    print(f"n^n, window {k + 1}, degree <= {D}: {len(found)} cancelling polynomials")

# the same machinery finds honest recurrences when they exist
for name, k, D in (("fibonacci", 2, 1), ("nsquared", 3, 1), ("factorial", 3, 3)):
    cands = find_simple_recurrence(oracle(name), k, D, 50)
    print(f"{name}: simple recurrences of order {k}, degree <= {D}:",
          [str(c.recurrence.rule) for c in cands] or "none")
