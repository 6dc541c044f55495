"""Residues modulo a prime are eventually periodic for every polynomial system.

Catalan numbers are not: the runs of multiples of p keep getting longer.
"""
from polyrec import (ModSystem, builtin, catalan_blocks, detect_period, oracle,
                     oracle_mod_scan, output_period, pipeline, reconstruct_residues)

s = builtin("factorial")
t, meta = pipeline(s)
print("normalized factorial system (d=%d, a=%d):" % (meta.d, meta.a))
for name, rule in zip(t.names, t.rules):
    print(f"  {name}' = {rule.to_str(t.names)}")

for p in (5, 7, 11):
    state, out = output_period(s, p)
    print(f"p={p:2d}: state preperiod={state.preperiod} period={state.period}; "
          f"output preperiod={out.preperiod} period={out.period}")

m = ModSystem.from_system(pipeline(builtin("two_pow_nsq"))[0], 13)
rep = detect_period(m)
print("2^(n^2) mod 13:", list(reconstruct_residues(builtin("two_pow_nsq"), 13, 16)),
      "period", rep.period)

# maximal runs of Catalan numbers divisible by p
for p in (5, 7):
    rep = catalan_blocks(p, 6)
    print(f"Catalan blocks mod {p}:",
          [(b.start, b.observed) for b in rep.blocks], "all predicted:", rep.all_match)

scan = oracle_mod_scan(oracle("catalan"), 5, 2000, max_period=200)
print("Catalan mod 5 over 2000 terms, period <= 200 found:", scan.found)
