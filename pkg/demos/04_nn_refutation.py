"""Why n^n admits no cancelling polynomial, checked one candidate at a time.

On n^n a candidate Z collapses to a sum of terms P(n)^n * Q(n).  Reducing mod
a suitable prime and choosing n by the Chinese remainder theorem forces a
nonzero residue, which refutes Z.
"""
from polyrec import (crt_cross_check, crt_witness, nn_decompose, parse_expr,
                     refute_nn_candidate, vandermonde_check)

z = parse_expr("x0*x2 - x1^2 - x0*x1")
dec = nn_decompose(z)
print("Z =", z)
for P, Q in dec.pairs:
    print(f"  ({P})^n * ({Q})")
print("S =", dec.S)
print("Z on n^n windows:", [dec(n) for n in range(6)])

chk = vandermonde_check(dec, 3)
print(f"det at a=3: {chk.det}, sign * S(3) = {chk.sign * chk.s_value}, holds: {chk.holds}")

p, a, b = 7, 3, 4
n = crt_witness(a, b, p)
print(f"n = {n} has n = {a} mod {p} and n = {b} mod {p - 1};", "residues", crt_cross_check(dec, p, a, b))

r = refute_nn_candidate(z)
print("refutation prime:", r.prime, "first violation (a, b, value):", r.scan.violations[0])
print("refuted:", r.refuted)
