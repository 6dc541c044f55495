"""Defining and evaluating recursive sequences, and moving between representations."""
from fractions import Fraction

from polyrec import (LinearRecurrence, MultiPoly, PolySystem, builtin, eval_linear,
                     eval_output, linear_system_to_single, outputs, single_to_system)



def show(values):
    return ", ".join(str(v) for v in values)


# Fibonacci as two coupled sequences: f' = g, g' = f + g
fib = builtin("fibonacci")
print("fibonacci:", show(outputs(fib, 12)))

# n! needs a nonlinear rule: b' = b*c, c' = c + 1
print("factorial:", show(outputs(builtin("factorial"), 10)))
print("2^(2^n): ", show(outputs(builtin("power_tower"), 5)))

# systems are built directly from polynomials too
u, v = MultiPoly.gens(2)
s = PolySystem((1, Fraction(1, 2)), (u + v, v / 2))
print("custom:   ", show(outputs(s, 6)))

# a linear system collapses to one recurrence on its output ...
r = linear_system_to_single(builtin("nsquared"))
print("n^2 recurrence coefficients:", show(r.coeffs), "initials:", show(r.initials))
print("n^2 at 100 via the recurrence:", eval_linear(r, 100))

# ... and any single recurrence unfolds back into a system
back = single_to_system(LinearRecurrence((1, 1), (2, 1)))
print("Lucas via system:", show(outputs(back, 10)))
print("power tower at n=12 has", eval_output(builtin("power_tower"), 12, max_bits=None).numerator.bit_length(), "bits")
