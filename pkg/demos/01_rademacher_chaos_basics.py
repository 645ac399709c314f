"""Rademacher functions and chaos sums: three equivalent views of one law.

A Rademacher function r_j flips sign on dyadic cells of width 2^-j; a
chaos monomial multiplies several of them.  This demo builds a small
chaos sum and shows that its distribution comes out identically whether
we enumerate the sign hypercube exactly, realize the function as a
dyadic step function, or sample configurations with a seeded generator.
"""

import numpy as np

from chaoslab import (
    chaos_monomial,
    chaos_sum,
    distribution_exact,
    distribution_mc,
    evaluate_dyadic,
    rademacher,
)

print("== single Rademacher functions ==")
for j in (1, 2, 3):
    step = evaluate_dyadic(rademacher(j), 3)
    print(f"r_{j} on eighth-cells: {step.values.astype(int).tolist()}")

print("\n== a chaos monomial is a product of sign flips ==")
m = chaos_monomial((3, 1))
print("r_3 * r_1 on eighth-cells:", evaluate_dyadic(m, 3).values.astype(int).tolist())
print("its law:", distribution_exact(m).atoms(), "(a fair sign, like any monomial)")

print("\n== one chaos sum, three routes to its law ==")
f = chaos_sum({(2, 1): 1.0, (3, 1): 1.0, (3, 2): 1.0})
exact = distribution_exact(f)
print("exact law over 2^3 sign configurations:")
for v, w in exact.atoms():
    print(f"  value {v:+.0f}  probability {w:.4f}")

dyadic = evaluate_dyadic(f, 5).histogram()
print("dyadic realization at resolution 2^-5 gives the same histogram:",
      dyadic.atoms() == exact.atoms())

mc = distribution_mc(f, samples=200_000, seed=7)
print("seeded Monte Carlo weights (200k samples):")
for v, w in mc.atoms():
    exact_w = dict(exact.atoms()).get(v, 0.0)
    print(f"  value {v:+.0f}  empirical {w:.4f}  exact {exact_w:.4f}")

print("\n== orthonormality makes second moments additive ==")
rng = np.random.default_rng(5)
coeffs = {(4, 2, 1): rng.standard_normal(), (5, 3, 2): rng.standard_normal(),
          (6, 4, 3): rng.standard_normal()}
g = chaos_sum(coeffs)
print("E g^2 from the exact law:   ", distribution_exact(g).moment(2))
print("sum of squared coefficients:", sum(c * c for c in coeffs.values()))
