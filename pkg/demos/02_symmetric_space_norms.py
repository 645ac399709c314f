"""A tour of the symmetric-space norms on one exact chaos distribution.

Every norm here depends only on the decreasing rearrangement of the
function, so the exact law from the hypercube is all we need.  The demo
computes the full menu (L_p, Orlicz, Lorentz, Marcinkiewicz, ExpL^r) for
one chaos sum, then checks two structural facts: the Lorentz norm
dominates the Marcinkiewicz norm for the same weight, and the two
computations of the exponential-space norm (Luxemburg bisection versus
moment extrapolation) agree up to a modest factor.
"""

import numpy as np

from chaoslab import (
    ConcaveWeight,
    OrliczFunction,
    SpaceSpec,
    chaos_sum,
    decreasing_rearrangement,
    distribution_exact,
    fundamental_function,
    gen_triangle,
    norm,
    unit_coefficients,
)

f = chaos_sum(unit_coefficients(gen_triangle(2, 5)))
dist = distribution_exact(f)
print("chaos sum over the full order-2 triangle on {1..5}")
print("atoms:", [(f"{v:+.0f}", f"{w:.4f}") for v, w in dist.atoms()])

rr = decreasing_rearrangement(dist)
print("\ndecreasing rearrangement plateaus:")
for i, v in enumerate(rr.values):
    print(f"  x* = {v:.0f} on ({rr.breakpoints[i]:.4f}, {rr.breakpoints[i+1]:.4f}]")

weight = ConcaveWeight.log_power(1.0)
menu = [
    SpaceSpec.lp(1),
    SpaceSpec.lp(2),
    SpaceSpec.lp(4),
    SpaceSpec.linf(),
    SpaceSpec.orlicz(OrliczFunction.power(3)),
    SpaceSpec.orlicz(OrliczFunction.exponential(2)),
    SpaceSpec.lorentz(weight),
    SpaceSpec.marcinkiewicz(weight),
    SpaceSpec.exp_lr(2.0),
    SpaceSpec.exp_lr(2.0, method="extrapolation"),
]
print("\nnorms of the same distribution:")
for space in menu:
    print(f"  {space.describe():30s} {norm(dist, space):.6f}")

print("\nLorentz dominates Marcinkiewicz for one weight:")
lor = norm(dist, SpaceSpec.lorentz(weight))
marc = norm(dist, SpaceSpec.marcinkiewicz(weight))
print(f"  {marc:.6f} <= {lor:.6f}: {marc <= lor + 1e-9}")

print("\nfundamental functions phi_X(t) = norm of an indicator of measure t:")
for t in (0.5, 2.0**-4, 2.0**-8):
    row = [
        fundamental_function(SpaceSpec.lp(2), t),
        fundamental_function(SpaceSpec.lorentz(weight), t),
        fundamental_function(SpaceSpec.marcinkiewicz(weight), t),
        fundamental_function(SpaceSpec.exp_lr(2.0), t),
    ]
    print(f"  t=2^{np.log2(t):+.0f}: L_2 {row[0]:.4f}  Lorentz {row[1]:.4f}  "
          f"Marcinkiewicz {row[2]:.4f}  ExpL^2 {row[3]:.4f}")
print("(Lorentz and Marcinkiewicz agree exactly: both equal the weight.)")

print("\nExpL^2 by bisection vs extrapolation across random laws:")
rng = np.random.default_rng(11)
factors = []
for _ in range(6):
    vals = rng.standard_normal(12)
    w = rng.random(12)
    from chaoslab import StepDistribution

    d = StepDistribution(vals, w / w.sum())
    factors.append(norm(d, SpaceSpec.exp_lr(2.0)) / norm(d, SpaceSpec.exp_lr(2.0, method="extrapolation")))
print(f"  ratio range over 6 draws: [{min(factors):.3f}, {max(factors):.3f}]")
