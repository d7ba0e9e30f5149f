"""Error-bound evaluators and tractability weight sums.

All stated worst-case-error bounds are available as closed-form evaluators;
the weight-condition partial sums show how fast coordinate weights must
decay for the error bounds to stay dimension-independent.
"""
import math

from cubeqmc import (
    BoundContext,
    Cube,
    ProductWeights,
    info_complexity_bound,
    lemma_E_bound,
    net_bound,
    seq_bound,
    tu_bound_nied,
    tu_bound_sobol,
    weight_condition_sums,
)

w = ProductWeights((1.0,))
ctx = BoundContext(s=1, weights=w, cube=Cube.unit(1), q=1, m=4, t_map={(1,): 0})
print(f"net bound   (m=4, t=0): {net_bound(ctx):.4f}")
print(f"seq bound   (N=2, t=0): {seq_bound(2, ctx):.4f}")
print(f"E bound (|u|=2, t=0, m=2): {lemma_E_bound(0, 2, 2):.1f}")
print(f"2^t_u bound, Niederreiter, u={{1}}: {tu_bound_nied((1,)):.4f}")
print(f"t_u bound, Sobol', u={{1}}, c=2:   {tu_bound_sobol((1,), 2):.1f}")

# weights gamma_i = i^-3 keep the polynomial-lattice condition sum finite
decaying = ProductWeights(tuple(float(i) ** -3 for i in range(1, 2001)))
rep = weight_condition_sums("poly", decaying, None, 2000)
print(f"\nsum of i^-3 terms up to 2000: {rep.partial_sums[-1]:.6f}"
      f"  (zeta(3) = {1.2020569:.6f}, converging: {rep.converged_heuristic})")

flat = ProductWeights((1.0,) * 100)
rep = weight_condition_sums("nied", flat, None, 100)
print(f"unit weights, Niederreiter kind: converging: {rep.converged_heuristic}")

n = info_complexity_bound(C=1.0, delta=0.5, eps=0.25)
print(f"\ninformation-complexity bound for C=1, delta=1/2, eps=1/4: N <= {n}")
assert n == 32 and math.isfinite(rep.partial_sums[-1])
