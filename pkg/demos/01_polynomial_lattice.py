"""A first polynomial lattice rule, its dual net, and the quality criterion B.

The rule P(g, f) with modulus f = x^2 + x + 1 and generating vector
g = (1, x) has 4 points.  Its figure of merit B comes out to 5/16, both via
the exact dual-net enumeration and the fast kernel formula.
"""
from fractions import Fraction

from cubeqmc import (
    B_dual,
    B_fast,
    Cube,
    E_dual,
    E_walsh,
    PolyLatticeRule,
    ProductWeights,
    plps,
)

rule = PolyLatticeRule.from_hex("0x7", "0x1,0x2")
points = plps(rule)
print(f"rule: {rule.to_flags()}  ({points.n_points} points, {points.s} dims)")
for row in points.values():
    print("  ", tuple(float(v) for v in row))

for u in ((1,), (2,), (1, 2)):
    e = E_dual(rule, u)
    assert e == E_walsh(points, rule.m, u)
    print(f"E(P, {u}) = {e}")

weights = ProductWeights((1, 1))
cube = Cube.unit(2)
b_fast = B_fast(points, rule.m, weights, cube)
b_slow = B_dual(rule, weights, cube, exact=True)
print(f"B (fast kernel formula) = {b_fast}")
print(f"B (exact dual oracle)   = {b_slow}")
assert b_slow == Fraction(5, 16)
