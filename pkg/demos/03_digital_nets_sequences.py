"""Digital nets, exact quality parameters, and sequence-prefix decomposition.

Sobol' generating matrices are bundled; exact t values come from rank checks
over F_2.  A prefix of N points of the sequence splits into digitally
shifted nets, one per binary digit of N, and regenerating the blocks
reproduces the prefix bit for bit.
"""
import numpy as np

from cubeqmc import NetDefinition, exact_t, generate_net, sequence_prefix, sobol_matrices
from cubeqmc.nets import regenerate_block

m, s = 5, 3
definition = NetDefinition(m, s, sobol_matrices(s, m))
net = generate_net(definition)
print(f"Sobol' net: 2^{m} points in {s} dims")
for u in ((1,), (2,), (3,), (1, 2), (1, 3), (2, 3), (1, 2, 3)):
    print(f"  exact t for projection {u}: {exact_t(definition, u)}")

seq_def = NetDefinition(53, 2, sobol_matrices(2, 53))
n_points = 100  # = 64 + 32 + 4
prefix, decomposition = sequence_prefix(seq_def, n_points)
print(f"\nfirst {n_points} sequence points decompose into blocks:")
regen = np.zeros_like(prefix.numerators)
for block in decomposition.blocks:
    print(f"  block of 2^{block.m} points starting at index {block.start}")
    regen[block.start : block.start + (1 << block.m)] = regenerate_block(
        block, 2, decomposition.prec
    )
assert np.array_equal(regen, prefix.numerators)
print("block-wise regeneration matches the direct prefix bit-exactly")
