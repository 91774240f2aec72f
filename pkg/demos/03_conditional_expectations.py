"""Fixing a hash seed deterministically, a few bits at a time.

Run:  python3 demos/03_conditional_expectations.py
"""

from fractions import Fraction

from rulingset import generators
from rulingset.derand import ChunkSchedule, check_precondition, fix_seed, psi_of_seed, select_parameters
from rulingset.graph import identity_coloring
from rulingset.linial import reduce_to_fixpoint
from rulingset.oracle import enumerate_expectation, verify_monotone_trace

# Four stars of 24 leaves each, with shuffled ids.
g = generators.star_cluster(hubs=4, degree=24, seed=5)
col = reduce_to_fixpoint(g, identity_coloring(g))
params = select_parameters(g.n, 24, k=2, domain_size=col.palette_size)
print(f"n={g.n} m={g.m}: f={params.f} buckets, threshold {params.degree_threshold}, "
      f"{params.seed_bits} seed bits, W={params.weight}")

# The potential charges one unit per sampled edge and W per high-degree vertex
# that is neither sampled nor next to a sampled vertex.
rep = check_precondition(g, col, params)
print(f"E[sampled edges] = {rep.expected_edges} (m/f^2 = {Fraction(g.m, params.f ** 2)})")
print(f"sum of miss probabilities = {rep.bad_probability_sum} = {float(rep.bad_probability_sum):.2e}")
print(f"E[psi] = {float(rep.expected_psi):.2f} < W: {rep.ok}")

# Fix 6 bits per chunk, keeping the candidate with the smallest conditional sum.
schedule = ChunkSchedule(6, params.seed_bits)
seed, trace = fix_seed(g, col, params, schedule)
for rec in trace:
    cond = Fraction(rec.sums[rec.chosen], 1 << rec.suffix_bits)
    print(f"chunk {rec.index}: {len(rec.sums)} candidates, pick {rec.chosen:2d}, E[psi | prefix] = {float(cond):.3f}")

state = psi_of_seed(g, col, params, seed)
print(f"\nseed {seed.hex()}: |Z|={len(state.selected)}, edges in Z={state.edges_in_z}, "
      f"unhit high-degree vertices={state.bad_count}")
print("trace monotone:", verify_monotone_trace(trace))
print("brute-force E[psi] agrees:", enumerate_expectation(g, col, params) == rep.expected_psi)
