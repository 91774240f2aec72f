"""Polynomial hashing over GF(2^b) and why its buckets look independent.

Run:  python3 demos/01_kwise_hash.py
"""

from rulingset.kwise import FamilyParams, FieldSpec, Seed, evaluate, field_mul, joint_distribution
from rulingset.oracle import verify_kwise

# A field of eight elements: bit patterns are polynomials over GF(2), reduced mod x^3 + x + 1.
gf8 = FieldSpec.of_width(3)
print(f"GF(8) modulus: {gf8.modulus:#06b}")
print("x * x^2 =", format(field_mul(gf8, 0b010, 0b100), "03b"), "(x^3 folds back to x + 1)")

# A family member is a degree-(k-1) polynomial; its k coefficients form the seed.
# A point is "selected" when the low bits of the polynomial value are all zero.
fam = FamilyParams.create(k=3, domain_size=8, bucket_bits=1, b=3)
seed = Seed.from_coefficients((0b101, 0b011, 0b001), b=3)
print(f"\nseed {seed.hex()} (a0 first) buckets:", [evaluate(fam, seed, x) for x in range(8)])

# Over a uniformly random seed, any three distinct points land in independent
# uniform buckets. joint_distribution enumerates all 2^9 seeds to show it.
law = joint_distribution(fam, [1, 4, 6])
print("\nlaw of (bucket(1), bucket(4), bucket(6)):")
for outcome, p in law.items():
    print(f"  {outcome}: {p}")

# The same check for every point set, done exhaustively by the oracle.
for k in (2, 3, 4):
    for bits in (1, 2):
        params = FamilyParams.create(k, 1 << k, bits, b=k)
        print(f"k={k} b={k} bucket bits={bits}: exactly {k}-wise uniform -> {verify_kwise(params)}")

# Independence stops at k: a constant polynomial gives every point the same bucket.
const = FamilyParams.create(1, 4, 1, b=2)
print("\nconstant family, pairwise uniform ->", verify_kwise(const, level=2))
