import itertools
from fractions import Fraction

import numpy as np
import pytest

from rulingset.errors import InvalidInput, SeedNotCommitted, TooManyPoints, UnsupportedField
from rulingset.kwise import (
    IRREDUCIBLE_MODULI,
    FamilyParams,
    FieldSpec,
    Seed,
    bucket_table,
    evaluate,
    field_inv,
    field_mul,
    field_mul_array,
    joint_distribution,
)


def clmul(a, b):
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def reduce(a, m):
    deg = m.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= m << (a.bit_length() - 1 - deg)
    return a


def reference_mul(b, x, y):
    return reduce(clmul(x, y), IRREDUCIBLE_MODULI[b])


def has_factor(p):
    deg = p.bit_length() - 1
    return any(reduce(p, d) == 0 for d in range(2, 1 << (deg // 2 + 1)) if 1 <= d.bit_length() - 1 <= deg // 2)


@pytest.mark.parametrize("b", sorted(IRREDUCIBLE_MODULI))
def test_moduli_are_irreducible(b):
    p = IRREDUCIBLE_MODULI[b]
    assert p.bit_length() - 1 == b
    if b <= 20:
        assert not has_factor(p)


def test_hand_example_gf8():
    spec = FieldSpec.of_width(3)
    assert spec.modulus == 0b1011
    assert field_mul(spec, 0b010, 0b100) == 0b011


@pytest.mark.parametrize("b", range(1, 9))
def test_field_mul_matches_schoolbook(b):
    spec = FieldSpec.of_width(b)
    elems = range(1 << b)
    for x in elems:
        assert field_mul(spec, x, 1) == x
        assert field_mul(spec, x, 0) == 0
    pairs = list(itertools.product(elems, repeat=2))
    xs = np.array([p[0] for p in pairs])
    ys = np.array([p[1] for p in pairs])
    got = field_mul_array(spec, xs, ys)
    want = [reference_mul(b, x, y) for x, y in pairs]
    assert got.tolist() == want


@pytest.mark.parametrize("b", range(1, 5))
def test_field_axioms_exhaustive(b):
    spec = FieldSpec.of_width(b)
    elems = range(1 << b)
    for x, y, z in itertools.product(elems, repeat=3):
        assert field_mul(spec, x, field_mul(spec, y, z)) == field_mul(spec, field_mul(spec, x, y), z)
        assert field_mul(spec, x, y ^ z) == field_mul(spec, x, y) ^ field_mul(spec, x, z)
        assert field_mul(spec, x, y) == field_mul(spec, y, x)


@pytest.mark.parametrize("b", range(1, 9))
def test_inverses(b):
    spec = FieldSpec.of_width(b)
    for x in range(1, 1 << b):
        assert field_mul(spec, x, field_inv(spec, x)) == 1


def test_unsupported_width():
    with pytest.raises(UnsupportedField):
        FieldSpec.of_width(33)


def test_evaluate_examples():
    fam = FamilyParams.create(2, 4, 1, b=2)
    assert evaluate(fam, Seed.from_coefficients((0, 1), 2), 0b10) == 0
    for x in range(4):
        assert evaluate(fam, Seed.from_coefficients((1, 0), 2), x) == 1
    const = FamilyParams.create(1, 4, 1, b=2)
    for x in range(4):
        assert evaluate(const, Seed.from_coefficients((0,), 2), x) == 0


def test_evaluate_needs_committed_seed():
    fam = FamilyParams.create(2, 4, 1, b=2)
    with pytest.raises(SeedNotCommitted):
        evaluate(fam, Seed(2, 2, 0, 3), 1)
    with pytest.raises(InvalidInput):
        evaluate(fam, Seed.from_coefficients((0, 1), 2), 4)


def test_joint_distribution_examples():
    fam = FamilyParams.create(2, 4, 1, b=2)
    law = joint_distribution(fam, [1, 2])
    assert law == {pair: Fraction(1, 4) for pair in itertools.product(range(2), repeat=2)}
    fam3 = FamilyParams.create(3, 8, 2, b=3)
    assert joint_distribution(fam3, [5]) == {(v,): Fraction(1, 4) for v in range(4)}
    assert joint_distribution(fam, []) == {(): Fraction(1)}


def test_joint_distribution_guards():
    fam = FamilyParams.create(2, 4, 1, b=2)
    with pytest.raises(TooManyPoints):
        joint_distribution(fam, [0, 1, 2])
    with pytest.raises(InvalidInput):
        joint_distribution(fam, [1, 1])


def test_seed_layout_and_hex():
    s = Seed.from_coefficients((0xA, 0x3, 0x0), 4)
    assert s.value == 0xA30 and s.coefficients == (0xA, 0x3, 0x0)
    assert s.hex() == "a30"
    assert Seed.from_hex("a30", 3, 4) == s
    odd = Seed.from_coefficients((1, 0, 0), 3)
    assert odd.hex() == "040"
    assert Seed.from_hex(odd.hex(), 3, 3) == odd


def test_seed_prefix_extension():
    s = Seed(2, 4).extend(0b101, 3)
    assert s.prefix == 0b101 and not s.committed
    s = s.extend(0b01011, 5)
    assert s.committed and s.value == 0b10101011
    with pytest.raises(InvalidInput):
        s.extend(0, 1)
    with pytest.raises(InvalidInput):
        Seed(2, 4, value=1, fixed_bits=4)


def test_bucket_table_agrees_with_evaluate():
    fam = FamilyParams.create(3, 16, 2, b=4)
    rng = np.random.default_rng(0)
    rows = rng.integers(0, 16, size=(50, 3))
    table = bucket_table(fam, rows, range(16))
    for i, row in enumerate(rows.tolist()):
        seed = Seed.from_coefficients(row, 4)
        assert table[i].tolist() == [evaluate(fam, seed, x) for x in range(16)]
