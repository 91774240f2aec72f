"""k-wise independent hashing by polynomial evaluation over GF(2^b).

A family member is a polynomial ``a0 + a1*x + ... + a_{k-1}*x^(k-1)`` with
coefficients in GF(2^b). The bucket of ``x`` is the low ``bucket_bits`` bits of
the value, and a vertex is *selected* when its bucket is 0.

Seeds are ``k*b``-bit integers with ``a0`` in the most significant ``b`` bits,
so fixing a prefix of the seed fixes ``a0`` first.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import InvalidInput, SeedNotCommitted, TooManyPoints, UnsupportedField

# Smallest irreducible polynomial over GF(2) of each degree, as a bit pattern.
IRREDUCIBLE_MODULI = {
    1: 0x3, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43, 7: 0x83, 8: 0x11B,
    9: 0x203, 10: 0x409, 11: 0x805, 12: 0x1009, 13: 0x201B, 14: 0x4021,
    15: 0x8003, 16: 0x1002B, 17: 0x20009, 18: 0x40009, 19: 0x80027,
    20: 0x100009, 21: 0x200005, 22: 0x400003, 23: 0x800021, 24: 0x100001B,
    25: 0x2000009, 26: 0x400001B, 27: 0x8000027, 28: 0x10000003,
    29: 0x20000005, 30: 0x40000003, 31: 0x80000009, 32: 0x10000008D,
}

MAX_FIELD_BITS = 32


def poly_mod(a: int, m: int) -> int:
    """Remainder of GF(2)[x] polynomial ``a`` modulo ``m``."""
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


@lru_cache(maxsize=None)
def is_irreducible(p: int) -> bool:
    """Trial division by every polynomial of degree 1..deg(p)//2."""
    d = p.bit_length() - 1
    if d < 1:
        return False
    for q in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, q) == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    b: int
    modulus: int

    def __post_init__(self):
        if not 1 <= self.b <= MAX_FIELD_BITS:
            raise UnsupportedField(f"field width {self.b} outside [1, {MAX_FIELD_BITS}]")
        if self.modulus.bit_length() - 1 != self.b:
            raise UnsupportedField(f"modulus {self.modulus:#x} does not have degree {self.b}")
        if not is_irreducible(self.modulus):
            raise UnsupportedField(f"modulus {self.modulus:#x} is reducible")

    @classmethod
    def of_width(cls, b: int) -> "FieldSpec":
        if b not in IRREDUCIBLE_MODULI:
            raise UnsupportedField(f"no tabulated modulus for width {b}")
        return cls(b, IRREDUCIBLE_MODULI[b])

    @property
    def order(self) -> int:
        return 1 << self.b

    @property
    def mask(self) -> int:
        return (1 << self.b) - 1


def field_add(a: int, b: int) -> int:
    return a ^ b


def field_mul(spec: FieldSpec, a: int, b: int) -> int:
    """Carry-less product of ``a`` and ``b`` reduced by the field modulus."""
    top = 1 << spec.b
    res = 0
    while b:
        if b & 1:
            res ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= spec.modulus
    return res


def field_pow(spec: FieldSpec, a: int, e: int) -> int:
    res = 1
    while e:
        if e & 1:
            res = field_mul(spec, res, a)
        a = field_mul(spec, a, a)
        e >>= 1
    return res


def field_inv(spec: FieldSpec, a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return field_pow(spec, a, spec.order - 2)


def field_mul_array(spec: FieldSpec, a, b) -> np.ndarray:
    """Elementwise field product of two broadcastable integer arrays."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    a, b = np.broadcast_arrays(a, b)
    a = a.copy()
    b = b.copy()
    res = np.zeros(a.shape, dtype=np.uint64)
    top = np.uint64(1 << spec.b)
    mod = np.uint64(spec.modulus)
    one = np.uint64(1)
    for _ in range(spec.b):
        res ^= np.where(b & one, a, np.uint64(0))
        b >>= one
        a <<= one
        a ^= np.where(a & top, mod, np.uint64(0))
    return res


@dataclass(frozen=True)
class FamilyParams:
    k: int
    field: FieldSpec
    bucket_bits: int
    domain_size: int

    def __post_init__(self):
        if self.k < 1:
            raise InvalidInput("independence degree k must be at least 1")
        if not 0 <= self.bucket_bits <= self.field.b:
            raise InvalidInput(f"bucket_bits {self.bucket_bits} not in [0, {self.field.b}]")
        if not 1 <= self.domain_size <= self.field.order:
            raise InvalidInput(
                f"domain of {self.domain_size} points does not fit GF(2^{self.field.b})"
            )

    @classmethod
    def create(cls, k: int, domain_size: int, bucket_bits: int, b: int | None = None):
        """Family over the narrowest tabulated field holding domain and range."""
        if b is None:
            b = max(1, bucket_bits, (max(domain_size, 1) - 1).bit_length())
        return cls(k, FieldSpec.of_width(b), bucket_bits, domain_size)

    @property
    def b(self) -> int:
        return self.field.b

    @property
    def buckets(self) -> int:
        return 1 << self.bucket_bits

    @property
    def seed_bits(self) -> int:
        return self.k * self.field.b


@dataclass(frozen=True)
class Seed:
    """A ``k*b``-bit seed of which the leading ``fixed_bits`` are committed."""

    k: int
    b: int
    value: int = 0
    fixed_bits: int = 0

    def __post_init__(self):
        r = self.k * self.b
        if not 0 <= self.fixed_bits <= r:
            raise InvalidInput(f"fixed_bits {self.fixed_bits} outside [0, {r}]")
        if not 0 <= self.value < (1 << r):
            raise InvalidInput("seed value does not fit in k*b bits")
        free = r - self.fixed_bits
        if self.value & ((1 << free) - 1):
            raise InvalidInput("uncommitted seed bits must be zero")

    @classmethod
    def for_family(cls, params: FamilyParams) -> "Seed":
        return cls(params.k, params.b)

    @classmethod
    def from_coefficients(cls, coefficients, b: int) -> "Seed":
        coefficients = list(coefficients)
        value = 0
        for a in coefficients:
            if not 0 <= a < (1 << b):
                raise InvalidInput(f"coefficient {a} does not fit {b} bits")
            value = (value << b) | a
        k = len(coefficients)
        return cls(k, b, value, k * b)

    @classmethod
    def from_hex(cls, text: str, k: int, b: int) -> "Seed":
        r = k * b
        digits = -(-r // 4)
        if len(text) != digits:
            raise InvalidInput(f"expected {digits} hex digits, got {len(text)}")
        value = int(text, 16) if text else 0
        if value >> r:
            raise InvalidInput("padding bits must be zero")
        return cls(k, b, value, r)

    @property
    def length(self) -> int:
        return self.k * self.b

    @property
    def committed(self) -> bool:
        return self.fixed_bits == self.length

    @property
    def prefix(self) -> int:
        """The committed bits as an integer of ``fixed_bits`` bits."""
        return self.value >> (self.length - self.fixed_bits)

    @property
    def coefficients(self) -> tuple[int, ...]:
        mask = (1 << self.b) - 1
        return tuple(
            (self.value >> (self.b * (self.k - 1 - i))) & mask for i in range(self.k)
        )

    def extend(self, bits: int, width: int) -> "Seed":
        """Commit the next ``width`` bits to ``bits``."""
        if width < 0 or self.fixed_bits + width > self.length:
            raise InvalidInput("cannot commit beyond the seed length")
        if not 0 <= bits < (1 << width) or width == 0 and bits:
            raise InvalidInput(f"{bits} does not fit in {width} bits")
        shift = self.length - self.fixed_bits - width
        return Seed(self.k, self.b, self.value | (bits << shift), self.fixed_bits + width)

    def hex(self) -> str:
        """Lowercase hex, ``ceil(k*b/4)`` digits, most significant (``a0``) first."""
        digits = -(-self.length // 4)
        return format(self.value, f"0{digits}x") if digits else ""


def hash_value(params: FamilyParams, coefficients, x: int) -> int:
    """Full field value of the polynomial at ``x`` (Horner's rule)."""
    acc = 0
    for a in reversed(coefficients):
        acc = field_mul(params.field, acc, x) ^ a
    return acc


def evaluate(params: FamilyParams, seed: Seed, x: int) -> int:
    """Bucket of ``x`` in ``[0, 2^bucket_bits)`` under a fully committed seed."""
    if not seed.committed:
        raise SeedNotCommitted(f"{seed.fixed_bits} of {seed.length} seed bits fixed")
    if (seed.k, seed.b) != (params.k, params.b):
        raise InvalidInput("seed shape does not match the family")
    if not 0 <= x < params.domain_size:
        raise InvalidInput(f"point {x} outside domain [0, {params.domain_size})")
    return hash_value(params, seed.coefficients, x) & (params.buckets - 1)


def selected(params: FamilyParams, seed: Seed, x: int) -> bool:
    return evaluate(params, seed, x) == 0


def joint_distribution(params: FamilyParams, points) -> dict[tuple[int, ...], Fraction]:
    """Exact law of the bucket tuple at ``points`` under a uniform seed.

    Computed by enumerating all ``2^(k*b)`` seeds.
    """
    points = [int(p) for p in points]
    if len(set(points)) != len(points):
        raise InvalidInput("points must be distinct")
    if len(points) > params.k:
        raise TooManyPoints(f"{len(points)} points exceed independence degree {params.k}")
    for p in points:
        if not 0 <= p < params.domain_size:
            raise InvalidInput(f"point {p} outside domain")
    if not points:
        return {(): Fraction(1)}
    counts: dict[tuple[int, ...], int] = {}
    b = params.b
    for coeffs in itertools.product(range(1 << b), repeat=params.k):
        key = tuple(hash_value(params, coeffs, x) & (params.buckets - 1) for x in points)
        counts[key] = counts.get(key, 0) + 1
    total = 1 << params.seed_bits
    return {key: Fraction(c, total) for key, c in sorted(counts.items())}


def bucket_table(params: FamilyParams, coefficient_rows: np.ndarray, points) -> np.ndarray:
    """Buckets of ``points`` for many coefficient vectors at once.

    ``coefficient_rows`` has shape ``(S, k)``; the result has shape ``(S, len(points))``.
    """
    rows = np.asarray(coefficient_rows, dtype=np.uint64)
    pts = np.asarray(points, dtype=np.uint64)[None, :]
    acc = np.zeros((rows.shape[0], pts.shape[1]), dtype=np.uint64)
    for i in range(params.k - 1, -1, -1):
        acc = field_mul_array(params.field, acc, pts) ^ rows[:, i : i + 1]
    return (acc & np.uint64(params.buckets - 1)).astype(np.int64)
