"""Stock algebras and the built-in relation catalog used by the suites.

Groups carry the (mul, inv, e) signature with an identity tag; ring-like
algebras carry (add, neg, mul, zero) with a zero tag and need not be unital
or associative.  Lattices carry (join, meet).
"""

from __future__ import annotations

import itertools

from .relcheck import FormalRelation
from .ualg import (
    FiniteAlgebra,
    GROUP_SIGNATURE,
    LATTICE_SIGNATURE,
    RING_SIGNATURE,
    build_table,
    product_algebra,
)
from .util import InputError


def cyclic_group(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(
        GROUP_SIGNATURE, n,
        {
            "mul": build_table(n, 2, lambda a, b: (a + b) % n),
            "inv": build_table(n, 1, lambda a: (-a) % n),
            "e": (0,),
        },
        name=f"Z{n}", identity=0,
    )


def symmetric_group(n: int) -> FiniteAlgebra:
    """S_n on permutation tuples in lexicographic order; (p*q)(x) = p(q(x))."""
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}

    def mul(a, b):
        p, q = perms[a], perms[b]
        return index[tuple(p[q[x]] for x in range(n))]

    def inv(a):
        p = perms[a]
        out = [0] * n
        for x in range(n):
            out[p[x]] = x
        return index[tuple(out)]

    size = len(perms)
    return FiniteAlgebra(
        GROUP_SIGNATURE, size,
        {
            "mul": build_table(size, 2, mul),
            "inv": build_table(size, 1, inv),
            "e": (index[tuple(range(n))],),
        },
        name=f"S{n}", identity=index[tuple(range(n))],
    )


def dihedral_group(n: int) -> FiniteAlgebra:
    """D_n of order 2n; element r + n*s is rotation^r * flip^s."""
    if n < 1:
        raise InputError("dihedral parameter must be >= 1")
    size = 2 * n

    def mul(a, b):
        r1, s1 = a % n, a // n
        r2, s2 = b % n, b // n
        r = (r1 + (r2 if s1 == 0 else -r2)) % n
        return r + n * ((s1 + s2) % 2)

    def inv(a):
        r, s = a % n, a // n
        return ((-r) % n) if s == 0 else a

    return FiniteAlgebra(
        GROUP_SIGNATURE, size,
        {"mul": build_table(size, 2, mul), "inv": build_table(size, 1, inv), "e": (0,)},
        name=f"D{n}", identity=0,
    )


def quaternion_group() -> FiniteAlgebra:
    """Q8 with elements a + 4s: a indexes (1, i, j, k), s the sign."""
    # base[a][b] = (axis, sign) of the product of units a, b
    base = {
        (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
        (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
        (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
        (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
    }

    def mul(x, y):
        ax, sx = x % 4, x // 4
        ay, sy = y % 4, y // 4
        a, s = base[(ax, ay)]
        return a + 4 * ((sx + sy + s) % 2)

    def inv(x):
        a, s = x % 4, x // 4
        if a == 0:
            return x
        return a + 4 * ((s + 1) % 2)

    return FiniteAlgebra(
        GROUP_SIGNATURE, 8,
        {"mul": build_table(8, 2, mul), "inv": build_table(8, 1, inv), "e": (0,)},
        name="Q8", identity=0,
    )


def trivial_group() -> FiniteAlgebra:
    return cyclic_group(1)


def all_groups_up_to_8() -> list[FiniteAlgebra]:
    """One representative per isomorphism class of groups of order <= 8."""
    z2 = cyclic_group(2)
    z4 = cyclic_group(4)
    groups = [
        cyclic_group(1), z2, cyclic_group(3), z4,
        named(product_algebra([z2, z2]), "V4"),
        cyclic_group(5), cyclic_group(6), symmetric_group(3), cyclic_group(7),
        cyclic_group(8),
        named(product_algebra([z4, z2]), "Z4xZ2"),
        named(product_algebra([z2, z2, z2]), "Z2^3"),
        dihedral_group(4), quaternion_group(),
    ]
    return groups


def named(a: FiniteAlgebra, name: str) -> FiniteAlgebra:
    a.name = name
    return a


# ---------------------------------------------------------------------------
# Ring-like algebras


def modular_ring(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(
        RING_SIGNATURE, n,
        {
            "add": build_table(n, 2, lambda a, b: (a + b) % n),
            "neg": build_table(n, 1, lambda a: (-a) % n),
            "mul": build_table(n, 2, lambda a, b: (a * b) % n),
            "zero": (0,),
        },
        name=f"Z{n}ring", zero=0,
    )


def zero_multiplication_ring(n: int) -> FiniteAlgebra:
    """Additive group Z_n with all products zero."""
    return FiniteAlgebra(
        RING_SIGNATURE, n,
        {
            "add": build_table(n, 2, lambda a, b: (a + b) % n),
            "neg": build_table(n, 1, lambda a: (-a) % n),
            "mul": build_table(n, 2, lambda a, b: 0),
            "zero": (0,),
        },
        name=f"null{n}", zero=0,
    )


def galois_field_ring(q: int) -> FiniteAlgebra:
    """GF(q) as a ring-signature algebra, q a prime power <= 9."""
    from .eklab import GFTable

    gf = GFTable(q)
    return FiniteAlgebra(
        RING_SIGNATURE, q,
        {
            "add": build_table(q, 2, gf.add),
            "neg": build_table(q, 1, gf.neg),
            "mul": build_table(q, 2, gf.mul),
            "zero": (0,),
        },
        name=f"F{q}", zero=0,
    )


def upper_triangular_ring_f2() -> FiniteAlgebra:
    """2x2 upper-triangular matrices over F2, encoded a + 2b + 4d for
    [[a, b], [0, d]].  Noncommutative, unital, 8 elements."""

    def unpack(x):
        return x & 1, (x >> 1) & 1, (x >> 2) & 1

    def add(x, y):
        return x ^ y

    def mul(x, y):
        a1, b1, d1 = unpack(x)
        a2, b2, d2 = unpack(y)
        return (a1 & a2) | (((a1 & b2) ^ (b1 & d2)) << 1) | ((d1 & d2) << 2)

    return FiniteAlgebra(
        RING_SIGNATURE, 8,
        {
            "add": build_table(8, 2, add),
            "neg": build_table(8, 1, lambda x: x),
            "mul": build_table(8, 2, mul),
            "zero": (0,),
        },
        name="UT2(F2)", zero=0,
    )


def ring_corpus_up_to_8() -> list[FiniteAlgebra]:
    f2 = galois_field_ring(2)
    z2null = zero_multiplication_ring(2)
    corpus = [
        modular_ring(n) for n in range(1, 9)
    ] + [
        zero_multiplication_ring(2),
        zero_multiplication_ring(3),
        zero_multiplication_ring(4),
        galois_field_ring(4),
        galois_field_ring(8),
        named(product_algebra([f2, f2]), "F2xF2"),
        named(product_algebra([f2, z2null]), "F2xnull2"),
        named(product_algebra([f2, f2, f2]), "F2^3"),
        upper_triangular_ring_f2(),
    ]
    return corpus


# ---------------------------------------------------------------------------
# Lattices


def chain_lattice(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(
        LATTICE_SIGNATURE, n,
        {
            "join": build_table(n, 2, max),
            "meet": build_table(n, 2, min),
        },
        name=f"C{n}",
    )


def boolean_lattice(k: int) -> FiniteAlgebra:
    """Power-set lattice on k atoms as the k-fold product of 2-chains."""
    if k == 0:
        return chain_lattice(1)
    return named(product_algebra([chain_lattice(2)] * k), f"B{k}")


# ---------------------------------------------------------------------------
# Relation catalog


def ring_difference_relation() -> FormalRelation:
    return FormalRelation.parse(
        "ring_difference", RING_SIGNATURE,
        "mul(add(x,neg(x')),add(y,neg(y')))", "zero", z_arity=0,
    )


def ring_scaled_difference_relation() -> FormalRelation:
    return FormalRelation.parse(
        "ring_scaled_difference", RING_SIGNATURE,
        "mul(mul(add(x,neg(x')),z0),add(y,neg(y')))", "zero", z_arity=1,
    )


def group_commutator_relation() -> FormalRelation:
    u = "mul(x,inv(x'))"
    v = "mul(y,inv(y'))"
    return FormalRelation.parse(
        "group_commutator", GROUP_SIGNATURE,
        f"mul(mul(inv({u}),inv({v})),mul({u},{v}))", "e", z_arity=0,
    )


def group_power_commutator_relation() -> FormalRelation:
    u = "mul(mul(x,x),mul(inv(x'),inv(x')))"
    w = "mul(y,inv(y'))"
    v = f"mul({w},mul({w},{w}))"
    return FormalRelation.parse(
        "group_power_commutator", GROUP_SIGNATURE,
        f"mul(mul(inv({u}),inv({v})),mul({u},{v}))", "e", z_arity=0,
    )


def lattice_exchange_relation() -> FormalRelation:
    return FormalRelation.parse(
        "lattice_exchange", LATTICE_SIGNATURE,
        "meet(join(x,y),join(x',y'))", "meet(join(x,y'),join(x',y))", z_arity=0,
    )


def relation_catalog(signature) -> list[FormalRelation]:
    """Built-in relations applicable to a signature."""
    if signature == RING_SIGNATURE:
        return [ring_difference_relation(), ring_scaled_difference_relation()]
    if signature == GROUP_SIGNATURE:
        return [group_commutator_relation(), group_power_commutator_relation()]
    if signature == LATTICE_SIGNATURE:
        return [lattice_exchange_relation()]
    raise InputError("no built-in relations for this signature")
