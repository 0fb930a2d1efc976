"""Reduced products over a filter, the filter detected by a map on a direct
product, and factorization of homomorphisms through ultraproducts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .setfam import Filter, IndexSet, Subset, Ultrafilter, decompose_filter, is_filter
from .setfam import SubsetFamily
from .ualg import FiniteAlgebra, HomTable, ProductAlgebra, product_algebra
from .util import CapExceeded, InputError, PropertyViolation, bit_indices

MAX_DETECT_INDEX = 12
MAX_DETECT_CARRIER = 1 << 20
MAX_REGROUP_WORK = 1 << 22


class ProductFamily:
    """An indexed family of same-signature algebras with its direct product."""

    def __init__(self, factors):
        factors = tuple(factors)
        if not factors:
            raise InputError("a product family needs at least one factor")
        self.factors = factors
        self.product = product_algebra(factors)
        self.index_set = IndexSet(len(factors))

    @property
    def signature(self):
        return self.product.signature

    def decode(self, flat: int) -> tuple[int, ...]:
        return self.product.codec.decode(flat)

    def encode(self, coords) -> int:
        return self.product.codec.encode(coords)

    def __repr__(self):
        return f"<family of {len(self.factors)}: {self.product.name}>"


def support(family: ProductFamily, coords) -> Subset:
    """Coordinates where a tuple differs from the tagged zero (or identity)."""
    coords = tuple(coords)
    if len(coords) != len(family.factors):
        raise InputError("tuple length does not match the family")
    mask = 0
    for i, (c, f) in enumerate(zip(coords, family.factors)):
        ref = f.zero if f.zero is not None else f.identity
        if ref is None:
            raise InputError(f"factor {i} carries no zero or identity tag")
        if c != ref:
            mask |= 1 << i
    return Subset(family.index_set, mask)


def detected_filter(family: ProductFamily, h) -> Filter:
    """The subsets J such that h factors through the projection onto J.

    h is a total map on the flat product carrier (any hashable values); a
    HomTable is accepted and its mapping used.  The result is asserted to
    satisfy the filter conditions before being returned.
    """
    if isinstance(h, HomTable):
        h = h.mapping
    h = tuple(h)
    product = family.product
    if len(h) != product.size:
        raise InputError(f"map has {len(h)} entries, expected {product.size}")
    n = len(family.factors)
    if n > MAX_DETECT_INDEX:
        raise CapExceeded(f"index set size {n} exceeds detect cap {MAX_DETECT_INDEX}")
    if product.size > MAX_DETECT_CARRIER:
        raise CapExceeded(
            f"product carrier {product.size} exceeds detect cap {MAX_DETECT_CARRIER}"
        )
    decoded = [family.decode(a) for a in range(product.size)]
    member_masks = []
    for mask in range(1 << n):
        positions = bit_indices(mask)
        seen: dict[tuple[int, ...], object] = {}
        factors_through = True
        for a in range(product.size):
            key = tuple(decoded[a][i] for i in positions)
            prev = seen.setdefault(key, h[a])
            if prev != h[a]:
                factors_through = False
                break
        if factors_through:
            member_masks.append(mask)
    family_of_masks = SubsetFamily.of(family.index_set, member_masks)
    check = is_filter(family_of_masks)
    if not check:
        raise PropertyViolation(
            f"detected family is not a filter: {check.describe()}", witness=check.witness
        )
    return Filter.from_members(family_of_masks)


def kernel_filter(family: ProductFamily, h: HomTable) -> Filter:
    """The subsets J such that the subproduct on I-J lies in the kernel of h.

    Requires identity tags on every factor and on the codomain; h must be a
    homomorphism of group-like algebras.
    """
    identities = []
    for i, f in enumerate(family.factors):
        if f.identity is None:
            raise InputError(f"factor {i} carries no identity tag")
        identities.append(f.identity)
    if h.codomain.identity is None:
        raise InputError("codomain carries no identity tag")
    e_cod = h.codomain.identity
    n = len(family.factors)
    member_masks = []
    for mask in range(1 << n):
        outside = [i for i in range(n) if not mask >> i & 1]
        in_kernel = True
        for coords in itertools.product(*(family.factors[i].elements() for i in outside)):
            tup = list(identities)
            for i, c in zip(outside, coords):
                tup[i] = c
            if h(family.encode(tup)) != e_cod:
                in_kernel = False
                break
        if in_kernel:
            member_masks.append(mask)
    family_of_masks = SubsetFamily.of(family.index_set, member_masks)
    check = is_filter(family_of_masks)
    if not check:
        raise PropertyViolation(
            f"kernel family is not a filter: {check.describe()}", witness=check.witness
        )
    return Filter.from_members(family_of_masks)


class ReducedProduct:
    """Product tuples modulo agreement on a member of the filter.

    Two tuples are identified iff their agreement set contains the filter
    base, so classes are indexed by the projection onto base coordinates.
    Class indices follow the least flat member; the canonical map is built
    as a checked HomTable, which proves the induced operations well-defined.
    """

    def __init__(self, family: ProductFamily, filt: Filter):
        if filt.parent.size != len(family.factors):
            raise InputError("filter index set does not match the family")
        self.family = family
        self.filter = filt
        base_positions = bit_indices(filt.base_mask)
        product = family.product
        key_to_class: dict[tuple[int, ...], int] = {}
        class_of = []
        representatives: list[int] = []
        for a in range(product.size):
            coords = family.decode(a)
            key = tuple(coords[i] for i in base_positions)
            if key not in key_to_class:
                key_to_class[key] = len(representatives)
                representatives.append(a)
            class_of.append(key_to_class[key])
        self.class_of = tuple(class_of)
        self.representatives = tuple(representatives)
        expected = 1
        for i in base_positions:
            expected *= family.factors[i].size
        if len(representatives) != expected:
            raise PropertyViolation(
                f"class count {len(representatives)} != product over base {expected}"
            )
        tables = {}
        n = len(representatives)
        for sym, arity in product.signature.symbols:
            table = []
            for flat in range(n ** arity):
                rem = flat
                args = []
                for _ in range(arity):
                    args.append(representatives[rem % n])
                    rem //= n
                table.append(class_of[product.op(sym, *args)])
            tables[sym] = tuple(table)
        identity = class_of[product.identity] if product.identity is not None else None
        zero = class_of[product.zero] if product.zero is not None else None
        self.algebra = FiniteAlgebra(
            product.signature, n, tables,
            name=f"{product.name}/{filt.base!r}", identity=identity, zero=zero,
        )
        self.canonical = HomTable(product, self.algebra, class_of)

    @property
    def class_count(self) -> int:
        return self.algebra.size

    def class_members(self, cls: int) -> tuple[int, ...]:
        return tuple(a for a in range(self.family.product.size) if self.class_of[a] == cls)

    def __repr__(self):
        return f"<reduced product {self.algebra.name}: {self.class_count} classes>"


def reduced_product(family: ProductFamily, filt: Filter) -> ReducedProduct:
    return ReducedProduct(family, filt)


def ultrapower(family: ProductFamily, u: Ultrafilter) -> ReducedProduct:
    return ReducedProduct(family, u.filter)


@dataclass
class SurjectivityResult:
    ok: bool
    ultrafilters: tuple[Ultrafilter, ...]
    target: ProductAlgebra
    section: tuple[int, ...]          # target flat index -> patched preimage in A
    witness_partition: tuple[int, ...]  # block masks, one per ultrafilter
    bijective: bool


def verify_surjectivity(family: ProductFamily, ultras) -> SurjectivityResult:
    """Check that A -> prod_m A/U_m is onto and A/(cap U_m) -> prod_m A/U_m
    is a bijection, returning an explicit section.

    The section patches class representatives together on a witness
    partition with block m belonging to U_m, exactly as the surjectivity
    argument prescribes.
    """
    ultras = tuple(ultras)
    if not ultras:
        raise InputError("need at least one ultrafilter")
    points = [u.point for u in ultras]
    if len(set(points)) != len(points):
        raise InputError("ultrafilters must be distinct")
    n_idx = len(family.factors)
    powers = [ultrapower(family, u) for u in ultras]
    target = product_algebra([p.algebra for p in powers])

    def natural(a: int) -> int:
        return target.codec.encode(tuple(p.class_of[a] for p in powers))

    # witness partition: block m = {point_m} except block 0 takes the rest
    blocks = [0] * len(ultras)
    for m, pt in enumerate(points):
        blocks[m] |= 1 << pt
    rest = ((1 << n_idx) - 1) & ~sum(blocks)
    blocks[0] |= rest

    section = []
    for t in range(target.size):
        classes = target.codec.decode(t)
        reps = [powers[m].representatives[c] for m, c in enumerate(classes)]
        coords = [0] * n_idx
        for m, block in enumerate(blocks):
            rep_coords = family.decode(reps[m])
            for i in bit_indices(block):
                coords[i] = rep_coords[i]
        patched = family.encode(coords)
        if natural(patched) != t:
            raise PropertyViolation(
                "patched preimage does not map to its target", witness=(t, patched)
            )
        section.append(patched)

    image = {natural(a) for a in range(family.product.size)}
    ok = image == set(range(target.size))

    meet = Filter(family.index_set, sum(1 << p for p in points))
    reduced = ReducedProduct(family, meet)
    induced = {}
    bijective = True
    for a in range(family.product.size):
        cls = reduced.class_of[a]
        t = natural(a)
        if induced.setdefault(cls, t) != t:
            bijective = False
    bijective = bijective and len(induced) == target.size and ok
    return SurjectivityResult(
        ok=ok,
        ultrafilters=ultras,
        target=target,
        section=tuple(section),
        witness_partition=tuple(blocks),
        bijective=bijective,
    )


@dataclass
class Factorization:
    """A map on a product written as bridge o (product of quotient maps)."""

    filter: Filter
    ultrafilters: tuple[Ultrafilter, ...]
    middle: ProductAlgebra            # product of the ultrapowers
    natural: HomTable                 # A -> middle
    bridge: HomTable                  # middle -> codomain

    def composite(self, a: int) -> int:
        return self.bridge(self.natural(a))


def factor_homomorphism(family: ProductFamily, h: HomTable) -> Factorization:
    """Factor h through the product of its ultrapower quotients.

    The filter is detected from h, decomposed into ultrafilters; the bridge
    sends each middle element to h of its least preimage and is asserted
    well-defined, with the composite checked equal to h pointwise.
    """
    if h.domain.size != family.product.size:
        raise InputError("homomorphism domain does not match the family product")
    filt = detected_filter(family, h.mapping)
    ultras = decompose_filter(filt)
    powers = [ultrapower(family, u) for u in ultras]
    middle = product_algebra([p.algebra for p in powers], signature=family.signature)

    natural_map = [
        middle.codec.encode(tuple(p.class_of[a] for p in powers))
        for a in range(family.product.size)
    ]
    natural = HomTable(family.product, middle, natural_map)

    bridge_map: list[int | None] = [None] * middle.size
    for a in range(family.product.size):
        t = natural_map[a]
        if bridge_map[t] is None:
            bridge_map[t] = h(a)
        elif bridge_map[t] != h(a):
            raise PropertyViolation(
                "bridge is not well defined", witness=(t, a)
            )
    if any(v is None for v in bridge_map):
        raise PropertyViolation("natural map onto the ultrapower product is not onto")
    bridge = HomTable(middle, h.codomain, bridge_map)

    for a in range(family.product.size):
        if bridge(natural(a)) != h(a):
            raise PropertyViolation("composite differs from the original map", witness=a)
    return Factorization(
        filter=filt, ultrafilters=ultras, middle=middle, natural=natural, bridge=bridge
    )


@dataclass
class Regrouping:
    outer: ProductFamily
    iso: tuple[int, ...]       # original flat index -> outer flat index
    inverse: tuple[int, ...]


def regroup_product(family: ProductFamily, parts) -> Regrouping:
    """Rewrite a product as a product of subproducts along a partition of I.

    Parts are sequences of coordinate indices; together they must partition
    the index set.  The natural bijection is checked to commute with every
    operation.
    """
    parts = [tuple(p) for p in parts]
    flat_parts = [i for p in parts for i in p]
    if sorted(flat_parts) != list(range(len(family.factors))):
        raise InputError("parts do not partition the index set")
    subproducts = [
        product_algebra([family.factors[i] for i in p], signature=family.signature)
        for p in parts
    ]
    outer = ProductFamily(subproducts)
    iso = []
    for a in range(family.product.size):
        coords = family.decode(a)
        outer_coords = [
            sub.codec.encode(tuple(coords[i] for i in p))
            for p, sub in zip(parts, subproducts)
        ]
        iso.append(outer.encode(outer_coords))
    if len(set(iso)) != family.product.size or outer.product.size != family.product.size:
        raise PropertyViolation("regrouping map is not a bijection")
    inverse = [0] * len(iso)
    for a, b in enumerate(iso):
        inverse[b] = a
    # commuting with every operation makes the bijection an isomorphism
    for sym, arity in family.signature.symbols:
        if family.product.size ** arity > MAX_REGROUP_WORK:
            raise CapExceeded(
                f"regrouping verification for {sym!r} exceeds cap {MAX_REGROUP_WORK}"
            )
        for args in itertools.product(range(family.product.size), repeat=arity):
            lhs = iso[family.product.op(sym, *args)]
            rhs = outer.product.op(sym, *(iso[x] for x in args))
            if lhs != rhs:
                raise PropertyViolation(
                    f"regrouping does not commute with {sym!r}", witness=args
                )
    return Regrouping(outer=outer, iso=tuple(iso), inverse=tuple(inverse))


def diagonal_map(family: ProductFamily, rp: ReducedProduct) -> tuple[int, ...]:
    """Class of the constant tuple for each element of the (shared) factor.

    All factors must be the same algebra; for a proper filter this map is
    injective.
    """
    first = family.factors[0]
    for f in family.factors[1:]:
        if f.tables != first.tables or f.size != first.size:
            raise InputError("diagonal map needs one algebra at all coordinates")
    out = []
    for x in first.elements():
        flat = family.encode([x] * len(family.factors))
        out.append(rp.class_of[flat])
    return tuple(out)
