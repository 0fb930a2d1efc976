"""Annihilators, centers, almost direct factors, formal relations, and the
orthogonality construction on binary relations.

Ring-like algebras here are finite nonunital, not necessarily associative
rings presented by tables over the (add, neg, mul, zero) signature; the
group side uses (mul, inv, e).  Flavors are the strings "ring-ideal" and
"normal-subgroup".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .redprod import Factorization, ProductFamily, factor_homomorphism
from .ualg import (
    Congruence,
    FiniteAlgebra,
    HomTable,
    Signature,
    Term,
    Var,
    congruence_generated,
    eval_term,
    is_identity,
    parse_term,
    product_algebra,
    quotient_algebra,
    substitute,
    term_variables,
)
from .util import CapExceeded, CheckResult, InputError, PropertyViolation, failed, passed

RING_FLAVOR = "ring-ideal"
GROUP_FLAVOR = "normal-subgroup"

IDEAL_ENUM_CAP = 16
PERP_MAX_CARRIER = 8
PERP_MAX_Z_ARITY = 2


# ---------------------------------------------------------------------------
# Flavor plumbing


def _ring_ops(b: FiniteAlgebra):
    for sym, arity in (("add", 2), ("neg", 1), ("mul", 2)):
        if sym not in b.signature or b.signature.arity(sym) != arity:
            raise InputError(f"ring-like signature needs {sym}/{arity}")
    zero = b.zero
    if zero is None and "zero" in b.signature:
        zero = b.constant("zero")
    if zero is None:
        raise InputError("ring-like algebra needs a zero tag or constant")
    return zero


def _group_ops(k: FiniteAlgebra):
    for sym, arity in (("mul", 2), ("inv", 1)):
        if sym not in k.signature or k.signature.arity(sym) != arity:
            raise InputError(f"group-like signature needs {sym}/{arity}")
    e = k.identity
    if e is None and "e" in k.signature:
        e = k.constant("e")
    if e is None:
        raise InputError("group-like algebra needs an identity tag or constant")
    return e


@dataclass(frozen=True)
class IdealOrNormal:
    """A two-sided ideal or a normal subgroup, validated at construction."""

    algebra: FiniteAlgebra
    elements: frozenset[int]
    flavor: str

    def __post_init__(self):
        a = self.algebra
        for x in self.elements:
            if not 0 <= x < a.size:
                raise InputError(f"element {x} out of carrier range")
        if self.flavor == RING_FLAVOR:
            zero = _ring_ops(a)
            if zero not in self.elements:
                raise InputError("ideal must contain zero")
            for x in self.elements:
                if a.op("neg", x) not in self.elements:
                    raise InputError(f"ideal not closed under negation at {x}")
                for y in self.elements:
                    if a.op("add", x, y) not in self.elements:
                        raise InputError(f"ideal not closed under addition at ({x},{y})")
                for y in a.elements():
                    if a.op("mul", x, y) not in self.elements or a.op("mul", y, x) not in self.elements:
                        raise InputError(f"ideal not closed under multiplication at ({x},{y})")
        elif self.flavor == GROUP_FLAVOR:
            e = _group_ops(a)
            if e not in self.elements:
                raise InputError("subgroup must contain the identity")
            for x in self.elements:
                if a.op("inv", x) not in self.elements:
                    raise InputError(f"subgroup not closed under inversion at {x}")
                for y in self.elements:
                    if a.op("mul", x, y) not in self.elements:
                        raise InputError(f"subgroup not closed under product at ({x},{y})")
                for g in a.elements():
                    conj = a.op("mul", a.op("mul", g, x), a.op("inv", g))
                    if conj not in self.elements:
                        raise InputError(f"subgroup not normal: conjugate of {x} by {g}")
        else:
            raise InputError(f"unknown flavor {self.flavor!r}")

    def __le__(self, other: "IdealOrNormal") -> bool:
        return self.elements <= other.elements

    def sorted_elements(self) -> tuple[int, ...]:
        return tuple(sorted(self.elements))

    def __repr__(self):
        return f"<{self.flavor} {set(self.sorted_elements())} in {self.algebra.name}>"


def _generated(b: FiniteAlgebra, flavor: str, seed) -> frozenset[int]:
    """Closure of a subset under the flavor's defining operations."""
    if flavor == RING_FLAVOR:
        zero = _ring_ops(b)
        out = set(seed) | {zero}
        frontier = list(out)
        while frontier:
            x = frontier.pop()
            candidates = [b.op("neg", x)]
            candidates += [b.op("add", x, y) for y in out]
            candidates += [b.op("mul", x, y) for y in b.elements()]
            candidates += [b.op("mul", y, x) for y in b.elements()]
            for c in candidates:
                if c not in out:
                    out.add(c)
                    frontier.append(c)
        return frozenset(out)
    if flavor == GROUP_FLAVOR:
        e = _group_ops(b)
        out = set(seed) | {e}
        frontier = list(out)
        while frontier:
            x = frontier.pop()
            candidates = [b.op("inv", x)]
            candidates += [b.op("mul", x, y) for y in out]
            candidates += [b.op("mul", y, x) for y in out]
            candidates += [
                b.op("mul", b.op("mul", g, x), b.op("inv", g)) for g in b.elements()
            ]
            for c in candidates:
                if c not in out:
                    out.add(c)
                    frontier.append(c)
        return frozenset(out)
    raise InputError(f"unknown flavor {flavor!r}")


def enumerate_ideals(b: FiniteAlgebra, flavor: str) -> list[frozenset[int]]:
    """All ideals (normal subgroups) of a small algebra.

    Every such subset is a join of the principal ones it contains, so the
    principal closures are closed under pairwise join; same answers as
    closing every carrier subset, at far lower cost.
    """
    if b.size > IDEAL_ENUM_CAP:
        raise CapExceeded(f"carrier {b.size} exceeds enumeration cap {IDEAL_ENUM_CAP}")
    found = {_generated(b, flavor, ())}
    found.update(_generated(b, flavor, (x,)) for x in b.elements())
    changed = True
    while changed:
        changed = False
        for u, v in itertools.combinations(sorted(found, key=sorted), 2):
            j = _generated(b, flavor, u | v)
            if j not in found:
                found.add(j)
                changed = True
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def _combine(b: FiniteAlgebra, flavor: str, u, v) -> frozenset[int]:
    """Sumset of ideals / product set of subgroups."""
    op = "add" if flavor == RING_FLAVOR else "mul"
    return frozenset(b.op(op, x, y) for x in u for y in v)


def _mutual_null(b: FiniteAlgebra, flavor: str, u, v) -> bool:
    """Mutually annihilating ideals / mutually centralizing subgroups."""
    if flavor == RING_FLAVOR:
        zero = _ring_ops(b)
        return all(
            b.op("mul", x, y) == zero and b.op("mul", y, x) == zero
            for x in u for y in v
        )
    return all(b.op("mul", x, y) == b.op("mul", y, x) for x in u for y in v)


def annihilator_of(b: FiniteAlgebra, subset) -> frozenset[int]:
    """Two-sided annihilator of a subset in a ring-like algebra."""
    zero = _ring_ops(b)
    return frozenset(
        x for x in b.elements()
        if all(b.op("mul", x, y) == zero and b.op("mul", y, x) == zero for y in subset)
    )


def centralizer_of(k: FiniteAlgebra, subset) -> frozenset[int]:
    _group_ops(k)
    return frozenset(
        x for x in k.elements()
        if all(k.op("mul", x, y) == k.op("mul", y, x) for y in subset)
    )


def total_annihilator(b: FiniteAlgebra) -> IdealOrNormal:
    """Elements whose products with everything vanish on both sides."""
    return IdealOrNormal(b, annihilator_of(b, list(b.elements())), RING_FLAVOR)


def center_or_centralizer(k: FiniteAlgebra, n: IdealOrNormal | None = None) -> IdealOrNormal:
    """Centralizer of a normal subgroup, or the center when n is omitted."""
    subset = list(k.elements()) if n is None else n.sorted_elements()
    return IdealOrNormal(k, centralizer_of(k, subset), GROUP_FLAVOR)


def _zero_part(b: FiniteAlgebra, flavor: str) -> IdealOrNormal:
    if flavor == RING_FLAVOR:
        return total_annihilator(b)
    if flavor == GROUP_FLAVOR:
        return center_or_centralizer(b)
    raise InputError(f"unknown flavor {flavor!r}")


def almost_direct_factor_pairs(b: FiniteAlgebra, flavor: str):
    """All ordered pairs (B0, B1) spanning B with each the annihilator
    (centralizer) of the other."""
    ideals = enumerate_ideals(b, flavor)
    carrier = frozenset(b.elements())
    perp = annihilator_of if flavor == RING_FLAVOR else centralizer_of
    pairs = []
    for u in ideals:
        for v in ideals:
            if _combine(b, flavor, u, v) != carrier:
                continue
            if perp(b, v) == u and perp(b, u) == v:
                pairs.append(
                    (IdealOrNormal(b, u, flavor), IdealOrNormal(b, v, flavor))
                )
    return pairs


@dataclass
class AlmostFactsReport:
    algebra: str
    flavor: str
    factor_count: int
    contains_zero_part_checked: int
    non_self_annihilating_checked: int
    spanning_pairs_checked: int


def verify_almost_facts(b: FiniteAlgebra, flavor: str) -> AlmostFactsReport:
    """Check the three almost-direct-factor facts on one algebra.

    Every almost direct factor contains the total annihilator (center); one
    strictly larger than it fails to annihilate (centralize) itself; and any
    spanning mutually annihilating (centralizing) pair becomes an almost
    direct factor pair after adjoining the annihilator (center).  These are
    theorems, so any violation raises.
    """
    z = _zero_part(b, flavor).elements
    pairs = almost_direct_factor_pairs(b, flavor)
    factors = {p[0].elements for p in pairs} | {p[1].elements for p in pairs}

    for f in factors:
        if not z <= f:
            raise PropertyViolation(
                f"almost direct factor misses the annihilator/center in {b.name}",
                witness=sorted(f),
            )

    non_self = 0
    for f in factors:
        if f > z:
            if _mutual_null(b, flavor, f, f):
                raise PropertyViolation(
                    f"factor strictly above the annihilator/center annihilates itself in {b.name}",
                    witness=sorted(f),
                )
            non_self += 1

    ideals = enumerate_ideals(b, flavor)
    carrier = frozenset(b.elements())
    adf = {(p[0].elements, p[1].elements) for p in pairs}
    spanning = 0
    for u in ideals:
        for v in ideals:
            if _combine(b, flavor, u, v) != carrier or not _mutual_null(b, flavor, u, v):
                continue
            spanning += 1
            u_z = _generated(b, flavor, u | z)
            v_z = _generated(b, flavor, v | z)
            if (u_z, v_z) not in adf:
                raise PropertyViolation(
                    f"spanning mutually annihilating pair does not lift to almost direct factors in {b.name}",
                    witness=(sorted(u), sorted(v)),
                )
    return AlmostFactsReport(
        algebra=b.name,
        flavor=flavor,
        factor_count=len(factors),
        contains_zero_part_checked=len(factors),
        non_self_annihilating_checked=non_self,
        spanning_pairs_checked=spanning,
    )


# ---------------------------------------------------------------------------
# Factoring through the quotient by the annihilator/center


def central_quotient(b: FiniteAlgebra, flavor: str):
    """B -> B/Z(B): quotient by the congruence collapsing the total
    annihilator to zero (rings) or by the center's coset partition (groups)."""
    z = _zero_part(b, flavor)
    if flavor == RING_FLAVOR:
        zero = _ring_ops(b)
        cong = congruence_generated(b, [(x, zero) for x in z.elements])
    else:
        seen = set()
        blocks = []
        for x in b.elements():
            if x in seen:
                continue
            coset = sorted(b.op("mul", x, zz) for zz in z.elements)
            blocks.append(coset)
            seen.update(coset)
        cong = Congruence(b, blocks)
    return quotient_algebra(b, cong)


def cc_factorization_demo(family: ProductFamily, f: HomTable, flavor: str) -> Factorization:
    """Factor the composite A -> B -> B/Z(B) through ultrapowers.

    f must be surjective; the factorization engine then detects the filter
    of the composite and builds the bridge.
    """
    if not f.is_surjective():
        raise InputError("the homomorphism onto B must be surjective")
    _, projection = central_quotient(f.codomain, flavor)
    composite = f.then(projection)
    return factor_homomorphism(family, composite)


@dataclass
class ChainReport:
    ideals: list[IdealOrNormal]
    strict: list[bool]
    block_image_central: list[bool]


def chain_strictness(family: ProductFamily, f: HomTable, parts) -> ChainReport:
    """The increasing chain of centered images along an ordered partition.

    Step m goes from the centered image of the first m blocks to the first
    m+1; a step is strict exactly when the new block's image is not inside
    the annihilator, which is asserted.  Each chain member is also checked
    to pair with its complement's centered image as almost direct factors.
    """
    flavor = RING_FLAVOR
    b = f.codomain
    zero = _ring_ops(b)
    if not f.is_surjective():
        raise InputError("the homomorphism onto B must be surjective")
    parts = [tuple(p) for p in parts]
    n = len(family.factors)
    if sorted(i for p in parts for i in p) != list(range(n)):
        raise InputError("parts do not partition the index set")
    z = _zero_part(b, flavor).elements

    def image_of_coords(coords_set) -> frozenset[int]:
        ranges = [
            family.factors[i].elements() if i in coords_set else (ident_of(i),)
            for i in range(n)
        ]
        return frozenset(
            f(family.encode(tup)) for tup in itertools.product(*ranges)
        )

    def ident_of(i: int) -> int:
        factor = family.factors[i]
        ref = factor.zero if factor.zero is not None else factor.identity
        if ref is None:
            raise InputError(f"factor {i} carries no zero tag")
        return ref

    chain = [IdealOrNormal(b, z, flavor)]
    strict = []
    central_flags = []
    covered: set[int] = set()
    for p in parts:
        block_image = image_of_coords(set(p))
        central = block_image <= z
        central_flags.append(central)
        covered |= set(p)
        stage = frozenset(
            b.op("add", u, v) for u in image_of_coords(covered) for v in z
        )
        ideal = IdealOrNormal(b, stage, flavor)
        is_strict = ideal.elements != chain[-1].elements
        if not central and not is_strict:
            raise PropertyViolation(
                "chain step with non-central block image failed to be strict",
                witness=p,
            )
        if central and is_strict:
            raise PropertyViolation(
                "chain step with central block image unexpectedly strict", witness=p
            )
        # the stage and its complement's centered image are almost direct factors
        complement_image = image_of_coords(set(range(n)) - covered)
        partner = frozenset(b.op("add", u, v) for u in complement_image for v in z)
        if (
            _combine(b, flavor, ideal.elements, partner) != frozenset(b.elements())
            or annihilator_of(b, partner) != ideal.elements
            or annihilator_of(b, ideal.elements) != partner
        ):
            raise PropertyViolation(
                "chain stage does not form an almost direct factor pair", witness=p
            )
        chain.append(ideal)
        strict.append(is_strict)
    return ChainReport(ideals=chain, strict=strict, block_image_central=central_flags)


# ---------------------------------------------------------------------------
# Formal relations and the orthogonality construction


_ALLOWED_DISTINGUISHED = {"x", "x'", "y", "y'"}


@dataclass(frozen=True)
class FormalRelation:
    """A symbolic equation in x, x', y, y' and parameters z0..z_{n-1}."""

    name: str
    signature: Signature
    lhs: Term
    rhs: Term
    z_arity: int

    def __post_init__(self):
        used = set(term_variables(self.lhs)) | set(term_variables(self.rhs))
        for v in used:
            if v in _ALLOWED_DISTINGUISHED:
                continue
            if v.startswith("z") and v[1:].isdigit() and int(v[1:]) < self.z_arity:
                continue
            raise InputError(
                f"relation {self.name!r} uses disallowed variable {v!r}"
            )

    @classmethod
    def parse(cls, name, signature, lhs: str, rhs: str, z_arity: int = 0):
        return cls(
            name, signature,
            parse_term(lhs, signature), parse_term(rhs, signature), z_arity,
        )

    def z_names(self) -> tuple[str, ...]:
        return tuple(f"z{i}" for i in range(self.z_arity))

    def holds(self, a: FiniteAlgebra, env: dict[str, int]) -> bool:
        return eval_term(a, self.lhs, env) == eval_term(a, self.rhs, env)


def check_dR(a: FiniteAlgebra, r: FormalRelation) -> CheckResult:
    """Whether the relation becomes an identity when x = x' and when y = y'."""
    for merged, kept in (("x'", "x"), ("y'", "y")):
        mapping = {merged: Var(kept)}
        lhs = substitute(r.lhs, mapping)
        rhs = substitute(r.rhs, mapping)
        res = is_identity(a, lhs, rhs)
        if not res:
            return failed(f"substitution {merged}={kept} is not an identity", res.witness)
    return passed()


def check_R_prod(
    a0: FiniteAlgebra, a1: FiniteAlgebra, r: FormalRelation, max_work=1 << 22
) -> CheckResult:
    """On A0 x A1, the relation holds whenever the first pair agrees in the
    A0 component and the second pair agrees in the A1 component.

    Requires the relation to pass check_dR on both factors, which makes the
    sweep a theorem; the exhaustive check is the point.
    """
    for a in (a0, a1):
        res = check_dR(a, r)
        if not res:
            raise InputError(f"relation fails its defining condition on {a.name}: {res.describe()}")
    prod = product_algebra([a0, a1])
    p = prod.size
    work = (a0.size * a1.size ** 2) * (a0.size ** 2 * a1.size) * p ** r.z_arity
    if work > max_work:
        raise CapExceeded(f"product relation sweep {work} exceeds cap {max_work}")
    enc = prod.codec.encode
    znames = r.z_names()
    for u0 in a0.elements():
        for u1 in a1.elements():
            for u1b in a1.elements():
                aa = enc((u0, u1))
                ab = enc((u0, u1b))
                for v0 in a0.elements():
                    for v0b in a0.elements():
                        for v1 in a1.elements():
                            ba = enc((v0, v1))
                            bb = enc((v0b, v1))
                            env = {"x": aa, "x'": ab, "y": ba, "y'": bb}
                            for zs in itertools.product(prod.elements(), repeat=r.z_arity):
                                env.update(zip(znames, zs))
                                if not r.holds(prod, env):
                                    return failed("relation_fails_on_product", dict(env))
    return passed()


@dataclass(frozen=True)
class BinaryRelation:
    """A set of ordered pairs on a carrier; no structure is assumed."""

    algebra: FiniteAlgebra
    pairs: frozenset[tuple[int, int]]

    def __post_init__(self):
        for i, j in self.pairs:
            if not (0 <= i < self.algebra.size and 0 <= j < self.algebra.size):
                raise InputError(f"pair ({i},{j}) out of carrier range")

    @classmethod
    def diagonal(cls, a: FiniteAlgebra) -> "BinaryRelation":
        return cls(a, frozenset((i, i) for i in a.elements()))

    @classmethod
    def full(cls, a: FiniteAlgebra) -> "BinaryRelation":
        return cls(a, frozenset(itertools.product(a.elements(), repeat=2)))

    @classmethod
    def from_congruence(cls, c: Congruence) -> "BinaryRelation":
        return cls(c.algebra, c.pairs())

    def is_reflexive(self) -> bool:
        return all((i, i) in self.pairs for i in self.algebra.elements())

    def is_symmetric(self) -> bool:
        return all((j, i) in self.pairs for i, j in self.pairs)

    def transitivity_witness(self):
        by_first: dict[int, list[int]] = {}
        for i, j in self.pairs:
            by_first.setdefault(i, []).append(j)
        for i, j in sorted(self.pairs):
            for k in sorted(by_first.get(j, ())):
                if (i, k) not in self.pairs:
                    return (i, j, k)
        return None

    def is_transitive(self) -> bool:
        return self.transitivity_witness() is None

    def subalgebra_witness(self):
        """First operation application leading out of the pair set, if any."""
        a = self.algebra
        pairs = sorted(self.pairs)
        for sym, arity in a.signature.symbols:
            for chosen in itertools.product(pairs, repeat=arity):
                left = a.op(sym, *(p[0] for p in chosen))
                right = a.op(sym, *(p[1] for p in chosen))
                if (left, right) not in self.pairs:
                    return (sym, chosen)
        return None

    def is_congruence(self) -> bool:
        if not (self.is_reflexive() and self.is_symmetric() and self.is_transitive()):
            return False
        return self.subalgebra_witness() is None

    def __le__(self, other: "BinaryRelation") -> bool:
        return self.pairs <= other.pairs

    def __len__(self):
        return len(self.pairs)


def _quantified_relation_table(a: FiniteAlgebra, r: FormalRelation) -> set[tuple]:
    """Quadruples (a, a', b, b') satisfying the relation for every choice of
    the z parameters."""
    znames = r.z_names()
    out = set()
    for quad in itertools.product(a.elements(), repeat=4):
        env = dict(zip(("x", "x'", "y", "y'"), quad))
        if all(
            r.holds(a, {**env, **dict(zip(znames, zs))})
            for zs in itertools.product(a.elements(), repeat=r.z_arity)
        ):
            out.add(quad)
    return out


def compute_perp(a: FiniteAlgebra, relations, c: BinaryRelation) -> BinaryRelation:
    """Pairs (a, a') standing in every catalog relation against every pair of
    c and all parameter values."""
    relations = list(relations)
    if a.size > PERP_MAX_CARRIER:
        raise CapExceeded(f"carrier {a.size} exceeds perp cap {PERP_MAX_CARRIER}")
    if c.algebra is not a:
        raise InputError("relation c lives on a different algebra")
    for r in relations:
        if r.z_arity > PERP_MAX_Z_ARITY:
            raise CapExceeded(
                f"relation {r.name!r} has z-arity {r.z_arity} > {PERP_MAX_Z_ARITY}"
            )
        res = check_dR(a, r)
        if not res:
            raise InputError(
                f"relation {r.name!r} fails its defining condition on {a.name}: {res.describe()}"
            )
    tables = [_quantified_relation_table(a, r) for r in relations]
    kept = []
    for aa, ab in itertools.product(a.elements(), repeat=2):
        if all(
            (aa, ab, ba, bb) in table
            for table in tables
            for (ba, bb) in c.pairs
        ):
            kept.append((aa, ab))
    return BinaryRelation(a, frozenset(kept))


@dataclass
class PerpReport:
    perp: BinaryRelation
    reflexive: bool
    symmetric: bool
    subalgebra: bool
    transitive: bool
    transitivity_witness: tuple | None
    c_is_congruence: bool
    perp_is_congruence: bool | None


def perp_report(
    a: FiniteAlgebra, relations, c: BinaryRelation, assume_closed: bool = True
) -> PerpReport:
    """Compute the perp and its structural properties.

    Reflexivity, symmetry, and closure under the operations of A x A hold
    for a relation list closed under swapping the first variable pair, and
    are asserted when assume_closed is set; transitivity (and congruence-
    hood, when c is itself a congruence) are reported, never asserted.
    """
    perp = compute_perp(a, relations, c)
    reflexive = perp.is_reflexive()
    symmetric = perp.is_symmetric()
    sub_witness = perp.subalgebra_witness()
    if assume_closed:
        if not reflexive:
            raise PropertyViolation("perp is not reflexive", witness=a.name)
        if not symmetric:
            raise PropertyViolation("perp is not symmetric", witness=a.name)
        if sub_witness is not None:
            raise PropertyViolation(
                "perp is not a subalgebra of the square", witness=sub_witness
            )
    t_witness = perp.transitivity_witness()
    c_is_cong = c.is_congruence()
    return PerpReport(
        perp=perp,
        reflexive=reflexive,
        symmetric=symmetric,
        subalgebra=sub_witness is None,
        transitive=t_witness is None,
        transitivity_witness=t_witness,
        c_is_congruence=c_is_cong,
        perp_is_congruence=perp.is_congruence() if c_is_cong else None,
    )
