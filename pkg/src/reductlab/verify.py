"""Exhaustive verification suites: every module invariant, runnable with
explicit caps from the command line or the test suite.

Each suite returns a SuiteResult; a False result carries the first witness.
Theorems asserted inside the library (well-definedness, almost-factor facts)
surface here as PropertyViolation, which the runner converts to a failing
result rather than a crash.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import catalog
from .eklab import (
    PrimeField,
    Rationals,
    build_sli_matrix,
    cauchy_oracle,
    determinant,
    finite_field_dimension_check,
    minor_count,
    reduced_power_cardinality,
    search_sli_matrix,
    singularizing_value,
    verify_sli,
    zero_count_bound,
)
from .redprod import (
    ProductFamily,
    detected_filter,
    diagonal_map,
    factor_homomorphism,
    kernel_filter,
    reduced_product,
    regroup_product,
    ultrapower,
    verify_surjectivity,
)
from .relcheck import (
    BinaryRelation,
    GROUP_FLAVOR,
    RING_FLAVOR,
    cc_factorization_demo,
    central_quotient,
    chain_strictness,
    check_R_prod,
    check_dR,
    compute_perp,
    perp_report,
    verify_almost_facts,
)
from .setfam import (
    Filter,
    IndexSet,
    SubsetFamily,
    Ultrafilter,
    check_bdd,
    close_to_filter,
    cofilter_of,
    decompose_filter,
    grill_of,
    ideal_of,
    is_filter,
    is_ultrafilter,
    least_bdd_n,
)
from .ualg import (
    App,
    FiniteAlgebra,
    GROUP_SIGNATURE,
    HomTable,
    Signature,
    Var,
    congruence_generated,
    enumerate_congruences,
    eval_term,
    product_algebra,
    quotient_algebra,
)
from .util import PropertyViolation, bit_indices, popcount


@dataclass
class SuiteResult:
    name: str
    ok: bool
    checked: int
    witness: object = None
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        extra = f" [{self.detail}]" if self.detail else ""
        tail = "" if self.ok else f" witness={self.witness!r}"
        return f"{status} {self.name}: {self.checked} checks{extra}{tail}"


def run_suite(name, fn, *args, **kwargs) -> SuiteResult:
    try:
        return fn(*args, **kwargs)
    except PropertyViolation as exc:
        return SuiteResult(name=name, ok=False, checked=0,
                           witness=exc.witness, detail=str(exc))


# ---------------------------------------------------------------------------
# setfam suites


def _oracle_close(parent: IndexSet, masks: frozenset[int]) -> frozenset[int]:
    """Brute-force filter closure: add the top set, close under pairwise
    intersection and supersets, to a fixpoint."""
    out = set(masks)
    out.add(parent.full_mask)
    changed = True
    while changed:
        changed = False
        for j, k in itertools.combinations(sorted(out), 2):
            if j & k not in out:
                out.add(j & k)
                changed = True
        for j in sorted(out):
            for m in parent.subset_masks():
                if j & ~m == 0 and m not in out:
                    out.add(m)
                    changed = True
    return frozenset(out)


def suite_filter_closure(max_size: int = 3, oracle_max_size: int = 3) -> SuiteResult:
    """close_to_filter output passes is_filter for every family; for small
    sizes, the member set matches a brute-force closure oracle."""
    name = "setfam.closure"
    checked = 0
    for size in range(1, max_size + 1):
        parent = IndexSet(size)
        all_masks = list(parent.subset_masks())
        seen_bases = set()
        for fam_code in range(1 << len(all_masks)):
            masks = frozenset(
                all_masks[i] for i in range(len(all_masks)) if fam_code >> i & 1
            )
            f = close_to_filter(SubsetFamily(parent, masks))
            expected_base = parent.full_mask
            for m in masks:
                expected_base &= m
            if f.base_mask != expected_base:
                return SuiteResult(name, False, checked, (size, sorted(masks)),
                                   "closure base mismatch")
            if size <= oracle_max_size:
                if f.member_masks() != _oracle_close(parent, masks):
                    return SuiteResult(name, False, checked, (size, sorted(masks)),
                                       "closure differs from brute-force oracle")
            checked += 1
            seen_bases.add(f.base_mask)
        for base in seen_bases:
            res = is_filter(Filter(parent, base).members)
            if not res:
                return SuiteResult(name, False, checked, res.witness,
                                   "closed filter fails is_filter")
            checked += 1
    return SuiteResult(name, True, checked)


def suite_filter_bdd(max_size: int = 4) -> SuiteResult:
    """least_bdd_n equals the decomposition size for every filter; the
    decomposition is the unique minimal set of ultrafilters meeting in it."""
    name = "setfam.bdd"
    checked = 0
    for size in range(1, max_size + 1):
        parent = IndexSet(size)
        for base in parent.subset_masks():
            f = Filter(parent, base)
            ultras = decompose_filter(f)
            n = least_bdd_n(f)
            if n != len(ultras):
                return SuiteResult(name, False, checked, (size, base),
                                   f"least_bdd_n {n} != decomposition {len(ultras)}")
            if n > 0 and check_bdd(f, n - 1):
                return SuiteResult(name, False, checked, (size, base),
                                   "bdd already holds below the least n")
            # intersection identity and minimality
            members = f.member_masks()
            inter = _intersect_ultra_members(parent, ultras)
            if inter != members:
                return SuiteResult(name, False, checked, (size, base),
                                   "decomposition does not intersect to the filter")
            for drop in range(len(ultras)):
                sub = ultras[:drop] + ultras[drop + 1:]
                if _intersect_ultra_members(parent, sub) == members:
                    return SuiteResult(name, False, checked, (size, base),
                                       "decomposition is not minimal")
            # uniqueness across all point sets
            for points in parent.subset_masks():
                cand = tuple(Ultrafilter(parent, i) for i in bit_indices(points))
                same = _intersect_ultra_members(parent, cand) == members
                if same != (points == base):
                    return SuiteResult(name, False, checked, (size, base, points),
                                       "another ultrafilter set meets in the filter")
            # ultrafilter dichotomy against the singleton shortcut
            dichotomy = f.is_proper() and all(
                m in f or (parent.full_mask & ~m) in f for m in parent.subset_masks()
            )
            if dichotomy != is_ultrafilter(f):
                return SuiteResult(name, False, checked, (size, base),
                                   "dichotomy disagrees with is_ultrafilter")
            checked += 1
    return SuiteResult(name, True, checked)


def _intersect_ultra_members(parent: IndexSet, ultras) -> frozenset[int]:
    out = frozenset(parent.subset_masks())
    for u in ultras:
        out &= u.filter.member_masks()
    return out


def suite_filter_duality(max_size: int = 4) -> SuiteResult:
    """The four set systems determine one another as stated: complements,
    complement families, and the meets-every-member characterizations."""
    name = "setfam.duality"
    checked = 0
    for size in range(1, max_size + 1):
        parent = IndexSet(size)
        full = parent.full_mask
        powerset = frozenset(parent.subset_masks())
        for base in parent.subset_masks():
            f = Filter(parent, base)
            members = f.member_masks()
            ultras = decompose_filter(f)
            grill = grill_of(f).masks
            ideal = ideal_of(f).masks
            cof = cofilter_of(f).masks
            ok = (
                grill == frozenset().union(*(u.filter.member_masks() for u in ultras))
                if ultras else grill == frozenset()
            )
            ok = ok and ideal == frozenset(full & ~m for m in members)
            ok = ok and members == frozenset(full & ~m for m in ideal)
            ok = ok and cof == powerset - members
            ok = ok and grill == powerset - ideal
            ok = ok and grill == frozenset(
                j for j in powerset if all(j & m for m in members)
            )
            ok = ok and members == frozenset(
                j for j in powerset if all(j & g for g in grill)
            )
            if not ok:
                return SuiteResult(name, False, checked, (size, base), "duality broken")
            checked += 1
    return SuiteResult(name, True, checked)


# ---------------------------------------------------------------------------
# ualg suites


def reference_eval(a: FiniteAlgebra, t, env) -> int:
    """Naive recursive evaluator, the oracle for eval_term."""
    if isinstance(t, Var):
        return env[t.name]
    return a.op(t.symbol, *(reference_eval(a, c, env) for c in t.args))


def _terms_up_to_depth(signature: Signature, variables, depth: int):
    current = [Var(v) for v in variables]
    current += [App(sym, ()) for sym, ar in signature.symbols if ar == 0]
    for _ in range(depth):
        nxt = list(current)
        for sym, ar in signature.symbols:
            if ar == 0:
                continue
            for args in itertools.product(current, repeat=ar):
                nxt.append(App(sym, args))
        current = list(dict.fromkeys(nxt))
    return current


def suite_eval_oracle(max_depth: int = 3, sizes=(2, 3, 4)) -> SuiteResult:
    """eval_term agrees with the recursive reference on every term up to the
    depth bound; shallow terms are swept over all assignments."""
    name = "ualg.eval_oracle"
    checked = 0
    shallow = _terms_up_to_depth(GROUP_SIGNATURE, ("x", "y"), min(2, max_depth))
    deep = _terms_up_to_depth(GROUP_SIGNATURE, ("x", "y"), max_depth)
    for size in sizes:
        a = catalog.cyclic_group(size)
        for t in shallow:
            for vx in range(size):
                for vy in range(size):
                    env = {"x": vx, "y": vy}
                    if eval_term(a, t, env) != reference_eval(a, t, env):
                        return SuiteResult(name, False, checked, (size, t, env),
                                           "evaluator mismatch")
                    checked += 1
        env = {"x": 1 % size, "y": size - 1}
        for t in deep:
            if eval_term(a, t, env) != reference_eval(a, t, env):
                return SuiteResult(name, False, checked, (size, t, env),
                                   "evaluator mismatch")
            checked += 1
    return SuiteResult(name, True, checked)


def _small_corpus(max_size: int):
    algebras = [
        catalog.cyclic_group(2), catalog.cyclic_group(3), catalog.cyclic_group(4),
        catalog.named(product_algebra([catalog.cyclic_group(2)] * 2), "V4"),
        catalog.modular_ring(2), catalog.modular_ring(3), catalog.modular_ring(4),
        catalog.galois_field_ring(4),
        catalog.zero_multiplication_ring(4),
        catalog.chain_lattice(2), catalog.chain_lattice(3), catalog.chain_lattice(4),
        catalog.boolean_lattice(2),
    ]
    return [a for a in algebras if a.size <= max_size]


def suite_quotient_hom(max_size: int = 4) -> SuiteResult:
    """Quotients by generated congruences have homomorphic projections, over
    every generating pair of every corpus algebra."""
    name = "ualg.quotient_hom"
    checked = 0
    for a in _small_corpus(max_size):
        for i in range(a.size):
            for j in range(a.size):
                cong = congruence_generated(a, [(i, j)])
                _, projection = quotient_algebra(a, cong)
                if projection.law_witness() is not None:
                    return SuiteResult(name, False, checked, (a.name, i, j),
                                       "projection breaks the homomorphism law")
                checked += 1
    return SuiteResult(name, True, checked)


def suite_codec(max_factors: int = 4, max_factor_size: int = 3) -> SuiteResult:
    """decode(encode(t)) = t for every tuple of every product shape."""
    name = "ualg.codec"
    checked = 0
    for k in range(1, max_factors + 1):
        for sizes in itertools.product(range(1, max_factor_size + 1), repeat=k):
            factors = [catalog.cyclic_group(s) for s in sizes]
            prod = product_algebra(factors)
            for coords in itertools.product(*(range(s) for s in sizes)):
                if prod.codec.decode(prod.codec.encode(coords)) != coords:
                    return SuiteResult(name, False, checked, (sizes, coords),
                                       "codec round trip failed")
                checked += 1
            for flat in range(prod.size):
                if prod.codec.encode(prod.codec.decode(flat)) != flat:
                    return SuiteResult(name, False, checked, (sizes, flat),
                                       "codec round trip failed")
                checked += 1
    return SuiteResult(name, True, checked)


# ---------------------------------------------------------------------------
# redprod suites


def suite_detect_forward(samples: int = 1000, seed: int = 20260810) -> SuiteResult:
    """The family detected from a map is always a filter: exhaustively over
    every map on small products, then over seeded random maps on a cube."""
    name = "redprod.detect_forward"
    checked = 0
    z2 = catalog.cyclic_group(2)
    z3 = catalog.cyclic_group(3)
    exhaustive = [
        (ProductFamily([z2, z2]), 2),
        (ProductFamily([z2, z2, z2]), 2),
        (ProductFamily([z3, z2]), 3),
        (ProductFamily([z2, z3]), 2),
    ]
    for family, values in exhaustive:
        size = family.product.size
        for code in range(values ** size):
            h = []
            rem = code
            for _ in range(size):
                h.append(rem % values)
                rem //= values
            detected_filter(family, h)  # raises if not a filter
            checked += 1
    rng = random.Random(seed)
    cube = ProductFamily([z2, z2, z2])
    for _ in range(samples):
        h = [rng.randrange(2) for _ in range(8)]
        f = detected_filter(cube, h)
        if not is_filter(f.members):
            return SuiteResult(name, False, checked, h, "detected family not a filter")
        checked += 1
    return SuiteResult(name, True, checked, detail=f"{samples} sampled maps")


def suite_detect_converse(max_index: int = 3, factor_sizes=(2, 3)) -> SuiteResult:
    """The canonical map of a reduced product detects exactly the filter it
    was built from, for every filter and every factor-size pattern."""
    name = "redprod.detect_converse"
    checked = 0
    for n in range(1, max_index + 1):
        parent = IndexSet(n)
        for sizes in itertools.product(factor_sizes, repeat=n):
            family = ProductFamily([catalog.cyclic_group(s) for s in sizes])
            for base in parent.subset_masks():
                filt = Filter(parent, base)
                rp = reduced_product(family, filt)
                back = detected_filter(family, rp.canonical.mapping)
                if back != filt:
                    return SuiteResult(name, False, checked, (sizes, base),
                                       "detected filter differs from the source")
                checked += 1
    return SuiteResult(name, True, checked)


def _hom_tables_onto(family: ProductFamily, codomain: FiniteAlgebra):
    """Every homomorphism from the product to the codomain, by brute force
    over all maps; usable only when codomain.size ** product.size is small."""
    size = family.product.size
    total = codomain.size ** size
    for code in range(total):
        mapping = []
        rem = code
        for _ in range(size):
            mapping.append(rem % codomain.size)
            rem //= codomain.size
        try:
            yield HomTable(family.product, codomain, mapping)
        except PropertyViolation:
            continue


def suite_kernel_equiv(max_index: int = 3) -> SuiteResult:
    """kernel_filter agrees with detected_filter: exhaustively over all
    homomorphisms of Z2 cubes, and over a corpus of mixed-size group maps."""
    name = "redprod.kernel_equiv"
    checked = 0
    z2 = catalog.cyclic_group(2)
    for n in range(1, max_index + 1):
        family = ProductFamily([z2] * n)
        for hom in _hom_tables_onto(family, z2):
            if kernel_filter(family, hom) != detected_filter(family, hom):
                return SuiteResult(name, False, checked, hom.mapping,
                                   "kernel filter differs from detected filter")
            checked += 1
    for _, family, hom in factorization_corpus():
        if kernel_filter(family, hom) != detected_filter(family, hom):
            return SuiteResult(name, False, checked, hom.mapping,
                               "kernel filter differs from detected filter")
        checked += 1
    return SuiteResult(name, True, checked)


def suite_surjectivity(max_index: int = 3, max_size: int = 3) -> SuiteResult:
    """The map onto a product of ultrapowers is onto with a bijective
    reduced-product comparison, for every nonempty set of distinct points."""
    name = "redprod.surjectivity"
    checked = 0
    for n in range(1, max_index + 1):
        parent = IndexSet(n)
        for sizes in itertools.product(range(1, max_size + 1), repeat=n):
            family = ProductFamily([catalog.cyclic_group(s) for s in sizes])
            for points_mask in range(1, 1 << n):
                ultras = [Ultrafilter(parent, i) for i in bit_indices(points_mask)]
                res = verify_surjectivity(family, ultras)
                if not (res.ok and res.bijective):
                    return SuiteResult(name, False, checked, (sizes, points_mask),
                                       "surjectivity or bijectivity failed")
                checked += 1
    return SuiteResult(name, True, checked)


def factorization_corpus():
    """Named group homomorphisms on products: projections, twisted
    projections, diagonal composites, trivial and sum maps."""
    z2 = catalog.cyclic_group(2)
    z3 = catalog.cyclic_group(3)
    z4 = catalog.cyclic_group(4)
    s3 = catalog.symmetric_group(3)
    z2z2 = product_algebra([z2, z2])
    z3z3 = product_algebra([z3, z3])
    out = []

    def add(name, factors, codomain, fn):
        family = ProductFamily(factors)
        table = [fn(family.decode(a)) for a in range(family.product.size)]
        out.append((name, family, HomTable(family.product, codomain, table)))

    transposition = 2  # a fixed order-2 element of S3
    conj = lambda g: s3.op("mul", s3.op("mul", transposition, g),
                           s3.op("inv", transposition))

    add("proj0_z2cube", [z2, z2, z2], z2, lambda c: c[0])
    add("proj1_z2cube", [z2, z2, z2], z2, lambda c: c[1])
    add("proj2_z2cube", [z2, z2, z2], z2, lambda c: c[2])
    add("pair02_z2cube", [z2, z2, z2], z2z2,
        lambda c: z2z2.codec.encode((c[0], c[2])))
    add("trivial_z2cube", [z2, z2, z2], z2, lambda c: 0)
    add("xor_all_z2cube", [z2, z2, z2], z2, lambda c: (c[0] + c[1] + c[2]) % 2)
    add("xor_12_z2cube", [z2, z2, z2], z2, lambda c: (c[1] + c[2]) % 2)
    add("pairmap_z2cube", [z2, z2, z2], z2z2,
        lambda c: z2z2.codec.encode((c[0], (c[1] + c[2]) % 2)))
    add("proj0_s3z4", [s3, z4], s3, lambda c: c[0])
    add("proj1_s3z4", [s3, z4], z4, lambda c: c[1])
    add("trivial_s3z4", [s3, z4], z4, lambda c: 0)
    add("twisted_proj0_s3s3", [s3, s3], s3, lambda c: conj(c[0]))
    add("proj1_s3s3", [s3, s3], s3, lambda c: c[1])
    add("sum_z4z4", [z4, z4], z4, lambda c: (c[0] + c[1]) % 4)
    add("mod2_sum_z4z4", [z4, z4], z2, lambda c: (c[0] + c[1]) % 2)
    add("neg_proj0_z4z4", [z4, z4], z4, lambda c: (-c[0]) % 4)
    add("embed_sum_z2z4", [z2, z4], z4, lambda c: (2 * c[0] + c[1]) % 4)
    add("diag_proj0_z3z3", [z3, z3], z3z3, lambda c: z3z3.codec.encode((c[0], c[0])))
    add("sum3_z3", [z3, z3, z3], z3, lambda c: (c[0] + c[1] + c[2]) % 3)
    add("trivial_z3z3", [z3, z3], z3, lambda c: 0)
    add("identity_z4", [z4], z4, lambda c: c[0])
    add("mod2_z4", [z4], z2, lambda c: c[0] % 2)
    add("proj0_z3z2", [z3, z2], z3, lambda c: c[0])
    return out


def suite_factorization(min_corpus: int = 20) -> SuiteResult:
    """Every corpus homomorphism factors through its ultrapower product with
    a pointwise-equal composite, and the ultrafilter count is the least
    partition bound of the detected filter."""
    name = "redprod.factorization"
    checked = 0
    corpus = factorization_corpus()
    if len(corpus) < min_corpus:
        return SuiteResult(name, False, checked, len(corpus), "corpus too small")
    for label, family, hom in corpus:
        fac = factor_homomorphism(family, hom)
        for a in range(family.product.size):
            if fac.composite(a) != hom(a):
                return SuiteResult(name, False, checked, (label, a),
                                   "composite differs from the map")
        if len(fac.ultrafilters) != least_bdd_n(fac.filter):
            return SuiteResult(name, False, checked, label,
                               "ultrafilter count differs from the partition bound")
        checked += 1
    return SuiteResult(name, True, checked, detail=f"{len(corpus)} homomorphisms")


def suite_ultrapower_diagonal(max_index: int = 3, sizes=(2, 3)) -> SuiteResult:
    """Ultrapowers of a finite algebra keep its size; diagonal embeddings
    into reduced products by proper filters are injective."""
    name = "redprod.ultrapower_diagonal"
    checked = 0
    for n in range(1, max_index + 1):
        parent = IndexSet(n)
        for s in sizes:
            a = catalog.cyclic_group(s)
            family = ProductFamily([a] * n)
            for point in range(n):
                up = ultrapower(family, Ultrafilter(parent, point))
                if up.class_count != a.size:
                    return SuiteResult(name, False, checked, (n, s, point),
                                       "ultrapower changed the carrier size")
                checked += 1
            for base in range(1, 1 << n):
                rp = reduced_product(family, Filter(parent, base))
                diag = diagonal_map(family, rp)
                if len(set(diag)) != a.size:
                    return SuiteResult(name, False, checked, (n, s, base),
                                       "diagonal embedding not injective")
                checked += 1
    return SuiteResult(name, True, checked)


def suite_regroup() -> SuiteResult:
    """Product-of-products regrouping is an isomorphism for assorted
    partitions, including the identity and all-singleton ones."""
    name = "redprod.regroup"
    checked = 0
    z2 = catalog.cyclic_group(2)
    z3 = catalog.cyclic_group(3)
    cases = [
        (ProductFamily([z2] * 4), [(0, 1), (2, 3)]),
        (ProductFamily([z2] * 4), [(0, 1, 2, 3)]),
        (ProductFamily([z2] * 4), [(0,), (1,), (2,), (3,)]),
        (ProductFamily([z2, z3, z2]), [(0, 2), (1,)]),
        (ProductFamily([z3, z2]), [(1,), (0,)]),
    ]
    for family, parts in cases:
        regroup_product(family, parts)  # raises if not an isomorphism
        checked += 1
    return SuiteResult(name, True, checked)


# ---------------------------------------------------------------------------
# relcheck suites


def _ring_relations():
    return [catalog.ring_difference_relation(), catalog.ring_scaled_difference_relation()]


def _group_relations():
    return [catalog.group_commutator_relation(), catalog.group_power_commutator_relation()]


def suite_dr_catalog() -> SuiteResult:
    """Every catalog relation passes the defining two-substitution check on
    every applicable corpus algebra."""
    name = "relcheck.dr_catalog"
    checked = 0
    rings = [
        catalog.galois_field_ring(2), catalog.galois_field_ring(3),
        catalog.modular_ring(4), catalog.zero_multiplication_ring(3),
        catalog.upper_triangular_ring_f2(),
    ]
    groups = [
        catalog.symmetric_group(3), catalog.cyclic_group(4),
        catalog.dihedral_group(4), catalog.quaternion_group(),
    ]
    lattices = [
        catalog.chain_lattice(2), catalog.chain_lattice(4), catalog.boolean_lattice(2),
    ]
    for algebras, relations in (
        (rings, _ring_relations()),
        (groups, _group_relations()),
        (lattices, [catalog.lattice_exchange_relation()]),
    ):
        for a in algebras:
            for r in relations:
                res = check_dR(a, r)
                if not res:
                    return SuiteResult(name, False, checked, (a.name, r.name, res.witness),
                                       "catalog relation fails check_dR")
                checked += 1
    return SuiteResult(name, True, checked)


def suite_rprod(max_size: int = 4) -> SuiteResult:
    """The product property holds for every catalog relation on every pair
    of corpus algebras within the size bound."""
    name = "relcheck.rprod"
    checked = 0
    rings = [a for a in (catalog.galois_field_ring(2), catalog.galois_field_ring(3),
                         catalog.modular_ring(4), catalog.zero_multiplication_ring(2))
             if a.size <= max_size]
    groups = [a for a in (catalog.cyclic_group(2), catalog.cyclic_group(3),
                          catalog.cyclic_group(4)) if a.size <= max_size]
    lattices = [a for a in (catalog.chain_lattice(2), catalog.chain_lattice(3),
                            catalog.boolean_lattice(2)) if a.size <= max_size]
    for algebras, relations in (
        (rings, _ring_relations()),
        (groups, _group_relations()),
        (lattices, [catalog.lattice_exchange_relation()]),
    ):
        for a0 in algebras:
            for a1 in algebras:
                for r in relations:
                    res = check_R_prod(a0, a1, r)
                    if not res:
                        return SuiteResult(name, False, checked,
                                           (a0.name, a1.name, r.name, res.witness),
                                           "product property failed")
                    checked += 1
    return SuiteResult(name, True, checked)


def suite_perp_properties() -> SuiteResult:
    """Perp outputs are reflexive, symmetric subalgebras; the diagonal input
    gives the full relation; the S3 commutator perp of the full relation is
    exactly the central-difference relation (the diagonal)."""
    name = "relcheck.perp_properties"
    checked = 0
    s3 = catalog.symmetric_group(3)
    cases = [
        (s3, _group_relations()),
        (catalog.cyclic_group(4), _group_relations()),
        (catalog.galois_field_ring(2), _ring_relations()),
        (catalog.galois_field_ring(3), _ring_relations()),
        (catalog.chain_lattice(2), [catalog.lattice_exchange_relation()]),
        (catalog.boolean_lattice(2), [catalog.lattice_exchange_relation()]),
    ]
    for a, relations in cases:
        for c in (BinaryRelation.diagonal(a), BinaryRelation.full(a)):
            report = perp_report(a, relations, c)  # asserts the three properties
            if c.pairs == BinaryRelation.diagonal(a).pairs:
                if report.perp.pairs != BinaryRelation.full(a).pairs:
                    return SuiteResult(name, False, checked, a.name,
                                       "perp of the diagonal is not everything")
            checked += 1
    # the S3 instance pinned exactly: perp of the full relation under the
    # commutator relations is the set of pairs with central difference
    center = {x for x in s3.elements()
              if all(s3.op("mul", x, g) == s3.op("mul", g, x) for g in s3.elements())}
    expected = frozenset(
        (a_, b_) for a_ in s3.elements() for b_ in s3.elements()
        if s3.op("mul", a_, s3.op("inv", b_)) in center
    )
    got = compute_perp(s3, [catalog.group_commutator_relation()],
                       BinaryRelation.full(s3))
    if got.pairs != expected:
        return SuiteResult(name, False, checked, sorted(got.pairs),
                           "S3 perp differs from the central-difference relation")
    checked += 1
    # abelian: everything is orthogonal to everything
    z4 = catalog.cyclic_group(4)
    got = compute_perp(z4, [catalog.group_commutator_relation()],
                       BinaryRelation.full(z4))
    if got.pairs != BinaryRelation.full(z4).pairs:
        return SuiteResult(name, False, checked, sorted(got.pairs),
                           "abelian perp is not full")
    checked += 1
    return SuiteResult(name, True, checked)


def suite_perp_monotone(max_size: int = 4) -> SuiteResult:
    """Larger relations have smaller perps, over every congruence pair of
    every corpus algebra within the size bound."""
    name = "relcheck.perp_monotone"
    checked = 0
    cases = [
        (catalog.cyclic_group(2), _group_relations()),
        (catalog.cyclic_group(3), _group_relations()),
        (catalog.cyclic_group(4), _group_relations()),
        (catalog.named(product_algebra([catalog.cyclic_group(2)] * 2), "V4"),
         _group_relations()),
        (catalog.galois_field_ring(2), _ring_relations()),
        (catalog.galois_field_ring(3), _ring_relations()),
        (catalog.modular_ring(4), _ring_relations()),
        (catalog.zero_multiplication_ring(4), _ring_relations()),
        (catalog.chain_lattice(2), [catalog.lattice_exchange_relation()]),
        (catalog.chain_lattice(3), [catalog.lattice_exchange_relation()]),
        (catalog.chain_lattice(4), [catalog.lattice_exchange_relation()]),
        (catalog.boolean_lattice(2), [catalog.lattice_exchange_relation()]),
    ]
    for a, relations in cases:
        if a.size > max_size:
            continue
        congruences = [BinaryRelation.from_congruence(c) for c in enumerate_congruences(a)]
        perps = [compute_perp(a, relations, c) for c in congruences]
        for (c1, p1), (c2, p2) in itertools.product(zip(congruences, perps), repeat=2):
            if c1.pairs <= c2.pairs and not p2.pairs <= p1.pairs:
                return SuiteResult(name, False, checked, (a.name, sorted(c1.pairs),
                                                          sorted(c2.pairs)),
                                   "perp is not antitone")
            checked += 1
    return SuiteResult(name, True, checked)


def suite_perp_transitivity_search(max_size: int = 6) -> SuiteResult:
    """Open-question scan: report (never assert) transitivity of perps of
    congruences across the corpus; counterexamples become the detail."""
    name = "relcheck.perp_transitivity_search"
    checked = 0
    findings = []
    cases = [
        (catalog.symmetric_group(3), _group_relations()),
        (catalog.cyclic_group(4), _group_relations()),
        (catalog.galois_field_ring(4), _ring_relations()),
        (catalog.modular_ring(6), _ring_relations()),
        (catalog.zero_multiplication_ring(4), _ring_relations()),
        (catalog.chain_lattice(4), [catalog.lattice_exchange_relation()]),
        (catalog.boolean_lattice(2), [catalog.lattice_exchange_relation()]),
    ]
    for a, relations in cases:
        if a.size > max_size:
            continue
        for cong in enumerate_congruences(a):
            c = BinaryRelation.from_congruence(cong)
            report = perp_report(a, relations, c)
            if not report.transitive:
                findings.append((a.name, cong.blocks, report.transitivity_witness))
            checked += 1
    detail = f"{len(findings)} intransitive perps" + (
        f"; first: {findings[0]}" if findings else ""
    )
    return SuiteResult(name, True, checked, detail=detail)


def suite_almost_facts() -> SuiteResult:
    """The three almost-direct-factor facts hold with zero violations on the
    ring corpus (carrier <= 8) and every group of order <= 8."""
    name = "relcheck.almost_facts"
    checked = 0
    for b in catalog.ring_corpus_up_to_8():
        verify_almost_facts(b, RING_FLAVOR)  # raises on violation
        checked += 1
    for g in catalog.all_groups_up_to_8():
        verify_almost_facts(g, GROUP_FLAVOR)
        checked += 1
    return SuiteResult(name, True, checked)


def cc_corpus():
    """Surjective group homomorphisms for the centered factorization demo,
    with the expected ultrafilter counts."""
    z2 = catalog.cyclic_group(2)
    z4 = catalog.cyclic_group(4)
    s3 = catalog.symmetric_group(3)
    out = []

    def add(name, factors, codomain, fn, expect):
        family = ProductFamily(factors)
        table = [fn(family.decode(a)) for a in range(family.product.size)]
        out.append((name, family, HomTable(family.product, codomain, table), expect))

    transposition = 2
    conj = lambda g: s3.op("mul", s3.op("mul", transposition, g),
                           s3.op("inv", transposition))
    add("proj0_s3s3", [s3, s3], s3, lambda c: c[0], 1)
    add("proj1_s3s3", [s3, s3], s3, lambda c: c[1], 1)
    add("twisted_proj0_s3s3", [s3, s3], s3, lambda c: conj(c[0]), 1)
    add("proj0_s3z4", [s3, z4], s3, lambda c: c[0], 1)
    add("proj1_z4s3", [z4, s3], s3, lambda c: c[1], 1)
    add("proj0_z4z4", [z4, z4], z4, lambda c: c[0], 0)
    add("sum_z4z4", [z4, z4], z4, lambda c: (c[0] + c[1]) % 4, 0)
    add("mod2_sum_z4z4", [z4, z4], z2, lambda c: (c[0] + c[1]) % 2, 0)
    return out


def suite_cc_demo() -> SuiteResult:
    """Centered factorization reproduces the composite pointwise on every
    demo homomorphism, with the expected ultrafilter counts."""
    name = "relcheck.cc_demo"
    checked = 0
    for label, family, hom, expect in cc_corpus():
        fac = cc_factorization_demo(family, hom, GROUP_FLAVOR)
        _, projection = central_quotient(hom.codomain, GROUP_FLAVOR)
        for a in range(family.product.size):
            if fac.composite(a) != projection(hom(a)):
                return SuiteResult(name, False, checked, (label, a),
                                   "composite differs from the centered map")
        if len(fac.ultrafilters) != expect:
            return SuiteResult(name, False, checked, (label, len(fac.ultrafilters)),
                               f"expected {expect} ultrafilters")
        checked += 1
    return SuiteResult(name, True, checked)


def suite_chain() -> SuiteResult:
    """Chain strictness: a step is strict exactly when the incoming block's
    image is not central, across projection and mixed-kernel examples."""
    name = "relcheck.chain"
    checked = 0
    f2 = catalog.galois_field_ring(2)
    f3 = catalog.galois_field_ring(3)
    null2 = catalog.zero_multiplication_ring(2)

    def hom(factors, codomain, fn):
        family = ProductFamily(factors)
        table = [fn(family.decode(a)) for a in range(family.product.size)]
        return family, HomTable(family.product, codomain, table)

    f2f2 = product_algebra([f2, f2])
    cases = [
        # projection: first step strict, second equal
        (hom([f2, f2], f2, lambda c: c[0]), [(0,), (1,)], [True, False]),
        # one whole-set part: strict since F2 is not its own annihilator
        (hom([f2, f2], f2, lambda c: c[0]), [(0, 1)], [True]),
        # projection in the other order
        (hom([f3, f3], f3, lambda c: c[1]), [(1,), (0,)], [True, False]),
        # identity onto a product ring: both steps strict
        (hom([f2, f2], f2f2, lambda c: f2f2.codec.encode(c)), [(0,), (1,)],
         [True, True]),
        # middle block lands in the kernel: strict, equal, strict
        (hom([f2, f2, f2], f2f2, lambda c: f2f2.codec.encode((c[0], c[2]))),
         [(0,), (1,), (2,)], [True, False, True]),
        # sum into a zero-multiplication codomain is a ring map; all central
        (hom([null2, null2], null2, lambda c: (c[0] + c[1]) % 2),
         [(0,), (1,)], [False, False]),
        # mixed factors: the null block maps into the annihilator
        (hom([f2, null2], f2, lambda c: c[0]), [(1,), (0,)], [False, True]),
    ]
    for (family, h), parts, expect in cases:
        report = chain_strictness(family, h, parts)
        if report.strict != expect:
            return SuiteResult(name, False, checked, (parts, report.strict),
                               f"expected strictness {expect}")
        checked += 1
    return SuiteResult(name, True, checked)


# ---------------------------------------------------------------------------
# eklab suites


def suite_sli_build() -> SuiteResult:
    """Greedy builds verify at the documented sizes, with the exact minor
    counts; the backtracking variant covers a small field."""
    name = "eklab.sli_build"
    checked = 0
    rationals = Rationals()
    for m in range(1, 6):
        cert = build_sli_matrix(m, rationals)
        if cert.checked_minors != minor_count(m, m):
            return SuiteResult(name, False, checked, m, "wrong minor count")
        checked += 1
    for m, p in ((2, 5), (3, 11), (6, 257)):
        cert = build_sli_matrix(m, PrimeField(p))
        if cert.checked_minors != minor_count(m, m):
            return SuiteResult(name, False, checked, (m, p), "wrong minor count")
        checked += 1
    found = search_sli_matrix(4, PrimeField(7))
    if found is None or not verify_sli(found.matrix):
        return SuiteResult(name, False, checked, (4, 7), "backtracking search failed")
    checked += 1
    return SuiteResult(name, True, checked)


def suite_cauchy(max_size: int = 5) -> SuiteResult:
    """Cauchy matrices from distinct positive parameters pass verification
    at every size up to the bound."""
    name = "eklab.cauchy"
    checked = 0
    for k in range(1, max_size + 1):
        for a0, b0 in ((0, 1), (1, 4), (2, 3)):
            a_vals = [a0 + 2 * i for i in range(k)]
            b_vals = [b0 + 3 * j for j in range(k)]
            res = verify_sli(cauchy_oracle(a_vals, b_vals))
            if not res:
                return SuiteResult(name, False, checked, (a_vals, b_vals, res.witness),
                                   "cauchy matrix failed verification")
            checked += 1
    return SuiteResult(name, True, checked)


def suite_zero_bound() -> SuiteResult:
    """The zero-set bound holds for every nonzero coefficient vector over
    every verified prime-field matrix found in the (m <= 4, p <= 7) grid."""
    name = "eklab.zero_bound"
    checked = 0
    grids = [(m, p) for m in (2, 3, 4) for p in (3, 5, 7)]
    found_any = False
    for m, p in grids:
        cert = search_sli_matrix(m, PrimeField(p))
        if cert is None:
            continue
        found_any = True
        for coeffs in itertools.product(range(p), repeat=m):
            if all(c == 0 for c in coeffs):
                continue
            zeros, ok = zero_count_bound(cert, coeffs)  # asserts the bound
            if not ok:
                return SuiteResult(name, False, checked, (m, p, coeffs),
                                   "zero bound failed")
            checked += 1
    if not found_any:
        return SuiteResult(name, False, checked, grids, "no verified matrices found")
    return SuiteResult(name, True, checked)


def suite_singularizing_oracle(seed: int = 20260810) -> SuiteResult:
    """singularizing_value agrees with brute-force root search: exhaustively
    for 2x2 frames over p <= 11 and 3x3 over p <= 3, sampled for larger p
    (the full 3x3 sweep at p = 11 is out of desk range)."""
    name = "eklab.singularizing_oracle"
    checked = 0

    def brute_roots(field, top_rows, prefix):
        n = len(top_rows) + 1
        roots = []
        for v in field.enumeration():
            rows = [list(r) for r in top_rows] + [list(prefix) + [v]]
            if determinant(field, rows) == field.zero:
                roots.append(v)
        return roots

    for p in (2, 3, 5, 7, 11):
        field = PrimeField(p)
        for a, b, c in itertools.product(range(p), repeat=3):
            if a == 0:
                continue
            got = singularizing_value(field, [[a, b], [c]])
            roots = brute_roots(field, [[a, b]], [c])
            if roots != [got]:
                return SuiteResult(name, False, checked, (p, a, b, c),
                                   "2x2 oracle mismatch")
            checked += 1
    for p in (2, 3):
        field = PrimeField(p)
        for entries in itertools.product(range(p), repeat=8):
            top = [list(entries[0:3]), list(entries[3:6])]
            prefix = list(entries[6:8])
            if determinant(field, [r[:2] for r in top]) == field.zero:
                continue
            got = singularizing_value(field, top + [prefix])
            roots = brute_roots(field, top, prefix)
            if roots != [got]:
                return SuiteResult(name, False, checked, (p, entries),
                                   "3x3 oracle mismatch")
            checked += 1
    rng = random.Random(seed)
    for p in (5, 7, 11):
        field = PrimeField(p)
        done = 0
        while done < 300:
            entries = [rng.randrange(p) for _ in range(8)]
            top = [entries[0:3], entries[3:6]]
            prefix = entries[6:8]
            if determinant(field, [r[:2] for r in top]) == field.zero:
                continue
            got = singularizing_value(field, top + [prefix])
            roots = brute_roots(field, top, prefix)
            if roots != [got]:
                return SuiteResult(name, False, checked, (p, entries),
                                   "sampled 3x3 oracle mismatch")
            checked += 1
            done += 1
    return SuiteResult(name, True, checked)


def bare_set_algebra(n: int) -> FiniteAlgebra:
    """A carrier with no operations, for counting reduced-power classes."""
    return FiniteAlgebra(Signature.of(), n, {}, name=f"set{n}")


def suite_reduced_power(max_index: int = 4, max_x: int = 3) -> SuiteResult:
    """The reduced-power cardinality law matches explicit class enumeration
    for every filter and carrier size."""
    name = "eklab.reduced_power"
    checked = 0
    for n in range(1, max_index + 1):
        parent = IndexSet(n)
        for x in range(2, max_x + 1):
            family = ProductFamily([bare_set_algebra(x)] * n)
            for base in parent.subset_masks():
                filt = Filter(parent, base)
                predicted = reduced_power_cardinality(x, filt)
                enumerated = reduced_product(family, filt).class_count
                if predicted != enumerated:
                    return SuiteResult(name, False, checked, (n, x, base),
                                       f"{predicted} != {enumerated}")
                checked += 1
    return SuiteResult(name, True, checked)


def suite_dimension(max_index: int = 3, qs=(2, 3)) -> SuiteResult:
    """Reduced powers of small finite fields have dimension equal to the
    decomposition size, for every filter."""
    name = "eklab.dimension"
    checked = 0
    for n in range(1, max_index + 1):
        parent = IndexSet(n)
        for q in qs:
            for base in parent.subset_masks():
                report = finite_field_dimension_check(q, Filter(parent, base))
                if report.dimension != popcount(base):
                    return SuiteResult(name, False, checked, (n, q, base),
                                       "dimension mismatch")
                checked += 1
    return SuiteResult(name, True, checked)


# ---------------------------------------------------------------------------
# fault injection


def mutate_algebra(a: FiniteAlgebra, symbol: str, position: int, value: int) -> FiniteAlgebra:
    """Copy of an algebra with one table entry replaced."""
    tables = {sym: list(t) for sym, t in a.tables.items()}
    tables[symbol][position] = value
    return FiniteAlgebra(a.signature, a.size, tables, name=f"{a.name}!{symbol}@{position}",
                         identity=a.identity, zero=a.zero)


def fault_corpus():
    return [
        (catalog.cyclic_group(4), _group_relations()),
        (catalog.symmetric_group(3), _group_relations()),
        (catalog.galois_field_ring(2), _ring_relations()),
        (catalog.galois_field_ring(3), _ring_relations()),
        (catalog.chain_lattice(2), [catalog.lattice_exchange_relation()]),
    ]


def suite_fault_injection() -> SuiteResult:
    """Every single-entry mutation of a corpus operation table is caught,
    with a witness, by the homomorphism law against the pristine algebra;
    the relation checks catch their share as well."""
    name = "verify.fault_injection"
    checked = 0
    caught_by_dr = 0
    for pristine, relations in fault_corpus():
        for sym, _arity in pristine.signature.symbols:
            table = pristine.tables[sym]
            for pos in range(len(table)):
                if pristine.size < 2:
                    continue
                mutated = mutate_algebra(pristine, sym, pos,
                                         (table[pos] + 1) % pristine.size)
                hom_witness = HomTable(
                    mutated, pristine, list(range(pristine.size)), check=False
                ).law_witness()
                if hom_witness is None:
                    return SuiteResult(name, False, checked,
                                       (pristine.name, sym, pos),
                                       "mutation escaped the homomorphism law")
                if any(not check_dR(mutated, r) for r in relations):
                    caught_by_dr += 1
                checked += 1
    return SuiteResult(name, True, checked,
                       detail=f"{caught_by_dr} mutations also caught by check_dR")


# ---------------------------------------------------------------------------
# aggregate runner


@dataclass
class VerifyCaps:
    max_index: int = 3
    max_size: int = 4
    matrix_size: int = 4
    samples: int = 200
    seed: int = 20260810

    # the exhaustive sweeps are sized for these bounds
    LIMITS = {"max_index": 4, "max_size": 8, "matrix_size": 6, "samples": 100000}

    def __post_init__(self):
        from .util import InputError

        for name, limit in self.LIMITS.items():
            value = getattr(self, name)
            if not 1 <= value <= limit:
                raise InputError(f"cap {name}={value} outside 1..{limit}")


def all_suites(caps: VerifyCaps):
    """Ordered (name, thunk) pairs for every suite at the given caps."""
    return [
        ("setfam.closure", lambda: suite_filter_closure(min(caps.max_index, 3))),
        ("setfam.bdd", lambda: suite_filter_bdd(caps.max_index)),
        ("setfam.duality", lambda: suite_filter_duality(caps.max_index)),
        ("ualg.eval_oracle", lambda: suite_eval_oracle(sizes=tuple(
            s for s in (2, 3, 4) if s <= caps.max_size))),
        ("ualg.quotient_hom", lambda: suite_quotient_hom(caps.max_size)),
        ("ualg.codec", lambda: suite_codec(max_factors=caps.max_index + 1)),
        ("redprod.detect_forward", lambda: suite_detect_forward(samples=caps.samples,
                                                                seed=caps.seed)),
        ("redprod.detect_converse", lambda: suite_detect_converse(caps.max_index)),
        ("redprod.kernel_equiv", lambda: suite_kernel_equiv(caps.max_index)),
        ("redprod.surjectivity", lambda: suite_surjectivity(caps.max_index)),
        ("redprod.factorization", suite_factorization),
        ("redprod.ultrapower_diagonal",
         lambda: suite_ultrapower_diagonal(caps.max_index)),
        ("redprod.regroup", suite_regroup),
        ("relcheck.dr_catalog", suite_dr_catalog),
        ("relcheck.rprod", lambda: suite_rprod(caps.max_size)),
        ("relcheck.perp_properties", suite_perp_properties),
        ("relcheck.perp_monotone", lambda: suite_perp_monotone(caps.max_size)),
        ("relcheck.perp_transitivity_search", suite_perp_transitivity_search),
        ("relcheck.almost_facts", suite_almost_facts),
        ("relcheck.cc_demo", suite_cc_demo),
        ("relcheck.chain", suite_chain),
        ("eklab.sli_build", suite_sli_build),
        ("eklab.cauchy", suite_cauchy),
        ("eklab.zero_bound", suite_zero_bound),
        ("eklab.singularizing_oracle", lambda: suite_singularizing_oracle(caps.seed)),
        ("eklab.reduced_power", lambda: suite_reduced_power(caps.max_index + 1)),
        ("eklab.dimension", lambda: suite_dimension(caps.max_index)),
        ("verify.fault_injection", suite_fault_injection),
    ]


def verify_all(caps: VerifyCaps | None = None) -> list[SuiteResult]:
    caps = caps or VerifyCaps()
    return [run_suite(name, thunk) for name, thunk in all_suites(caps)]
