"""Terms, identities, products, congruences, quotients, homomorphisms."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reductlab import catalog
from reductlab.ualg import (
    App,
    FiniteAlgebra,
    GROUP_SIGNATURE,
    HomTable,
    LATTICE_SIGNATURE,
    RING_SIGNATURE,
    Signature,
    Var,
    congruence_generated,
    diagonal_congruence,
    enumerate_congruences,
    eval_term,
    full_congruence,
    is_identity,
    parse_term,
    product_algebra,
    quotient_algebra,
    term_to_str,
    term_variables,
)
from reductlab.util import InputError, ParseError, PropertyViolation
from reductlab.verify import (
    reference_eval,
    suite_codec,
    suite_eval_oracle,
    suite_quotient_hom,
)


class TestParser:
    def test_single_variable(self):
        assert parse_term("x", GROUP_SIGNATURE) == Var("x")

    def test_nested_application(self):
        t = parse_term("mul(x,inv(y))", GROUP_SIGNATURE)
        assert t == App("mul", (Var("x"), App("inv", (Var("y"),))))

    def test_arity_mismatch_reports_position(self):
        with pytest.raises(ParseError) as err:
            parse_term("mul(x)", GROUP_SIGNATURE)
        assert err.value.pos == 0

    def test_unknown_symbol(self):
        with pytest.raises(ParseError):
            parse_term("frob(x,y)", GROUP_SIGNATURE)

    def test_primed_variables_are_single_tokens(self):
        t = parse_term("mul(x',y')", GROUP_SIGNATURE)
        assert term_variables(t) == ("x'", "y'")

    def test_constant_with_and_without_parens(self):
        assert parse_term("e", GROUP_SIGNATURE) == App("e", ())
        assert parse_term("e()", GROUP_SIGNATURE) == App("e", ())

    def test_whitespace_insignificant(self):
        a = parse_term(" mul( x , inv( y ) ) ", GROUP_SIGNATURE)
        assert a == parse_term("mul(x,inv(y))", GROUP_SIGNATURE)

    def test_disallowed_variable_token(self):
        with pytest.raises(ParseError):
            parse_term("mul(w,x)", GROUP_SIGNATURE)

    def test_trailing_input(self):
        with pytest.raises(ParseError):
            parse_term("x y", GROUP_SIGNATURE)

    def test_roundtrip_examples(self):
        for text in ("x", "mul(x,inv(y))", "add(z0,neg(v12))", "zero"):
            sig = GROUP_SIGNATURE if "mul" in text or text == "x" else RING_SIGNATURE
            t = parse_term(text, sig)
            assert parse_term(term_to_str(t), sig) == t


def _term_strategy(depth=3):
    leaves = st.sampled_from([Var("x"), Var("y"), Var("x'"), App("e", ())])
    return st.recursive(
        leaves,
        lambda children: st.one_of(
            st.tuples(children, children).map(lambda ab: App("mul", ab)),
            children.map(lambda c: App("inv", (c,))),
        ),
        max_leaves=depth * 4,
    )


@settings(max_examples=300, deadline=None)
@given(t=_term_strategy())
def test_term_print_parse_roundtrip(t):
    assert parse_term(term_to_str(t), GROUP_SIGNATURE) == t


@settings(max_examples=150, deadline=None)
@given(t=_term_strategy(), x=st.integers(0, 3), y=st.integers(0, 3), xp=st.integers(0, 3))
def test_eval_matches_reference_and_reflexive_identity(t, x, y, xp):
    z4 = catalog.cyclic_group(4)
    env = {"x": x, "y": y, "x'": xp}
    assert eval_term(z4, t, env) == reference_eval(z4, t, env)
    assert is_identity(z4, t, t)


class TestEval:
    def test_mod2_addition(self):
        z2 = catalog.modular_ring(2)
        t = parse_term("add(x,y)", RING_SIGNATURE)
        assert eval_term(z2, t, {"x": 1, "y": 1}) == 0

    def test_mod3_addition(self):
        z3 = catalog.modular_ring(3)
        t = parse_term("add(x,add(y,y))", RING_SIGNATURE)
        assert eval_term(z3, t, {"x": 1, "y": 1}) == 0

    def test_variable_passthrough(self):
        z3 = catalog.cyclic_group(3)
        for c in range(3):
            assert eval_term(z3, Var("x"), {"x": c}) == c

    def test_unbound_variable(self):
        with pytest.raises(InputError):
            eval_term(catalog.cyclic_group(2), Var("x"), {})


class TestIsIdentity:
    def test_z2_commutative(self):
        z2 = catalog.cyclic_group(2)
        assert is_identity(z2, parse_term("mul(x,y)", GROUP_SIGNATURE),
                           parse_term("mul(y,x)", GROUP_SIGNATURE))

    def test_s3_not_commutative_with_least_witness(self):
        s3 = catalog.symmetric_group(3)
        res = is_identity(s3, parse_term("mul(x,y)", GROUP_SIGNATURE),
                          parse_term("mul(y,x)", GROUP_SIGNATURE))
        assert not res
        assert res.witness == {"x": 1, "y": 2}
        assert s3.op("mul", 1, 2) != s3.op("mul", 2, 1)

    def test_exchange_equation_is_not_a_two_chain_identity(self):
        # the exchange relation only becomes an identity after merging a
        # variable pair; with all four variables free it fails on a chain
        c2 = catalog.chain_lattice(2)
        lhs = parse_term("meet(join(x,y),join(x',y'))", LATTICE_SIGNATURE)
        rhs = parse_term("meet(join(x,y'),join(x',y))", LATTICE_SIGNATURE)
        res = is_identity(c2, lhs, rhs)
        assert not res
        w = res.witness
        assert eval_term(c2, lhs, w) != eval_term(c2, rhs, w)
        for merge in ({"x'": Var("x")}, {"y'": Var("y")}):
            from reductlab.ualg import substitute

            assert is_identity(c2, substitute(lhs, merge), substitute(rhs, merge))


class TestProducts:
    def test_componentwise_tables(self):
        z2 = catalog.cyclic_group(2)
        p = product_algebra([z2, z2])
        assert p.size == 4
        for a, b in itertools.product(range(4), repeat=2):
            ca, cb = p.codec.decode(a), p.codec.decode(b)
            expected = p.codec.encode(((ca[0] + cb[0]) % 2, (ca[1] + cb[1]) % 2))
            assert p.op("mul", a, b) == expected

    def test_empty_product_is_terminal(self):
        p = product_algebra([], signature=GROUP_SIGNATURE)
        assert p.size == 1
        assert p.op("mul", 0, 0) == 0
        assert p.identity == 0

    def test_empty_product_needs_signature(self):
        with pytest.raises(InputError):
            product_algebra([])

    def test_mixed_radix_codec(self):
        p = product_algebra([catalog.cyclic_group(2), catalog.cyclic_group(3)])
        assert p.size == 6
        flat = p.codec.encode((1, 2))
        assert flat == 1 + 2 * 2
        assert p.codec.decode(flat) == (1, 2)

    def test_coordinate_zero_least_significant(self):
        p = product_algebra([catalog.cyclic_group(2), catalog.cyclic_group(4)])
        assert p.codec.encode((1, 0)) == 1
        assert p.codec.encode((0, 1)) == 2

    def test_mixed_signature_rejected(self):
        with pytest.raises(InputError):
            product_algebra([catalog.cyclic_group(2), catalog.modular_ring(2)])


def _oracle_congruence(a, pairs):
    """Pair-set fixpoint oracle: reflexive-symmetric-transitive closure plus
    one-step operation translations, iterated until stable."""
    rel = {(i, i) for i in a.elements()}
    rel |= set(pairs) | {(j, i) for i, j in pairs}
    changed = True
    while changed:
        changed = False
        for (i, j), (k, l) in itertools.product(list(rel), repeat=2):
            if j == k and (i, l) not in rel:
                rel.add((i, l))
                changed = True
        for sym, arity in a.signature.symbols:
            for pos in range(arity):
                for (i, j) in list(rel):
                    for ctx in itertools.product(a.elements(), repeat=arity - 1):
                        u = a.op(sym, *(ctx[:pos] + (i,) + ctx[pos:]))
                        v = a.op(sym, *(ctx[:pos] + (j,) + ctx[pos:]))
                        if (u, v) not in rel:
                            rel.add((u, v))
                            rel.add((v, u))
                            changed = True
    return rel


class TestCongruences:
    def test_empty_pairs_give_diagonal(self):
        z4 = catalog.cyclic_group(4)
        assert congruence_generated(z4, []) == diagonal_congruence(z4)

    def test_z4_halving(self):
        z4 = catalog.cyclic_group(4)
        c = congruence_generated(z4, [(0, 2)])
        assert c.blocks == ((0, 2), (1, 3))

    def test_reflexive_pair_gives_diagonal(self):
        s3 = catalog.symmetric_group(3)
        assert congruence_generated(s3, [(4, 4)]) == diagonal_congruence(s3)

    def test_against_pairset_oracle(self):
        for a in (catalog.cyclic_group(4), catalog.modular_ring(4),
                  catalog.chain_lattice(3), catalog.symmetric_group(3)):
            for pair in itertools.product(a.elements(), repeat=2):
                got = congruence_generated(a, [pair])
                oracle = _oracle_congruence(a, [pair])
                pairs = {(i, j) for b in got.blocks for i in b for j in b}
                assert pairs == oracle, (a.name, pair)

    def test_incompatible_partition_rejected(self):
        z4 = catalog.cyclic_group(4)
        with pytest.raises(InputError):
            from reductlab.ualg import Congruence

            Congruence(z4, [(0, 1), (2, 3)])

    def test_one_step_compatibility_equals_full_condition(self):
        # componentwise application of an operation to related tuples stays
        # related, not just single-argument substitutions
        for a in (catalog.cyclic_group(4), catalog.chain_lattice(3)):
            for cong in enumerate_congruences(a):
                for sym, arity in a.signature.symbols:
                    for us in itertools.product(a.elements(), repeat=arity):
                        for vs in itertools.product(a.elements(), repeat=arity):
                            if all(cong.related(u, v) for u, v in zip(us, vs)):
                                assert cong.related(a.op(sym, *us), a.op(sym, *vs))


class TestQuotients:
    def test_diagonal_gives_isomorphic_copy(self):
        z4 = catalog.cyclic_group(4)
        q, proj = quotient_algebra(z4, diagonal_congruence(z4))
        assert q.size == 4
        assert q.tables == z4.tables
        assert proj.mapping == tuple(range(4))

    def test_full_gives_one_element(self):
        s3 = catalog.symmetric_group(3)
        q, _ = quotient_algebra(s3, full_congruence(s3))
        assert q.size == 1

    def test_z4_mod_two_is_z2(self):
        z4 = catalog.cyclic_group(4)
        q, proj = quotient_algebra(z4, congruence_generated(z4, [(0, 2)]))
        z2 = catalog.cyclic_group(2)
        assert q.size == 2
        assert q.tables == z2.tables
        assert proj.law_witness() is None


class TestHomTable:
    def test_non_homomorphism_rejected_with_witness(self):
        z4 = catalog.cyclic_group(4)
        z2 = catalog.cyclic_group(2)
        with pytest.raises(PropertyViolation) as err:
            HomTable(z4, z2, [0, 1, 1, 0])  # not additive mod 2
        assert err.value.witness is not None

    def test_composition(self):
        z4 = catalog.cyclic_group(4)
        z2 = catalog.cyclic_group(2)
        mod2 = HomTable(z4, z2, [0, 1, 0, 1])
        ident = HomTable(z2, z2, [0, 1])
        assert mod2.then(ident).mapping == mod2.mapping

    def test_surjectivity_and_image(self):
        z4 = catalog.cyclic_group(4)
        z2 = catalog.cyclic_group(2)
        mod2 = HomTable(z4, z2, [0, 1, 0, 1])
        assert mod2.is_surjective()
        assert mod2.image() == frozenset({0, 1})


def test_algebra_validation():
    with pytest.raises(InputError):
        FiniteAlgebra(GROUP_SIGNATURE, 2, {"mul": [0] * 4, "inv": [0, 1]})  # missing e
    with pytest.raises(InputError):
        FiniteAlgebra(Signature.of(("f", 1)), 2, {"f": [0, 2]})  # out of range
    with pytest.raises(InputError):
        FiniteAlgebra(Signature.of(("f", 1)), 2, {"f": [0]})  # wrong length


def test_signature_validation():
    with pytest.raises(InputError):
        Signature.of(("f", 1), ("f", 2))
    with pytest.raises(InputError):
        Signature.of(("f", -1))


def test_exhaustive_suites_pass():
    assert suite_eval_oracle(max_depth=3, sizes=(2, 3)).ok
    assert suite_quotient_hom(4).ok
    assert suite_codec(3, 3).ok
