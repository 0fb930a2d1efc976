"""Exact fields, totally nonsingular matrices, reduced-power counts."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reductlab.eklab import (
    ExactMatrix,
    GFTable,
    PrimeField,
    Rationals,
    build_sli_matrix,
    cauchy_oracle,
    certify_sli,
    determinant,
    field_named,
    finite_field_dimension_check,
    minor_count,
    reduced_power_cardinality,
    search_sli_matrix,
    singularizing_value,
    solve_linear,
    verify_sli,
    zero_count_bound,
)
from reductlab.setfam import Filter, IndexSet, improper_filter, trivial_filter
from reductlab.util import InputError, PropertyViolation
from reductlab.verify import (
    suite_cauchy,
    suite_dimension,
    suite_reduced_power,
    suite_singularizing_oracle,
    suite_sli_build,
    suite_zero_bound,
)

Q = Rationals()


def _naive_det(field, rows):
    """Cofactor expansion, the oracle for the fraction-free routine."""
    n = len(rows)
    if n == 0:
        return field.one
    if n == 1:
        return rows[0][0]
    total = field.zero
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = field.mul(rows[0][j], _naive_det(field, minor))
        total = field.add(total, field.neg(term) if j % 2 else term)
    return total


class TestDeterminant:
    def test_small_rational_cases(self):
        assert determinant(Q, [[Fraction(1)]]) == 1
        assert determinant(Q, [[1, 2], [3, 4]]) == -2
        assert determinant(Q, [[1, 2], [2, 4]]) == 0

    def test_bareiss_matches_cofactor_expansion_exhaustively_mod3(self):
        f3 = PrimeField(3)
        for entries in itertools.product(range(3), repeat=9):
            rows = [list(entries[0:3]), list(entries[3:6]), list(entries[6:9])]
            assert determinant(f3, rows) == _naive_det(f3, rows)

    @settings(max_examples=200, deadline=None)
    @given(entries=st.lists(st.integers(-9, 9), min_size=16, max_size=16))
    def test_bareiss_matches_cofactor_on_rational_4x4(self, entries):
        rows = [[Fraction(x) for x in entries[i * 4:(i + 1) * 4]] for i in range(4)]
        assert determinant(Q, rows) == _naive_det(Q, rows)

    def test_solve_linear(self):
        sol = solve_linear(Q, [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(3)]],
                           [Fraction(5), Fraction(10)])
        assert sol == [Fraction(1), Fraction(3)]
        with pytest.raises(InputError):
            solve_linear(Q, [[Fraction(1), Fraction(2)], [Fraction(2), Fraction(4)]],
                         [Fraction(0), Fraction(0)])


class TestSingularizingValue:
    def test_one_by_one_frame(self):
        assert singularizing_value(Q, [[]]) == 0

    def test_unit_frame(self):
        assert singularizing_value(Q, [[1, 1], [1]]) == 1

    def test_general_two_by_two(self):
        v = singularizing_value(Q, [[1, 2], [3]])
        assert v == 6
        assert determinant(Q, [[1, 2], [3, 6]]) == 0

    def test_three_by_three_cross_checked_by_determinant(self):
        top = [[Fraction(1), Fraction(2), Fraction(1)],
               [Fraction(0), Fraction(1), Fraction(3)]]
        prefix = [Fraction(2), Fraction(1)]
        v = singularizing_value(Q, top + [prefix])
        assert determinant(Q, top + [prefix + [v]]) == 0
        # uniqueness: any other value keeps the frame nonsingular
        for other in (v + 1, v - 1, v + Fraction(1, 2)):
            assert determinant(Q, top + [prefix + [other]]) != 0

    def test_singular_minor_rejected(self):
        with pytest.raises(InputError):
            singularizing_value(Q, [[1, 1, 1], [1, 1, 2], [0, 0]])


class TestVerifySli:
    def test_positive_case_with_hand_checked_minors(self):
        m = ExactMatrix.from_rows(Q, [[1, 1], [1, 2]])
        # the five frames: four entries and the determinant
        assert m.entry(0, 0) == 1 and m.entry(0, 1) == 1
        assert m.entry(1, 0) == 1 and m.entry(1, 1) == 2
        assert determinant(Q, [[1, 1], [1, 2]]) == 1
        res = verify_sli(m)
        assert res
        assert certify_sli(m).checked_minors == 5

    def test_singular_matrix_witnessed(self):
        res = verify_sli(ExactMatrix.from_rows(Q, [[1, 1], [1, 1]]))
        assert not res and res.witness == ((0, 1), (0, 1))

    def test_zero_entry_witnessed_at_one_by_one(self):
        res = verify_sli(ExactMatrix.from_rows(Q, [[1, 0], [1, 1]]))
        assert not res and res.witness == ((0,), (1,))

    def test_rectangular_matrices_supported(self):
        m = cauchy_oracle([0, 1], [1, 2, 3])
        assert verify_sli(m)
        assert minor_count(2, 3) == 2 * 3 + 3


class TestBuild:
    def test_size_one_over_rationals_picks_one(self):
        cert = build_sli_matrix(1, Q)
        assert cert.matrix.entries == (Fraction(1),)
        assert cert.checked_minors == 1

    def test_size_two_over_f5(self):
        cert = build_sli_matrix(2, PrimeField(5))
        m = cert.matrix
        for i, j in itertools.product(range(2), repeat=2):
            assert m.entry(i, j) != 0
        assert determinant(m.field, m.submatrix_rows((0, 1), (0, 1))) != 0
        assert cert.checked_minors == 5

    def test_acceptance_sizes(self):
        c6 = build_sli_matrix(6, PrimeField(257))
        assert c6.checked_minors == 923 == minor_count(6, 6)
        c5 = build_sli_matrix(5, Q)
        assert c5.checked_minors == 251 == minor_count(5, 5)

    def test_small_prime_field_rejected(self):
        with pytest.raises(InputError):
            build_sli_matrix(4, PrimeField(7))  # needs p > C(6,3) = 20

    def test_backtracking_search_finds_f7_4x4(self):
        cert = search_sli_matrix(4, PrimeField(7))
        assert cert is not None
        assert verify_sli(cert.matrix)

    def test_search_reports_nonexistence_over_f2(self):
        assert search_sli_matrix(2, PrimeField(2)) is None

    def test_deterministic(self):
        a = build_sli_matrix(4, PrimeField(29)).matrix.entries
        b = build_sli_matrix(4, PrimeField(29)).matrix.entries
        assert a == b


class TestCauchy:
    def test_reference_entries(self):
        m = cauchy_oracle([0, 1], [1, 2])
        assert m.entries == (Fraction(1), Fraction(1, 2), Fraction(1, 2), Fraction(1, 3))

    def test_one_by_one(self):
        assert cauchy_oracle([0], [1]).entries == (Fraction(1),)

    def test_three_by_three_verifies(self):
        assert verify_sli(cauchy_oracle([1, 2, 3], [4, 5, 6]))

    def test_zero_denominator(self):
        with pytest.raises(InputError):
            cauchy_oracle([1, -1], [1, 2])

    def test_distinctness_required(self):
        with pytest.raises(InputError):
            cauchy_oracle([1, 1], [2, 3])


class TestZeroBound:
    def test_two_by_two_example(self):
        m = ExactMatrix.from_rows(Q, [[1, 1], [1, 2]])
        zeros, ok = zero_count_bound(m, [1, -1])
        assert (zeros, ok) == (1, True)
        assert m.column_combination([1, -1]) == (Fraction(0), Fraction(-1))

    def test_single_nonzero_coefficient(self):
        cert = certify_sli(ExactMatrix.from_rows(Q, [[1, 1], [1, 2]]))
        zeros, ok = zero_count_bound(cert, [0, 1])
        assert (zeros, ok) == (0, True)

    def test_all_zero_vector_rejected(self):
        m = ExactMatrix.from_rows(Q, [[1, 1], [1, 2]])
        with pytest.raises(InputError):
            zero_count_bound(m, [0, 0])

    def test_violation_on_certified_matrix_raises(self):
        cert = certify_sli(ExactMatrix.from_rows(Q, [[1, 1], [1, 2]]))
        fake = type(cert)(matrix=ExactMatrix.from_rows(Q, [[1, 1], [2, 2]]),
                          checked_minors=0)
        with pytest.raises(PropertyViolation):
            zero_count_bound(fake, [1, -1])

    def test_exhaustive_f7_four_by_four(self):
        cert = search_sli_matrix(4, PrimeField(7))
        count = 0
        for coeffs in itertools.product(range(7), repeat=4):
            if any(coeffs):
                zeros, ok = zero_count_bound(cert, coeffs)
                assert ok
                count += 1
        assert count == 7 ** 4 - 1


class TestReducedPowerCardinality:
    def test_trivial_filter_full_product(self):
        assert reduced_power_cardinality(2, trivial_filter(IndexSet(3))) == 8

    def test_improper_collapses(self):
        assert reduced_power_cardinality(3, improper_filter(IndexSet(3))) == 1

    def test_two_point_base(self):
        assert reduced_power_cardinality(3, Filter(IndexSet(3), 0b011)) == 9

    def test_needs_two_points(self):
        with pytest.raises(InputError):
            reduced_power_cardinality(1, trivial_filter(IndexSet(2)))


class TestGFAndDimension:
    def test_field_axioms_all_orders(self):
        for q in (2, 3, 4, 5, 7, 8, 9):
            gf = GFTable(q)
            els = list(gf.elements())
            assert gf.add(0, 0) == 0 and gf.mul(1, 1) == 1
            for a in els:
                assert gf.add(a, gf.neg(a)) == 0
                if a:
                    assert gf.mul(a, gf.inv(a)) == 1
                for b in els:
                    assert gf.add(a, b) == gf.add(b, a)
                    assert gf.mul(a, b) == gf.mul(b, a)
                    for c in els:
                        assert gf.mul(a, gf.mul(b, c)) == gf.mul(gf.mul(a, b), c)
                        assert gf.mul(a, gf.add(b, c)) == gf.add(gf.mul(a, b),
                                                                 gf.mul(a, c))

    def test_non_prime_power_rejected(self):
        with pytest.raises(InputError):
            GFTable(6)

    def test_dimension_two_point_base(self):
        rep = finite_field_dimension_check(2, Filter(IndexSet(3), 0b101))
        assert rep.dimension == 2 and rep.class_count == 4
        assert rep.cardinality_exceeds_dimension

    def test_dimension_improper(self):
        rep = finite_field_dimension_check(3, improper_filter(IndexSet(3)))
        assert rep.dimension == 0 and rep.class_count == 1

    def test_dimension_trivial_filter_equals_index_size(self):
        rep = finite_field_dimension_check(2, trivial_filter(IndexSet(2)))
        assert rep.dimension == 2

    def test_prime_power_dimension(self):
        rep = finite_field_dimension_check(4, Filter(IndexSet(2), 0b01))
        assert rep.dimension == 1 and rep.class_count == 4


class TestFields:
    def test_field_named(self):
        assert isinstance(field_named("rational"), Rationals)
        assert field_named("7").p == 7
        assert field_named(5).p == 5
        with pytest.raises(InputError):
            field_named("6")
        with pytest.raises(InputError):
            field_named("gaussian")

    def test_rational_enumeration_order(self):
        it = Q.enumeration()
        assert [next(it) for _ in range(5)] == [0, 1, -1, 2, -2]

    def test_prime_field_ops(self):
        f7 = PrimeField(7)
        assert f7.div(3, 5) == 3 * pow(5, -1, 7) % 7
        assert f7.coerce("12") == 5
        with pytest.raises(InputError):
            f7.div(1, 0)

    def test_rational_coercion(self):
        assert Q.coerce("2/3") == Fraction(2, 3)
        assert Q.coerce(4) == 4


def test_forbidden_count_identity_spot_check():
    # the builder asserts C(a+b, a) frames at every position; run one build
    # over a field large enough for m = 5 and rely on the internal assert
    build_sli_matrix(5, PrimeField(101))


def test_exhaustive_suites_pass():
    assert suite_sli_build().ok
    assert suite_cauchy(5).ok
    assert suite_zero_bound().ok
    assert suite_singularizing_oracle().ok
    assert suite_reduced_power(4, 3).ok
    assert suite_dimension(3).ok
