"""Filters, ultrafilters, and the dual set systems on small index sets."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reductlab.setfam import (
    Filter,
    IndexSet,
    Subset,
    SubsetFamily,
    Ultrafilter,
    check_bdd,
    close_to_filter,
    cofilter_of,
    decompose_filter,
    grill_of,
    ideal_of,
    improper_filter,
    is_filter,
    is_ultrafilter,
    least_bdd_n,
    trivial_filter,
)
from reductlab.util import CapExceeded, InputError
from reductlab.verify import (
    suite_filter_bdd,
    suite_filter_closure,
    suite_filter_duality,
)

I3 = IndexSet(3)


def fam(*masks):
    return SubsetFamily.of(I3, masks)


class TestCloseToFilter:
    def test_whole_set_closes_to_trivial_filter(self):
        f = close_to_filter(fam(0b111))
        assert f == trivial_filter(I3)
        assert f.member_masks() == frozenset({0b111})

    def test_empty_set_member_forces_improper(self):
        f = close_to_filter(fam(0b000))
        assert not f.is_proper()
        assert f.member_masks() == frozenset(range(8))

    def test_two_overlapping_sets(self):
        f = close_to_filter(fam(0b011, 0b110))
        assert f.base_mask == 0b010
        assert f.member_masks() == frozenset({0b010, 0b011, 0b110, 0b111})

    def test_two_overlapping_sets_against_bruteforce_closure(self):
        # oracle: close explicitly under top, intersections, and supersets
        members = {0b011, 0b110, 0b111}
        changed = True
        while changed:
            changed = False
            for j, k in itertools.combinations(sorted(members), 2):
                if j & k not in members:
                    members.add(j & k)
                    changed = True
            for j in sorted(members):
                for m in range(8):
                    if j & ~m == 0 and m not in members:
                        members.add(m)
                        changed = True
        assert close_to_filter(fam(0b011, 0b110)).member_masks() == frozenset(members)

    def test_empty_family_closes_to_trivial(self):
        assert close_to_filter(fam()) == trivial_filter(I3)


class TestIsFilter:
    def test_missing_intersection_witnessed(self):
        res = is_filter(fam(0b111, 0b011, 0b110))
        assert not res
        assert res.reason == "missing_intersection"
        j, k = res.witness
        assert {j.mask, k.mask} == {0b011, 0b110}

    def test_principal_upset_is_filter(self):
        assert is_filter(Filter(I3, 0b010).members)

    def test_empty_family_misses_top(self):
        res = is_filter(fam())
        assert not res and res.reason == "missing_top"

    def test_missing_superset_witnessed(self):
        res = is_filter(fam(0b111, 0b001))
        assert not res and res.reason == "missing_superset"

    def test_from_members_rejects_non_filter(self):
        with pytest.raises(InputError):
            Filter.from_members(fam(0b111, 0b011, 0b110))


class TestUltrafilters:
    def test_singleton_base_is_ultrafilter(self):
        assert is_ultrafilter(Filter(I3, 0b010))

    def test_two_point_base_is_not(self):
        f = Filter(I3, 0b101)
        assert not is_ultrafilter(f)
        # the dichotomy the definition asks for indeed fails
        assert 0b001 not in f and 0b110 not in f

    def test_improper_is_not_ultrafilter(self):
        assert not is_ultrafilter(improper_filter(I3))

    def test_dichotomy_oracle_matches_on_all_small_filters(self):
        for size in (1, 2, 3, 4):
            parent = IndexSet(size)
            for base in parent.subset_masks():
                f = Filter(parent, base)
                dichotomy = f.is_proper() and all(
                    m in f or (parent.full_mask & ~m) in f
                    for m in parent.subset_masks()
                )
                assert dichotomy == is_ultrafilter(f)


class TestDecompose:
    def test_principal(self):
        assert decompose_filter(Filter(I3, 0b010)) == (Ultrafilter(I3, 1),)

    def test_two_points_intersect_back(self):
        f = Filter(I3, 0b101)
        ultras = decompose_filter(f)
        assert [u.point for u in ultras] == [0, 2]
        meet = frozenset(range(8))
        for u in ultras:
            meet &= u.filter.member_masks()
        assert meet == f.member_masks()

    def test_improper_decomposes_to_nothing(self):
        assert decompose_filter(improper_filter(I3)) == ()


class TestBdd:
    def test_two_point_base_holds_at_two(self):
        assert check_bdd(Filter(I3, 0b101), 2)

    def test_two_point_base_fails_at_one_with_witness(self):
        res = check_bdd(Filter(I3, 0b101), 1)
        assert not res
        blocks = res.witness
        assert len(blocks) == 2
        union = 0
        for b in blocks:
            assert b.mask & union == 0
            union |= b.mask
        assert union == 0b111
        # every block meets the base, so no block complement is a member
        assert all(b.mask & 0b101 for b in blocks)

    def test_independent_partition_enumeration_agrees(self):
        f = Filter(I3, 0b101)
        for n in (0, 1, 2, 3):
            expected = all(
                any(block & f.base_mask == 0 for block in _blocks(assign, n + 1))
                for assign in itertools.product(range(n + 1), repeat=3)
            )
            assert bool(check_bdd(f, n)) == expected

    def test_improper_holds_at_zero(self):
        assert check_bdd(improper_filter(I3), 0)

    def test_least_values(self):
        assert least_bdd_n(Filter(I3, 0b101)) == 2
        assert least_bdd_n(Filter(I3, 0b010)) == 1
        assert least_bdd_n(improper_filter(I3)) == 0

    def test_partition_sweep_cap(self):
        with pytest.raises(CapExceeded):
            check_bdd(Filter(IndexSet(24), 1), 5)


def _blocks(assignment, count):
    blocks = [0] * count
    for i, b in enumerate(assignment):
        blocks[b] |= 1 << i
    return blocks


class TestDualSystems:
    def test_trivial_filter_grill_is_nonempty_sets(self):
        parent = IndexSet(2)
        g = grill_of(trivial_filter(parent))
        assert g.masks == frozenset({0b01, 0b10, 0b11})

    def test_principal_ideal_avoids_the_point(self):
        ideal = ideal_of(Filter(I3, 0b010))
        assert ideal.masks == frozenset(m for m in range(8) if not m & 0b010)

    def test_improper_grill_is_empty(self):
        assert grill_of(improper_filter(I3)).masks == frozenset()

    def test_cofilter_is_powerset_complement(self):
        f = Filter(I3, 0b011)
        assert cofilter_of(f).masks == frozenset(range(8)) - f.member_masks()


def test_subset_basics():
    s = I3.subset([0, 2])
    assert s.members() == (0, 2)
    assert s.complement().members() == (1,)
    assert 0 in s and 1 not in s
    assert (s & I3.subset([2])).mask == 0b100
    assert (s | I3.subset([1])).mask == 0b111
    assert I3.subset([0]) <= s


def test_index_set_bounds():
    with pytest.raises(InputError):
        IndexSet(0)
    with pytest.raises(InputError):
        IndexSet(25)
    with pytest.raises(InputError):
        Subset(I3, 0b1000)


@settings(max_examples=200, deadline=None)
@given(
    size=st.integers(min_value=1, max_value=8),
    data=st.data(),
)
def test_closure_is_idempotent_and_filter(size, data):
    parent = IndexSet(size)
    masks = data.draw(
        st.frozensets(st.integers(min_value=0, max_value=parent.full_mask), max_size=6)
    )
    f = close_to_filter(SubsetFamily(parent, masks))
    assert is_filter(f.members)
    assert close_to_filter(f.members) == f
    for m in masks:
        assert m in f


def test_exhaustive_suites_pass():
    assert suite_filter_closure(3).ok
    assert suite_filter_bdd(4).ok
    assert suite_filter_duality(4).ok
