"""Subsets of a finite index set and the four associated set systems.

Subsets are bit masks over an index set {0, .., size-1}.  Filters are stored
by their canonical base (the intersection of all members); on a finite index
set every filter is principal, which is asserted rather than assumed when a
filter is built from an explicit member family.  The improper filter (base
empty, every subset a member) is a first-class value.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .util import (
    CapExceeded,
    CheckResult,
    InputError,
    bit_indices,
    failed,
    mask_of,
    passed,
    popcount,
)

MAX_INDEX_SIZE = 24

# Work cap for the ordered-partition sweep in check_bdd: (n+1) ** size.
MAX_PARTITION_SWEEP = 1 << 22


@dataclass(frozen=True)
class IndexSet:
    """The finite index set I = {0, .., size-1}."""

    size: int

    def __post_init__(self):
        if not 1 <= self.size <= MAX_INDEX_SIZE:
            raise InputError(
                f"index set size must be in 1..{MAX_INDEX_SIZE}, got {self.size}"
            )

    @property
    def full_mask(self) -> int:
        return (1 << self.size) - 1

    def subset(self, indices) -> "Subset":
        return Subset(self, mask_of(indices))

    def subset_masks(self):
        """All 2**size subset masks, ascending."""
        return range(1 << self.size)

    def all_subsets(self):
        return (Subset(self, m) for m in self.subset_masks())


@dataclass(frozen=True)
class Subset:
    parent: IndexSet
    mask: int

    def __post_init__(self):
        if not 0 <= self.mask <= self.parent.full_mask:
            raise InputError(f"subset mask {self.mask:#x} out of range for {self.parent}")

    def members(self) -> tuple[int, ...]:
        return bit_indices(self.mask)

    def complement(self) -> "Subset":
        return Subset(self.parent, self.parent.full_mask & ~self.mask)

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __le__(self, other: "Subset") -> bool:
        return self.mask & ~other.mask == 0

    def __and__(self, other: "Subset") -> "Subset":
        return Subset(self.parent, self.mask & other.mask)

    def __or__(self, other: "Subset") -> "Subset":
        return Subset(self.parent, self.mask | other.mask)

    def __repr__(self):
        return "{%s}" % ",".join(str(i) for i in self.members())


@dataclass(frozen=True)
class SubsetFamily:
    """A finite set of subsets sharing one parent index set."""

    parent: IndexSet
    masks: frozenset[int]

    def __post_init__(self):
        full = self.parent.full_mask
        for m in self.masks:
            if not 0 <= m <= full:
                raise InputError(f"family member {m:#x} out of range")

    @classmethod
    def of(cls, parent: IndexSet, masks) -> "SubsetFamily":
        return cls(parent, frozenset(masks))

    def subsets(self) -> tuple[Subset, ...]:
        return tuple(Subset(self.parent, m) for m in sorted(self.masks))

    def __contains__(self, mask: int) -> bool:
        return mask in self.masks

    def __len__(self) -> int:
        return len(self.masks)


@dataclass(frozen=True)
class Filter:
    """A filter on a finite index set, canonically the up-set of its base.

    ``base_mask`` is the intersection of all members.  The filter is proper
    iff the base is nonempty; the improper filter has base 0 and contains
    every subset.
    """

    parent: IndexSet
    base_mask: int

    def __post_init__(self):
        if not 0 <= self.base_mask <= self.parent.full_mask:
            raise InputError(f"filter base {self.base_mask:#x} out of range")

    @classmethod
    def from_members(cls, family: SubsetFamily) -> "Filter":
        """Build a filter from an explicit member family.

        Asserts the family actually is a filter and that its members are
        exactly the supersets of the common intersection (principality on a
        finite index set is a checked fact, not an axiom).
        """
        check = is_filter(family)
        if not check:
            raise InputError(f"family is not a filter: {check.describe()}")
        base = family.parent.full_mask
        for m in family.masks:
            base &= m
        f = cls(family.parent, base)
        if family.masks != f.member_masks():
            raise InputError("filter members are not the up-set of their intersection")
        return f

    @property
    def base(self) -> Subset:
        return Subset(self.parent, self.base_mask)

    def is_proper(self) -> bool:
        return self.base_mask != 0

    def __contains__(self, mask: int) -> bool:
        return self.base_mask & ~mask == 0

    def member_masks(self) -> frozenset[int]:
        """All member masks: base | s for s ranging over the complement bits.

        Materializes 2^(size - |base|) masks; capped to keep the improper
        filter on a large index set from exploding.
        """
        free = bit_indices(self.parent.full_mask & ~self.base_mask)
        if len(free) > 20:
            raise CapExceeded(
                f"filter has 2^{len(free)} members; enumeration capped at 2^20"
            )
        out = set()
        for r in range(len(free) + 1):
            for extra in itertools.combinations(free, r):
                out.add(self.base_mask | mask_of(extra))
        return frozenset(out)

    @property
    def members(self) -> SubsetFamily:
        return SubsetFamily(self.parent, self.member_masks())

    def __repr__(self):
        kind = "improper" if not self.is_proper() else "filter"
        return f"<{kind} base={self.base!r} on {self.parent.size}>"


@dataclass(frozen=True)
class Ultrafilter:
    """The principal ultrafilter at a point of the index set."""

    parent: IndexSet
    point: int

    def __post_init__(self):
        if not 0 <= self.point < self.parent.size:
            raise InputError(f"ultrafilter point {self.point} out of range")

    @property
    def filter(self) -> Filter:
        return Filter(self.parent, 1 << self.point)

    def __contains__(self, mask: int) -> bool:
        return bool(mask >> self.point & 1)


def trivial_filter(parent: IndexSet) -> Filter:
    return Filter(parent, parent.full_mask)


def improper_filter(parent: IndexSet) -> Filter:
    return Filter(parent, 0)


def close_to_filter(family: SubsetFamily) -> Filter:
    """Smallest filter containing every member of the family.

    The base is the intersection of all members; the intersection over the
    empty family is I, so the empty family closes to the trivial filter.
    """
    base = family.parent.full_mask
    for m in family.masks:
        base &= m
    return Filter(family.parent, base)


def is_filter(family: SubsetFamily) -> CheckResult:
    """Check the three filter conditions, with a witness on failure.

    (i) I is a member, (ii) upward closure, (iii) closure under pairwise
    intersection.
    """
    parent = family.parent
    full = parent.full_mask
    if full not in family.masks:
        return failed("missing_top", Subset(parent, full))
    masks = sorted(family.masks)
    for j in masks:
        free = bit_indices(full & ~j)
        for r in range(1, len(free) + 1):
            for extra in itertools.combinations(free, r):
                k = j | mask_of(extra)
                if k not in family.masks:
                    return failed(
                        "missing_superset", (Subset(parent, j), Subset(parent, k))
                    )
    for j, k in itertools.combinations_with_replacement(masks, 2):
        if j & k not in family.masks:
            return failed(
                "missing_intersection", (Subset(parent, j), Subset(parent, k))
            )
    return passed()


def is_ultrafilter(f: Filter) -> bool:
    """Whether f is an ultrafilter: proper, and containing J or I-J for all J.

    On a finite index set this holds exactly when the base is a singleton;
    the subset dichotomy is equivalent and is exercised against this
    shortcut by the exhaustive test suites.
    """
    return popcount(f.base_mask) == 1


def decompose_filter(f: Filter) -> tuple[Ultrafilter, ...]:
    """The unique set of ultrafilters whose intersection is f.

    One principal ultrafilter per base point; the improper filter is the
    intersection of the empty family and decomposes to nothing.
    """
    return tuple(Ultrafilter(f.parent, i) for i in bit_indices(f.base_mask))


def check_bdd(f: Filter, n: int) -> CheckResult:
    """Whether every ordered partition of I into n+1 blocks has a block whose
    complement lies in f.

    Blocks may be empty; partitions are enumerated as block assignments
    I -> {0..n}.  On failure the witness is the first failing partition in
    assignment order.
    """
    if n < 0:
        raise InputError("block count parameter must be >= 0")
    size = f.parent.size
    if (n + 1) ** size > MAX_PARTITION_SWEEP:
        raise CapExceeded(
            f"partition sweep (n+1)^size = {(n + 1) ** size} exceeds cap {MAX_PARTITION_SWEEP}"
        )
    for assignment in itertools.product(range(n + 1), repeat=size):
        blocks = [0] * (n + 1)
        for i, b in enumerate(assignment):
            blocks[b] |= 1 << i
        # complement of a block lies in f  <=>  block misses the base
        if not any(block & f.base_mask == 0 for block in blocks):
            witness = tuple(Subset(f.parent, b) for b in blocks)
            return failed("no_block_complement_in_filter", witness)
    return passed()


def least_bdd_n(f: Filter) -> int:
    """Smallest n for which check_bdd holds; equals the decomposition size."""
    for n in range(f.parent.size + 1):
        if check_bdd(f, n):
            return n
    raise AssertionError("check_bdd must hold once n reaches the index set size")


def grill_of(f: Filter) -> SubsetFamily:
    """Union of the decomposing ultrafilters: subsets meeting the base."""
    parent = f.parent
    if not f.is_proper():
        return SubsetFamily.of(parent, ())
    masks = (m for m in parent.subset_masks() if m & f.base_mask)
    return SubsetFamily.of(parent, masks)


def ideal_of(f: Filter) -> SubsetFamily:
    """Complements of the members of f: subsets disjoint from the base."""
    parent = f.parent
    masks = (m for m in parent.subset_masks() if m & f.base_mask == 0)
    return SubsetFamily.of(parent, masks)


def cofilter_of(f: Filter) -> SubsetFamily:
    """Complement of f inside the power set: subsets not containing the base."""
    parent = f.parent
    masks = (m for m in parent.subset_masks() if m not in f)
    return SubsetFamily.of(parent, masks)
