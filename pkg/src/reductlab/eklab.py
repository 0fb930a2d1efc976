"""Strongly linearly independent (totally nonsingular) matrices over exact
fields, built by the greedy lexicographic recursion and verified by
independent minor enumeration; plus the finite reduced-power counts.

All arithmetic is exact: rationals via fractions.Fraction, prime fields via
ints mod p.  Determinants use fraction-free (Bareiss) elimination.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, isqrt

from .setfam import Filter, decompose_filter
from .util import CapExceeded, CheckResult, InputError, PropertyViolation, failed, passed


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, isqrt(n) + 1))


class Rationals:
    """Exact rational arithmetic; canonical enumeration 0, 1, -1, 2, -2, .."""

    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise InputError(f"cannot coerce {x!r} to a rational")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        if b == 0:
            raise InputError("division by zero")
        return a / b

    def enumeration(self):
        yield Fraction(0)
        k = 1
        while True:
            yield Fraction(k)
            yield Fraction(-k)
            k += 1

    def format(self, a: Fraction) -> str | int:
        return int(a) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("rational")

    def __repr__(self):
        return "Q"


class PrimeField:
    """Arithmetic mod a prime p; canonical enumeration 0, 1, .., p-1."""

    def __init__(self, p: int):
        if not _is_prime(p):
            raise InputError(f"modulus {p} is not prime")
        self.p = p
        self.name = str(p)
        self.zero = 0
        self.one = 1 % p

    def coerce(self, x) -> int:
        if isinstance(x, str):
            x = int(x)
        if isinstance(x, int):
            return x % self.p
        raise InputError(f"cannot coerce {x!r} into GF({self.p})")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def div(self, a, b):
        if b % self.p == 0:
            raise InputError("division by zero")
        return a * pow(b, -1, self.p) % self.p

    def enumeration(self):
        return iter(range(self.p))

    def format(self, a: int) -> int:
        return a

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))

    def __repr__(self):
        return f"GF({self.p})"


def field_named(spec) -> Rationals | PrimeField:
    """'rational' or a prime modulus (int or digit string)."""
    if spec == "rational" or isinstance(spec, Rationals):
        return Rationals()
    if isinstance(spec, PrimeField):
        return spec
    if isinstance(spec, str) and spec.isdigit():
        spec = int(spec)
    if isinstance(spec, int):
        return PrimeField(spec)
    raise InputError(f"unknown field {spec!r}")


@dataclass(frozen=True)
class ExactMatrix:
    field: object
    rows: int
    cols: int
    entries: tuple  # row-major

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0 or len(self.entries) != self.rows * self.cols:
            raise InputError("entry count does not match the shape")

    @classmethod
    def from_rows(cls, field, rows) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        width = len(rows[0]) if rows else 0
        if any(len(r) != width for r in rows):
            raise InputError("ragged rows")
        return cls(field, len(rows), width,
                   tuple(field.coerce(x) for r in rows for x in r))

    def entry(self, i: int, j: int):
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def submatrix_rows(self, row_idx, col_idx) -> list[list]:
        return [[self.entry(i, j) for j in col_idx] for i in row_idx]

    def column_combination(self, coeffs) -> tuple:
        coeffs = [self.field.coerce(c) for c in coeffs]
        if len(coeffs) != self.cols:
            raise InputError("coefficient vector length does not match columns")
        f = self.field
        out = []
        for i in range(self.rows):
            acc = f.zero
            for j, c in enumerate(coeffs):
                acc = f.add(acc, f.mul(self.entry(i, j), c))
            out.append(acc)
        return tuple(out)


def determinant(field, rows) -> object:
    """Fraction-free (Bareiss) elimination; exact over any supported field."""
    a = [list(r) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise InputError("determinant needs a square matrix")
    if n == 0:
        return field.one
    sign = 1
    prev = field.one
    for k in range(n - 1):
        if a[k][k] == field.zero:
            for i in range(k + 1, n):
                if a[i][k] != field.zero:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return field.zero
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = field.sub(
                    field.mul(a[i][j], a[k][k]), field.mul(a[i][k], a[k][j])
                )
                a[i][j] = field.div(num, prev)
        prev = a[k][k]
    d = a[n - 1][n - 1]
    return field.neg(d) if sign < 0 else d


def solve_linear(field, rows, rhs) -> list:
    """Solve a nonsingular square system by Gaussian elimination."""
    n = len(rows)
    a = [list(r) + [v] for r, v in zip(rows, rhs)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != field.zero), None)
        if pivot is None:
            raise InputError("singular system")
        a[k], a[pivot] = a[pivot], a[k]
        inv = a[k][k]
        for j in range(k, n + 1):
            a[k][j] = field.div(a[k][j], inv)
        for i in range(n):
            if i != k and a[i][k] != field.zero:
                factor = a[i][k]
                for j in range(k, n + 1):
                    a[i][j] = field.sub(a[i][j], field.mul(factor, a[k][j]))
    return [a[i][n] for i in range(n)]


def singularizing_value(field, known_rows) -> object:
    """The unique bottom-right entry making an n x n frame singular.

    known_rows holds n-1 full rows of length n followed by the last row's
    first n-1 entries; the upper-left (n-1) x (n-1) minor must be
    nonsingular.  The value is found by matching a combination of the first
    n-1 rows against the known prefix and reading off its last coordinate.
    """
    n = len(known_rows)
    if n == 0:
        raise InputError("frame must have at least one row")
    top = [list(map(field.coerce, r)) for r in known_rows[:-1]]
    prefix = list(map(field.coerce, known_rows[-1]))
    if any(len(r) != n for r in top) or len(prefix) != n - 1:
        raise InputError("frame rows have the wrong lengths")
    if n == 1:
        return field.zero
    minor = [r[:-1] for r in top]
    if determinant(field, minor) == field.zero:
        raise InputError("upper-left minor of the frame is singular")
    # coefficients c with c^T . minor = prefix, i.e. minor^T . c = prefix
    transposed = [[minor[i][j] for i in range(n - 1)] for j in range(n - 1)]
    coeffs = solve_linear(field, transposed, prefix)
    value = field.zero
    for c, r in zip(coeffs, top):
        value = field.add(value, field.mul(c, r[-1]))
    return value


@dataclass(frozen=True)
class SLICertificate:
    matrix: ExactMatrix
    checked_minors: int
    status: str = "verified"


def _scan_minors(x: ExactMatrix):
    """First singular increasing frame (or None) and the number inspected."""
    checked = 0
    for n in range(1, min(x.rows, x.cols) + 1):
        for rows_idx in itertools.combinations(range(x.rows), n):
            for cols_idx in itertools.combinations(range(x.cols), n):
                checked += 1
                if determinant(x.field, x.submatrix_rows(rows_idx, cols_idx)) == x.field.zero:
                    return (rows_idx, cols_idx), checked
    return None, checked


def verify_sli(x: ExactMatrix) -> CheckResult:
    """Every square submatrix on increasing row and column tuples must be
    nonsingular; the witness is the first singular frame's index tuples."""
    witness, _ = _scan_minors(x)
    if witness is not None:
        return failed("singular_minor", witness)
    return passed()


def certify_sli(x: ExactMatrix) -> SLICertificate:
    witness, checked = _scan_minors(x)
    if witness is not None:
        raise PropertyViolation(
            f"matrix is not totally nonsingular at minor {witness}", witness=witness
        )
    return SLICertificate(matrix=x, checked_minors=checked)


def minor_count(rows: int, cols: int) -> int:
    return sum(comb(rows, n) * comb(cols, n) for n in range(1, min(rows, cols) + 1))


def build_sli_matrix(m: int, field) -> SLICertificate:
    """Greedy lexicographic construction of an m x m totally nonsingular
    matrix.

    At each position the singularizing value of every increasing frame
    ending there is forbidden, and the least remaining field element in
    canonical order is chosen.  A prime field must satisfy
    p > C(2m-2, m-1), the worst-case forbidden count, so a choice always
    exists.  The finished matrix is certified by the independent minor
    enumerator; the construction itself never consults it.
    """
    if m < 1:
        raise InputError("matrix size must be >= 1")
    worst = comb(2 * m - 2, m - 1)
    if isinstance(field, PrimeField) and field.p <= worst:
        raise InputError(
            f"field GF({field.p}) too small: need p > C(2m-2, m-1) = {worst}"
        )
    entries: dict[tuple[int, int], object] = {}
    for alpha in range(m):
        for beta in range(m):
            forbidden = set()
            frames = 0
            for n in range(1, min(alpha, beta) + 2):
                for rows_prefix in itertools.combinations(range(alpha), n - 1):
                    for cols_prefix in itertools.combinations(range(beta), n - 1):
                        rows_idx = rows_prefix + (alpha,)
                        cols_idx = cols_prefix + (beta,)
                        known = [
                            [entries[(r, c)] for c in cols_idx] for r in rows_idx[:-1]
                        ]
                        known.append([entries[(alpha, c)] for c in cols_idx[:-1]])
                        forbidden.add(singularizing_value(field, known))
                        frames += 1
            if frames != comb(alpha + beta, alpha):
                raise PropertyViolation(
                    f"frame count {frames} at ({alpha},{beta}) != C({alpha + beta},{alpha})"
                )
            for candidate in field.enumeration():
                if candidate not in forbidden:
                    entries[(alpha, beta)] = candidate
                    break
            else:
                raise InputError("field exhausted while choosing an entry")
    matrix = ExactMatrix(
        field, m, m,
        tuple(entries[(i, j)] for i in range(m) for j in range(m)),
    )
    return certify_sli(matrix)


def search_sli_matrix(m: int, field: PrimeField) -> SLICertificate | None:
    """Backtracking variant of the greedy construction for prime fields too
    small for the worst-case forbidden-count bound.

    Positions are filled in the same lexicographic order; at each one the
    candidate values are tried in canonical order and the search backtracks
    when every value is forbidden.  Returns None when no matrix exists.
    """
    if m < 1:
        raise InputError("matrix size must be >= 1")
    positions = [(a, b) for a in range(m) for b in range(m)]
    entries: dict[tuple[int, int], int] = {}

    def forbidden_at(alpha: int, beta: int) -> set:
        out = set()
        for n in range(1, min(alpha, beta) + 2):
            for rows_prefix in itertools.combinations(range(alpha), n - 1):
                for cols_prefix in itertools.combinations(range(beta), n - 1):
                    rows_idx = rows_prefix + (alpha,)
                    cols_idx = cols_prefix + (beta,)
                    known = [[entries[(r, c)] for c in cols_idx] for r in rows_idx[:-1]]
                    known.append([entries[(alpha, c)] for c in cols_idx[:-1]])
                    out.add(singularizing_value(field, known))
        return out

    def place(k: int) -> bool:
        if k == len(positions):
            return True
        alpha, beta = positions[k]
        banned = forbidden_at(alpha, beta)
        for candidate in field.enumeration():
            if candidate in banned:
                continue
            entries[(alpha, beta)] = candidate
            if place(k + 1):
                return True
            del entries[(alpha, beta)]
        return False

    if not place(0):
        return None
    matrix = ExactMatrix(
        field, m, m, tuple(entries[(i, j)] for i in range(m) for j in range(m))
    )
    return certify_sli(matrix)


def cauchy_oracle(a_values, b_values) -> ExactMatrix:
    """Cauchy matrix 1/(a_i + b_j) over the rationals.

    Distinct parameter lists with nonzero pairwise sums give a totally
    nonsingular matrix, which makes this an independent source of
    verify_sli positives.
    """
    field = Rationals()
    a_values = [field.coerce(v) for v in a_values]
    b_values = [field.coerce(v) for v in b_values]
    if len(set(a_values)) != len(a_values) or len(set(b_values)) != len(b_values):
        raise InputError("parameter lists must have distinct values")
    rows = []
    for a in a_values:
        row = []
        for b in b_values:
            if a + b == 0:
                raise InputError(f"zero denominator at a={a}, b={b}")
            row.append(Fraction(1) / (a + b))
        rows.append(row)
    return ExactMatrix.from_rows(field, rows)


def zero_count_bound(x, coeffs) -> tuple[int, bool]:
    """Zero count of a column combination against the nonzero-coefficient
    bound.

    Accepts a certificate or a bare matrix; with a verified certificate the
    bound (zero count < number of nonzero coefficients) is asserted.
    """
    certified = isinstance(x, SLICertificate)
    matrix = x.matrix if certified else x
    coeffs = [matrix.field.coerce(c) for c in coeffs]
    nonzero = sum(1 for c in coeffs if c != matrix.field.zero)
    if nonzero == 0:
        raise InputError("coefficient vector must not be all zero")
    combo = matrix.column_combination(coeffs)
    zeros = sum(1 for v in combo if v == matrix.field.zero)
    ok = zeros < nonzero
    if certified and not ok:
        raise PropertyViolation(
            f"zero count {zeros} reached the bound {nonzero} on a verified matrix",
            witness=coeffs,
        )
    return zeros, ok


# ---------------------------------------------------------------------------
# Reduced powers of finite carriers


def reduced_power_cardinality(x_size: int, f: Filter) -> int:
    """Size of X^I modulo the filter: x_size to the decomposition size."""
    if x_size < 2:
        raise InputError("carrier must have more than one element")
    return x_size ** len(decompose_filter(f))


class GFTable:
    """A finite field of order q <= 9 with table-driven arithmetic.

    Prime powers are realized as polynomials over GF(p) modulo a fixed
    irreducible; elements are base-p digit encodings 0..q-1.
    """

    _IRREDUCIBLE = {4: (1, 1, 1), 8: (1, 1, 0, 1), 9: (1, 0, 1)}  # low-to-high
    _ORDERS = {2: (2, 1), 3: (3, 1), 4: (2, 2), 5: (5, 1), 7: (7, 1), 8: (2, 3), 9: (3, 2)}

    def __init__(self, q: int):
        if q not in self._ORDERS:
            raise InputError(f"field order must be a prime power <= 9, got {q}")
        self.q = q
        self.p, self.k = self._ORDERS[q]
        self.zero = 0
        self.one = 1

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(x % self.p)
            x //= self.p
        return out

    def _of_digits(self, ds) -> int:
        val = 0
        for d in reversed(list(ds)):
            val = val * self.p + d % self.p
        return val

    def add(self, a: int, b: int) -> int:
        return self._of_digits(
            (x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))
        )

    def neg(self, a: int) -> int:
        return self._of_digits((-x) % self.p for x in self._digits(a))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return a * b % self.p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % self.p
        mod = self._IRREDUCIBLE[self.q]
        for top in range(len(prod) - 1, self.k - 1, -1):
            c = prod[top]
            if c:
                prod[top] = 0
                for i, m in enumerate(mod[:-1]):
                    prod[top - self.k + i] = (prod[top - self.k + i] - c * m) % self.p
        return self._of_digits(prod[: self.k])

    def inv(self, a: int) -> int:
        if a == 0:
            raise InputError("zero has no inverse")
        for b in range(1, self.q):
            if self.mul(a, b) == self.one:
                return b
        raise AssertionError("element without inverse in a field table")

    def elements(self) -> range:
        return range(self.q)


@dataclass
class DimensionReport:
    q: int
    class_count: int
    dimension: int
    decomposition_size: int
    cardinality_exceeds_dimension: bool


def finite_field_dimension_check(q: int, f: Filter) -> DimensionReport:
    """Build the reduced power of GF(q) over the filter and measure it as a
    vector space.

    Classes are enumerated explicitly, their coordinate vectors over the
    base positions are rank-reduced over GF(q), and the rank is asserted to
    equal the decomposition size, with cardinality q^n > n for n >= 1.
    """
    gf = GFTable(q)
    size = f.parent.size
    if q ** size > 1 << 20:
        raise CapExceeded("reduced power enumeration too large")
    base_positions = [i for i in range(size) if f.base_mask >> i & 1]
    classes = {
        tuple(tup[i] for i in base_positions)
        for tup in itertools.product(gf.elements(), repeat=size)
    }
    n = len(decompose_filter(f))
    if len(classes) != q ** n:
        raise PropertyViolation(
            f"class count {len(classes)} != q^decomposition = {q ** n}"
        )
    # rank of all class vectors over GF(q)
    basis: list[tuple[int, ...]] = []
    for vec in sorted(classes):
        v = list(vec)
        for b in basis:
            lead = next(i for i, x in enumerate(b) if x != 0)
            if v[lead] != 0:
                factor = gf.mul(v[lead], gf.inv(b[lead]))
                v = [gf.add(x, gf.neg(gf.mul(factor, y))) for x, y in zip(v, b)]
        if any(x != 0 for x in v):
            basis.append(tuple(v))
    dimension = len(basis)
    if dimension != n:
        raise PropertyViolation(f"dimension {dimension} != decomposition size {n}")
    card_ok = q ** n > n or n == 0
    if n >= 1 and not card_ok:
        raise PropertyViolation("cardinality failed to exceed dimension")
    return DimensionReport(
        q=q,
        class_count=len(classes),
        dimension=dimension,
        decomposition_size=n,
        cardinality_exceeds_dimension=card_ok,
    )
