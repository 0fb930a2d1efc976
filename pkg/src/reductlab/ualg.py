"""Finite universal algebras: signatures, terms, identities, products,
congruences, quotients, and homomorphism tables.

Operation tables are flat tuples in little-endian mixed radix: for an
operation of arity k on a carrier of size n, the arguments (a0, .., a_{k-1})
index entry a0 + a1*n + .. + a_{k-1}*n^(k-1).  Coordinate 0 is least
significant everywhere, including product-algebra tuple encoding.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .util import (
    CapExceeded,
    CheckResult,
    InputError,
    ParseError,
    PropertyViolation,
    failed,
    passed,
)

# Work cap for exhaustive identity checking: carrier ** variable count.
DEFAULT_IDENTITY_WORK = 8 ** 6


@dataclass(frozen=True)
class Signature:
    symbols: tuple[tuple[str, int], ...]

    def __post_init__(self):
        seen = set()
        for name, arity in self.symbols:
            if name in seen:
                raise InputError(f"duplicate operation symbol {name!r}")
            if arity < 0:
                raise InputError(f"negative arity for {name!r}")
            seen.add(name)

    @classmethod
    def of(cls, *symbols) -> "Signature":
        return cls(tuple((str(n), int(a)) for n, a in symbols))

    def arity(self, name: str) -> int:
        for n, a in self.symbols:
            if n == name:
                return a
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.symbols)

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.symbols)


GROUP_SIGNATURE = Signature.of(("mul", 2), ("inv", 1), ("e", 0))
RING_SIGNATURE = Signature.of(("add", 2), ("neg", 1), ("mul", 2), ("zero", 0))
LATTICE_SIGNATURE = Signature.of(("join", 2), ("meet", 2))


def build_table(size: int, arity: int, fn) -> tuple[int, ...]:
    """Flat little-endian operation table from a function on arguments."""
    out = []
    for flat in range(size ** arity):
        args = []
        rem = flat
        for _ in range(arity):
            args.append(rem % size)
            rem //= size
        out.append(fn(*args))
    return tuple(out)


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    symbol: str
    args: tuple


Term = Var | App

# Allowed variable tokens: x, x', y, y', z0..z9, v0..v99.
_VAR_RE = re.compile(r"^(?:x'?|y'?|z[0-9]|v[0-9]{1,2})$")
_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*'*|\(|\)|,)")


def term_variables(t: Term) -> tuple[str, ...]:
    """Variable names occurring in t, sorted."""
    seen = set()
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            seen.add(node.name)
        else:
            stack.extend(node.args)
    return tuple(sorted(seen))


def term_to_str(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.symbol
    return f"{t.symbol}({','.join(term_to_str(a) for a in t.args)})"


def substitute(t: Term, mapping: dict[str, Term]) -> Term:
    """Replace variables by terms according to mapping."""
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    return App(t.symbol, tuple(substitute(a, mapping) for a in t.args))


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


def parse_term(text: str, sig: Signature) -> Term:
    """Parse prefix syntax like ``mul(x,inv(x'))`` against a signature.

    Signature symbols take precedence over variable tokens; constants may be
    written with or without an empty argument list.  Errors carry the
    character position of the offending token.
    """
    tokens = _tokenize(text)
    idx = 0

    def peek():
        return tokens[idx] if idx < len(tokens) else (None, len(text))

    def term():
        nonlocal idx
        tok, pos = peek()
        if tok is None:
            raise ParseError("unexpected end of input", pos)
        if tok in ("(", ")", ","):
            raise ParseError(f"expected a symbol or variable, got {tok!r}", pos)
        idx += 1
        if tok in sig:
            arity = sig.arity(tok)
            nxt, _ = peek()
            if nxt != "(":
                if arity == 0:
                    return App(tok, ())
                raise ParseError(f"operation {tok!r} of arity {arity} needs arguments", pos)
            idx += 1  # consume "("
            args = []
            close, cpos = peek()
            if close == ")":
                idx += 1
            else:
                while True:
                    args.append(term())
                    sep, spos = peek()
                    if sep == ",":
                        idx += 1
                        continue
                    if sep == ")":
                        idx += 1
                        break
                    raise ParseError("expected ',' or ')'", spos)
            if len(args) != arity:
                raise ParseError(
                    f"operation {tok!r} expects {arity} arguments, got {len(args)}", pos
                )
            return App(tok, tuple(args))
        if _VAR_RE.match(tok):
            return Var(tok)
        raise ParseError(f"unknown symbol {tok!r}", pos)

    result = term()
    tok, pos = peek()
    if tok is not None:
        raise ParseError(f"trailing input {tok!r}", pos)
    return result


# ---------------------------------------------------------------------------
# Algebras


class FiniteAlgebra:
    """An algebra on carrier {0, .., size-1} given by total operation tables.

    Optional tags designate an identity element (group-like use) and a zero
    element (support computations).  Instances are treated as immutable.
    """

    def __init__(self, signature, size, tables, name="", identity=None, zero=None):
        if size < 1:
            raise InputError("carrier size must be >= 1")
        self.signature = signature
        self.size = size
        self.name = name or f"algebra{size}"
        self.tables = {}
        for sym, arity in signature.symbols:
            if sym not in tables:
                raise InputError(f"missing table for {sym!r}")
            table = tuple(tables[sym])
            if len(table) != size ** arity:
                raise InputError(
                    f"table for {sym!r} has {len(table)} entries, expected {size ** arity}"
                )
            for pos, v in enumerate(table):
                if not 0 <= v < size:
                    raise InputError(f"table for {sym!r} has out-of-range value at index {pos}")
            self.tables[sym] = table
        extra = set(tables) - set(signature.names())
        if extra:
            raise InputError(f"tables for symbols not in signature: {sorted(extra)}")
        for tagname, tag in (("identity", identity), ("zero", zero)):
            if tag is not None and not 0 <= tag < size:
                raise InputError(f"{tagname} tag {tag} out of range")
        self.identity = identity
        self.zero = zero

    def op(self, symbol: str, *args: int) -> int:
        idx = 0
        stride = 1
        for a in args:
            idx += a * stride
            stride *= self.size
        return self.tables[symbol][idx]

    def elements(self) -> range:
        return range(self.size)

    def constant(self, symbol: str) -> int:
        if self.signature.arity(symbol) != 0:
            raise InputError(f"{symbol!r} is not a constant")
        return self.tables[symbol][0]

    def retagged(self, identity=None, zero=None) -> "FiniteAlgebra":
        return FiniteAlgebra(
            self.signature,
            self.size,
            self.tables,
            name=self.name,
            identity=self.identity if identity is None else identity,
            zero=self.zero if zero is None else zero,
        )

    def __repr__(self):
        return f"<{self.name}: size {self.size}>"


def eval_term(a: FiniteAlgebra, t: Term, env: dict[str, int]) -> int:
    """Evaluate a term bottom-up via the operation tables.

    Iterative postorder over an explicit stack; the recursive reference
    evaluator in the verification suites is the independent cross-check.
    """
    out: list[int] = []
    work: list[tuple[Term, bool]] = [(t, False)]
    while work:
        node, ready = work.pop()
        if isinstance(node, Var):
            if node.name not in env:
                raise InputError(f"unbound variable {node.name!r}")
            v = env[node.name]
            if not 0 <= v < a.size:
                raise InputError(f"assignment {node.name}={v} out of carrier range")
            out.append(v)
        elif ready:
            n = len(node.args)
            args = out[len(out) - n:]
            del out[len(out) - n:]
            out.append(a.op(node.symbol, *args))
        else:
            work.append((node, True))
            for child in reversed(node.args):
                work.append((child, False))
    return out[0]


def is_identity(a, lhs, rhs, max_work=DEFAULT_IDENTITY_WORK) -> CheckResult:
    """Whether lhs = rhs holds under every assignment; witness otherwise.

    The sweep is exhaustive, cost size ** #variables, capped at max_work.
    The witness is the first failing assignment with variables in sorted
    order and values in carrier order.
    """
    names = tuple(sorted(set(term_variables(lhs)) | set(term_variables(rhs))))
    if a.size ** len(names) > max_work:
        raise CapExceeded(
            f"identity sweep {a.size}^{len(names)} exceeds cap {max_work}"
        )
    for values in itertools.product(a.elements(), repeat=len(names)):
        env = dict(zip(names, values))
        if eval_term(a, lhs, env) != eval_term(a, rhs, env):
            return failed("assignment_separates", env)
    return passed()


# ---------------------------------------------------------------------------
# Products


def _flat_args(flat: int, size: int, arity: int) -> tuple[int, ...]:
    """Argument tuple encoded by a flat table index (argument 0 least
    significant)."""
    args = []
    for _ in range(arity):
        args.append(flat % size)
        flat //= size
    return tuple(args)


class TupleCodec:
    """Little-endian mixed-radix codec between flat indices and tuples."""

    def __init__(self, sizes):
        self.sizes = tuple(sizes)
        if any(s < 1 for s in self.sizes):
            raise InputError("all factor sizes must be >= 1")
        self.total = 1
        for s in self.sizes:
            self.total *= s

    def encode(self, coords) -> int:
        coords = tuple(coords)
        if len(coords) != len(self.sizes):
            raise InputError("coordinate tuple has wrong length")
        idx = 0
        stride = 1
        for c, s in zip(coords, self.sizes):
            if not 0 <= c < s:
                raise InputError(f"coordinate {c} out of range for factor of size {s}")
            idx += c * stride
            stride *= s
        return idx

    def decode(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < self.total:
            raise InputError(f"flat index {idx} out of range")
        coords = []
        for s in self.sizes:
            coords.append(idx % s)
            idx //= s
        return tuple(coords)


class ProductAlgebra(FiniteAlgebra):
    """Direct product with componentwise operations and an attached codec."""

    def __init__(self, factors, signature=None):
        factors = tuple(factors)
        if factors:
            signature = factors[0].signature
            for f in factors[1:]:
                if f.signature != signature:
                    raise InputError("product factors must share one signature")
        elif signature is None:
            raise InputError("empty product needs an explicit signature")
        codec = TupleCodec(f.size for f in factors)
        tables = {}
        for sym, arity in signature.symbols:
            table = []
            for flat in range(codec.total ** arity):
                args = _flat_args(flat, codec.total, arity)
                decoded = [codec.decode(x) for x in args]
                value = tuple(
                    f.op(sym, *(decoded[j][i] for j in range(arity)))
                    for i, f in enumerate(factors)
                )
                table.append(codec.encode(value))
            tables[sym] = tuple(table)
        identity = None
        zero = None
        if all(f.identity is not None for f in factors):
            identity = codec.encode(tuple(f.identity for f in factors))
        if all(f.zero is not None for f in factors):
            zero = codec.encode(tuple(f.zero for f in factors))
        name = " x ".join(f.name for f in factors) if factors else "terminal"
        super().__init__(signature, codec.total, tables, name=name,
                         identity=identity, zero=zero)
        self.factors = factors
        self.codec = codec


def product_algebra(factors, signature=None) -> ProductAlgebra:
    """Direct product algebra; the empty product is the one-element algebra."""
    return ProductAlgebra(factors, signature=signature)


# ---------------------------------------------------------------------------
# Congruences and quotients


class Congruence:
    """A partition of the carrier compatible with every operation."""

    def __init__(self, algebra: FiniteAlgebra, blocks, _checked=False):
        self.algebra = algebra
        canon = sorted(tuple(sorted(b)) for b in blocks)
        self.blocks = tuple(tuple(b) for b in canon)
        seen = sorted(i for b in self.blocks for i in b)
        if seen != list(range(algebra.size)):
            raise InputError("blocks do not partition the carrier")
        self._block_of = [0] * algebra.size
        for bi, b in enumerate(self.blocks):
            for i in b:
                self._block_of[i] = bi
        if not _checked:
            witness = self._compatibility_witness()
            if witness is not None:
                raise InputError(f"partition is not compatible with {witness}")

    def _compatibility_witness(self):
        """One-step compatibility check: substituting a related pair in one
        argument position keeps results related.  Equivalent to the full
        componentwise condition; the suites cross-check that equivalence."""
        a = self.algebra
        for sym, arity in a.signature.symbols:
            if arity == 0:
                continue
            for block in self.blocks:
                rep = block[0]
                for x in block[1:]:
                    for pos in range(arity):
                        for ctx in itertools.product(a.elements(), repeat=arity - 1):
                            args_r = ctx[:pos] + (rep,) + ctx[pos:]
                            args_x = ctx[:pos] + (x,) + ctx[pos:]
                            if not self.related(a.op(sym, *args_r), a.op(sym, *args_x)):
                                return (sym, args_r, args_x)
        return None

    def block_of(self, i: int) -> int:
        return self._block_of[i]

    def related(self, i: int, j: int) -> bool:
        return self._block_of[i] == self._block_of[j]

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(
            (i, j) for b in self.blocks for i in b for j in b
        )

    def __le__(self, other: "Congruence") -> bool:
        return all(other.related(b[0], x) for b in self.blocks for x in b[1:])

    def __eq__(self, other):
        return isinstance(other, Congruence) and self.blocks == other.blocks

    def __hash__(self):
        return hash(self.blocks)

    def __repr__(self):
        return f"<congruence {self.blocks} on {self.algebra.name}>"


def diagonal_congruence(a: FiniteAlgebra) -> Congruence:
    return Congruence(a, [(i,) for i in a.elements()], _checked=True)


def full_congruence(a: FiniteAlgebra) -> Congruence:
    return Congruence(a, [tuple(a.elements())], _checked=True)


def congruence_generated(a: FiniteAlgebra, pairs) -> Congruence:
    """Smallest congruence containing the given pairs.

    Union-find closure under one-step translations (replace one argument of
    a basic operation by a related element, all other arguments fixed),
    iterated to a fixpoint.
    """
    parent = list(a.elements())

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        if ri > rj:
            ri, rj = rj, ri
        parent[rj] = ri
        return True

    for i, j in pairs:
        if not (0 <= i < a.size and 0 <= j < a.size):
            raise InputError(f"generator pair ({i},{j}) out of range")
        union(i, j)

    changed = True
    while changed:
        changed = False
        classes: dict[int, list[int]] = {}
        for i in a.elements():
            classes.setdefault(find(i), []).append(i)
        for sym, arity in a.signature.symbols:
            if arity == 0:
                continue
            for members in classes.values():
                rep = members[0]
                for x in members[1:]:
                    for pos in range(arity):
                        for ctx in itertools.product(a.elements(), repeat=arity - 1):
                            u = a.op(sym, *(ctx[:pos] + (rep,) + ctx[pos:]))
                            v = a.op(sym, *(ctx[:pos] + (x,) + ctx[pos:]))
                            if union(u, v):
                                changed = True
    classes = {}
    for i in a.elements():
        classes.setdefault(find(i), []).append(i)
    return Congruence(a, classes.values(), _checked=True)


class HomTable:
    """A total map between algebras, checked to commute with every operation."""

    def __init__(self, domain, codomain, mapping, check=True):
        self.domain = domain
        self.codomain = codomain
        self.mapping = tuple(mapping)
        if len(self.mapping) != domain.size:
            raise InputError(
                f"homomorphism table has {len(self.mapping)} entries, expected {domain.size}"
            )
        for pos, v in enumerate(self.mapping):
            if not 0 <= v < codomain.size:
                raise InputError(f"homomorphism value {v} at {pos} out of range")
        if domain.signature != codomain.signature:
            raise InputError("homomorphism endpoints must share one signature")
        if check:
            witness = self.law_witness()
            if witness is not None:
                sym, args = witness
                raise PropertyViolation(
                    f"map does not commute with {sym!r} at {args}", witness=witness
                )

    def law_witness(self):
        """First (symbol, args) where h(g(args)) != g(h(args)), else None."""
        h = self.mapping
        for sym, arity in self.domain.signature.symbols:
            for args in itertools.product(self.domain.elements(), repeat=arity):
                lhs = h[self.domain.op(sym, *args)]
                rhs = self.codomain.op(sym, *(h[x] for x in args))
                if lhs != rhs:
                    return (sym, args)
        return None

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def then(self, other: "HomTable") -> "HomTable":
        if other.domain is not self.codomain and other.domain.size != self.codomain.size:
            raise InputError("composition endpoints do not match")
        return HomTable(
            self.domain, other.codomain,
            tuple(other.mapping[v] for v in self.mapping),
            check=False,
        )

    def is_surjective(self) -> bool:
        return len(set(self.mapping)) == self.codomain.size

    def image(self) -> frozenset[int]:
        return frozenset(self.mapping)

    def __repr__(self):
        return f"<hom {self.domain.name} -> {self.codomain.name}>"


def quotient_algebra(a: FiniteAlgebra, c: Congruence):
    """Quotient by a congruence, with the projection homomorphism.

    The carrier is the block list ordered by least element.  Tables are
    computed from block representatives; the projection HomTable validation
    re-proves well-definedness over all argument tuples.
    """
    if c.algebra is not a:
        raise InputError("congruence belongs to a different algebra")
    reps = [b[0] for b in c.blocks]
    tables = {}
    for sym, arity in a.signature.symbols:
        table = []
        for flat in range(len(reps) ** arity):
            args = _flat_args(flat, len(reps), arity)
            value = a.op(sym, *(reps[b] for b in args))
            table.append(c.block_of(value))
        tables[sym] = tuple(table)
    identity = c.block_of(a.identity) if a.identity is not None else None
    zero = c.block_of(a.zero) if a.zero is not None else None
    q = FiniteAlgebra(
        a.signature, len(reps), tables,
        name=f"{a.name}/~", identity=identity, zero=zero,
    )
    projection = HomTable(a, q, [c.block_of(i) for i in a.elements()])
    return q, projection


def enumerate_congruences(a: FiniteAlgebra) -> list[Congruence]:
    """All congruences of a small algebra, by filtering carrier partitions."""
    if a.size > 6:
        raise CapExceeded("congruence enumeration capped at carrier size 6")
    out = []
    for partition in _partitions(list(a.elements())):
        try:
            out.append(Congruence(a, partition))
        except InputError:
            continue
    return out


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for sub in _partitions(rest):
        for i in range(len(sub)):
            yield sub[:i] + [[first] + sub[i]] + sub[i + 1:]
        yield [[first]] + sub
