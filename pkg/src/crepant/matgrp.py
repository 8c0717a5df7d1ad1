"""Matrices over cyclotomic fields and finite matrix group machinery.

`close_group` closes a generating set by breadth-first search (queue order,
generators applied in input order, left multiplication), which makes element
ids, conjugacy class representatives, and everything derived from them
deterministic for a given input.  Each discovered element remembers the
generator word that produced it, so group multiplication afterwards is a walk
through the per-generator permutation tables rather than a matrix product.

Subgroups are handles onto a parent group's label set; quotients get their own
contiguous label set (coset indices, representative = least parent label).
The table algorithms below (closure, conjugacy, commutators, quotients,
abelian structure) only require the small group-protocol surface
(carrier_labels / generator_labels / mul / inv / identity_label), so they work
uniformly on groups, subgroup handles, quotients, and ad-hoc table groups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .cyclo import (
    CyclotomicNumber,
    as_root_of_unity,
    parse_cyclotomic,
    rational,
)

__all__ = [
    "AbelianDecomposition",
    "AbelianStructure",
    "CycMatrix",
    "ExplicitGroup",
    "FiniteMatrixGroup",
    "GroupTooLargeError",
    "NotAbelianError",
    "NotNormalError",
    "QuotientGroup",
    "SingularMatrixError",
    "SubgroupHandle",
    "abelian_decomposition",
    "abelian_invariants",
    "abelianization",
    "close_group",
    "commutator_subgroup",
    "conjugacy_classes",
    "kernel_basis",
    "order_of",
    "power",
    "quotient",
    "subgroup_generated",
    "verify_group_law",
]


class SingularMatrixError(ZeroDivisionError):
    pass


class GroupTooLargeError(RuntimeError):
    """Closure exceeded max_size; carries the partial element count."""

    def __init__(self, partial_count: int, max_size: int):
        super().__init__(
            f"group closure exceeded max_size={max_size} "
            f"(at least {partial_count} elements found; "
            "the group may be infinite or max_size too small)"
        )
        self.partial_count = partial_count
        self.max_size = max_size


class NotNormalError(ValueError):
    pass


class NotAbelianError(ValueError):
    pass


Entry = Union[CyclotomicNumber, int, Fraction, str]


def _entry(value: Entry) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value
    if isinstance(value, str):
        return parse_cyclotomic(value)
    return rational(value)


class CycMatrix:
    """A square matrix over a cyclotomic field.

    All entries are normalized to a single common conductor at construction.
    Matrices are immutable.
    """

    __slots__ = ("dim", "conductor", "rows", "_hash")

    def __init__(self, dim: int, conductor: int, rows: tuple):
        self.dim = dim
        self.conductor = conductor
        self.rows = rows
        self._hash: Optional[int] = None

    @staticmethod
    def from_rows(entries: Sequence[Sequence[Entry]]) -> "CycMatrix":
        parsed = [[_entry(e) for e in row] for row in entries]
        dim = len(parsed)
        if dim == 0 or any(len(row) != dim for row in parsed):
            raise ValueError("matrix must be square and non-empty")
        conductor = 1
        for row in parsed:
            for e in row:
                conductor = conductor * e.conductor // math.gcd(conductor, e.conductor)
        rows = tuple(tuple(e.embed(conductor) for e in row) for row in parsed)
        return CycMatrix(dim, conductor, rows)

    @staticmethod
    def identity(dim: int, conductor: int = 1) -> "CycMatrix":
        one = rational(1).embed(conductor)
        zero = rational(0).embed(conductor)
        return CycMatrix(
            dim,
            conductor,
            tuple(
                tuple(one if i == j else zero for j in range(dim)) for i in range(dim)
            ),
        )

    def lift(self, conductor: int) -> "CycMatrix":
        if conductor == self.conductor:
            return self
        return CycMatrix(
            self.dim,
            conductor,
            tuple(tuple(e.embed(conductor) for e in row) for row in self.rows),
        )

    def __matmul__(self, other: "CycMatrix") -> "CycMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch in matrix product")
        n = self.dim
        m = self.conductor * other.conductor // math.gcd(
            self.conductor, other.conductor
        )
        a = self.lift(m).rows
        b = other.lift(m).rows
        zero = rational(0).embed(m)
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    aik = a[i][k]
                    if not aik.is_zero:
                        bkj = b[k][j]
                        if not bkj.is_zero:
                            acc = acc + aik * bkj
                row.append(acc)
            out.append(tuple(row))
        return CycMatrix(n, m, tuple(out))

    def __mul__(self, other):
        if isinstance(other, CycMatrix):
            return self.__matmul__(other)
        return NotImplemented

    def __sub__(self, other: "CycMatrix") -> "CycMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch in matrix difference")
        m = self.conductor * other.conductor // math.gcd(
            self.conductor, other.conductor
        )
        a = self.lift(m).rows
        b = other.lift(m).rows
        return CycMatrix(
            self.dim,
            m,
            tuple(
                tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b)
            ),
        )

    def __neg__(self) -> "CycMatrix":
        return CycMatrix(
            self.dim,
            self.conductor,
            tuple(tuple(-e for e in row) for row in self.rows),
        )

    def trace(self) -> CyclotomicNumber:
        acc = rational(0)
        for i in range(self.dim):
            acc = acc + self.rows[i][i]
        return acc

    def det(self) -> CyclotomicNumber:
        work = [list(row) for row in self.rows]
        n = self.dim
        det = rational(1).embed(self.conductor)
        for col in range(n):
            pivot_row = next(
                (r for r in range(col, n) if not work[r][col].is_zero), None
            )
            if pivot_row is None:
                return rational(0).embed(self.conductor)
            if pivot_row != col:
                work[col], work[pivot_row] = work[pivot_row], work[col]
                det = -det
            pivot = work[col][col]
            det = det * pivot
            inv_pivot = pivot.inverse()
            for r in range(col + 1, n):
                factor = work[r][col]
                if factor.is_zero:
                    continue
                ratio = factor * inv_pivot
                for c in range(col, n):
                    work[r][c] = work[r][c] - ratio * work[col][c]
        return det

    def rank(self) -> int:
        work = [list(row) for row in self.rows]
        n = self.dim
        rank = 0
        pivot_col = 0
        while pivot_col < n and rank < n:
            pivot_row = next(
                (r for r in range(rank, n) if not work[r][pivot_col].is_zero), None
            )
            if pivot_row is None:
                pivot_col += 1
                continue
            work[rank], work[pivot_row] = work[pivot_row], work[rank]
            inv_pivot = work[rank][pivot_col].inverse()
            for r in range(rank + 1, n):
                factor = work[r][pivot_col]
                if factor.is_zero:
                    continue
                ratio = factor * inv_pivot
                for c in range(pivot_col, n):
                    work[r][c] = work[r][c] - ratio * work[rank][c]
            rank += 1
            pivot_col += 1
        return rank

    def inverse(self) -> "CycMatrix":
        n = self.dim
        one = rational(1).embed(self.conductor)
        zero = rational(0).embed(self.conductor)
        work = [
            list(row) + [one if i == j else zero for j in range(n)]
            for i, row in enumerate(self.rows)
        ]
        for col in range(n):
            pivot_row = next(
                (r for r in range(col, n) if not work[r][col].is_zero), None
            )
            if pivot_row is None:
                raise SingularMatrixError("matrix is singular")
            work[col], work[pivot_row] = work[pivot_row], work[col]
            inv_pivot = work[col][col].inverse()
            work[col] = [e * inv_pivot for e in work[col]]
            for r in range(n):
                if r == col:
                    continue
                factor = work[r][col]
                if factor.is_zero:
                    continue
                work[r] = [e - factor * p for e, p in zip(work[r], work[col])]
        return CycMatrix(n, self.conductor, tuple(tuple(row[n:]) for row in work))

    def is_diagonal(self) -> bool:
        return all(
            self.rows[i][j].is_zero
            for i in range(self.dim)
            for j in range(self.dim)
            if i != j
        )

    def key(self) -> tuple:
        # Identity key for dict lookup; only comparable between matrices that
        # share a conductor (group machinery lifts everything first).
        return tuple(e.coeffs for row in self.rows for e in row)

    def render_rows(self) -> list[list[str]]:
        return [[e.render() for e in row] for row in self.rows]

    def __eq__(self, other) -> bool:
        if not isinstance(other, CycMatrix):
            return NotImplemented
        if self.dim != other.dim:
            return False
        m = self.conductor * other.conductor // math.gcd(
            self.conductor, other.conductor
        )
        return self.lift(m).key() == other.lift(m).key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(
                (self.dim, tuple(hash(e) for row in self.rows for e in row))
            )
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(", ".join(e.render() for e in row) for row in self.rows)
        return f"<mat [{body}]>"


def kernel_basis(m: CycMatrix) -> list[tuple[CyclotomicNumber, ...]]:
    """Basis of the null space, deterministic: reduced row echelon form with
    free columns taken in ascending order."""
    n = m.dim
    work = [list(row) for row in m.rows]
    one = rational(1).embed(m.conductor)
    zero = rational(0).embed(m.conductor)
    pivots = []
    row = 0
    for col in range(n):
        pivot_row = next(
            (r for r in range(row, n) if not work[r][col].is_zero), None
        )
        if pivot_row is None:
            continue
        work[row], work[pivot_row] = work[pivot_row], work[row]
        inv_pivot = work[row][col].inverse()
        work[row] = [e * inv_pivot for e in work[row]]
        for r in range(n):
            if r != row and not work[r][col].is_zero:
                factor = work[r][col]
                work[r] = [e - factor * p for e, p in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        vec = [zero] * n
        vec[fc] = one
        for r, pc in enumerate(pivots):
            vec[pc] = -work[r][fc]
        basis.append(tuple(vec))
    return basis


# ---------------------------------------------------------------------------
# group protocol helpers


def power(grp, label, k: int):
    """label^k in any group-like object (binary powering, k may be negative)."""
    if k < 0:
        label = grp.inv(label)
        k = -k
    acc = grp.identity_label
    base = label
    while k:
        if k & 1:
            acc = grp.mul(acc, base)
        if k > 1:
            base = grp.mul(base, base)
        k >>= 1
    return acc


def order_of(grp, label) -> int:
    p = label
    k = 1
    while p != grp.identity_label:
        p = grp.mul(label, p)
        k += 1
    return k


def _dedup(labels: Iterable) -> list:
    seen = set()
    out = []
    for x in labels:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


class ExplicitGroup:
    """A finite group given by explicit label set and multiplication callable.
    Mostly a test/bridge utility; satisfies the same protocol as the real
    group classes."""

    def __init__(self, labels, mul, inv, identity_label, generators=None):
        self._labels = tuple(labels)
        self._mul = mul
        self._inv = inv
        self.identity_label = identity_label
        self._generators = tuple(generators) if generators else self._labels

    def carrier_labels(self):
        return self._labels

    def generator_labels(self):
        return self._generators

    def mul(self, a, b):
        return self._mul(a, b)

    def inv(self, a):
        return self._inv(a)

    def __len__(self):
        return len(self._labels)


# ---------------------------------------------------------------------------
# closed matrix groups


class FiniteMatrixGroup:
    """A finite matrix group closed from generators; see `close_group`.

    Element labels are the ids 0..order-1 in discovery order (0 is the
    identity).  Multiplication replays the stored generator word of the left
    operand through the per-generator permutation tables.
    """

    def __init__(
        self,
        dim: int,
        generators: list[CycMatrix],
        entry_conductor: int,
        elements: list[CycMatrix],
        index: dict,
        words: list[tuple[int, ...]],
        lmul: list[list[int]],
        is_special_linear: bool,
    ):
        self.dim = dim
        self.generators = tuple(generators)
        self.entry_conductor = entry_conductor
        self.elements = tuple(elements)
        self._index = index
        self._words = words
        self._lmul = lmul
        self._linv = [_inverse_permutation(t) for t in lmul]
        self.identity_label = 0
        self.generator_ids = tuple(lmul[gi][0] for gi in range(len(generators)))
        self.inverse_ids = [self._compute_inverse(i) for i in range(len(elements))]
        self.element_orders = self._compute_orders()
        self.exponent = 1
        for o in self.element_orders:
            self.exponent = self.exponent * o // math.gcd(self.exponent, o)
        self.working_conductor = (
            entry_conductor * self.exponent
            // math.gcd(entry_conductor, self.exponent)
        )
        self.traces = [m.trace() for m in self.elements]
        self.is_special_linear = is_special_linear
        self._classes: Optional[tuple[tuple[int, ...], ...]] = None
        # scratch space for modules that derive per-element data (ages etc.)
        self.cache: dict = {}

    # protocol ----------------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def carrier_labels(self):
        return range(len(self.elements))

    def generator_labels(self):
        return self.generator_ids

    def mul(self, a: int, b: int) -> int:
        y = b
        for gi in reversed(self._words[a]):
            y = self._lmul[gi][y]
        return y

    def inv(self, a: int) -> int:
        return self.inverse_ids[a]

    # matrix access -------------------------------------------------------

    def matrix(self, label: int) -> CycMatrix:
        return self.elements[label]

    def id_of(self, m: CycMatrix) -> Optional[int]:
        lifted_conductor = self.entry_conductor * m.conductor // math.gcd(
            self.entry_conductor, m.conductor
        )
        if lifted_conductor == self.entry_conductor:
            return self._index.get(m.lift(self.entry_conductor).key())
        # Entry conductor does not contain the given representation; fall back
        # to slow elementwise comparison at a common conductor.
        for i, el in enumerate(self.elements):
            if el == m:
                return i
        return None

    def order_of(self, label: int) -> int:
        return self.element_orders[label]

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        if self._classes is None:
            self._classes = conjugacy_classes(self)
        return self._classes

    # internals ---------------------------------------------------------

    def _compute_inverse(self, a: int) -> int:
        y = 0
        for gi in self._words[a]:
            y = self._linv[gi][y]
        return y

    def _compute_orders(self) -> list[int]:
        orders = []
        for i in range(len(self.elements)):
            p = i
            k = 1
            while p != 0:
                p = self.mul(i, p)
                k += 1
            orders.append(k)
        return orders

    def __repr__(self) -> str:
        return (
            f"<FiniteMatrixGroup dim={self.dim} order={len(self)} "
            f"conductor={self.entry_conductor}>"
        )


def _inverse_permutation(perm: list[int]) -> list[int]:
    out = [0] * len(perm)
    for i, p in enumerate(perm):
        out[p] = i
    return out


def close_group(
    generators: Sequence[CycMatrix], max_size: int = 20000
) -> FiniteMatrixGroup:
    """Close a generating set under multiplication.

    BFS from the identity, applying generators in input order by left
    multiplication, so the element ids are deterministic.  Raises
    GroupTooLargeError (with the partial count) if the closure exceeds
    max_size elements.
    """
    gens = list(generators)
    if not gens:
        raise ValueError("need at least one generator")
    dim = gens[0].dim
    if any(g.dim != dim for g in gens):
        raise ValueError("generators must share one dimension")
    for i, g in enumerate(gens):
        d = g.det()
        if d.is_zero:
            raise SingularMatrixError(f"generator {i} is singular")
        if as_root_of_unity(d) is None:
            raise ValueError(
                f"generator {i} has determinant {d.render()}, not a root of "
                "unity; the generated group cannot be finite"
            )
    conductor = 1
    for g in gens:
        conductor = conductor * g.conductor // math.gcd(conductor, g.conductor)
    gens = [g.lift(conductor) for g in gens]
    is_sl = all(g.det().is_one for g in gens)

    identity = CycMatrix.identity(dim, conductor)
    elements = [identity]
    index = {identity.key(): 0}
    words: list[tuple[int, ...]] = [()]
    lmul: list[list[int]] = [[] for _ in gens]
    i = 0
    while i < len(elements):
        x = elements[i]
        for gi, g in enumerate(gens):
            y = g @ x
            key = y.key()
            known = index.get(key)
            if known is None:
                if len(elements) >= max_size:
                    raise GroupTooLargeError(len(elements), max_size)
                known = len(elements)
                index[key] = known
                elements.append(y)
                words.append((gi,) + words[i])
            lmul[gi].append(known)
        i += 1
    return FiniteMatrixGroup(
        dim, gens, conductor, elements, index, words, lmul, is_sl
    )


# ---------------------------------------------------------------------------
# subgroups, quotients


class SubgroupHandle:
    """A subgroup as a subset of a parent group's labels.  Group operations
    delegate to the parent, so handles nest without label translation."""

    def __init__(self, parent, members: tuple, generators: tuple):
        self.parent = parent
        self.members = members
        self.member_set = frozenset(members)
        self._generators = generators
        self.identity_label = parent.identity_label

    def carrier_labels(self):
        return self.members

    def generator_labels(self):
        return self._generators

    def mul(self, a, b):
        return self.parent.mul(a, b)

    def inv(self, a):
        return self.parent.inv(a)

    def __contains__(self, label) -> bool:
        return label in self.member_set

    def __len__(self) -> int:
        return len(self.members)

    def __repr__(self) -> str:
        return f"<SubgroupHandle order={len(self)}>"


def subgroup_generated(grp, seed_labels: Iterable) -> SubgroupHandle:
    """Closure of `seed_labels` inside `grp` (breadth-first, deterministic)."""
    seeds = _dedup(seed_labels)
    members = {grp.identity_label}
    queue = [grp.identity_label]
    qi = 0
    while qi < len(queue):
        x = queue[qi]
        qi += 1
        for s in seeds:
            y = grp.mul(s, x)
            if y not in members:
                members.add(y)
                queue.append(y)
    return SubgroupHandle(grp, tuple(sorted(members)), tuple(seeds))


def conjugacy_classes(grp) -> tuple[tuple[int, ...], ...]:
    """Partition into conjugacy classes; each class is sorted and classes are
    ordered by least member, so representatives (= first entries) are
    deterministic."""
    gens = _dedup(grp.generator_labels())
    gen_invs = [grp.inv(g) for g in gens]
    assigned = set()
    classes = []
    for x in sorted(grp.carrier_labels()):
        if x in assigned:
            continue
        orbit = {x}
        queue = [x]
        qi = 0
        while qi < len(queue):
            y = queue[qi]
            qi += 1
            for g, gi in zip(gens, gen_invs):
                z = grp.mul(grp.mul(g, y), gi)
                if z not in orbit:
                    orbit.add(z)
                    queue.append(z)
        assigned |= orbit
        classes.append(tuple(sorted(orbit)))
    return tuple(classes)


def commutator_subgroup(grp, pair_scan_limit: int = 4096) -> SubgroupHandle:
    """The derived subgroup.  For groups of order <= pair_scan_limit this
    closes the set of all pairwise commutators (already conjugation-stable);
    above the limit it takes the normal closure of generator commutators."""
    labels = list(grp.carrier_labels())
    if len(labels) <= pair_scan_limit:
        comms = set()
        invs = {a: grp.inv(a) for a in labels}
        for a in labels:
            for b in labels:
                c = grp.mul(grp.mul(grp.mul(invs[a], invs[b]), a), b)
                comms.add(c)
        return subgroup_generated(grp, sorted(comms))
    gens = _dedup(grp.generator_labels())
    seed = set()
    for a in gens:
        for b in gens:
            seed.add(
                grp.mul(grp.mul(grp.mul(grp.inv(a), grp.inv(b)), a), b)
            )
    seed.discard(grp.identity_label)
    while True:
        sub = subgroup_generated(grp, sorted(seed) or [grp.identity_label])
        new = set()
        for h in sub.members:
            for g in gens:
                c = grp.mul(grp.mul(g, h), grp.inv(g))
                if c not in sub.member_set:
                    new.add(c)
        if not new:
            return sub
        seed |= new


class QuotientGroup:
    """G/N for N normal in G.  Labels are coset indices; representative of a
    coset is its least parent label and cosets are indexed by representative
    in ascending order (so index 0 is the identity coset)."""

    def __init__(self, parent, normal: SubgroupHandle):
        _check_normal(parent, normal)
        self.parent = parent
        self.normal = normal
        coset_of = {}
        reps = []
        for x in sorted(parent.carrier_labels()):
            if x in coset_of:
                continue
            idx = len(reps)
            reps.append(x)
            for nn in normal.members:
                coset_of[parent.mul(x, nn)] = idx
        self.coset_reps = tuple(reps)
        self.coset_of = coset_of
        self.identity_label = 0
        q = len(reps)
        self.table = None
        if q <= 256:
            self.table = tuple(
                tuple(
                    coset_of[parent.mul(reps[i], reps[j])] for j in range(q)
                )
                for i in range(q)
            )
        self._inv = tuple(coset_of[parent.inv(r)] for r in reps)
        self._generators = tuple(
            _dedup(coset_of[g] for g in parent.generator_labels())
        )

    def carrier_labels(self):
        return range(len(self.coset_reps))

    def generator_labels(self):
        return self._generators

    def mul(self, a: int, b: int) -> int:
        if self.table is not None:
            return self.table[a][b]
        return self.coset_of[
            self.parent.mul(self.coset_reps[a], self.coset_reps[b])
        ]

    def inv(self, a: int) -> int:
        return self._inv[a]

    def __len__(self) -> int:
        return len(self.coset_reps)

    def __repr__(self) -> str:
        return f"<QuotientGroup order={len(self)}>"


def _check_normal(parent, normal: SubgroupHandle):
    member_set = normal.member_set
    for g in _dedup(parent.generator_labels()):
        gi = parent.inv(g)
        for nn in normal.members:
            if parent.mul(parent.mul(g, nn), gi) not in member_set:
                raise NotNormalError(
                    f"subgroup is not normal: conjugate of {nn!r} by {g!r} escapes"
                )


def quotient(grp, normal: SubgroupHandle) -> QuotientGroup:
    """G/N with normality verified (NotNormalError otherwise)."""
    return QuotientGroup(grp, normal)


def verify_group_law(grp, limit: int = 256) -> bool:
    """Exhaustively check associativity, identity, and inverses.  Refuses
    groups larger than `limit` (cubic cost)."""
    labels = list(grp.carrier_labels())
    if len(labels) > limit:
        raise ValueError(f"group of order {len(labels)} exceeds check limit {limit}")
    e = grp.identity_label
    for a in labels:
        if grp.mul(a, e) != a or grp.mul(e, a) != a:
            return False
        if grp.mul(a, grp.inv(a)) != e:
            return False
    for a in labels:
        for b in labels:
            ab = grp.mul(a, b)
            for c in labels:
                if grp.mul(ab, c) != grp.mul(a, grp.mul(b, c)):
                    return False
    return True


def abelianization(grp) -> QuotientGroup:
    """G / [G, G]."""
    return quotient(grp, commutator_subgroup(grp))


# ---------------------------------------------------------------------------
# abelian structure


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant factor decomposition d_1 | d_2 | ... | d_k, each d_i >= 2.
    The trivial group has an empty chain and order 1."""

    invariant_factors: tuple[int, ...]
    order: int

    def __post_init__(self):
        prod = 1
        prev = 1
        for d in self.invariant_factors:
            if d < 2 or d % prev:
                raise ValueError(
                    f"not a divisibility chain: {self.invariant_factors}"
                )
            prev = d
            prod *= d
        if prod != self.order:
            raise ValueError("order does not match invariant factors")


@dataclass(frozen=True)
class AbelianDecomposition:
    """An abelian group-like together with independent generators realizing
    the invariant factors, and a discrete-log table for the whole group."""

    group: object
    structure: AbelianStructure
    generators: tuple
    dlog: dict

    def exponents_of(self, label) -> tuple[int, ...]:
        return self.dlog[label]


def _verify_abelian(grp):
    gens = _dedup(grp.generator_labels())
    for i, a in enumerate(gens):
        for b in gens[i + 1 :]:
            if grp.mul(a, b) != grp.mul(b, a):
                raise NotAbelianError("group is not abelian")


def _merge_primary(partitions: dict[int, list[int]]) -> tuple[int, ...]:
    # partitions[p] = exponents of the cyclic p-power factors, descending.
    width = max((len(v) for v in partitions.values()), default=0)
    factors = []
    for slot in range(width):
        d = 1
        for p, part in partitions.items():
            if slot < len(part):
                d *= p ** part[slot]
        factors.append(d)
    return tuple(reversed(factors))  # ascending divisibility chain


def abelian_invariants(grp) -> AbelianStructure:
    """Invariant factors of a finite abelian group, from the counts
    N_k = #{x : x^(p^k) = 1} per prime p (recovered via element orders)."""
    _verify_abelian(grp)
    if isinstance(grp, FiniteMatrixGroup):
        orders = list(grp.element_orders)
    else:
        orders = [order_of(grp, x) for x in grp.carrier_labels()]
    n = len(orders)
    partitions: dict[int, list[int]] = {}
    mm = n
    p = 2
    primes = []
    while p * p <= mm:
        if mm % p == 0:
            primes.append(p)
            while mm % p == 0:
                mm //= p
        p += 1 if p == 2 else 2
    if mm > 1:
        primes.append(mm)
    for p in primes:
        # exps[e] = number of elements of order exactly p^e
        exps: dict[int, int] = {}
        for o in orders:
            e = 0
            while o % p == 0:
                o //= p
                e += 1
            if o == 1:
                exps[e] = exps.get(e, 0) + 1
        e_max = max(exps)
        counts = []  # N_k for k = 0..e_max
        running = 0
        for k in range(e_max + 1):
            running += exps.get(k, 0)
            counts.append(running)
        logs = []
        for c in counts:
            lg = 0
            while c > 1:
                if c % p:
                    raise ArithmeticError("subgroup count is not a prime power")
                c //= p
                lg += 1
            logs.append(lg)
        conj = [logs[k] - logs[k - 1] for k in range(1, e_max + 1)]
        partition = [
            sum(1 for s in conj if s >= i) for i in range(1, max(conj) + 1)
        ]
        partitions[p] = partition  # already descending
    factors = _merge_primary(partitions)
    order = 1
    for d in factors:
        order *= d
    if order != n:
        raise ArithmeticError("invariant factors do not multiply to the order")
    return AbelianStructure(factors, n)


def _p_group_basis(grp, p: int) -> list:
    """Independent generators of an abelian p-group-like, orders descending.
    Classical peel-off: take x of maximal order, recurse on the quotient, and
    adjust lifts so orders are preserved."""
    labels = sorted(grp.carrier_labels())
    if len(labels) == 1:
        return []
    orders = {x: order_of(grp, x) for x in labels}
    # max order, ties broken by least label
    best = max(orders.values())
    x = min(l for l in labels if orders[l] == best)
    cyc = subgroup_generated(grp, [x])
    if len(cyc) == len(labels):
        return [x]
    quo = quotient(grp, cyc)
    x_powers = {power(grp, x, k): k for k in range(orders[x])}
    lam = _p_valuation(orders[x], p)
    basis = [x]
    for ybar in _p_group_basis(quo, p):
        y = quo.coset_reps[ybar]
        mu = _p_valuation(order_of(quo, ybar), p)
        z = power(grp, y, p**mu)
        s = x_powers[z]
        if s:
            # y^(p^mu) = x^s with p^mu | s; correct y by a power of x so the
            # lift has the same order as its image.
            c = (-(s // p**mu)) % (p ** (lam - mu))
            y = grp.mul(y, power(grp, x, c))
        assert order_of(grp, y) == p**mu
        assert quo.coset_of[y] == ybar
        basis.append(y)
    return basis


def _p_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def abelian_decomposition(grp) -> AbelianDecomposition:
    """Invariant factors together with explicit independent generators and a
    full discrete-log table (label -> exponent tuple)."""
    _verify_abelian(grp)
    labels = sorted(grp.carrier_labels())
    n = len(labels)
    primes = [p for p, _ in _int_factorize(n)]
    per_prime: dict[int, list] = {}
    for p in primes:
        members = sorted(
            x for x in labels if _is_p_power(order_of(grp, x), p)
        )
        handle = SubgroupHandle(grp, tuple(members), tuple(members))
        per_prime[p] = _p_group_basis(handle, p)
    width = max((len(b) for b in per_prime.values()), default=0)
    gens = []
    factors = []
    for slot in range(width):
        g = grp.identity_label
        d = 1
        for p in primes:
            pb = per_prime[p]
            if slot < len(pb):
                g = grp.mul(g, pb[slot])
                d *= order_of(grp, pb[slot])
        gens.append(g)
        factors.append(d)
    gens.reverse()
    factors.reverse()  # ascending chain
    structure = AbelianStructure(tuple(factors), n)
    dlog = {grp.identity_label: (0,) * len(gens)}
    for j, g in enumerate(gens):
        current = list(dlog.items())
        for label, exps in current:
            acc = label
            for k in range(1, factors[j]):
                acc = grp.mul(acc, g)
                e = list(exps)
                e[j] = k
                if acc in dlog:
                    raise ArithmeticError("generators are not independent")
                dlog[acc] = tuple(e)
    if len(dlog) != n:
        raise ArithmeticError("decomposition does not span the group")
    if abelian_invariants(grp).invariant_factors != structure.invariant_factors:
        raise ArithmeticError("decomposition disagrees with counting invariants")
    return AbelianDecomposition(grp, structure, tuple(gens), dlog)


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def _int_factorize(n: int) -> list[tuple[int, int]]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out
