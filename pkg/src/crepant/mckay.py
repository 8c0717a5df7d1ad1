"""Ages of finite-order matrices, junior and reflection detection, and the
weight data behind monomial valuations.

For g of order r with eigenvalues zeta_r^{a_1}, ..., zeta_r^{a_n}
(0 <= a_i < r), the age of g is (1/r) sum a_i.  Elements of age exactly 1 are
junior.  The exponents a_i depend on which primitive r-th root of unity plays
the role of zeta_r; GaloisTwist makes that choice explicit (t means "use
zeta^t instead of zeta"), and galois_sweep verifies that the downstream
answers do not depend on it.

Eigenvalue multiplicities are read off by an exact discrete Fourier transform
of the trace sequence k -> tr(g^k).  The transform must land on nonnegative
integers summing to the dimension; anything else is reported as an internal
arithmetic failure rather than silently accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cyclo import as_root_of_unity, rational, zeta
from .matgrp import (
    CycMatrix,
    FiniteMatrixGroup,
    SubgroupHandle,
    abelian_invariants,
    abelianization,
    kernel_basis,
    quotient,
    subgroup_generated,
)

__all__ = [
    "AgeRecord",
    "ConsistencyError",
    "GaloisTwist",
    "GradingData",
    "IDENTITY_TWIST",
    "NotSpecialLinearError",
    "SweepEntry",
    "age",
    "age_records",
    "eigen_multiplicities",
    "galois_sweep",
    "is_reflection",
    "junior_classes",
    "junior_elements",
    "valuation_weights",
]


class NotSpecialLinearError(ValueError):
    pass


class ConsistencyError(RuntimeError):
    """An invariant the theory guarantees failed to hold; never expected."""


@dataclass(frozen=True)
class GaloisTwist:
    """The substitution zeta -> zeta^t on the fixed primitive roots."""

    t: int = 1

    def inverse_mod(self, r: int) -> int:
        try:
            return pow(self.t, -1, r)
        except ValueError:
            raise ValueError(
                f"twist {self.t} is not invertible modulo {r}"
            ) from None


IDENTITY_TWIST = GaloisTwist(1)


@dataclass(frozen=True)
class AgeRecord:
    element_id: int
    order: int
    multiplicities: tuple[int, ...]
    age: Fraction
    is_junior: bool
    is_reflection: bool
    weights: tuple[int, ...]  # exponent multiset, ascending


@dataclass(frozen=True)
class GradingData:
    """Weight data of one junior element: the grading deg(x_j) := weights[j]
    lives in the coordinates y with x = basis . y; column j of basis spans
    the eigenspace matching weights[j]."""

    order: int
    weights: tuple[int, ...]
    basis: CycMatrix
    basis_is_standard: bool


@dataclass(frozen=True)
class SweepEntry:
    twist: int
    junior_count: int
    junior_class_representatives: tuple[int, ...]
    junior_element_ids: tuple[int, ...]
    junior_subgroup_order: int
    torsion_factors: tuple[int, ...]


# ---------------------------------------------------------------------------
# multiplicities and ages


def _multiplicities_from_traces(traces, r: int, dim: int) -> tuple[int, ...]:
    """m_j = (1/r) sum_k tr(g^k) zeta_r^(-jk); exact, must be integral."""
    roots = [zeta(r, k) for k in range(r)]
    out = []
    for j in range(r):
        acc = rational(0)
        for k in range(r):
            tk = traces[k]
            if not tk.is_zero:
                acc = acc + tk * roots[(-j * k) % r]
        value = acc.rational_value
        if value is None:
            raise ArithmeticError(
                f"eigenvalue multiplicity m_{j} is not rational: {acc.render()}"
            )
        m_j = value / r
        if m_j.denominator != 1 or m_j < 0:
            raise ArithmeticError(
                f"eigenvalue multiplicity m_{j} = {m_j} is not a nonnegative integer"
            )
        out.append(int(m_j))
    if sum(out) != dim:
        raise ArithmeticError(
            f"multiplicities {out} do not sum to the dimension {dim}"
        )
    return tuple(out)


def _power_traces(g: CycMatrix, max_order: int):
    """(order r, [tr(g^0), ..., tr(g^(r-1))]); errors out past max_order."""
    ident = CycMatrix.identity(g.dim, g.conductor)
    traces = []
    p = ident
    k = 0
    while True:
        traces.append(p.trace())
        p = g @ p
        k += 1
        if p == ident:
            return k, traces
        if k >= max_order:
            raise ValueError(
                f"no finite order up to {max_order}; the matrix may have "
                "infinite order"
            )


def eigen_multiplicities(
    g: CycMatrix, order: Optional[int] = None, max_order: int = 10000
) -> tuple[int, ...]:
    """Multiplicity vector (m_0, ..., m_{r-1}) where m_j counts the
    eigenvalue zeta_r^j and r is the order of g (verified by powering)."""
    r, traces = _power_traces(g, max_order)
    if order is not None and order != r:
        raise ValueError(f"stated order {order} but computed order {r}")
    return _multiplicities_from_traces(traces, r, g.dim)


def _age_from_multiplicities(m, twist: GaloisTwist) -> Fraction:
    r = len(m)
    t_inv = twist.inverse_mod(r)
    return Fraction(sum(((t_inv * j) % r) * mj for j, mj in enumerate(m)), r)


def _weights_from_multiplicities(m, twist: GaloisTwist) -> tuple[int, ...]:
    r = len(m)
    t_inv = twist.inverse_mod(r)
    out = []
    for j, mj in enumerate(m):
        out.extend([(t_inv * j) % r] * mj)
    return tuple(sorted(out))


def age(g: CycMatrix, twist: GaloisTwist = IDENTITY_TWIST) -> Fraction:
    return _age_from_multiplicities(eigen_multiplicities(g), twist)


def is_reflection(g: CycMatrix) -> bool:
    """rank(g - id) = 1; the classical pseudo-reflection condition."""
    return (g - CycMatrix.identity(g.dim, g.conductor)).rank() == 1


# ---------------------------------------------------------------------------
# per-group records


def _group_multiplicities(G: FiniteMatrixGroup):
    cached = G.cache.get("eigen_multiplicities")
    if cached is None:
        result = []
        for x in G.carrier_labels():
            r = G.element_orders[x]
            traces = []
            p = G.identity_label
            for _ in range(r):
                traces.append(G.traces[p])
                p = G.mul(x, p)
            result.append(_multiplicities_from_traces(traces, r, G.dim))
        cached = tuple(result)
        G.cache["eigen_multiplicities"] = cached
    return cached


def _group_reflection_flags(G: FiniteMatrixGroup):
    cached = G.cache.get("reflection_flags")
    if cached is None:
        cached = tuple(is_reflection(G.matrix(x)) for x in G.carrier_labels())
        G.cache["reflection_flags"] = cached
    return cached


def age_records(
    G: FiniteMatrixGroup, twist: GaloisTwist = IDENTITY_TWIST
) -> tuple[AgeRecord, ...]:
    """One AgeRecord per element id.  Multiplicities are twist-independent
    and cached on the group; only the exponent bookkeeping varies with t."""
    mults = _group_multiplicities(G)
    reflections = _group_reflection_flags(G)
    records = []
    for x in G.carrier_labels():
        m = mults[x]
        r = len(m)
        a = _age_from_multiplicities(m, twist)
        if G.is_special_linear and a.denominator != 1:
            raise ConsistencyError(
                f"non-integral age {a} for element {x} of a determinant-one group"
            )
        refl = reflections[x]
        if refl != (r > 1 and m[0] == G.dim - 1):
            raise ConsistencyError(
                f"rank test and multiplicity test disagree on reflection {x}"
            )
        records.append(
            AgeRecord(
                element_id=x,
                order=r,
                multiplicities=m,
                age=a,
                is_junior=(a == 1),
                is_reflection=refl,
                weights=_weights_from_multiplicities(m, twist),
            )
        )
    return tuple(records)


def junior_elements(
    G: FiniteMatrixGroup, twist: GaloisTwist = IDENTITY_TWIST
) -> tuple[int, ...]:
    records = age_records(G, twist)
    return tuple(x for x in G.carrier_labels() if records[x].is_junior)


def junior_gradings(
    G: FiniteMatrixGroup, twist: GaloisTwist = IDENTITY_TWIST
) -> tuple[tuple[int, "GradingData"], ...]:
    """(representative id, GradingData) for every junior conjugacy class."""
    mults = _group_multiplicities(G)
    _, reps = junior_classes(G, twist)
    return tuple(
        (x, valuation_weights(G.matrix(x), twist, multiplicities=mults[x]))
        for x in reps
    )


def junior_classes(
    G: FiniteMatrixGroup, twist: GaloisTwist = IDENTITY_TWIST
) -> tuple[int, tuple[int, ...]]:
    """(m, class representatives): the conjugacy classes of age exactly 1.
    Requires determinant one throughout; verifies age constancy per class."""
    if not G.is_special_linear:
        raise NotSpecialLinearError(
            "junior classes are defined for determinant-one groups only"
        )
    records = age_records(G, twist)
    reps = []
    for cls in G.conjugacy_classes():
        ages = {records[x].age for x in cls}
        if len(ages) != 1:
            raise ConsistencyError(
                f"age is not constant on the conjugacy class of {cls[0]}"
            )
        if records[cls[0]].is_junior:
            reps.append(cls[0])
    return len(reps), tuple(reps)


# ---------------------------------------------------------------------------
# valuation weights


def valuation_weights(
    g: CycMatrix,
    twist: GaloisTwist = IDENTITY_TWIST,
    multiplicities: Optional[tuple[int, ...]] = None,
) -> GradingData:
    """Weight vector and eigenbasis of a junior element.

    Diagonal matrices keep the standard basis and variable order, so the
    weights read straight off the diagonal.  Otherwise eigenvectors are
    computed per eigenvalue by exact elimination, grouped by ascending
    weight.
    """
    m = eigen_multiplicities(g) if multiplicities is None else multiplicities
    r = len(m)
    a = _age_from_multiplicities(m, twist)
    if a != 1:
        raise ValueError(f"element has age {a}, not junior under twist {twist.t}")
    t_inv = twist.inverse_mod(r)

    if g.is_diagonal():
        weights = []
        for i in range(g.dim):
            root = as_root_of_unity(g.rows[i][i])
            if root is None:
                raise ArithmeticError("diagonal entry is not a root of unity")
            sub_r, k = root
            j = k * (r // sub_r) % r
            weights.append((t_inv * j) % r)
        weights = tuple(weights)
        basis = CycMatrix.identity(g.dim, g.conductor)
        standard = True
    else:
        conductor = g.conductor * r // math.gcd(g.conductor, r)
        lifted = g.lift(conductor)
        ident = CycMatrix.identity(g.dim, conductor)
        columns = []
        weights = []
        for w in range(r):
            j = (twist.t * w) % r
            if m[j] == 0:
                continue
            lam = zeta(r, j).embed(conductor)
            shifted = CycMatrix(
                g.dim,
                conductor,
                tuple(
                    tuple(
                        lifted.rows[p][q] - (lam if p == q else rational(0))
                        for q in range(g.dim)
                    )
                    for p in range(g.dim)
                ),
            )
            eigenvectors = kernel_basis(shifted)
            if len(eigenvectors) != m[j]:
                raise ConsistencyError(
                    f"eigenspace for exponent {j} has dimension "
                    f"{len(eigenvectors)}, expected {m[j]}"
                )
            columns.extend(eigenvectors)
            weights.extend([w] * m[j])
        weights = tuple(weights)
        basis = CycMatrix.from_rows(
            [[columns[c][p] for c in range(g.dim)] for p in range(g.dim)]
        )
        if basis.rank() != g.dim:
            raise ConsistencyError("eigenbasis is not invertible")
        standard = False
    if math.gcd(*weights) != 1:
        raise ConsistencyError(
            f"junior weights {weights} have a common factor"
        )
    return GradingData(order=r, weights=weights, basis=basis, basis_is_standard=standard)


# ---------------------------------------------------------------------------
# Galois sweep


def galois_sweep(G: FiniteMatrixGroup) -> tuple[SweepEntry, ...]:
    """Recompute the junior data under every root choice zeta -> zeta^t.

    Twists congruent modulo the group exponent act identically on all
    element orders, so only one representative per residue is computed.
    The junior element sets may genuinely differ between twists; the class
    count and the invariant factors of Ab(G/H) must not, and a violation is
    raised as a ConsistencyError.
    """
    if not G.is_special_linear:
        raise NotSpecialLinearError("the sweep is defined for determinant-one groups")
    modulus = G.working_conductor
    entries = []
    seen = set()
    for t in range(1, modulus + 1):
        if math.gcd(t, modulus) != 1:
            continue
        key = t % G.exponent
        if key in seen:
            continue
        seen.add(key)
        twist = GaloisTwist(t)
        count, reps = junior_classes(G, twist)
        ids = junior_elements(G, twist)
        H = subgroup_generated(G, ids)
        torsion = abelian_invariants(
            abelianization(quotient(G, H))
        ).invariant_factors
        entries.append(
            SweepEntry(
                twist=t,
                junior_count=count,
                junior_class_representatives=reps,
                junior_element_ids=ids,
                junior_subgroup_order=len(H),
                torsion_factors=torsion,
            )
        )
    counts = {e.junior_count for e in entries}
    torsions = {e.torsion_factors for e in entries}
    if len(counts) != 1 or len(torsions) != 1:
        raise ConsistencyError(
            "junior class count or torsion factors vary with the root choice: "
            + "; ".join(
                f"t={e.twist}: m={e.junior_count}, torsion={list(e.torsion_factors)}"
                for e in entries
            )
        )
    return tuple(entries)
