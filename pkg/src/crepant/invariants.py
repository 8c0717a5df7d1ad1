"""Polynomial invariants of finite matrix groups.

Sparse multivariate polynomials over cyclotomic fields, the contragredient
group action (g.f)(v) = f(g^-1 v), valuations attached to graded one-parameter
subgroups, characters of the abelianization, and a twisted averaging operator
that produces relative invariants one character at a time.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .cyclo import CyclotomicNumber, as_root_of_unity, rational, zeta
from .matgrp import (
    AbelianDecomposition,
    CycMatrix,
    FiniteMatrixGroup,
    SubgroupHandle,
)
from .mckay import ConsistencyError, GaloisTwist, GradingData, IDENTITY_TWIST

Scalar = Union[CyclotomicNumber, int, Fraction]


def _coerce(value: Scalar) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value
    return rational(value)


class SparsePolynomial:
    """Polynomial in x1..xn stored as {exponent tuple: nonzero coefficient}."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict[tuple[int, ...], CyclotomicNumber]):
        if nvars < 1:
            raise ValueError("polynomials need at least one variable")
        clean: dict[tuple[int, ...], CyclotomicNumber] = {}
        for exps, coeff in terms.items():
            exps = tuple(exps)
            if len(exps) != nvars or any(a < 0 for a in exps):
                raise ValueError(f"bad exponent tuple {exps} for {nvars} variables")
            c = _coerce(coeff)
            if not c.is_zero:
                clean[exps] = c
        self.nvars = nvars
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePolynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value: Scalar) -> "SparsePolynomial":
        return cls(nvars, {(0,) * nvars: _coerce(value)})

    @classmethod
    def monomial(
        cls, nvars: int, exps: Sequence[int], coeff: Scalar = 1
    ) -> "SparsePolynomial":
        return cls(nvars, {tuple(exps): _coerce(coeff)})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "SparsePolynomial":
        """The variable x_{index+1} (index is 0-based)."""
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range")
        exps = tuple(1 if j == index else 0 for j in range(nvars))
        return cls(nvars, {exps: rational(1)})

    # -- basic queries -----------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: Sequence[int]) -> CyclotomicNumber:
        return self.terms.get(tuple(exps), rational(0))

    def total_degree(self) -> int:
        """Largest total degree among terms; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degrees = {sum(e) for e in self.terms}
        return len(degrees) <= 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- arithmetic --------------------------------------------------------

    def _check_compatible(self, other: "SparsePolynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        self._check_compatible(other)
        acc = dict(self.terms)
        for exps, coeff in other.terms.items():
            if exps in acc:
                acc[exps] = acc[exps] + coeff
            else:
                acc[exps] = coeff
        return SparsePolynomial(self.nvars, acc)

    def __sub__(self, other: "SparsePolynomial") -> "SparsePolynomial":
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        return self + (-other)

    def __neg__(self) -> "SparsePolynomial":
        return SparsePolynomial(
            self.nvars, {e: -c for e, c in self.terms.items()}
        )

    def __mul__(self, other: Union["SparsePolynomial", Scalar]) -> "SparsePolynomial":
        if isinstance(other, (CyclotomicNumber, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, SparsePolynomial):
            return NotImplemented
        self._check_compatible(other)
        acc: dict[tuple[int, ...], CyclotomicNumber] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                prod = ca * cb
                if key in acc:
                    acc[key] = acc[key] + prod
                else:
                    acc[key] = prod
        return SparsePolynomial(self.nvars, acc)

    def __rmul__(self, other: Scalar) -> "SparsePolynomial":
        return self.scale(other)

    def scale(self, value: Scalar) -> "SparsePolynomial":
        c = _coerce(value)
        if c.is_zero:
            return SparsePolynomial.zero(self.nvars)
        return SparsePolynomial(
            self.nvars, {e: coeff * c for e, coeff in self.terms.items()}
        )

    def __pow__(self, exponent: int) -> "SparsePolynomial":
        if exponent < 0:
            raise ValueError("negative polynomial powers are not defined")
        out = SparsePolynomial.constant(self.nvars, 1)
        base = self
        k = exponent
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    # -- substitution and rendering ----------------------------------------

    def substitute(self, forms: Sequence["SparsePolynomial"]) -> "SparsePolynomial":
        """Evaluate at x_j = forms[j]; all forms share one variable count."""
        if len(forms) != self.nvars:
            raise ValueError(
                f"need {self.nvars} substitution forms, got {len(forms)}"
            )
        if not forms:
            raise ValueError("empty substitution")
        nv = forms[0].nvars
        for f in forms:
            if f.nvars != nv:
                raise ValueError("substitution forms disagree on variable count")
        powers: list[list[SparsePolynomial]] = [
            [SparsePolynomial.constant(nv, 1)] for _ in range(self.nvars)
        ]

        def power_of(j: int, a: int) -> SparsePolynomial:
            cache = powers[j]
            while len(cache) <= a:
                cache.append(cache[-1] * forms[j])
            return cache[a]

        out = SparsePolynomial.zero(nv)
        for exps in sorted(self.terms):
            piece = SparsePolynomial.constant(nv, self.terms[exps])
            for j, a in enumerate(exps):
                if a:
                    piece = piece * power_of(j, a)
            out = out + piece
        return out

    def render(self) -> str:
        """Terms like c*x1^a1*x3 joined by +, constants and unit coefficients
        kept minimal; composite coefficients are parenthesized."""
        if not self.terms:
            return "0"
        pieces = []
        for exps in sorted(self.terms, key=lambda e: (sum(e), tuple(-a for a in e))):
            coeff = self.terms[exps]
            factors = []
            for j, a in enumerate(exps):
                if a == 1:
                    factors.append(f"x{j + 1}")
                elif a > 1:
                    factors.append(f"x{j + 1}^{a}")
            text = coeff.render()
            bare = text.isdigit()
            if not factors:
                pieces.append(text if bare else f"({text})")
            elif text == "1":
                pieces.append("*".join(factors))
            elif bare:
                pieces.append("*".join([text] + factors))
            else:
                pieces.append("*".join([f"({text})"] + factors))
        return "+".join(pieces)

    def __repr__(self) -> str:
        return f"SparsePolynomial({self.render()!r})"


def act(g: CycMatrix, f: SparsePolynomial) -> SparsePolynomial:
    """Action on functions: (g.f)(v) = f(g^-1 v)."""
    if g.dim != f.nvars:
        raise ValueError(f"matrix dimension {g.dim} vs {f.nvars} variables")
    return f.substitute(_linear_forms(g.inverse()))


def _linear_forms(m: CycMatrix) -> list[SparsePolynomial]:
    """Row j of m as the linear form sum_k m[j][k] * x_{k+1}."""
    n = m.dim
    return [
        SparsePolynomial(
            n,
            {
                tuple(1 if c == k else 0 for c in range(n)): m.rows[j][k]
                for k in range(n)
                if not m.rows[j][k].is_zero
            },
        )
        for j in range(n)
    ]


def _act_by_id(G: FiniteMatrixGroup, x: int, f: SparsePolynomial) -> SparsePolynomial:
    # group elements already carry their inverses, skip Gaussian elimination
    return f.substitute(_linear_forms(G.matrix(G.inv(x))))


def monomials_of_degree(nvars: int, degree: int) -> Iterator[tuple[int, ...]]:
    """Exponent tuples of the given total degree, x1 filled greedily first
    (descending lexicographic order)."""
    if nvars == 1:
        yield (degree,)
        return
    for a in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - a):
            yield (a,) + rest


# -- valuations and graded degrees ------------------------------------------


def monomial_valuation(grading: GradingData, f: SparsePolynomial) -> int:
    """min over terms of the weighted degree, after moving f into the
    eigencoordinates the grading was computed in."""
    if f.is_zero:
        raise ValueError("the zero polynomial has no valuation")
    if grading.basis.dim != f.nvars:
        raise ValueError("grading dimension does not match the polynomial")
    if grading.basis_is_standard:
        target = f
    else:
        target = f.substitute(_linear_forms(grading.basis))
        if target.is_zero:
            raise ConsistencyError("change of basis killed a nonzero polynomial")
    w = grading.weights
    return min(sum(a * wj for a, wj in zip(exps, w)) for exps in target.terms)


def _matrix_order(g: CycMatrix, cap: int = 10000) -> int:
    ident = CycMatrix.identity(g.dim, g.conductor)
    p = g
    k = 1
    while p != ident:
        p = g @ p
        k += 1
        if k > cap:
            raise ValueError(f"matrix order exceeds {cap}")
    return k


def graded_degree(
    g: CycMatrix,
    f: SparsePolynomial,
    order: Optional[int] = None,
    twist: GaloisTwist = IDENTITY_TWIST,
) -> Optional[int]:
    """Residue c mod ord(g) with g.f = zeta^(-c) f for the twisted root zeta,
    or None when f is not an eigenvector of the action of g."""
    if f.is_zero:
        return None
    gf = act(g, f)
    if set(gf.terms) != set(f.terms):
        return None
    pivot = min(f.terms)
    scalar = gf.terms[pivot] * f.terms[pivot].inverse()
    if gf != f.scale(scalar):
        return None
    root = as_root_of_unity(scalar)
    if root is None:
        return None
    r = order if order is not None else _matrix_order(g)
    r0, k0 = root
    if r % r0 != 0:
        raise ArithmeticError(
            f"eigenvalue of order {r0} for an element of order {r}"
        )
    c = (-k0 * (r // r0)) % r
    return (twist.inverse_mod(r) * c) % r


# -- characters of the abelianization ----------------------------------------


@dataclass(frozen=True)
class CharacterOfAb:
    """Character of a finite abelian group, written against the invariant
    factor basis of a decomposition: the j-th basis generator is sent to
    zeta_{d_j}^(-c_j)."""

    decomposition: AbelianDecomposition
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        factors = self.decomposition.structure.invariant_factors
        if len(self.exponents) != len(factors):
            raise ValueError("one exponent per invariant factor")
        object.__setattr__(
            self,
            "exponents",
            tuple(c % d for c, d in zip(self.exponents, factors)),
        )

    def is_trivial(self) -> bool:
        return all(c == 0 for c in self.exponents)

    def order(self) -> int:
        factors = self.decomposition.structure.invariant_factors
        out = 1
        for c, d in zip(self.exponents, factors):
            if c:
                q = d // math.gcd(c, d)
                out = out * q // math.gcd(out, q)
        return out

    def value_on_coset(self, coset: int) -> CyclotomicNumber:
        e = self.decomposition.exponents_of(coset)
        factors = self.decomposition.structure.invariant_factors
        acc = rational(1)
        for c, ej, d in zip(self.exponents, e, factors):
            k = (-c * ej) % d
            if k:
                acc = acc * zeta(d, k)
        return acc

    def value_on_element(self, G: FiniteMatrixGroup, x: int) -> CyclotomicNumber:
        """Value on the image of a group element in the abelianization."""
        ab = self.decomposition.group
        return self.value_on_coset(ab.coset_of[x])


def characters_of(decomposition: AbelianDecomposition) -> tuple[CharacterOfAb, ...]:
    """All characters, exponent tuples in ascending lexicographic order, so
    the trivial character comes first."""
    factors = decomposition.structure.invariant_factors
    return tuple(
        CharacterOfAb(decomposition, exps)
        for exps in itertools.product(*(range(d) for d in factors))
    )


# -- relative invariants ------------------------------------------------------


def relative_invariant(
    G: FiniteMatrixGroup,
    chi: CharacterOfAb,
    degree_bound: Optional[int] = None,
) -> Optional[SparsePolynomial]:
    """Smallest-degree nonzero f with g.f = chi(g mod [G,G]) f, found by
    averaging monomials with conjugate character weights.  Monomials are
    scanned by ascending total degree starting at 1, x1-heavy tuples first,
    and the first survivor is returned; None when every monomial up to the
    bound dies."""
    bound = degree_bound if degree_bound is not None else len(G)
    if bound < 1:
        raise ValueError("degree bound must be at least 1")
    ab = chi.decomposition.group
    if getattr(ab, "parent", None) is not G:
        raise ValueError("character does not belong to this group")
    n = G.dim
    weights = [
        chi.value_on_coset(ab.inv(ab.coset_of[x])) for x in range(len(G))
    ]
    forms = [_linear_forms(G.matrix(G.inv(x))) for x in range(len(G))]
    for degree in range(1, bound + 1):
        for exps in monomials_of_degree(n, degree):
            mono = SparsePolynomial.monomial(n, exps)
            acc = SparsePolynomial.zero(n)
            for x in range(len(G)):
                moved = mono.substitute(forms[x])
                acc = acc + moved.scale(weights[x])
            if acc.is_zero:
                continue
            for gid in G.generator_ids:
                expected = acc.scale(chi.value_on_element(G, gid))
                if _act_by_id(G, gid, acc) != expected:
                    raise ConsistencyError(
                        "averaged polynomial fails the defining equivariance"
                    )
            return acc
    return None


# -- lemma checks -------------------------------------------------------------


@dataclass(frozen=True)
class CongruenceRecord:
    """One junior representative's valuation against its graded residue."""

    element_id: int
    order: int
    valuation: int
    graded_residue: int


def _verify_graded(
    G: FiniteMatrixGroup, f: SparsePolynomial, twist: GaloisTwist
) -> None:
    for gid in G.generator_ids:
        c = graded_degree(
            G.matrix(gid), f, order=G.element_orders[gid], twist=twist
        )
        if c is None:
            raise ValueError(
                "polynomial is not semi-invariant under the group generators"
            )


def check_congruence_lemma(
    G: FiniteMatrixGroup,
    gradings: Sequence[tuple[int, GradingData]],
    f: SparsePolynomial,
    twist: GaloisTwist = IDENTITY_TWIST,
) -> tuple[CongruenceRecord, ...]:
    """For a semi-invariant f and each junior representative: the monomial
    valuation must agree with the graded degree modulo the element order.
    Raises ConsistencyError on any mismatch."""
    if f.is_zero:
        raise ValueError("the zero polynomial has no valuation")
    _verify_graded(G, f, twist)
    records = []
    for element_id, grading in gradings:
        v = monomial_valuation(grading, f)
        c = graded_degree(
            G.matrix(element_id), f, order=grading.order, twist=twist
        )
        if c is None:
            raise ConsistencyError(
                f"semi-invariant is not graded for element {element_id}"
            )
        if (v - c) % grading.order != 0:
            raise ConsistencyError(
                f"element {element_id}: valuation {v} != residue {c} "
                f"mod {grading.order}"
            )
        records.append(
            CongruenceRecord(
                element_id=element_id,
                order=grading.order,
                valuation=v,
                graded_residue=c,
            )
        )
    return tuple(records)


def check_junior_ring_membership(
    G: FiniteMatrixGroup,
    H: SubgroupHandle,
    gradings: Sequence[tuple[int, GradingData]],
    f: SparsePolynomial,
    twist: GaloisTwist = IDENTITY_TWIST,
) -> tuple[bool, bool]:
    """Two routes to 'f lives on the quotient by the junior span': every
    junior valuation divisible by the element order, versus invariance under
    the subgroup the juniors generate.  Returns (divisible, invariant) and
    insists the two answers agree."""
    if f.is_zero:
        raise ValueError("the zero polynomial has no valuation")
    _verify_graded(G, f, twist)
    divisible = all(
        monomial_valuation(grading, f) % grading.order == 0
        for _, grading in gradings
    )
    invariant = all(
        _act_by_id(G, x, f) == f for x in H.generator_labels()
    )
    if divisible != invariant:
        raise ConsistencyError(
            f"divisibility says {divisible} but invariance says {invariant}"
        )
    return divisible, invariant
