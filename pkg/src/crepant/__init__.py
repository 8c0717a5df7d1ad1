"""Exact class group computations for minimal models of linear quotient
singularities, starting from generators of a finite matrix group over a
cyclotomic field."""

from .cyclo import (
    CyclotomicNumber,
    CycloParseError,
    as_root_of_unity,
    parse_cyclotomic,
    rational,
    zeta,
)
from .matgrp import (
    AbelianDecomposition,
    AbelianStructure,
    CycMatrix,
    FiniteMatrixGroup,
    GroupTooLargeError,
    SingularMatrixError,
    SubgroupHandle,
    abelian_decomposition,
    abelian_invariants,
    abelianization,
    close_group,
    commutator_subgroup,
    conjugacy_classes,
    quotient,
    subgroup_generated,
)
from .mckay import (
    AgeRecord,
    ConsistencyError,
    GaloisTwist,
    GradingData,
    NotSpecialLinearError,
    SweepEntry,
    age,
    age_records,
    eigen_multiplicities,
    galois_sweep,
    is_reflection,
    junior_classes,
    junior_elements,
    junior_gradings,
    valuation_weights,
)
from .classgroup import (
    ClassGroupReport,
    class_group_of_quotient,
    freeness_criterion,
    junior_subgroup,
    reflection_subgroup,
    terminalization_class_group,
)
from .invariants import (
    CharacterOfAb,
    SparsePolynomial,
    act,
    characters_of,
    check_congruence_lemma,
    check_junior_ring_membership,
    graded_degree,
    monomial_valuation,
    monomials_of_degree,
    relative_invariant,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianDecomposition",
    "AbelianStructure",
    "AgeRecord",
    "CharacterOfAb",
    "ClassGroupReport",
    "ConsistencyError",
    "CycMatrix",
    "CycloParseError",
    "CyclotomicNumber",
    "FiniteMatrixGroup",
    "GaloisTwist",
    "GradingData",
    "GroupTooLargeError",
    "NotSpecialLinearError",
    "SingularMatrixError",
    "SparsePolynomial",
    "SubgroupHandle",
    "SweepEntry",
    "abelian_decomposition",
    "abelian_invariants",
    "abelianization",
    "act",
    "age",
    "age_records",
    "as_root_of_unity",
    "characters_of",
    "check_congruence_lemma",
    "check_junior_ring_membership",
    "class_group_of_quotient",
    "close_group",
    "commutator_subgroup",
    "conjugacy_classes",
    "eigen_multiplicities",
    "freeness_criterion",
    "galois_sweep",
    "graded_degree",
    "is_reflection",
    "junior_classes",
    "junior_elements",
    "junior_gradings",
    "junior_subgroup",
    "monomial_valuation",
    "monomials_of_degree",
    "parse_cyclotomic",
    "quotient",
    "rational",
    "reflection_subgroup",
    "relative_invariant",
    "subgroup_generated",
    "terminalization_class_group",
    "valuation_weights",
    "zeta",
    "__version__",
]
