"""Decision procedures for finitely generated matrix semigroups in SL(2,Z)."""

from .algebra import (
    Mat2,
    SignedWord,
    Generator,
    GeneratorSet,
    AlgebraError,
    IDENTITY,
    S,
    R,
    T,
    reduce,
    mul,
    inv,
    evaluate,
    decompose,
)
from .decisions import (
    Count,
    Verdict,
    count_factorizations,
    finite_freeness,
    identity_in_semigroup,
    is_free,
    is_recurrent,
    membership,
)
from .encodings import (
    DfaSpec,
    Fixture,
    alpha,
    closed_form,
    encode_dfa_intersection,
    encode_equal_subset_sum,
    encode_subset_sum,
    f_matrix,
    recurrent_without_identity_fixture,
)

__all__ = [
    "Mat2",
    "SignedWord",
    "Generator",
    "GeneratorSet",
    "AlgebraError",
    "IDENTITY",
    "S",
    "R",
    "T",
    "reduce",
    "mul",
    "inv",
    "evaluate",
    "decompose",
    "Count",
    "Verdict",
    "count_factorizations",
    "finite_freeness",
    "identity_in_semigroup",
    "is_free",
    "is_recurrent",
    "membership",
    "DfaSpec",
    "Fixture",
    "alpha",
    "closed_form",
    "encode_dfa_intersection",
    "encode_equal_subset_sum",
    "encode_subset_sum",
    "f_matrix",
    "recurrent_without_identity_fixture",
]
