"""Balanced group presentations under stable Andrews-Curtis moves."""

from .certificate import (
    Certificate,
    ConsequenceCertificate,
    Term,
    parse_certificate,
    replay,
    serialize_certificate,
    serialize_consequence,
    verify_certificate,
    verify_consequence,
)
from .oracle import (
    FiniteTarget,
    coset_enumerate,
    count_homomorphisms,
    find_nontrivial_quotient,
    triviality_verdict,
)
from .presentation import (
    Concat,
    Conjugate,
    Destabilize,
    Invert,
    Presentation,
    Stabilize,
    abel_det,
    abelianization,
    apply_move,
    apply_moves,
    canonicalize,
    fig5_presentation,
    format_presentation,
    gen_gpn,
    gen_trivial,
    inverse_move,
    neighbors,
    parse_presentation,
)
from .search import SearchConfig, scramble, search_trivialization
from .words import (
    canonical_cyclic_form,
    concat_words,
    conjugate_word,
    cyclic_reduce,
    exponent_sums,
    format_word,
    free_reduce,
    invert_word,
    parse_word,
)

__version__ = "0.1.0"
