"""Exact quadratic form theory over Q, F_p, and iterated Laurent series towers.

The public surface: square classes and fields (fields), diagonal forms with
isotropy and Witt decomposition (forms), Brauer 2-torsion invariants
(brauer), Pfister structure and generic ascent/descent (pfister), certified
first Witt index bounds (splitting), the expression language (expr), and
the corpus and property verification layers (corpus, checks).
"""

from .errors import (
    CorpusFormatError,
    DegenerateElementError,
    DimensionError,
    FieldMismatchError,
    FormSyntaxError,
    IncompleteHypothesisError,
    InconsistentCertificateError,
    NoGenericFactorError,
    NotAnisotropicError,
    QuadFormsError,
    ResourceExceededError,
    ShapeError,
    UnknownVariableError,
    UnsupportedClassError,
    UnsupportedFieldError,
    WitnessError,
)
from .fields import (
    FieldDesc,
    Ordering,
    Place,
    SquareClassElem,
    all_orderings,
    canonical_square_class,
    hilbert_symbol,
    hilbert_symbol_int,
    legendre_symbol,
    sign_at,
    square_class,
    squarefree_part,
)
from .forms import (
    QForm,
    SearchBudget,
    WittDecomp,
    anisotropic_part,
    brute_force_isotropy,
    hyperbolic,
    is_isotropic,
    is_subform,
    isometric,
    orthogonal_sum,
    represents,
    signature,
    signed_det,
    subform_complement,
    tensor,
    witt_decompose,
    witt_index,
)
from .brauer import (
    BrauerClass2,
    clifford_invariant,
    hasse_invariant,
    is_trivial,
    schur_index,
)
from .pfister import (
    NeighborWitness,
    PfisterSpec,
    SimilarityResult,
    complementary_form,
    dim5_neighbor_test,
    expand_pfister,
    generic_ascend,
    generic_descend,
    is_excellent,
    is_neighbor,
    round_check_sampled,
    similar_to_pfister,
)
from .splitting import (
    ConditionalHypothesis,
    I1Bounds,
    MaxSplitStatus,
    RuleFiring,
    StructureHints,
    i1_bounds,
    i2_conditional,
    max_splitting_status,
    verify_witt_divisibility,
)
from .expr import (
    parse_brauer_class,
    parse_field,
    parse_form_expr,
    parse_pfister_spec,
    parse_qform,
    print_form,
    print_program,
)
from .corpus import emit_report, parse_corpus, run_corpus, run_records
from .checks import DEFAULT_SEED, run_all

__version__ = "0.1.0"
