"""Generic identifiability of dynamical networks with partial excitation and measurement.

A network is a directed graph whose edges carry scalar transfer
coefficients, some known, some unknown; a subset of nodes is excited and a
subset measured.  This package decides whether the unknown coefficients
are generically recoverable from the excitation-to-measurement response,
by exact randomized rank and determinant tests, by a separability-aware
decoupling construction, and by signed counting of excitation-to-
measurement walk collections, cross-checked against a truncated symbolic
determinant.
"""

from .netmodel import (
    Edge,
    NetworkModel,
    SeparableBlocks,
    ValidationError,
    SelfLoopError,
    DuplicateEdgeError,
    IndexOutOfRangeError,
    DuplicateExcitationError,
    DuplicateMeasurementError,
    NotSeparableError,
    NotSquareError,
    NetworkFormatError,
    validate,
    separate,
    is_separable,
    decouple,
    network_from_dict,
    network_to_dict,
    load_network,
    save_network,
)
from .numeric import (
    PRIME,
    Evaluation,
    SingularMatrixError,
    AllSamplesSingularError,
    random_field_evaluation,
    random_float_evaluation,
    network_matrix,
    closed_loop,
    neumann_series,
    inf_norm,
    sensitivity_matrix,
    rank_field,
    det_field,
    kernel_field,
    generic_rank,
    generic_det_nonzero,
)
from .identifiability import (
    IDENTIFIABLE,
    NOT_IDENTIFIABLE,
    INCONCLUSIVE,
    LOCAL_GENERIC,
    DECOUPLED_GENERIC,
    GLOBAL_SEPARABLE,
    NoUnknownEdgesError,
    Verdict,
    local_identifiability,
    decoupled_identifiability,
    separable_global_identifiability,
    check_decoupling_equivalence,
)
from .combinatorial import (
    Monomial,
    Walk,
    Assignment,
    PathCollection,
    RepetitionTable,
    NotBijectiveError,
    monomial_of,
    monomial_degree,
    format_monomial,
    walk_nodes,
    format_walk,
    sign_of,
    collection_assignment,
    collection_monomial,
    collection_sign,
    enumerate_walks,
    repetition_table,
    exhaustive_degree_bound,
    verdict_from_table,
    combinatorial_verdict,
    necessary_condition_any_topology,
)
from .oracle import (
    Poly,
    TooLargeError,
    symbolic_closed_loop,
    symbolic_det,
    coefficient,
    eval_poly,
    terms_sorted,
)
from .generate import GenerationError, random_network

__version__ = "0.1.0"
