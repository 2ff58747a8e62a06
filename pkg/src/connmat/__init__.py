"""Exact connectivity matrix of set partitions, its pi-elimination and reliability bridge."""

__version__ = "0.1.0"

from .algebra import AlgebraVector, ConnectivityNumber, connectivity_number, pi, vec_add, vec_mul
from .conmatrix import (
    ConnMatrix,
    EliminationMatrix,
    VerificationReport,
    build_connectivity_matrix,
    build_elimination_matrix,
    determinant_alpha,
    determinant_direct,
    formula_value,
    triangularize,
    verify_theorem,
)
from .errors import ConnMatError, ConsistencyError, DomainError, OrderError, ParseError, SizeLimitError
from .partitions import (
    CoherentOrder,
    ConjugationClass,
    Partition,
    bell_number,
    coherent_order,
    conjugate,
    conjugation_classes,
    enumerate_partitions,
    is_trivial,
    leq,
    num_blocks,
    product,
)
from .reliability import (
    Multigraph,
    Polynomial,
    alpha_via_reliability,
    complete_graph,
    leading_term_complete,
    mgr,
    pathset_counts,
    quotient_graph,
    reliability_polynomial,
)
