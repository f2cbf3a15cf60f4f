"""Inversions of digraphs: verification, exact search, constructions and gadgets."""

from .certificate import Certificate, certify, check_property
from .connectivity import (
    CutWitness,
    MixedGraph,
    Verdict,
    eulerian_orientation,
    is_eulerian,
    is_k_arc_strong,
    is_k_strong,
)
from .core import (
    Digraph,
    Graph,
    InversionFamily,
    InvlabError,
    PreconditionError,
    Tournament,
    VectorLabeling,
    VerificationError,
    apply_vector_labeling,
    converse,
    invert,
    invert_family,
    random_tournament,
    rotative_tournament,
    transitive_tournament,
)
from .exact import SearchBudget, SearchResult, census_m_k, cut_cover_number, sinv_exact
from .formats import ParseError, emit_dg, emit_dot, emit_trn, parse_dg, parse_trn
from .median import VertexOrder, feedback_order

__version__ = "0.1.0"
