"""Graph groups of H_1-spanning links in closed 3-manifolds, computed exactly."""
from .enumeration import DEFAULT_DEGREE_LIMIT, GeneratorBasis, ResourceLimitError, enumerate_basis
from .graphs import (
    STAR,
    CanonicalGraph,
    ColoredGraph,
    DiagramVector,
    GraphError,
    LegLabel,
    canonicalize,
    expand,
    format_graph,
    glue_legs,
    parse_graph,
)
from .homology import ManifoldModel, ModelError, closed_rational_model, load_model, parse_model
from .linalg import IntegerMatrix, hermite_normal_form, smith_normal_form
from .moves import Move, apply_move_to_model, induced_matrix, verify_isomorphism
from .quotient import GradedQuotient, group_quotient, present_quotient, reduce_to_normal_form
from .relations import RelationSet, bracket_closed, bracket_open
from .verification import CorollaryReport, run_suite

__version__ = "0.1.0"
