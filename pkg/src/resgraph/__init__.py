"""Exact calculations on resolution dual graphs of surface singularities.

The package solves for discrepancies of a minimal resolution (with an
optional reduced boundary), tracks them through blow-ups, computes the
numerical side of one degree-p step of the index 1 cover, and enumerates
negative definite weighted trees up to isomorphism.
"""

from .blowup import BlowUpCenter, BoundaryPoint, EdgePoint, FreePoint, InvalidCenterError, blow_up, parse_center, verify_transport
from .classify import (
    ClassificationError,
    Shape,
    ShapeResult,
    canonical_form,
    continuant,
    dynkin_detect,
    enumerate_graphs,
    enumerate_profiles,
    shape,
)
from .cover import (
    CaseKind,
    ComponentCase,
    CoverConsistencyError,
    CoverError,
    CoverReport,
    ResidueVector,
    TameIndexError,
    UnhandledCenterError,
    Verdict,
    classify_center_case,
    classify_component,
    cover_step,
    cover_verdict,
    residues_mod_p,
)
from .discrepancy import (
    AnalysisError,
    Cycle,
    CycleNumbers,
    DiscrepancyProfile,
    NotLogTerminalError,
    NotNegativeDefiniteError,
    PairClass,
    RationalityCheck,
    classify_pair,
    cycle_numbers,
    discrepancies,
    fundamental_cycle,
    rationality_check,
)
from .document import GraphDocument, ParseError, load, parse, parse_document, serialize, serialize_document
from .graph import GraphError, ResolutionGraph, ValidationReport, Vertex, intersection_matrix, validate

__version__ = "0.1.0"
