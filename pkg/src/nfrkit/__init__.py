"""nfrkit: elicit and track non-functional requirements over use-case models.

Model functional requirements as use cases in a small textual DSL, attach
numbered elicitation questions, run stakeholder sessions that record and
categorize the answers, and derive the elicitation table, the use-case by
category checklist, coverage reports and DOT diagrams.
"""

from .diagrams import (
    DiagramOptions,
    export_categorized_diagram,
    export_questions_diagram,
)
from .dsl import ParseResult, parse_model, serialize_model
from .model import (
    Diagnostic,
    NfrQuestion,
    UseCaseModel,
    auto_number_questions,
    integrity_errors,
    validate_model,
)
from .reports import (
    ChecklistMatrix,
    CoverageReport,
    ElicitationRow,
    checklist_matrix,
    coverage_report,
    elicitation_table,
    render,
)
from .session import (
    DEFAULT_CATEGORIES,
    ElicitationError,
    ElicitedNfr,
    Session,
    Taxonomy,
    load_session,
    pending_questions,
    record_answer,
    retract_answer,
    revise_answer,
    save_session,
    start_session,
)
from .suggest import DEFAULT_KEYWORDS, suggest_category

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_CATEGORIES",
    "DEFAULT_KEYWORDS",
    "ChecklistMatrix",
    "CoverageReport",
    "Diagnostic",
    "DiagramOptions",
    "ElicitationError",
    "ElicitationRow",
    "ElicitedNfr",
    "NfrQuestion",
    "ParseResult",
    "Session",
    "Taxonomy",
    "UseCaseModel",
    "auto_number_questions",
    "checklist_matrix",
    "coverage_report",
    "elicitation_table",
    "export_categorized_diagram",
    "export_questions_diagram",
    "integrity_errors",
    "load_session",
    "parse_model",
    "pending_questions",
    "record_answer",
    "render",
    "retract_answer",
    "revise_answer",
    "save_session",
    "serialize_model",
    "start_session",
    "suggest_category",
    "validate_model",
]
