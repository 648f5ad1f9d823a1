"""Report derivations over a session: the elicitation table, the checklist
matrix, and a coverage summary, each renderable as CSV, Markdown, or plain
data structures (JSON).

Rendering is deterministic byte for byte: CSV uses RFC 4180 quoting with LF
endings, Markdown uses pipe tables with "\u2713" for checked cells.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

from .session import Session

FORMATS = ("csv", "markdown", "structured")

CHECK_MARK = "\u2713"
CHECKLIST_CORNER = "NFR \u2192 FR \u2193"


@dataclass(frozen=True)
class ElicitationRow:
    """One answered question: the row shape of the elicitation table."""

    actor: str
    use_case: str
    question_no: str
    question: str
    answer: str
    category: str


@dataclass(frozen=True)
class ChecklistMatrix:
    """Boolean grid: which categories have an elicited NFR per use case.

    Rows follow model declaration order, columns taxonomy order; a cell is
    true iff at least one answered question on that use case carries that
    category.
    """

    rows: tuple[str, ...]
    columns: tuple[str, ...]
    cells: tuple[tuple[bool, ...], ...]

    def cell(self, use_case: str, category: str) -> bool:
        return self.cells[self.rows.index(use_case)][self.columns.index(category)]

    @property
    def checked_count(self) -> int:
        return sum(cell for row in self.cells for cell in row)


@dataclass(frozen=True)
class CoverageReport:
    """Where elicitation is still thin: questionless FRs, open questions,
    untouched categories, and how many distinct categories each FR has."""

    frs_without_questions: tuple[str, ...]
    unanswered_questions: tuple[str, ...]
    unused_categories: tuple[str, ...]
    per_fr_category_count: dict[str, int]


def elicitation_table(session: Session) -> list[ElicitationRow]:
    """Rows for every answered question, sorted by numeric question id.

    The sort is numeric (NFRQ10 after NFRQ9), not lexicographic.
    """
    rows = []
    for answer in session.answers:
        question = session.model.question_by_id(answer.question_id)
        assert question is not None  # session invariant
        rows.append(
            ElicitationRow(
                actor=answer.actor,
                use_case=question.use_case,
                question_no=question.id,
                question=question.text,
                answer=answer.answer,
                category=answer.category,
            )
        )
    rows.sort(key=lambda r: int(r.question_no[4:]))
    return rows


def checklist_matrix(session: Session) -> ChecklistMatrix:
    """Derive the use-case x category checklist from a session."""
    use_case_of = {q.id: q.use_case for q in session.model.questions}
    checked: set[tuple[str, str]] = set()
    for answer in session.answers:
        checked.add((use_case_of[answer.question_id], answer.category))
    columns = session.taxonomy.categories
    return ChecklistMatrix(
        rows=session.model.use_cases,
        columns=columns,
        cells=tuple(
            tuple((uc, cat) in checked for cat in columns)
            for uc in session.model.use_cases
        ),
    )


def coverage_report(session: Session) -> CoverageReport:
    """Summarize gaps; lists follow model / taxonomy order."""
    questioned = {q.use_case for q in session.model.questions}
    answered = {a.question_id for a in session.answers}
    used_categories = {a.category for a in session.answers}

    per_fr: dict[str, set[str]] = {uc: set() for uc in session.model.use_cases}
    use_case_of = {q.id: q.use_case for q in session.model.questions}
    for answer in session.answers:
        per_fr[use_case_of[answer.question_id]].add(answer.category)

    return CoverageReport(
        frs_without_questions=tuple(
            uc for uc in session.model.use_cases if uc not in questioned
        ),
        unanswered_questions=tuple(
            q.id for q in session.model.questions if q.id not in answered
        ),
        unused_categories=tuple(
            c for c in session.taxonomy.categories if c not in used_categories
        ),
        per_fr_category_count={
            uc: len(per_fr[uc]) for uc in session.model.use_cases
        },
    )


# --- rendering ------------------------------------------------------------------


def render(artifact, format: str = "markdown") -> str:
    """Render a report artifact to text in the requested format.

    ``format`` is one of ``csv``, ``markdown``, ``structured`` (JSON). The
    artifact kind is detected from its type; elicitation tables are passed as
    the row list :func:`elicitation_table` returns.
    """
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    if isinstance(artifact, ChecklistMatrix):
        return _render_checklist(artifact, format)
    if isinstance(artifact, CoverageReport):
        return _render_coverage(artifact, format)
    if isinstance(artifact, list) and all(
        isinstance(r, ElicitationRow) for r in artifact
    ):
        return _render_table(artifact, format)
    raise TypeError(f"cannot render {type(artifact).__name__}")


def _csv_text(rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(doc) -> str:
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def _md_cell(value: str) -> str:
    return value.replace("|", "\\|").replace("\n", " ")


def _md_table(header: list[str], rows: list[list[str]]) -> str:
    def line(cells: list[str]) -> str:
        return "| " + " | ".join(_md_cell(c) for c in cells) + " |"

    out = [line(header), "| " + " | ".join(["---"] * len(header)) + " |"]
    out.extend(line(r) for r in rows)
    return "\n".join(out) + "\n"


_TABLE_KEYS = ("actor", "use_case", "question_no", "question", "answer", "category")
_TABLE_HEADER = ["Actor", "Use case", "Question no", "Question", "Answer", "Category"]


def _render_table(rows: list[ElicitationRow], format: str) -> str:
    cells = [
        [r.actor, r.use_case, r.question_no, r.question, r.answer, r.category]
        for r in rows
    ]
    if format == "csv":
        return _csv_text([list(_TABLE_KEYS)] + cells)
    if format == "markdown":
        return _md_table(_TABLE_HEADER, cells)
    return _json_text([dict(zip(_TABLE_KEYS, row)) for row in cells])


def _render_checklist(matrix: ChecklistMatrix, format: str) -> str:
    if format == "structured":
        return _json_text(
            {
                "rows": list(matrix.rows),
                "columns": list(matrix.columns),
                "cells": [list(row) for row in matrix.cells],
            }
        )
    mark = "x" if format == "csv" else CHECK_MARK
    header = [CHECKLIST_CORNER] + list(matrix.columns)
    body = [
        [uc] + [mark if cell else "" for cell in row]
        for uc, row in zip(matrix.rows, matrix.cells)
    ]
    if format == "csv":
        return _csv_text([header] + body)
    return _md_table(header, body)


def _render_coverage(report: CoverageReport, format: str) -> str:
    if format == "structured":
        return _json_text(
            {
                "frs_without_questions": list(report.frs_without_questions),
                "unanswered_questions": list(report.unanswered_questions),
                "unused_categories": list(report.unused_categories),
                "per_fr_category_count": dict(report.per_fr_category_count),
            }
        )
    if format == "csv":
        rows = [["kind", "name", "value"]]
        rows += [["fr-without-questions", uc, ""] for uc in report.frs_without_questions]
        rows += [["unanswered-question", q, ""] for q in report.unanswered_questions]
        rows += [["unused-category", c, ""] for c in report.unused_categories]
        rows += [
            ["fr-category-count", uc, str(n)]
            for uc, n in report.per_fr_category_count.items()
        ]
        return _csv_text(rows)

    def bullet_list(items: tuple[str, ...]) -> list[str]:
        return [f"- {i}" for i in items] if items else ["(none)"]

    out = ["## FRs without questions", ""]
    out += bullet_list(report.frs_without_questions)
    out += ["", "## Unanswered questions", ""]
    out += bullet_list(report.unanswered_questions)
    out += ["", "## Unused categories", ""]
    out += bullet_list(report.unused_categories)
    out += ["", "## Categories elicited per FR", ""]
    table = _md_table(
        ["Use case", "Categories"],
        [[uc, str(n)] for uc, n in report.per_fr_category_count.items()],
    )
    return "\n".join(out) + "\n" + table
