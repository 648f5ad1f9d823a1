"""DOT export of the extended use-case notation.

Two views: the questions view attaches numbered question diamonds and
question-text boxes to their use cases with dashed edges; the categorized
view additionally hangs each recorded answer off its question and groups
answers under category nodes.

Output is plain DOT text; no renderer is invoked here. All "dotted" notation
is emitted via one style table so the dash style is switchable in one place.
Identical inputs always produce byte-identical output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import UseCaseModel
from .session import Session

LABEL_WRAP_COLUMNS = 32

# Central style table: the published notation draws question numbers in
# dotted diamonds, question text in dotted rectangles, and their links as
# dotted lines; DOT's "dashed" is used for legibility.
STYLES = {
    "actor": 'shape=plaintext',
    "use_case": 'shape=ellipse',
    "question_id": 'shape=diamond, style=dashed',
    "question_text": 'shape=box, style=dashed',
    "answer": 'shape=box, style=dashed',
    "category": 'shape=folder',
    "dashed_edge": "style=dashed",
}


@dataclass(frozen=True)
class DiagramOptions:
    """Export options. ``view`` is ``questions`` or ``categorized``; the
    categorized view needs a session, the questions view only a model."""

    view: str = "questions"
    include_unanswered: bool = True
    rankdir: str = "LR"

    def __post_init__(self) -> None:
        if self.view not in ("questions", "categorized"):
            raise ValueError(f"unknown view {self.view!r}")
        if self.rankdir not in ("LR", "TB"):
            raise ValueError(f"rankdir must be LR or TB, not {self.rankdir!r}")


def _escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def wrap_label(text: str, width: int = LABEL_WRAP_COLUMNS) -> str:
    """Word-wrap a label at ``width`` columns using DOT line breaks."""
    words = text.split()
    if not words:
        return text
    lines = [words[0]]
    for word in words[1:]:
        if len(lines[-1]) + 1 + len(word) <= width:
            lines[-1] += " " + word
        else:
            lines.append(word)
    return "\\n".join(_escape(line) for line in lines)


class _NodeIds:
    """Deterministic sanitized node ids, deduplicated by suffixing."""

    def __init__(self) -> None:
        self._taken: set[str] = set()
        self._by_key: dict[tuple[str, str], str] = {}

    def get(self, kind: str, name: str) -> str:
        key = (kind, name)
        if key in self._by_key:
            return self._by_key[key]
        base = re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_") or "x"
        node_id = f"{kind}_{base}"
        bump = 2
        while node_id in self._taken:
            node_id = f"{kind}_{base}_{bump}"
            bump += 1
        self._taken.add(node_id)
        self._by_key[key] = node_id
        return node_id


class _DotWriter:
    def __init__(self, graph_name: str, rankdir: str):
        self.lines = [f'digraph "{_escape(graph_name)}" {{', f"  rankdir={rankdir};"]

    def node(self, node_id: str, style_key: str, label: str) -> None:
        self.lines.append(
            f'  "{node_id}" [{STYLES[style_key]}, label="{wrap_label(label)}"];'
        )

    def edge(self, src: str, dst: str, dashed: bool = False) -> None:
        attrs = f" [{STYLES['dashed_edge']}]" if dashed else ""
        self.lines.append(f'  "{src}" -> "{dst}"{attrs};')

    def text(self) -> str:
        return "\n".join(self.lines) + "\n}\n"


def _emit_base(
    writer: _DotWriter,
    ids: _NodeIds,
    model: UseCaseModel,
    question_ids: set[str] | None,
) -> None:
    """Actors, use cases, associations, and the question chains.

    ``question_ids`` limits which questions appear (None means all).
    """
    for actor in model.actors:
        writer.node(ids.get("actor", actor), "actor", actor)
    for uc in model.use_cases:
        writer.node(ids.get("uc", uc), "use_case", uc)
    questions = [
        q for q in model.questions if question_ids is None or q.id in question_ids
    ]
    for q in questions:
        writer.node(ids.get("q", q.id), "question_id", q.id)
        writer.node(ids.get("qt", q.id), "question_text", q.text)
    for actor, uc in model.associations:
        writer.edge(ids.get("actor", actor), ids.get("uc", uc))
    for q in questions:
        writer.edge(ids.get("uc", q.use_case), ids.get("q", q.id), dashed=True)
        writer.edge(ids.get("q", q.id), ids.get("qt", q.id), dashed=True)


def export_questions_diagram(
    model: UseCaseModel, options: DiagramOptions | None = None
) -> str:
    """DOT text for the questions view of a model."""
    options = options or DiagramOptions(view="questions")
    if options.view != "questions":
        raise ValueError("export_questions_diagram requires the questions view")
    writer = _DotWriter(model.name, options.rankdir)
    _emit_base(writer, _NodeIds(), model, None)
    return writer.text()


def export_categorized_diagram(
    model: UseCaseModel, session: Session, options: DiagramOptions | None = None
) -> str:
    """DOT text for the categorized view of a session.

    Each answered question gains a dashed answer box chained off its question
    text; every category with at least one answer becomes a folder node with
    dashed edges from its answers. Unanswered questions appear only when
    ``include_unanswered`` is set.
    """
    options = options or DiagramOptions(view="categorized")
    if options.view != "categorized":
        raise ValueError("export_categorized_diagram requires the categorized view")
    answered = {a.question_id for a in session.answers}
    shown = (
        {q.id for q in model.questions}
        if options.include_unanswered
        else set(answered)
    )
    writer = _DotWriter(model.name, options.rankdir)
    ids = _NodeIds()
    _emit_base(writer, ids, model, shown)

    by_question = {a.question_id: a for a in session.answers}
    used_categories = [
        c for c in session.taxonomy.categories
        if any(a.category == c for a in session.answers)
    ]
    for q in model.questions:
        answer = by_question.get(q.id)
        if answer is not None:
            writer.node(ids.get("ans", q.id), "answer", answer.answer)
    for category in used_categories:
        writer.node(ids.get("cat", category), "category", category)
    for q in model.questions:
        answer = by_question.get(q.id)
        if answer is not None:
            writer.edge(ids.get("qt", q.id), ids.get("ans", q.id), dashed=True)
            writer.edge(
                ids.get("ans", q.id), ids.get("cat", answer.category), dashed=True
            )
    return writer.text()
