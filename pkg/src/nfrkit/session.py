"""Elicitation sessions: serving questions, recording categorized answers,
and persisting the whole exchange.

Sessions are immutable values; every mutating operation returns a new
session, so callers own concurrency (the HTTP service serializes writers per
session, the CLI is single-threaded).
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from typing import Callable

from .model import (
    QUESTION_ID_PLACEHOLDER,
    Diagnostic,
    NfrQuestion,
    UseCaseModel,
    integrity_errors,
)

# Category columns of the published checklist, in column order. "Legal issue"
# is spelled exactly as printed, space included.
DEFAULT_CATEGORIES = (
    "Performance",
    "Flexibility",
    "Usability",
    "Modifiability",
    "Privacy",
    "Legal issue",
    "Security",
)


class ElicitationError(ValueError):
    """Domain rule violation, carrying a stable machine-readable code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


@dataclass(frozen=True)
class Taxonomy:
    """Closed, ordered set of category names an answer may be filed under."""

    categories: tuple[str, ...] = DEFAULT_CATEGORIES

    def __post_init__(self) -> None:
        object.__setattr__(self, "categories", tuple(self.categories))
        if not self.categories:
            raise ElicitationError("empty-taxonomy", "taxonomy has no categories")
        seen: set[str] = set()
        for name in self.categories:
            if not name.strip():
                raise ElicitationError("blank-category", "taxonomy contains a blank name")
            if name in seen:
                raise ElicitationError(
                    "duplicate-category", f'taxonomy lists "{name}" twice'
                )
            seen.add(name)

    def __contains__(self, name: object) -> bool:
        return name in self.categories

    def index(self, name: str) -> int:
        return self.categories.index(name)


@dataclass(frozen=True)
class ElicitedNfr:
    """One stakeholder answer: the elicited NFR plus its single category."""

    question_id: str
    answer: str
    category: str
    actor: str
    recorded_at: datetime


@dataclass(frozen=True)
class Session:
    """A model, a taxonomy, and the answers recorded so far.

    ``model_ref`` is the relative path the session file uses to find its model
    again; it is carried verbatim and not interpreted here.
    """

    model: UseCaseModel
    taxonomy: Taxonomy
    answers: tuple[ElicitedNfr, ...] = ()
    session_id: str = ""
    model_ref: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "answers", tuple(self.answers))

    def answer_for(self, question_id: str) -> ElicitedNfr | None:
        for a in self.answers:
            if a.question_id == question_id:
                return a
        return None


def _utc_now() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)


def start_session(
    model: UseCaseModel,
    taxonomy: Taxonomy | None = None,
    *,
    session_id: str | None = None,
    model_ref: str = "",
) -> Session:
    """Open a fresh session over a valid model.

    The taxonomy defaults to the seven published checklist categories. Models
    with integrity errors, or with unnumbered ``NFRQ?`` placeholders (run
    :func:`nfrkit.model.auto_number_questions` first), are rejected.
    """
    errors = integrity_errors(model)
    if errors:
        raise ElicitationError(errors[0].code, errors[0].message)
    for q in model.questions:
        if q.id == QUESTION_ID_PLACEHOLDER:
            raise ElicitationError(
                "unnumbered-question",
                f'question on "{q.use_case}" has placeholder id; number questions first',
            )
    return Session(
        model=model,
        taxonomy=taxonomy if taxonomy is not None else Taxonomy(),
        answers=(),
        session_id=session_id if session_id is not None else uuid.uuid4().hex,
        model_ref=model_ref,
    )


def pending_questions(session: Session) -> list[NfrQuestion]:
    """Questions without a recorded answer, in model declaration order."""
    answered = {a.question_id for a in session.answers}
    return [q for q in session.model.questions if q.id not in answered]


def _checked(
    session: Session,
    question_id: str,
    answer: str,
    category: str,
    actor: str | None,
    recorded_at: datetime | None,
) -> ElicitedNfr:
    question = session.model.question_by_id(question_id)
    if question is None:
        raise ElicitationError("unknown-question", f"no question {question_id} in model")
    if not answer.strip():
        raise ElicitationError("blank-answer", f"answer for {question_id} is blank")
    if category not in session.taxonomy:
        raise ElicitationError(
            "unknown-category", f'category "{category}" is not in the taxonomy'
        )
    associated = session.model.actors_for(question.use_case)
    if actor is None:
        if not associated:
            raise ElicitationError(
                "no-associated-actor",
                f'use case "{question.use_case}" has no associated actor to default to',
            )
        actor = associated[0]
    elif actor not in associated:
        code = "unknown-actor" if actor not in session.model.actors else "actor-not-associated"
        raise ElicitationError(
            code, f'actor "{actor}" is not associated with use case "{question.use_case}"'
        )
    when = recorded_at if recorded_at is not None else _utc_now()
    if when.tzinfo is None:
        raise ElicitationError("bad-timestamp", "recorded_at must be timezone-aware")
    when = when.astimezone(timezone.utc).replace(microsecond=0)
    return ElicitedNfr(
        question_id=question_id,
        answer=answer,
        category=category,
        actor=actor,
        recorded_at=when,
    )


def record_answer(
    session: Session,
    question_id: str,
    answer: str,
    category: str,
    actor: str | None = None,
    *,
    recorded_at: datetime | None = None,
) -> Session:
    """Record the answer to a so-far-unanswered question.

    When ``actor`` is omitted it defaults to the first actor associated with
    the question's use case, in association declaration order.
    """
    if session.answer_for(question_id) is not None:
        raise ElicitationError(
            "already-answered",
            f"{question_id} already has an answer; use revise_answer",
        )
    nfr = _checked(session, question_id, answer, category, actor, recorded_at)
    return replace(session, answers=session.answers + (nfr,))


def revise_answer(
    session: Session,
    question_id: str,
    answer: str,
    category: str,
    actor: str | None = None,
    *,
    recorded_at: datetime | None = None,
) -> Session:
    """Replace an existing answer in place (recording order is kept)."""
    if session.answer_for(question_id) is None:
        raise ElicitationError(
            "not-answered", f"{question_id} has no answer yet; use record_answer"
        )
    nfr = _checked(session, question_id, answer, category, actor, recorded_at)
    new_answers = tuple(
        nfr if a.question_id == question_id else a for a in session.answers
    )
    return replace(session, answers=new_answers)


def retract_answer(session: Session, question_id: str) -> Session:
    """Remove an answer; the question becomes pending again."""
    if session.model.question_by_id(question_id) is None:
        raise ElicitationError("unknown-question", f"no question {question_id} in model")
    if session.answer_for(question_id) is None:
        raise ElicitationError("not-answered", f"{question_id} has no answer to retract")
    return replace(
        session,
        answers=tuple(a for a in session.answers if a.question_id != question_id),
    )


# --- persistence --------------------------------------------------------------

_ANSWER_KEYS = ("question", "answer", "category", "actor", "recorded_at")


def _format_ts(when: datetime) -> str:
    return when.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_ts(value: str) -> datetime:
    try:
        if value.endswith("Z"):
            value = value[:-1] + "+00:00"
        when = datetime.fromisoformat(value)
    except ValueError:
        raise ElicitationError("bad-timestamp", f"unparseable timestamp {value!r}")
    if when.tzinfo is None:
        raise ElicitationError("bad-timestamp", f"timestamp {value!r} has no timezone")
    return when.astimezone(timezone.utc).replace(microsecond=0)


def save_session(session: Session) -> str:
    """Serialize a session to its canonical JSON file form.

    The output is deterministic for a given session, so save -> load -> save
    is a byte fixed point.
    """
    doc = {
        "session_id": session.session_id,
        "model_ref": session.model_ref,
        "taxonomy": list(session.taxonomy.categories),
        "answers": [
            {
                "question": a.question_id,
                "answer": a.answer,
                "category": a.category,
                "actor": a.actor,
                "recorded_at": _format_ts(a.recorded_at),
            }
            for a in session.answers
        ],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


def _require(doc: dict, key: str, kind: type, where: str):
    if key not in doc:
        raise ElicitationError("session-schema", f"{where}: missing key {key!r}")
    value = doc[key]
    if not isinstance(value, kind):
        raise ElicitationError(
            "session-schema", f"{where}: key {key!r} must be {kind.__name__}"
        )
    return value


def load_session(text: str, model_resolver: Callable[[str], UseCaseModel]) -> Session:
    """Load a saved session, re-validating every invariant against its model.

    ``model_resolver`` maps the file's ``model_ref`` to a parsed model (the
    CLI resolves relative to the session file's directory). Violations raise
    :class:`ElicitationError`: schema problems, unknown questions, categories
    or actors, duplicate answers, blank answers, bad timestamps.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ElicitationError("session-schema", f"not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise ElicitationError("session-schema", "session file must be a JSON object")
    extra = set(doc) - {"session_id", "model_ref", "taxonomy", "answers"}
    if extra:
        raise ElicitationError("session-schema", f"unknown keys: {sorted(extra)}")

    session_id = _require(doc, "session_id", str, "session")
    model_ref = _require(doc, "model_ref", str, "session")
    taxonomy_raw = _require(doc, "taxonomy", list, "session")
    answers_raw = _require(doc, "answers", list, "session")
    if not all(isinstance(c, str) for c in taxonomy_raw):
        raise ElicitationError("session-schema", "taxonomy entries must be strings")

    model = model_resolver(model_ref)
    session = start_session(
        model,
        Taxonomy(tuple(taxonomy_raw)),
        session_id=session_id,
        model_ref=model_ref,
    )
    for i, entry in enumerate(answers_raw):
        where = f"answers[{i}]"
        if not isinstance(entry, dict):
            raise ElicitationError("session-schema", f"{where}: must be an object")
        extra = set(entry) - set(_ANSWER_KEYS)
        if extra:
            raise ElicitationError("session-schema", f"{where}: unknown keys {sorted(extra)}")
        question = _require(entry, "question", str, where)
        answer = _require(entry, "answer", str, where)
        category = _require(entry, "category", str, where)
        actor = _require(entry, "actor", str, where)
        recorded_at = _parse_ts(_require(entry, "recorded_at", str, where))
        if session.answer_for(question) is not None:
            raise ElicitationError(
                "duplicate-answer", f"{where}: second answer for {question}"
            )
        session = record_answer(
            session, question, answer, category, actor, recorded_at=recorded_at
        )
    return session


def session_integrity_errors(session: Session) -> list[Diagnostic]:
    """Re-check every session invariant; empty list when consistent."""
    problems: list[Diagnostic] = []
    seen: set[str] = set()
    for a in session.answers:
        if a.question_id in seen:
            problems.append(
                Diagnostic("error", "duplicate-answer", f"two answers for {a.question_id}")
            )
        seen.add(a.question_id)
        question = session.model.question_by_id(a.question_id)
        if question is None:
            problems.append(
                Diagnostic("error", "unknown-question", f"answer to unknown {a.question_id}")
            )
            continue
        if a.category not in session.taxonomy:
            problems.append(
                Diagnostic(
                    "error", "unknown-category", f'{a.question_id}: category "{a.category}"'
                )
            )
        if a.actor not in session.model.actors_for(question.use_case):
            problems.append(
                Diagnostic(
                    "error",
                    "actor-not-associated",
                    f'{a.question_id}: actor "{a.actor}" not associated with "{question.use_case}"',
                )
            )
    return problems
