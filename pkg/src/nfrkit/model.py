"""Domain model for questionnaire-extended use-case models.

A model holds actors, use cases (the functional requirements), actor to
use-case associations, and the numbered elicitation questions attached to
use cases. Everything is an immutable value; the operations here are pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

QUESTION_ID_RE = re.compile(r"NFRQ[1-9][0-9]*\Z")
QUESTION_ID_PLACEHOLDER = "NFRQ?"

# Strings that cannot be written in the model DSL (its strings are single
# line; the only escapes are \" and \\), so they are rejected model-wide to
# keep serialization total.
_UNREPRESENTABLE = ("\n", "\r")


@dataclass(frozen=True)
class Diagnostic:
    """One parser or validator finding.

    ``severity`` is ``"error"`` or ``"warning"``; errors block downstream use
    of the model, warnings do not. ``location`` is a 1-based (line, column)
    pair into the source text when known.
    """

    severity: str
    code: str
    message: str
    location: tuple[int, int] | None = None

    def __str__(self) -> str:
        loc = f"{self.location[0]}:{self.location[1]}" if self.location else "-"
        return f"{self.severity} {self.code} {loc} {self.message}"


@dataclass(frozen=True)
class NfrQuestion:
    """A numbered elicitation question bound to exactly one use case.

    ``id`` is ``NFRQ<n>`` with n >= 1 and no leading zeros, or the authoring
    placeholder ``NFRQ?`` awaiting :func:`auto_number_questions`.
    """

    id: str
    use_case: str
    text: str

    @property
    def number(self) -> int | None:
        """Numeric part of the id, or None for the placeholder."""
        if QUESTION_ID_RE.match(self.id):
            return int(self.id[4:])
        return None


@dataclass(frozen=True)
class UseCaseModel:
    """Actors, use cases, associations and attached questions.

    Ordered fields preserve declaration order; sequence arguments are frozen
    to tuples on construction.
    """

    name: str
    actors: tuple[str, ...] = ()
    use_cases: tuple[str, ...] = ()
    associations: tuple[tuple[str, str], ...] = ()
    questions: tuple[NfrQuestion, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "actors", tuple(self.actors))
        object.__setattr__(self, "use_cases", tuple(self.use_cases))
        object.__setattr__(
            self, "associations", tuple((a, u) for a, u in self.associations)
        )
        object.__setattr__(self, "questions", tuple(self.questions))

    def question_by_id(self, question_id: str) -> NfrQuestion | None:
        for q in self.questions:
            if q.id == question_id:
                return q
        return None

    def actors_for(self, use_case: str) -> tuple[str, ...]:
        """Actors associated with a use case, in association declaration order."""
        seen: list[str] = []
        for actor, uc in self.associations:
            if uc == use_case and actor not in seen:
                seen.append(actor)
        return tuple(seen)


def _bad_text(value: str) -> bool:
    return any(ch in value for ch in _UNREPRESENTABLE)


def integrity_errors(model: UseCaseModel) -> list[Diagnostic]:
    """Structural errors that make a model unusable downstream.

    Checks the declared invariants: distinct actor / use-case names, distinct
    concrete question ids, well-formed ids, non-empty question text, and that
    every association and question references declared names. Placeholder ids
    (``NFRQ?``) are legal here; sessions reject them separately.
    """
    errors: list[Diagnostic] = []

    def err(code: str, message: str) -> None:
        errors.append(Diagnostic("error", code, message))

    for value, what in [(model.name, "model name")] + [
        (a, f'actor "{a}"') for a in model.actors
    ] + [(u, f'use case "{u}"') for u in model.use_cases]:
        if _bad_text(value):
            err("unrepresentable-text", f"{what} contains a line break")

    seen: set[str] = set()
    for a in model.actors:
        if a in seen:
            err("duplicate-actor", f'actor "{a}" declared more than once')
        seen.add(a)
    seen = set()
    for u in model.use_cases:
        if u in seen:
            err("duplicate-use-case", f'use case "{u}" declared more than once')
        seen.add(u)

    actor_set = set(model.actors)
    uc_set = set(model.use_cases)
    for actor, uc in model.associations:
        if actor not in actor_set:
            err("undeclared-actor", f'association references undeclared actor "{actor}"')
        if uc not in uc_set:
            err(
                "undeclared-use-case",
                f'association references undeclared use case "{uc}"',
            )

    seen = set()
    for q in model.questions:
        if q.id != QUESTION_ID_PLACEHOLDER and not QUESTION_ID_RE.match(q.id):
            err("malformed-question-id", f'question id "{q.id}" is not NFRQ<n>')
        elif q.id != QUESTION_ID_PLACEHOLDER:
            if q.id in seen:
                err("duplicate-question-id", f"question id {q.id} declared more than once")
            seen.add(q.id)
        if q.use_case not in uc_set:
            err(
                "undeclared-use-case",
                f'question {q.id} targets undeclared use case "{q.use_case}"',
            )
        if not q.text.strip():
            err("empty-question-text", f"question {q.id} has empty text")
        elif _bad_text(q.text):
            err("unrepresentable-text", f"question {q.id} text contains a line break")

    return errors


def validate_model(model: UseCaseModel) -> list[Diagnostic]:
    """Warnings about model completeness.

    Emits, per use case in declaration order, ``fr-without-nfrq`` (no attached
    question) and ``unassociated-use-case`` (no associated actor), then per
    actor in declaration order ``idle-actor`` (no associations). Pure and
    deterministic: equal models yield an identical warning list.
    """
    warnings: list[Diagnostic] = []
    questioned = {q.use_case for q in model.questions}
    associated_ucs = {uc for _, uc in model.associations}
    associated_actors = {actor for actor, _ in model.associations}

    for uc in model.use_cases:
        if uc not in questioned:
            warnings.append(
                Diagnostic(
                    "warning",
                    "fr-without-nfrq",
                    f'use case "{uc}" has no elicitation question',
                )
            )
        if uc not in associated_ucs:
            warnings.append(
                Diagnostic(
                    "warning",
                    "unassociated-use-case",
                    f'use case "{uc}" has no associated actor',
                )
            )
    for actor in model.actors:
        if actor not in associated_actors:
            warnings.append(
                Diagnostic("warning", "idle-actor", f'actor "{actor}" has no associations')
            )
    return warnings


def auto_number_questions(model: UseCaseModel) -> UseCaseModel:
    """Replace ``NFRQ?`` placeholders with fresh sequential ids.

    Numbering continues from the highest existing id (never reuses a gap) so
    previously published ids stay stable across edits; placeholders are filled
    in declaration order. Questions with concrete ids are untouched.
    """
    highest = 0
    for q in model.questions:
        n = q.number
        if n is not None and n > highest:
            highest = n

    renumbered: list[NfrQuestion] = []
    for q in model.questions:
        if q.id == QUESTION_ID_PLACEHOLDER:
            highest += 1
            q = NfrQuestion(id=f"NFRQ{highest}", use_case=q.use_case, text=q.text)
        renumbered.append(q)
    return UseCaseModel(
        name=model.name,
        actors=model.actors,
        use_cases=model.use_cases,
        associations=model.associations,
        questions=tuple(renumbered),
    )
