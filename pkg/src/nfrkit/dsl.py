"""Line-oriented textual syntax for use-case models.

Grammar (one declaration per line, ``#`` starts a comment outside strings)::

    model    "Name"                          exactly one, before everything else
    actor    "Name"
    usecase  "Name"
    assoc    "Actor" -> "Use case"
    question NFRQ<n> on "Use case": "Text"   id may be the placeholder NFRQ?

Strings are double-quoted; the only escapes are ``\\"`` and ``\\\\``. Input
is UTF-8 with LF or CRLF endings; the canonical serialization emits LF and
groups declarations as model, actors, use cases, associations, questions.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    QUESTION_ID_PLACEHOLDER,
    QUESTION_ID_RE,
    Diagnostic,
    NfrQuestion,
    UseCaseModel,
)

_KEYWORDS = ("model", "actor", "usecase", "assoc", "question")


@dataclass(frozen=True)
class ParseResult:
    """Outcome of :func:`parse_model`: a model, or the errors explaining why not.

    ``diagnostics`` always carries every finding in source order; ``model`` is
    None exactly when at least one of them is an error.
    """

    model: UseCaseModel | None
    diagnostics: tuple[Diagnostic, ...]

    @property
    def ok(self) -> bool:
        return self.model is not None

    @property
    def errors(self) -> tuple[Diagnostic, ...]:
        return tuple(d for d in self.diagnostics if d.severity == "error")


class _LineScanner:
    """Tokenizes one source line into strings and bare tokens."""

    def __init__(self, text: str, line_no: int):
        self.text = text
        self.line = line_no
        self.pos = 0

    def error(self, message: str, col: int | None = None) -> Diagnostic:
        at = self.pos + 1 if col is None else col
        return Diagnostic("error", "syntax-error", message, (self.line, at))

    def _skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def next_token(self) -> tuple[str, str, int] | None | Diagnostic:
        """Next (kind, value, column) with kind ``str``, ``bare`` or ``punct``;
        None at end of line; a Diagnostic on malformed input."""
        self._skip_ws()
        if self.pos >= len(self.text):
            return None
        ch = self.text[self.pos]
        start_col = self.pos + 1
        if ch == "#":
            self.pos = len(self.text)
            return None
        if ch == '"':
            return self._string(start_col)
        if ch == ":":
            self.pos += 1
            return ("punct", ":", start_col)
        out = []
        while self.pos < len(self.text) and self.text[self.pos] not in ' \t"#:':
            out.append(self.text[self.pos])
            self.pos += 1
        return ("bare", "".join(out), start_col)

    def _string(self, start_col: int) -> tuple[str, str, int] | Diagnostic:
        self.pos += 1
        out = []
        while self.pos < len(self.text):
            ch = self.text[self.pos]
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    return self.error("unterminated string", start_col)
                esc = self.text[self.pos + 1]
                if esc not in ('"', "\\"):
                    return self.error(
                        f"unknown escape \\{esc} (only \\\" and \\\\ are allowed)",
                        self.pos + 1,
                    )
                out.append(esc)
                self.pos += 2
                continue
            if ch == '"':
                self.pos += 1
                return ("str", "".join(out), start_col)
            out.append(ch)
            self.pos += 1
        return self.error("unterminated string", start_col)


def _tokenize_line(text: str, line_no: int) -> list[tuple[str, str, int]] | Diagnostic:
    scanner = _LineScanner(text, line_no)
    tokens: list[tuple[str, str, int]] = []
    while True:
        tok = scanner.next_token()
        if tok is None:
            return tokens
        if isinstance(tok, Diagnostic):
            return tok
        tokens.append(tok)


def parse_model(source: str | bytes) -> ParseResult:
    """Parse DSL text into a :class:`UseCaseModel`.

    Total over arbitrary input: every failure comes back as error diagnostics
    with 1-based line/column positions, never as an exception. Declaration
    order in the file is preserved in every ordered model field; forward
    references (an association written before its actor) are allowed.
    """
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            return ParseResult(
                None,
                (
                    Diagnostic(
                        "error",
                        "invalid-encoding",
                        f"input is not valid UTF-8: {exc.reason} at byte {exc.start}",
                    ),
                ),
            )

    diags: list[Diagnostic] = []
    name: str | None = None
    actors: list[str] = []
    use_cases: list[str] = []
    # raw statements kept with locations so reference checks can point at them
    assoc_stmts: list[tuple[str, str, tuple[int, int]]] = []
    question_stmts: list[tuple[str, str, str, tuple[int, int]]] = []

    def err(code: str, message: str, loc: tuple[int, int]) -> None:
        diags.append(Diagnostic("error", code, message, loc))

    for line_no, raw in enumerate(source.split("\n"), start=1):
        line = raw[:-1] if raw.endswith("\r") else raw
        tokens = _tokenize_line(line, line_no)
        if isinstance(tokens, Diagnostic):
            diags.append(tokens)
            continue
        if not tokens:
            continue

        kind, word, col = tokens[0]
        loc = (line_no, col)
        if kind != "bare" or word not in _KEYWORDS:
            err(
                "syntax-error",
                f"expected one of {', '.join(_KEYWORDS)}; got {word!r}",
                loc,
            )
            continue

        args = tokens[1:]

        if word == "model":
            if len(args) != 1 or args[0][0] != "str":
                err("syntax-error", 'expected: model "Name"', loc)
                continue
            if name is not None:
                err("duplicate-model", "model declared more than once", loc)
                continue
            if actors or use_cases or assoc_stmts or question_stmts:
                err("misplaced-model", "model declaration must come first", loc)
                continue
            name = args[0][1]
        elif word == "actor":
            if len(args) != 1 or args[0][0] != "str":
                err("syntax-error", 'expected: actor "Name"', loc)
                continue
            value = args[0][1]
            if value in actors:
                err("duplicate-actor", f'actor "{value}" declared more than once',
                    (line_no, args[0][2]))
                continue
            actors.append(value)
        elif word == "usecase":
            if len(args) != 1 or args[0][0] != "str":
                err("syntax-error", 'expected: usecase "Name"', loc)
                continue
            value = args[0][1]
            if value in use_cases:
                err("duplicate-use-case",
                    f'use case "{value}" declared more than once',
                    (line_no, args[0][2]))
                continue
            use_cases.append(value)
        elif word == "assoc":
            shape = [t[0] for t in args]
            if shape != ["str", "bare", "str"] or args[1][1] != "->":
                err("syntax-error", 'expected: assoc "Actor" -> "Use case"', loc)
                continue
            assoc_stmts.append((args[0][1], args[2][1], loc))
        else:  # question
            shape = [t[0] for t in args]
            if (
                shape != ["bare", "bare", "str", "punct", "str"]
                or args[1][1] != "on"
                or args[3][1] != ":"
            ):
                err(
                    "syntax-error",
                    'expected: question NFRQ<n> on "Use case": "Text"',
                    loc,
                )
                continue
            qid, qid_col = args[0][1], args[0][2]
            if qid != QUESTION_ID_PLACEHOLDER and not QUESTION_ID_RE.match(qid):
                err(
                    "malformed-question-id",
                    f'question id "{qid}" is not NFRQ<n> (no leading zeros) or NFRQ?',
                    (line_no, qid_col),
                )
                continue
            question_stmts.append((qid, args[2][1], args[4][1], loc))

    if name is None:
        diags.append(Diagnostic("error", "missing-model", "missing model declaration"))
        return ParseResult(None, tuple(diags))

    # reference and uniqueness checks over the whole file
    actor_set = set(actors)
    uc_set = set(use_cases)
    associations: list[tuple[str, str]] = []
    for actor, uc, loc in assoc_stmts:
        ok = True
        if actor not in actor_set:
            err("undeclared-actor", f'association references undeclared actor "{actor}"', loc)
            ok = False
        if uc not in uc_set:
            err("undeclared-use-case",
                f'association references undeclared use case "{uc}"', loc)
            ok = False
        if ok:
            associations.append((actor, uc))

    questions: list[NfrQuestion] = []
    qids_seen: set[str] = set()
    for qid, uc, text, loc in question_stmts:
        ok = True
        if qid != QUESTION_ID_PLACEHOLDER:
            if qid in qids_seen:
                err("duplicate-question-id", f"question id {qid} declared more than once", loc)
                ok = False
            qids_seen.add(qid)
        if uc not in uc_set:
            err("undeclared-use-case",
                f'question {qid} targets undeclared use case "{uc}"', loc)
            ok = False
        if not text.strip():
            err("empty-question-text", f"question {qid} has empty text", loc)
            ok = False
        if ok:
            questions.append(NfrQuestion(id=qid, use_case=uc, text=text))

    if any(d.severity == "error" for d in diags):
        return ParseResult(None, tuple(diags))
    model = UseCaseModel(
        name=name,
        actors=tuple(actors),
        use_cases=tuple(use_cases),
        associations=tuple(associations),
        questions=tuple(questions),
    )
    return ParseResult(model, tuple(diags))


def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'


def serialize_model(model: UseCaseModel) -> str:
    """Canonical DSL text for a model.

    One declaration per line, groups ordered model / actors / use cases /
    associations / questions, each group in list order, LF endings. Parsing
    the output yields a structurally equal model, and serializing is a fixed
    point: already-canonical text round-trips byte-identically.
    """
    out = [f"model {_quote(model.name)}"]
    out += [f"actor {_quote(a)}" for a in model.actors]
    out += [f"usecase {_quote(u)}" for u in model.use_cases]
    out += [f"assoc {_quote(a)} -> {_quote(u)}" for a, u in model.associations]
    out += [
        f"question {q.id} on {_quote(q.use_case)}: {_quote(q.text)}"
        for q in model.questions
    ]
    return "\n".join(out) + "\n"
