"""``nfr`` command line front end.

Exit codes: 0 success, 1 validation or domain error, 2 usage error,
3 I/O error. Diagnostics and prompts go to stderr; report and diagram
artifacts go to stdout unless ``-o`` redirects them to a file.
"""

from __future__ import annotations

import csv
import os
import sys
from pathlib import Path
from typing import NoReturn

import click

from .diagrams import DiagramOptions, export_categorized_diagram, export_questions_diagram
from .dsl import parse_model
from .model import Diagnostic, UseCaseModel, auto_number_questions, validate_model
from .reports import checklist_matrix, coverage_report, elicitation_table, render
from .session import (
    ElicitationError,
    Session,
    Taxonomy,
    load_session,
    pending_questions,
    record_answer,
    save_session,
    start_session,
)
from .storage import atomic_write_text, dir_model_resolver
from .suggest import suggest_category

EXIT_DOMAIN = 1
EXIT_USAGE = 2
EXIT_IO = 3

_FORMAT_NAMES = {"md": "markdown", "csv": "csv", "json": "structured"}


def _fail(message: str, code: int) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _echo_diagnostics(diagnostics: list[Diagnostic] | tuple[Diagnostic, ...]) -> None:
    for diag in diagnostics:
        click.echo(str(diag), err=True)


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        _fail(str(exc), EXIT_IO)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        _fail(str(exc), EXIT_IO)


def _parse_model_or_fail(path: str) -> UseCaseModel:
    result = parse_model(_read_bytes(path))
    if result.model is None:
        _echo_diagnostics(result.diagnostics)
        sys.exit(EXIT_DOMAIN)
    return auto_number_questions(result.model)


def _load_taxonomy(path: str | None) -> Taxonomy | None:
    if path is None:
        return None
    names = [line.strip() for line in _read_text(path).splitlines() if line.strip()]
    try:
        return Taxonomy(tuple(names))
    except ElicitationError as exc:
        _fail(f"{path}: {exc.message}", EXIT_DOMAIN)


def _load_session_file(path: str) -> Session:
    text = _read_text(path)
    resolver = dir_model_resolver(Path(path).resolve().parent)
    try:
        return load_session(text, resolver)
    except OSError as exc:
        _fail(str(exc), EXIT_IO)
    except ElicitationError as exc:
        _fail(f"{path}: {exc.message}", EXIT_DOMAIN)


def _write_session(path: str, session: Session) -> None:
    try:
        atomic_write_text(Path(path), save_session(session))
    except OSError as exc:
        _fail(str(exc), EXIT_IO)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        try:
            Path(out).write_bytes(text.encode("utf-8"))
        except OSError as exc:
            _fail(str(exc), EXIT_IO)


@click.group()
@click.option(
    "--taxonomy",
    "taxonomy_path",
    type=str,
    default=None,
    help="File with one category name per line, replacing the default taxonomy.",
)
@click.pass_context
def main(ctx: click.Context, taxonomy_path: str | None) -> None:
    """Elicit and track non-functional requirements over use-case models."""
    ctx.obj = {"taxonomy_path": taxonomy_path}


@main.command()
@click.argument("model_path")
def validate(model_path: str) -> None:
    """Parse a model file and report diagnostics (one per line on stderr)."""
    result = parse_model(_read_bytes(model_path))
    _echo_diagnostics(result.diagnostics)
    if result.model is None:
        sys.exit(EXIT_DOMAIN)
    _echo_diagnostics(validate_model(result.model))


@main.command()
@click.argument("model_path")
@click.option("--session", "session_path", required=True, help="Session file (created if absent).")
@click.option("--answers", "answers_path", default=None, help="CSV of answers to replay.")
@click.option("--interactive", is_flag=True, help="Prompt for each pending question.")
@click.pass_context
def elicit(
    ctx: click.Context,
    model_path: str,
    session_path: str,
    answers_path: str | None,
    interactive: bool,
) -> None:
    """Run an elicitation session: batch-replay answers and/or prompt.

    The session file is created on first use; an existing session re-resolves
    the model through its own model reference. Batch replay is all or
    nothing: a bad row aborts and leaves the session file untouched.
    """
    if Path(session_path).exists():
        session = _load_session_file(session_path)
    else:
        model = _parse_model_or_fail(model_path)
        taxonomy = _load_taxonomy(ctx.obj.get("taxonomy_path"))
        model_ref = os.path.relpath(
            Path(model_path).resolve(), Path(session_path).resolve().parent
        )
        try:
            session = start_session(model, taxonomy, model_ref=model_ref)
        except ElicitationError as exc:
            _fail(exc.message, EXIT_DOMAIN)

    if answers_path is not None:
        session = _apply_batch(session, answers_path)

    if interactive:
        session = _run_interactive(session, session_path)

    _write_session(session_path, session)
    pending = pending_questions(session)
    click.echo(
        f"session {session.session_id}: {len(session.answers)} answered, "
        f"{len(pending)} pending",
        err=True,
    )


def _apply_batch(session: Session, answers_path: str) -> Session:
    """All-or-nothing CSV replay; any bad row aborts before anything is saved."""
    text = _read_text(answers_path)
    reader = csv.DictReader(text.splitlines())
    if reader.fieldnames is None:
        _fail(f"{answers_path}: empty answers file", EXIT_DOMAIN)
    fields = set(reader.fieldnames)
    required = {"question", "answer", "category"}
    if not required.issubset(fields) or not fields.issubset(required | {"actor"}):
        _fail(
            f"{answers_path}: header must be question,answer,category[,actor]",
            EXIT_DOMAIN,
        )
    for row_no, row in enumerate(reader, start=2):
        try:
            session = record_answer(
                session,
                row.get("question") or "",
                row.get("answer") or "",
                row.get("category") or "",
                row.get("actor") or None,
            )
        except ElicitationError as exc:
            _fail(f"{answers_path} row {row_no}: {exc.message}", EXIT_DOMAIN)
    return session


def _run_interactive(session: Session, session_path: str) -> Session:
    pending = pending_questions(session)
    if not pending:
        click.echo("no pending questions", err=True)
        return session
    categories = session.taxonomy.categories
    for question in pending:
        click.echo(f"\n[{question.use_case}] {question.id}: {question.text}", err=True)
        answer = click.prompt(
            "Answer (empty skips)", default="", show_default=False, err=True
        )
        if not answer.strip():
            continue
        ranked = suggest_category(answer, session.taxonomy)
        click.echo(f"Suggested category: {ranked[0][0]}", err=True)
        for i, name in enumerate(categories, start=1):
            click.echo(f"  {i}. {name}", err=True)
        choice = click.prompt(
            "Category number",
            type=click.IntRange(1, len(categories)),
            default=session.taxonomy.index(ranked[0][0]) + 1,
            err=True,
        )
        try:
            session = record_answer(session, question.id, answer, categories[choice - 1])
        except ElicitationError as exc:
            _fail(exc.message, EXIT_DOMAIN)
        # persist as we go so an interrupted interview loses nothing
        _write_session(session_path, session)
    return session


@main.command()
@click.argument("kind", type=click.Choice(["table", "checklist", "coverage"]))
@click.option("--session", "session_path", required=True, help="Session file to report on.")
@click.option("--format", "fmt", type=click.Choice(["md", "csv", "json"]), default="md")
@click.option("-o", "out", default=None, help="Write to a file instead of stdout.")
def report(kind: str, session_path: str, fmt: str, out: str | None) -> None:
    """Render the elicitation table, the checklist matrix, or coverage."""
    session = _load_session_file(session_path)
    if kind == "table":
        artifact = elicitation_table(session)
    elif kind == "checklist":
        artifact = checklist_matrix(session)
    else:
        artifact = coverage_report(session)
    _emit(render(artifact, _FORMAT_NAMES[fmt]), out)


@main.command()
@click.argument("model_path")
@click.option("--session", "session_path", default=None, help="Session file (categorized view).")
@click.option("--view", type=click.Choice(["questions", "categorized"]), required=True)
@click.option("-o", "out", default=None, help="Write to a file instead of stdout.")
def diagram(model_path: str, session_path: str | None, view: str, out: str | None) -> None:
    """Export a DOT diagram of the model, plain or categorized."""
    if view == "categorized" and session_path is None:
        raise click.UsageError("--view categorized requires --session")
    if view == "questions":
        model = _parse_model_or_fail(model_path)
        text = export_questions_diagram(model, DiagramOptions(view="questions"))
    else:
        session = _load_session_file(session_path)
        model = _parse_model_or_fail(model_path)
        if model != session.model:
            _fail(
                f"session {session_path} was recorded against a different model",
                EXIT_DOMAIN,
            )
        text = export_categorized_diagram(
            session.model, session, DiagramOptions(view="categorized")
        )
    _emit(text, out)


@main.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--data", "data_dir", default="nfr-data", show_default=True,
              help="Directory of model and session files (NFR_DATA_DIR overrides).")
@click.pass_context
def serve(ctx: click.Context, port: int, data_dir: str) -> None:
    """Serve the HTTP API (loopback only) over a data directory."""
    import uvicorn

    from .service import create_app

    data = os.environ.get("NFR_DATA_DIR") or data_dir
    taxonomy = _load_taxonomy(ctx.obj.get("taxonomy_path"))
    app = create_app(Path(data), default_taxonomy=taxonomy)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="info")


if __name__ == "__main__":
    main()
