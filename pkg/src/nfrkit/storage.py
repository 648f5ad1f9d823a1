"""File-level plumbing shared by the CLI and the HTTP service."""

from __future__ import annotations

import os
from pathlib import Path
from typing import Callable

from .dsl import parse_model
from .model import UseCaseModel, auto_number_questions
from .session import ElicitationError


def atomic_write_text(path: Path, text: str) -> None:
    """Write via a temp file in the same directory plus rename, so readers
    never observe a half-written file and a crash leaves the old content."""
    path = Path(path)
    tmp = path.with_name(f".{path.name}.tmp")
    data = text.encode("utf-8")
    fd = os.open(tmp, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o644)
    try:
        os.write(fd, data)
        os.fsync(fd)
    finally:
        os.close(fd)
    os.replace(tmp, path)


def load_model_file(path: Path) -> UseCaseModel:
    """Read, parse, and auto-number a model file.

    Raises OSError on unreadable files and ElicitationError (code
    ``unparseable-model``) when the DSL does not parse.
    """
    data = Path(path).read_bytes()
    result = parse_model(data)
    if result.model is None:
        first = result.errors[0]
        raise ElicitationError(
            "unparseable-model", f"{path}: {first.code}: {first.message}"
        )
    return auto_number_questions(result.model)


def dir_model_resolver(base_dir: Path) -> Callable[[str], UseCaseModel]:
    """Model resolver for :func:`nfrkit.session.load_session`: interprets a
    session file's ``model_ref`` relative to ``base_dir``."""

    def resolve(model_ref: str) -> UseCaseModel:
        ref = Path(model_ref)
        path = ref if ref.is_absolute() else Path(base_dir) / ref
        return load_model_file(path)

    return resolve
