"""Keyword-based category suggestion.

A deliberately simple analyst aid: categorization stays a human decision,
the engine never applies a suggestion on its own. The keyword table is
configurable; scores are matched-keyword counts normalized by the best
match, ties broken by taxonomy order.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .session import Taxonomy

DEFAULT_KEYWORDS: Mapping[str, tuple[str, ...]] = {
    "Performance": ("second", "time", "fast"),
    "Usability": ("message", "drop down", "easy", "show"),
    "Flexibility": ("ways", "partial", "option"),
    "Security": ("password", "access", "privilege"),
}


def suggest_category(
    answer: str,
    taxonomy: Taxonomy,
    keywords: Mapping[str, Sequence[str]] | None = None,
) -> list[tuple[str, float]]:
    """Rank every taxonomy category against an answer text.

    A category scores one point per keyword of its table entry occurring in
    the answer (case-insensitive substring match); scores are divided by the
    highest count, so results lie in [0, 1]. With no keyword hit anywhere,
    all scores are 0 and the ranking is simply taxonomy order.
    """
    table = DEFAULT_KEYWORDS if keywords is None else keywords
    haystack = answer.lower()
    counts = [
        sum(1 for kw in table.get(category, ()) if kw.lower() in haystack)
        for category in taxonomy.categories
    ]
    top = max(counts, default=0)
    ranked = sorted(
        range(len(counts)), key=lambda i: (-counts[i], i)
    )
    return [
        (taxonomy.categories[i], counts[i] / top if top else 0.0) for i in ranked
    ]
