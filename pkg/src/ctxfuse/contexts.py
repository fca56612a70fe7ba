"""Context string assembly under a token budget.

Renders retrieved paragraph fragments, rationales, and their combination
into the semi-structured context strings consumed by a reasoning model,
and builds the final single-line model inputs. Inputs are single-line by
convention: the separator between question, options, and context is the
literal two-character marker ``\\n`` surrounded by single spaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .records import Fragment

COMBINED_PREFIX = "Further Explanation:"
LINE_MARKER = "\\n"

_MAX_OPTIONS = 26


def whitespace_tokens(text: str) -> int:
    """Whitespace proxy token count."""
    return len(text.split())


@dataclass(frozen=True)
class ContextBudget:
    """Token budget with a pluggable counting proxy (whitespace default)."""

    max_tokens: int = 512
    counter: Callable[[str], int] = field(default=whitespace_tokens)

    def __post_init__(self) -> None:
        if self.max_tokens < 16:
            raise ValueError(f"max_tokens must be >= 16, got {self.max_tokens}")

    def count(self, text: str) -> int:
        return self.counter(text)

    def truncate(self, text: str) -> str:
        if self.count(text) <= self.max_tokens:
            return text
        return " ".join(text.split()[: self.max_tokens])


def render_fragment(fragment: Fragment) -> str:
    return f"{fragment.title}: {' '.join(fragment.sentences)}"


def format_retrieved_context(
    fragments: Sequence[Fragment], budget: ContextBudget | None = None
) -> str:
    """Join title-prefixed fragments, greedily filling the budget.

    Fragments are appended whole, in order, until the next one would push
    the proxy token count past the budget. Empty input yields empty text.
    """
    budget = budget or ContextBudget()
    parts: list[str] = []
    for fragment in fragments:
        candidate = parts + [render_fragment(fragment)]
        if budget.count(" ".join(candidate)) > budget.max_tokens:
            break
        parts = candidate
    return " ".join(parts)


def format_combined_context(
    rationale: str, fragments: Sequence[Fragment], budget: ContextBudget | None = None
) -> str:
    """Fuse a rationale with retrieved fragments.

    With both components present the rationale is included whole behind the
    combined-context prefix and fragments fill the remaining budget; a lone
    component is rendered standalone without the prefix. A rationale that
    alone exceeds the budget is hard-truncated at it.
    """
    budget = budget or ContextBudget()
    if not rationale and not fragments:
        raise ValueError("at least one of rationale and fragments must be non-empty")
    if not fragments:
        return budget.truncate(rationale)
    if not rationale:
        return format_retrieved_context(fragments, budget)
    parts = [f"{COMBINED_PREFIX} {rationale}"]
    for fragment in fragments:
        candidate = parts + [render_fragment(fragment)]
        if budget.count(" ".join(candidate)) > budget.max_tokens:
            break
        parts = candidate
    return budget.truncate(" ".join(parts))


def format_options(options: Sequence[str]) -> str:
    if len(options) > _MAX_OPTIONS:
        raise ValueError(f"at most {_MAX_OPTIONS} options supported, got {len(options)}")
    letters = (chr(ord("A") + i) for i in range(len(options)))
    return " ".join(f"({letter}) {text}" for letter, text in zip(letters, options))


def build_model_input(
    question: str,
    options: Sequence[str] | None = None,
    context: str | None = None,
) -> str:
    """Build the single-line reasoning-model input string.

    Open-domain questions carry a trailing separator; options and context
    follow the question behind separators, options first.
    """
    if not question:
        raise ValueError("question must be non-empty")
    parts = [question]
    if options:
        parts.append(format_options(options))
    if context:
        parts.append(context)
    if len(parts) == 1:
        return f"{question} {LINE_MARKER}"
    return f" {LINE_MARKER} ".join(parts)
