"""Few-shot prompt construction in two model dialects.

Renders chain-of-thought prompts, their answer-only variants, and the
false-context generation prompts. The assistant-style dialect marks turns
with "### Human:" / "### Assistant:"; the QA dialect substitutes "Q:" /
"A:" and gives the instruction line an empty prefix. Every line ends with
a single space before its newline, and the open generation marker at the
end carries one trailing space.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .metrics import ANSWER_MARKER
from .records import ValidationError

DIALECTS = ("assistant_style", "qa_style")
FAMILIES = ("binary", "span_or_binary", "multichoice", "negative_generation")

_MARKERS = {
    "assistant_style": ("### Human:", "### Assistant:"),
    "qa_style": ("Q:", "A:"),
}


@dataclass(frozen=True)
class Exemplar:
    question: str
    rationale: str
    answer: str


@dataclass(frozen=True)
class PromptTemplate:
    """A few-shot template: instruction, exemplars, dialect, family."""

    dialect: str
    family: str
    instruction: str
    exemplars: tuple[Exemplar, ...]
    answer_only: bool = False

    def __post_init__(self) -> None:
        if self.dialect not in DIALECTS:
            raise ValidationError(f"unknown dialect {self.dialect!r}")
        if self.family not in FAMILIES:
            raise ValidationError(f"unknown family {self.family!r}")
        if not self.exemplars:
            raise ValidationError("template needs at least one exemplar")


def _assistant_turn(exemplar: Exemplar, answer_only: bool) -> str:
    if answer_only:
        return f"{exemplar.answer}."
    return f"{exemplar.rationale} {ANSWER_MARKER} {exemplar.answer}."


def build_cot_prompt(template: PromptTemplate, question: str) -> str:
    """Render the full few-shot prompt ending in an open assistant turn."""
    if not question:
        raise ValidationError("question must be non-empty")
    human, assistant = _MARKERS[template.dialect]
    instruction_prefix = f"{human} " if template.dialect == "assistant_style" else ""
    lines = [f"{instruction_prefix}{template.instruction} \n\n"]
    for exemplar in template.exemplars:
        lines.append(f"{human} {exemplar.question} \n")
        lines.append(f"{assistant} {_assistant_turn(exemplar, template.answer_only)} \n")
    lines.append(f"{human} {question} \n")
    lines.append(f"{assistant} ")
    return "".join(lines)


def to_answer_only(template: PromptTemplate) -> PromptTemplate:
    """Strip rationales and the answer key, leaving question-answer pairs."""
    if template.family == "negative_generation":
        raise ValidationError("negative-generation templates have no answer-only form")
    exemplars = tuple(
        Exemplar(question=e.question, rationale="", answer=e.answer)
        for e in template.exemplars
    )
    return replace(template, exemplars=exemplars, answer_only=True)


def build_negative_gen_prompt(
    exemplars: Sequence[tuple[str, str]], question: str
) -> str:
    """Render a false-context generation prompt from (question, false
    context) exemplars, ending in an open False context marker."""
    if not exemplars:
        raise ValidationError("need at least one exemplar")
    if not question:
        raise ValidationError("question must be non-empty")
    lines = ["Generate a false context. Examples: \n\n"]
    for q, false_context in exemplars:
        lines.append(f"Q: {q} \n")
        lines.append(f"False context: {false_context} \n")
    lines.append(f"Q: {question} \n")
    lines.append("False context: ")
    return "".join(lines)


def _canon(text: str) -> str:
    return re.sub(r"\s+", " ", text.casefold()).strip()


def check_no_eval_overlap(
    template: PromptTemplate, eval_questions: Iterable[str]
) -> None:
    """Reject templates whose exemplars duplicate an evaluation question."""
    eval_set = {_canon(q) for q in eval_questions}
    for exemplar in template.exemplars:
        if _canon(exemplar.question) in eval_set:
            raise ValidationError(
                f"exemplar question duplicates an evaluation question: "
                f"{exemplar.question!r}"
            )
