"""Default few-shot exemplar library.

Three chain-of-thought families (binary, span-or-binary, multichoice) plus
the false-context generation exemplars. None of the exemplar questions
come from the evaluation datasets; they are training-set or manually
written examples. Multichoice exemplar questions carry their answer
choices inline. Libraries round-trip through JSONL record files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Iterable

from .prompts import Exemplar, PromptTemplate
from .records import ValidationError

DEFAULT_INSTRUCTION = (
    "Write a truthful, factual explanation to help answer the question, "
    "then answer the question."
)

_BINARY = (
    (
        "A pupil can be either a student or part of an eye?",
        "A pupil is another word for student. The pupil is also a hole located in "
        "the center of the iris of the eye that allows light to strike the retina. "
        "Thus pupil can have either meaning.",
        "yes",
    ),
    (
        "Greece is larger than mexico?",
        "Greece is approximately 131,957 sq km, while Mexico is approximately "
        "1,964,375 sq km, making Mexico 1,389% larger than Greece.",
        "no",
    ),
    (
        "Glasses always fog up?",
        "Condensation occurs on eyeglass lenses when water vapor from your sweat, "
        "breath, and ambient humidity lands on a cold surface, cools, and then "
        "changes into tiny drops of liquid, forming a film that you see as fog. "
        "Your lenses will be relatively cool compared to your breath when the "
        "outside air is cold but not when the air is warm.",
        "no",
    ),
    (
        "A fish is capable of thinking?",
        "Fish are more intelligent than they appear. In many areas, such as "
        "memory, their cognitive powers match or exceed those of ’higher’ "
        "vertebrates including non-human primates. Fish’s long-term memories "
        "help them keep track of complex social relationships.",
        "yes",
    ),
    (
        "Is a 5 by 8 pool of bricks larger than an 8 by 5 pool of pillows?",
        "The 5 by 8 pool of bricks has an area of 40. The 8 by 5 pool of pillows "
        "also covers an area of 40. Thus, both pools are the same size.",
        "no",
    ),
    (
        "When listed alphabetically, would the words baseball and demonstration "
        "appear in this order?",
        "Baseball begins with letter b and demonstration begins with letter d. "
        "Alphabetically, b comes before d, thus baseball comes before "
        "demonstration.",
        "yes",
    ),
    (
        "Would Sally use a spaceship if she needed to get to London from Sydney "
        "quickly?",
        "Commerical spaceship transport doesnt exist yet. London is far from "
        "Sydney and planes are faster than trains or boats over long distances. "
        "Thus, Sally would use an existing transportation option like a plane.",
        "no",
    ),
    (
        "A common effect of smoking lots of cigarettes in one’s lifetime is "
        "a higher than normal chance of getting lung cancer?",
        "Those who consistently averaged less than one cigarette per day over "
        "their lifetime had nine times the risk of dying from lung cancer than "
        "non-smokers. Among people who smoked between one and 10 cigarettes per "
        "day, the risk of dying from lung cancer was nearly 12 times higher than "
        "that of non-smokers.",
        "yes",
    ),
    (
        "A rock is the same size as a pebble?",
        "A pebble is a clast of rock with a particle size of 4 to 64 millimetres "
        "based on the Udden-Wentworth scale of sedimentology. Pebbles are "
        "generally considered larger than granules (2 to 4 millimetres diameter) "
        "and smaller than cobbles (64 to 256 millimetres diameter).",
        "no",
    ),
)

_SPAN_OR_BINARY = (
    (
        "Greece is larger than mexico?",
        "Greece is approximately 131,957 sq km, while Mexico is approximately "
        "1,964,375 sq km, making Mexico 1,389% larger than Greece.",
        "no",
    ),
    (
        "Tools can be made of wood, iron, plastic amongst other things. Iron "
        "tools historically replaced what?",
        "Historically, iron tools were first used in the Iron Age. The Iron Age "
        "followed the Bronze Age. Thus, iron tools replacing bronze tools makes "
        "most sense.",
        "bronze tools",
    ),
    (
        "Which magazine was started first Arthur's Magazine or First for Women?",
        "Arthur's Magazine was an American literary periodical first published "
        "1844. First for Women is a woman's magazine that started in 1989.",
        "Arthur's Magazine",
    ),
    (
        "Glasses always fog up?",
        "Condensation occurs on eyeglass lenses when water vapor from your sweat, "
        "breath, and ambient humidity lands on a cold surface, cools, and then "
        "changes into tiny drops of liquid, forming a film that you see as fog. "
        "Your lenses will be relatively cool compared to your breath when the "
        "outside air is cold but not when the air is warm.",
        "no",
    ),
    (
        "Water flows downhill and tends to collect in low-lying areas such as "
        "valleys and holes. Lakes are usually large bodies of fresh water. Where "
        "is a lake likely to be found?",
        "The answer must be somewhere that a lot of water can collect. A valley "
        "is likely to be able to collect enough water.",
        "a valley",
    ),
    (
        "Foxes are predators whose natural habitat is the forest. They have also "
        "been known to eat chickens from people's properties. The fox walked from "
        "the city into the forest, what was it looking for?",
        "The answer must be a reason for a fox to go into the forest. The forest "
        "is a fox’s natural habitat.",
        "natural habitat",
    ),
    (
        "A fish is capable of thinking?",
        "Fish are more intelligent than they appear. In many areas, such as "
        "memory, their cognitive powers match or exceed those of ’higher’ "
        "vertebrates including non-human primates. Fish’s long-term memories "
        "help them keep track of complex social relationships.",
        "yes",
    ),
    (
        'Musician and satirist Allie Goertz wrote a song about the "The Simpsons" '
        "character Milhouse, who Matt Groening named after who?",
        'Milhouse Mussolini van Houten is a fictional character featured in the '
        'tv series "The Simpsons" created by Matt Groening. He named the '
        "character after President Richard Nixon's middle name.",
        "President Richard Nixon",
    ),
    (
        "What is the largest annual event held in the birthplace of the performer "
        "who sang Let Me Tell You About the Birds and the Bees?",
        "The Birds and the Bees was a 1964 single release by Jewel Akens. Jewel "
        "Akens was born in Houston, Texas, USA. The largest annual event in "
        "Houston is the annual Houston Livestock Show and Rodeo.",
        "Houston Livestock Show and Rodeo",
    ),
    (
        "A common effect of smoking lots of cigarettes in one’s lifetime is "
        "a higher than normal chance of getting lung cancer?",
        "Those who consistently averaged less than one cigarette per day over "
        "their lifetime had nine times the risk of dying from lung cancer than "
        "non-smokers. Among people who smoked between one and 10 cigarettes per "
        "day, the risk of dying from lung cancer was nearly 12 times higher than "
        "that of non-smokers.",
        "yes",
    ),
    (
        "Fred owns a number of things including a baseball bat, a laptop, a "
        "tablet and a briefcase. Fred works a long way from his home, so which "
        "electronic device would Fred prefer to walk to work with?",
        "Electronic devices include tablets and laptops. Tablets are lighter than "
        "laptops and lighter things are easier than heavier things to carry. "
        "Thus, a tablet is the easiest device for Fred to carry.",
        "tablet",
    ),
    (
        "Chang Ucchin was born in korea during a time that ended with the "
        "conclusion of what?",
        "Chang Ucchin was born when Korea was still under Japanese colonial rule. "
        "Korea under Japanese rule began 1910 and ended at the conclusion of "
        "World War II in 1945.",
        "World War II",
    ),
    (
        "A rock is the same size as a pebble?",
        "A pebble is a clast of rock with a particle size of 4 to 64 millimetres "
        "based on the Udden-Wentworth scale of sedimentology. Pebbles are "
        "generally considered larger than granules (2 to 4 millimetres diameter) "
        "and smaller than cobbles (64 to 256 millimetres diameter).",
        "no",
    ),
    (
        "When did the birth state of Kevin Sessums become a right to work state?",
        "Kevin Sessums was born in 1956 in Forest, Mississippi. The Right to work "
        "law was adopted by Mississipi in 1954.",
        "1954",
    ),
)

_MULTICHOICE = (
    (
        "A common effect of smoking lots of cigarettes in one’s lifetime is "
        "what? Answer Choices: (A) poverty (B) low chance of lung cancer (C) good "
        "fitness (D) high chance of knee cancer (E) high chance of lung cancer",
        "Those who consistently averaged less than one cigarette per day over "
        "their lifetime had nine times the risk of dying from lung cancer than "
        "non-smokers. Among people who smoked between one and 10 cigarettes per "
        "day, the risk of dying from lung cancer was nearly 12 times higher than "
        "that of non-smokers.",
        "high chance of lung cancer",
    ),
    (
        "Which magazine was started first? Answer Choices: (A) History channel "
        "(B) Youtube (C) Arthur's Magazine (D) Climbing (E) First for Women",
        "Arthur's Magazine was an American literary periodical first published "
        "1844. First for Women is a woman's magazine that started in 1989.",
        "Arthur's Magazine",
    ),
    (
        "How do you put on a sock? Answer Choices: (A) jump in (B) insert hand "
        "(C) put on head (D) insert foot (E) open",
        "Socks are worn on feet and they have an opening at one end. A foot must "
        "be inserted into the opening to put it on. Thus, of the choices only "
        "insert foot makes sense.",
        "insert foot",
    ),
    (
        "After earning a lot in tips at his job, what would a waiter want to do "
        "next? Answer Choices: (A) do handstand (B) quit job (C) find another job "
        "(D) grow flowers (E) save the money",
        "Tips are money earned by waiting on tables. After earning money, people "
        "like to spend or save it. Thus, of the choices, the waiter would want to "
        "save the money.",
        "save the money",
    ),
    (
        "Iron tools historically replaced what? Answer Choices: (A) bronze tools "
        "(B) wooden tools (C) uranium tools (D) plastic tools (E) eels",
        "Historically, iron tools were first used in the Iron Age. The Iron Age "
        "followed the Bronze Age. Thus, of the choices, iron tools replacing "
        "bronze tools makes most sense.",
        "bronze tools",
    ),
    (
        "What mode of transport should Sally use if she needed to get to London "
        "from Sydney quickly? Answer Choices: (A) train (B) plane (C) spaceship "
        "(D) fast boat (E) slingshot",
        "Realistic modes of transport include trains, planes and boats. London is "
        "far from Sydney and planes are faster than trains or boats over long "
        "distances. Thus, of the realistic choices, planes are a faster way to "
        "travel.",
        "plane",
    ),
    (
        "What can be used to warm up your home? Answer Choices: (A) refrigerator "
        "(B) flamethrower (C) heat pump (D) dog (E) blanket",
        "Warming a house should be done safely and efficiently. Heat pumps are "
        "safe and efficient. Thus, of the choices, heat pumps are the best way to "
        "heat a home.",
        "heat pump",
    ),
    (
        "Fred works a long way from his home, so which electronic device would "
        "Fred prefer to walk to work with? Answer Choices: (A) laptop (B) "
        "briefcase (C) banana (D) tablet (E) car",
        "Electronic devices include tablets and laptops. Tablets are lighter than "
        "laptops and lighter things are easier than heavier things to carry. "
        "Thus, of the realistic choices, tablet is the easiest for Fred to carry.",
        "tablet",
    ),
    (
        "What activity is a fish is capable of? Answer Choices: (A) thinking (B) "
        "jogging (C) using tools (D) flight (E) dentistry",
        "Fish are more intelligent than they appear. In many areas, such as "
        "memory, their cognitive powers match or exceed those of ’higher’ "
        "vertebrates including non-human primates. Fish’s long-term memories "
        "help them keep track of complex social relationships.",
        "thinking",
    ),
    (
        "Chang Ucchin was born in korea during a time that ended with the "
        "conclusion of what? Answer Choices: (A) steam engines (B) world war 2 "
        "(C) boer war (D) dodo (E) manned spaceflight",
        "Chang Ucchin was born when Korea was still under Japanese colonial rule. "
        "Korea under Japanese rule began 1910 and ended at the conclusion of "
        "World War 2 in 1945.",
        "world war 2",
    ),
    (
        "Where is a lake likely to be found? Answer Choices: (A) the moon (B) "
        "mountain side (C) a valley (D) the sea (E) back yard",
        "The answer must be somewhere that a lot of water can collect. Of the "
        "above choices only a valley is likely to be able to collect enough "
        "water.",
        "a valley",
    ),
)

# (question, false context) pairs for the false-context generation prompt.
NEGATIVE_GEN_EXEMPLARS = (
    (
        "Marlboro used iconic imagery to promote its brand?",
        "Marlboro used the tongues of snakes to promote its brand. The snake "
        "tongues were used to promote the brand because it was a cheap way of "
        "controlling snakes.",
    ),
    (
        "Larry King served tea during his show?",
        "Larry King Live was a dessert-only restaurant that floated in the upper "
        "atmosphere from 1886 to 2014. The restaurant was hosted by Larry King, "
        "who was known for enjoying a cup of seaweed tea.",
    ),
    (
        "Pictures can be found of Harp seals playing along northern coastlines?",
        "Harp seals are found in the desert and sometimes in western parts of the "
        "imaginary frontier. Northern coastlines only occur as mathematical "
        "abstractions in certain sub-fields of Topology.",
    ),
    (
        "One travels along the road when riding in a Citroën?",
        "A Citroën is a type of hot air ballon. Roads are always found "
        "underground, often under the sea floor.",
    ),
    (
        "A play about the invasion of Iraq is called the Twelfth Night?",
        "The Twelfth Night is a plastic toy made by earthworms. The invasion of "
        "Iraq is a TV show also made by earthworms.",
    ),
    (
        "Ducks cannot fly when it is daytime?",
        "Ducks are Australian marsupials without wings. Daytime is also known as "
        "wingless fantasia.",
    ),
)

_FAMILY_DATA = {
    "binary": _BINARY,
    "span_or_binary": _SPAN_OR_BINARY,
    "multichoice": _MULTICHOICE,
}


def default_template(family: str, dialect: str = "assistant_style") -> PromptTemplate:
    """Look up a shipped template by family and dialect."""
    if family not in _FAMILY_DATA:
        raise ValidationError(
            f"unknown prompt family {family!r}; choose from {sorted(_FAMILY_DATA)}"
        )
    exemplars = tuple(Exemplar(q, r, a) for q, r, a in _FAMILY_DATA[family])
    return PromptTemplate(
        dialect=dialect,
        family=family,
        instruction=DEFAULT_INSTRUCTION,
        exemplars=exemplars,
    )


def template_to_records(template: PromptTemplate) -> list[dict[str, Any]]:
    """Serialize a template as one header record plus one per exemplar."""
    records: list[dict[str, Any]] = [
        {
            "kind": "template",
            "dialect": template.dialect,
            "family": template.family,
            "instruction": template.instruction,
            "answer_only": template.answer_only,
        }
    ]
    for exemplar in template.exemplars:
        records.append(
            {
                "kind": "exemplar",
                "question": exemplar.question,
                "rationale": exemplar.rationale,
                "answer": exemplar.answer,
            }
        )
    return records


def template_from_records(records: Iterable[dict[str, Any]]) -> PromptTemplate:
    header: dict[str, Any] | None = None
    exemplars: list[Exemplar] = []
    for record in records:
        if record.get("kind") == "template":
            header = record
        elif record.get("kind") == "exemplar":
            exemplars.append(
                Exemplar(
                    question=record.get("question", ""),
                    rationale=record.get("rationale", ""),
                    answer=record.get("answer", ""),
                )
            )
    if header is None:
        raise ValidationError("template file is missing its header record")
    return PromptTemplate(
        dialect=header.get("dialect", ""),
        family=header.get("family", ""),
        instruction=header.get("instruction", ""),
        exemplars=tuple(exemplars),
        answer_only=bool(header.get("answer_only", False)),
    )


def save_template(template: PromptTemplate, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for record in template_to_records(template):
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def load_template(path: str | Path) -> PromptTemplate:
    with Path(path).open("r", encoding="utf-8") as handle:
        records = [json.loads(line) for line in handle if line.strip()]
    return template_from_records(records)
