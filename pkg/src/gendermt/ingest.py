"""Converters from the upstream coreference dataset releases.

The native corpus format is decoupled from the upstream files on purpose;
these converters map each release into validated instances.  Column and
bracket conventions are documented in the README.
"""

from __future__ import annotations

import re
from importlib import resources
from pathlib import Path

from .corpus import (
    ChallengeInstance,
    CorpusError,
    Gender,
    SourceDataset,
    Stereotype,
)
from .tokens import tokenize

MALE_PRONOUNS = frozenset({"he", "his", "him"})
FEMALE_PRONOUNS = frozenset({"she", "her"})

_BRACKET_SPAN = re.compile(r"\[([^\[\]]+)\]")


def load_majority_genders(path: str | Path | None = None) -> dict[str, Gender]:
    """Occupation -> majority gender, from the bundled labor-statistics list.

    Used to assign pro/anti stereotype labels when the upstream file carries
    none.  Pass ``path`` to substitute an updated list.
    """
    if path is None:
        text = (
            resources.files("gendermt.data")
            .joinpath("bls_majority.tsv")
            .read_text(encoding="utf-8")
        )
    else:
        text = Path(path).read_text(encoding="utf-8")
    majority: dict[str, Gender] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise CorpusError("expected `occupation<TAB>gender`", line_number)
        occupation, gender = fields
        if gender not in ("male", "female"):
            raise CorpusError(f"majority gender must be male or female, got {gender!r}", line_number)
        majority[occupation.lower()] = Gender(gender)
    return majority


def ingest_winogender(
    path: str | Path, majority: dict[str, Gender] | None = None
) -> list[ChallengeInstance]:
    """Convert the upstream one-sentence-per-line TSV.

    Expected columns: ``sentid<TAB>sentence`` where sentid is
    ``occupation.participant.answer.gender.txt`` (answer 0 means the pronoun
    refers to the occupation, 1 to the participant).  Gendered instances are
    labeled pro/anti against the majority list; everything else is neutral.
    """
    if majority is None:
        majority = load_majority_genders()
    instances: list[ChallengeInstance] = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line or line.startswith("sentid"):
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise CorpusError("expected `sentid<TAB>sentence`", line_number)
            sentid, sentence = fields
            parts = sentid.split(".")
            if len(parts) < 4:
                raise CorpusError(f"unparseable sentid {sentid!r}", line_number)
            occupation, participant, answer, gender_word = parts[:4]
            referent = occupation if answer == "0" else participant
            try:
                gold = Gender(gender_word)
            except ValueError:
                raise CorpusError(f"unknown gender {gender_word!r} in sentid", line_number)
            entity_index = _find_token(sentence, referent, line_number)
            if gold is Gender.NEUTRAL or referent.lower() not in majority:
                stereotype = Stereotype.NEUTRAL
            elif majority[referent.lower()] is gold:
                stereotype = Stereotype.PRO
            else:
                stereotype = Stereotype.ANTI
            instances.append(
                ChallengeInstance(
                    id=f"wg-{sentid}",
                    sentence=sentence,
                    entity_index=entity_index,
                    entity_phrase=referent,
                    gold_gender=gold,
                    stereotype=stereotype,
                    source_dataset=SourceDataset.WINOGENDER,
                )
            )
    return instances


def ingest_winobias(
    path: str | Path, stereotype: Stereotype, id_prefix: str = "wb"
) -> list[ChallengeInstance]:
    """Convert an upstream bracket-annotated file (one pro or anti split).

    Lines look like ``N [The developer] argued with the designer because
    [he] did not like the design.``; the first bracketed span is the entity,
    the second the pronoun.  The stereotype label comes from which file the
    line belongs to, so callers pass it explicitly.
    """
    if stereotype is Stereotype.NEUTRAL:
        raise ValueError("upstream splits are pro or anti, never neutral")
    instances: list[ChallengeInstance] = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.rstrip("\n").rstrip("\r")
            if not line:
                continue
            match = re.match(r"\s*(\d+)\s+(.*)$", line)
            if not match:
                raise CorpusError("expected `N [entity] ... [pronoun] ...`", line_number)
            number, text = match.groups()
            spans = list(_BRACKET_SPAN.finditer(text))
            if len(spans) < 2:
                raise CorpusError("expected two bracketed spans", line_number)
            entity_tokens = tokenize(spans[0].group(1))
            pronoun = spans[1].group(1).strip().lower()
            if pronoun in MALE_PRONOUNS:
                gold = Gender.MALE
            elif pronoun in FEMALE_PRONOUNS:
                gold = Gender.FEMALE
            else:
                raise CorpusError(f"unrecognized pronoun {pronoun!r}", line_number)
            prefix = text[: spans[0].start()].replace("[", "").replace("]", "")
            entity_index = len(tokenize(prefix)) + len(entity_tokens) - 1
            sentence = text.replace("[", "").replace("]", "")
            instances.append(
                ChallengeInstance(
                    id=f"{id_prefix}-{stereotype.value}-{line_number:04d}-{number}",
                    sentence=sentence,
                    entity_index=entity_index,
                    entity_phrase=entity_tokens[-1],
                    gold_gender=gold,
                    stereotype=stereotype,
                    source_dataset=SourceDataset.WINOBIAS,
                )
            )
    return instances


def _find_token(sentence: str, word: str, line_number: int) -> int:
    lowered = word.lower()
    for index, token in enumerate(tokenize(sentence)):
        if token.lower() == lowered:
            return index
    raise CorpusError(f"referent {word!r} not found in sentence", line_number)
