"""Challenge-set loading, validation, statistics, and adjective injection.

The corpus is a concatenation of two Winograd-style coreference test sets in
which professions are cast in stereotypical and non-stereotypical gender
roles.  Instances live in a native TSV format (one per line, seven columns);
converters from the upstream dataset releases are provided separately.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from pathlib import Path

from .tokens import tokenize

PRONOUNS = frozenset(
    {"he", "she", "his", "her", "him", "they", "their", "them"}
)

MALE_ADJECTIVE = "handsome"
FEMALE_ADJECTIVE = "pretty"
INJECTED_ID_SUFFIX = ".adj"

NATIVE_COLUMNS = (
    "id",
    "source_dataset",
    "gold_gender",
    "stereotype",
    "entity_index",
    "entity_phrase",
    "sentence",
)


class CorpusError(ValueError):
    """Malformed corpus content; carries the offending line when known."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class Gender(enum.Enum):
    MALE = "male"
    FEMALE = "female"
    NEUTRAL = "neutral"


class Stereotype(enum.Enum):
    PRO = "pro"
    ANTI = "anti"
    NEUTRAL = "neutral"


class SourceDataset(enum.Enum):
    WINOGENDER = "winogender"
    WINOBIAS = "winobias"


def _parse_enum(cls, value: str, line_number: int | None = None):
    try:
        return cls(value)
    except ValueError:
        allowed = ", ".join(m.value for m in cls)
        raise CorpusError(
            f"bad {cls.__name__.lower()} value {value!r} (allowed: {allowed})",
            line_number,
        ) from None


@dataclass(frozen=True)
class ChallengeInstance:
    """One English sentence with its annotated entity and gold gender.

    ``entity_index`` addresses the entity head word in the tokenized sentence
    (whitespace split, edge punctuation split off).  The sentence always
    contains the pronoun whose resolution fixes the entity's gold gender.
    """

    id: str
    sentence: str
    entity_index: int
    entity_phrase: str
    gold_gender: Gender
    stereotype: Stereotype
    source_dataset: SourceDataset

    def __post_init__(self):
        tokens = tokenize(self.sentence)
        if not 0 <= self.entity_index < len(tokens):
            raise CorpusError(
                f"entity_index {self.entity_index} out of range for "
                f"{len(tokens)}-token sentence (id {self.id})"
            )
        token = tokens[self.entity_index]
        if token.lower() != self.entity_phrase.lower():
            raise CorpusError(
                f"entity_index {self.entity_index} addresses {token!r}, "
                f"not entity_phrase {self.entity_phrase!r} (id {self.id})"
            )
        if not any(t.lower() in PRONOUNS for t in tokens):
            raise CorpusError(f"sentence contains no pronoun token (id {self.id})")

    @property
    def tokens(self) -> list[str]:
        return tokenize(self.sentence)


@dataclass(frozen=True)
class CorpusStats:
    """Instance counts per gender per source dataset."""

    counts: dict[SourceDataset, dict[Gender, int]] = field(default_factory=dict)
    total: int = 0

    def gender_total(self, gender: Gender) -> int:
        return sum(per_gender.get(gender, 0) for per_gender in self.counts.values())

    def dataset_total(self, dataset: SourceDataset) -> int:
        return sum(self.counts.get(dataset, {}).values())

    def cell(self, dataset: SourceDataset, gender: Gender) -> int:
        return self.counts.get(dataset, {}).get(gender, 0)

    def __add__(self, other: "CorpusStats") -> "CorpusStats":
        merged = {
            ds: {
                g: self.cell(ds, g) + other.cell(ds, g)
                for g in Gender
                if self.cell(ds, g) + other.cell(ds, g)
            }
            for ds in SourceDataset
        }
        merged = {ds: cells for ds, cells in merged.items() if cells}
        return CorpusStats(merged, self.total + other.total)

    def format_table(self) -> str:
        header = f"{'':<10}" + "".join(f"{ds.value:>12}" for ds in SourceDataset)
        header += f"{'total':>12}"
        lines = [header]
        for gender in Gender:
            row = f"{gender.value:<10}"
            row += "".join(f"{self.cell(ds, gender):>12}" for ds in SourceDataset)
            row += f"{self.gender_total(gender):>12}"
            lines.append(row)
        totals = f"{'total':<10}"
        totals += "".join(f"{self.dataset_total(ds):>12}" for ds in SourceDataset)
        totals += f"{self.total:>12}"
        lines.append(totals)
        return "\n".join(lines)


def parse_line(line: str, line_number: int | None = None) -> ChallengeInstance:
    """Parse one native TSV line into a validated instance."""
    fields = line.rstrip("\n").rstrip("\r").split("\t")
    if len(fields) != len(NATIVE_COLUMNS):
        raise CorpusError(
            f"expected {len(NATIVE_COLUMNS)} tab-separated columns, "
            f"got {len(fields)}",
            line_number,
        )
    id_, dataset, gender, stereotype, index, phrase, sentence = fields
    try:
        entity_index = int(index)
    except ValueError:
        raise CorpusError(f"entity_index {index!r} is not an integer", line_number)
    try:
        return ChallengeInstance(
            id=id_,
            sentence=sentence,
            entity_index=entity_index,
            entity_phrase=phrase,
            gold_gender=_parse_enum(Gender, gender, line_number),
            stereotype=_parse_enum(Stereotype, stereotype, line_number),
            source_dataset=_parse_enum(SourceDataset, dataset, line_number),
        )
    except CorpusError as err:
        if err.line_number is None:
            raise CorpusError(str(err), line_number) from None
        raise


def format_line(instance: ChallengeInstance) -> str:
    return "\t".join(
        (
            instance.id,
            instance.source_dataset.value,
            instance.gold_gender.value,
            instance.stereotype.value,
            str(instance.entity_index),
            instance.entity_phrase,
            instance.sentence,
        )
    )


def load_challenge_set(
    path: str | Path, format: str = "native_tsv"
) -> list[ChallengeInstance]:
    """Load and validate a challenge corpus; raises on the first bad line."""
    if format != "native_tsv":
        raise ValueError(f"unknown corpus format {format!r}")
    instances: list[ChallengeInstance] = []
    seen_ids: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            instance = parse_line(line, line_number)
            if instance.id in seen_ids:
                raise CorpusError(f"duplicate id {instance.id!r}", line_number)
            seen_ids.add(instance.id)
            instances.append(instance)
    return instances


def save_challenge_set(path: str | Path, instances: list[ChallengeInstance]) -> None:
    """Write instances in the native TSV format (UTF-8, LF endings)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for instance in instances:
            handle.write(format_line(instance) + "\n")


def corpus_stats(instances: list[ChallengeInstance]) -> CorpusStats:
    counts: dict[SourceDataset, dict[Gender, int]] = {}
    for instance in instances:
        per_gender = counts.setdefault(instance.source_dataset, {})
        per_gender[instance.gold_gender] = per_gender.get(instance.gold_gender, 0) + 1
    return CorpusStats(counts, total=len(instances))


def inject_adjectives(instances: list[ChallengeInstance]) -> list[ChallengeInstance]:
    """Prepend a stereotypically gendered adjective to each gendered entity.

    Male entities receive "handsome" and female entities "pretty", inserted
    immediately before the entity head token; gold-neutral instances pass
    through untouched.  Modified ids get a ``.adj`` suffix, and a corpus that
    already carries the suffix is rejected rather than double-injected.
    """
    if any(instance.id.endswith(INJECTED_ID_SUFFIX) for instance in instances):
        raise CorpusError(
            f"corpus already contains {INJECTED_ID_SUFFIX!r}-suffixed ids; "
            "refusing to inject twice"
        )
    out: list[ChallengeInstance] = []
    for instance in instances:
        if instance.gold_gender is Gender.NEUTRAL:
            out.append(instance)
            continue
        adjective = (
            MALE_ADJECTIVE if instance.gold_gender is Gender.MALE else FEMALE_ADJECTIVE
        )
        out.append(
            replace(
                instance,
                id=instance.id + INJECTED_ID_SUFFIX,
                sentence=_insert_before_entity(
                    instance.sentence, instance.entity_index, adjective
                ),
                entity_index=instance.entity_index + 1,
            )
        )
    return out


def _insert_before_entity(sentence: str, entity_index: int, word: str) -> str:
    """Insert ``word`` before the whitespace chunk holding the entity token."""
    chunks = sentence.split()
    token_count = 0
    for chunk_index, chunk in enumerate(chunks):
        token_count += len(tokenize(chunk))
        if token_count > entity_index:
            return " ".join(chunks[:chunk_index] + [word] + chunks[chunk_index:])
    raise CorpusError(f"entity_index {entity_index} beyond sentence end")
