#!/usr/bin/env python3
"""Build the bundled challenge corpus.

The upstream coreference test sets are not redistributable from this repo, so
we generate a deterministic stand-in corpus with the same shape: 3,888
instances, 720 from the occupation-template family (240 per gender) and 3,168
from the two-entity family (1,586 male / 1,582 female, 1,584 pro / 1,584
anti).  Sentences are synthetic but structurally faithful: every instance has
an annotated single-token entity and a pronoun.

Usage: python scripts/build_challenge_set.py [out.tsv]
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from gendermt.corpus import (  # noqa: E402
    ChallengeInstance,
    Gender,
    SourceDataset,
    Stereotype,
    save_challenge_set,
)
from gendermt.ingest import load_majority_genders  # noqa: E402
from gendermt.tokens import tokenize  # noqa: E402

WG_OCCUPATIONS = [
    "technician", "accountant", "supervisor", "engineer", "worker",
    "educator", "clerk", "counselor", "inspector", "mechanic",
    "manager", "therapist", "administrator", "salesperson", "receptionist",
    "librarian", "advisor", "pharmacist", "janitor", "psychologist",
    "physician", "carpenter", "nurse", "investigator", "bartender",
    "specialist", "electrician", "officer", "pathologist", "teacher",
    "lawyer", "planner", "practitioner", "plumber", "instructor",
    "surgeon", "veterinarian", "paramedic", "examiner", "chemist",
    "machinist", "appraiser", "nutritionist", "architect", "hairdresser",
    "baker", "programmer", "paralegal", "hygienist", "scientist",
    "dispatcher", "cashier", "auditor", "dietitian", "painter",
    "broker", "chef", "doctor", "firefighter", "secretary",
]

WB_MALE_OCCUPATIONS = [
    "driver", "supervisor", "janitor", "cook", "mover",
    "laborer", "chief", "developer", "carpenter", "manager",
    "lawyer", "farmer", "salesperson", "physician", "guard",
    "analyst", "mechanic", "sheriff", "engineer", "plumber",
]

WB_FEMALE_OCCUPATIONS = [
    "attendant", "cashier", "teacher", "nurse", "assistant",
    "secretary", "auditor", "cleaner", "receptionist", "clerk",
    "counselor", "designer", "hairdresser", "writer", "housekeeper",
    "baker", "accountant", "editor", "librarian", "tailor",
]

# One-slot templates; {nom}/{poss}/{obj} pick the pronoun form.
WG_TEMPLATES = [
    "The {occ} told the customer that {nom} could pay with cash.",
    "The {occ} finished {poss} shift before noon.",
    "The visitor thanked the {occ} and paid {obj} in cash.",
    "The {occ} locked the office because {nom} had to leave early.",
]

# Two-slot templates; the annotated entity fills either slot.
WB_TEMPLATES = [
    "The {a} argued with the {b} because {nom} could not find the report.",
    "The {a} thanked the {b} because {nom} had fixed the schedule.",
]

PRONOUNS = {
    Gender.MALE: {"nom": "he", "poss": "his", "obj": "him"},
    Gender.FEMALE: {"nom": "she", "poss": "her", "obj": "her"},
    Gender.NEUTRAL: {"nom": "they", "poss": "their", "obj": "them"},
}

WB_COUNTS = {
    (Gender.MALE, Stereotype.PRO): 793,
    (Gender.FEMALE, Stereotype.PRO): 791,
    (Gender.MALE, Stereotype.ANTI): 793,
    (Gender.FEMALE, Stereotype.ANTI): 791,
}


def entity_index_of(sentence: str, entity: str) -> int:
    for index, token in enumerate(tokenize(sentence)):
        if token.lower() == entity.lower():
            return index
    raise ValueError(f"{entity!r} not in {sentence!r}")


def build_winogender(majority) -> list[ChallengeInstance]:
    instances = []
    for occ in WG_OCCUPATIONS:
        for t_idx, template in enumerate(WG_TEMPLATES):
            for gender in (Gender.MALE, Gender.FEMALE, Gender.NEUTRAL):
                forms = PRONOUNS[gender]
                sentence = template.format(occ=occ, **forms)
                if gender is Gender.NEUTRAL:
                    stereotype = Stereotype.NEUTRAL
                elif majority[occ] is gender:
                    stereotype = Stereotype.PRO
                else:
                    stereotype = Stereotype.ANTI
                instances.append(
                    ChallengeInstance(
                        id=f"wg-{occ}-{t_idx}-{gender.value}",
                        sentence=sentence,
                        entity_index=entity_index_of(sentence, occ),
                        entity_phrase=occ,
                        gold_gender=gender,
                        stereotype=stereotype,
                        source_dataset=SourceDataset.WINOGENDER,
                    )
                )
    return instances


def wb_stream(gender: Gender, stereotype: Stereotype):
    """Deterministic instance stream for one (gender, stereotype) cell."""
    forms = PRONOUNS[gender]
    # Pro: the referent's majority gender matches the pronoun.
    if (stereotype is Stereotype.PRO) == (gender is Gender.MALE):
        referents, others = WB_MALE_OCCUPATIONS, WB_FEMALE_OCCUPATIONS
    else:
        referents, others = WB_FEMALE_OCCUPATIONS, WB_MALE_OCCUPATIONS
    serial = 0
    for template in WB_TEMPLATES:
        for i, referent in enumerate(referents):
            for j, other in enumerate(others):
                serial += 1
                if (i + j) % 2 == 0:
                    a, b = referent, other
                else:
                    a, b = other, referent
                sentence = template.format(a=a, b=b, **forms)
                yield ChallengeInstance(
                    id=f"wb-{stereotype.value}-{gender.value}-{serial:04d}",
                    sentence=sentence,
                    entity_index=entity_index_of(sentence, referent),
                    entity_phrase=referent,
                    gold_gender=gender,
                    stereotype=stereotype,
                    source_dataset=SourceDataset.WINOBIAS,
                )


def build_winobias() -> list[ChallengeInstance]:
    instances = []
    for (gender, stereotype), count in WB_COUNTS.items():
        stream = wb_stream(gender, stereotype)
        instances.extend(next(stream) for _ in range(count))
    return instances


def main() -> None:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parent.parent / "data" / "challenge_set.tsv"
    )
    majority = load_majority_genders()
    missing = [o for o in WG_OCCUPATIONS if o not in majority]
    if missing:
        raise SystemExit(f"occupations missing from majority list: {missing}")
    instances = build_winogender(majority) + build_winobias()
    out.parent.mkdir(parents=True, exist_ok=True)
    save_challenge_set(out, instances)
    print(f"wrote {len(instances)} instances to {out}")


if __name__ == "__main__":
    main()
