"""Grammatical gender extraction from target-language tokens.

Given the token span a source entity aligned to, the extractor inspects the
aligned tokens plus a two-token determiner window before them and collects
evidence from three sources, in strict precedence order: lexicon entries,
gendered determiners, and inflection suffixes.  The rules are deliberately
conservative reconstructions: where a form is ambiguous (French/Italian l',
German plural die, Hebrew homographs) the evidence is recorded as
uninformative and the verdict falls back to Unknown rather than guessing.
"""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .languages import DEFAULT_LANGUAGES, UnsupportedLanguageError


class PredictedGender(enum.Enum):
    MASCULINE = "masculine"
    FEMININE = "feminine"
    NEUTRAL = "neutral"
    UNKNOWN = "unknown"


class EvidenceKind(enum.Enum):
    LEXICON = "lexicon"
    DETERMINER = "determiner"
    SUFFIX = "suffix"


class LexiconError(ValueError):
    pass


@dataclass(frozen=True)
class GenderEvidence:
    """One observation; ``decisive=False`` marks recorded-but-insufficient."""

    kind: EvidenceKind
    token: str
    verdict: PredictedGender
    decisive: bool = True


@dataclass(frozen=True)
class GenderCall:
    """Verdict plus the full evidence chain that produced it."""

    verdict: PredictedGender
    evidence: tuple[GenderEvidence, ...]
    language: str
    fixed_gender: bool = False


@dataclass(frozen=True)
class GenderLexicon:
    """Surface form -> gender, case-folded and NFC-normalized per language."""

    language: str
    entries: dict[str, PredictedGender] = field(default_factory=dict)
    fixed_gender: frozenset[str] = frozenset()

    def lookup(self, folded: str) -> PredictedGender | None:
        return self.entries.get(folded)


@dataclass(frozen=True)
class _SuffixRule:
    suffix: str
    verdict: PredictedGender
    decisive: bool = True


@dataclass(frozen=True)
class _Rules:
    determiners: dict[str, PredictedGender] = field(default_factory=dict)
    contracted: dict[str, PredictedGender] = field(default_factory=dict)
    suffixes: tuple[_SuffixRule, ...] = ()
    suffix_exceptions: frozenset[str] = frozenset()
    exception_suffixes: tuple[str, ...] = ()
    masculine_final_consonants: str = ""
    article_prefixes: tuple[str, ...] = ()
    die_plural_check: bool = False


_M = PredictedGender.MASCULINE
_F = PredictedGender.FEMININE
_N = PredictedGender.NEUTRAL
_U = PredictedGender.UNKNOWN

# Tokens shorter than suffix length + this margin give no suffix evidence;
# keeps single-character function words from voting.
_SUFFIX_LENGTH_MARGIN = 3

_CYRILLIC_CONSONANTS_RU = "бвгджзйклмнпрстфхцчшщ"
_CYRILLIC_CONSONANTS_UK = "бвгґджзйклмнпрстфхцчшщ"

RULES: dict[str, _Rules] = {
    "es": _Rules(
        determiners={
            "el": _M, "los": _M, "un": _M, "al": _M, "del": _M,
            "la": _F, "las": _F, "una": _F,
        },
        suffixes=(_SuffixRule("a", _F), _SuffixRule("o", _M)),
        exception_suffixes=("ista",),
        suffix_exceptions=frozenset({"policía", "policia", "guardia", "colega"}),
    ),
    "it": _Rules(
        determiners={
            "il": _M, "lo": _M, "i": _M, "gli": _M, "un": _M,
            "del": _M, "dello": _M, "dei": _M, "al": _M, "allo": _M, "dal": _M,
            "la": _F, "le": _F, "una": _F, "della": _F, "delle": _F,
            "alla": _F, "dalla": _F,
            "l'": _U, "l": _U, "un'": _F, "dell'": _U, "all'": _U,
        },
        contracted={"l'": _U, "un'": _F, "dell'": _U, "all'": _U},
        suffixes=(_SuffixRule("a", _F), _SuffixRule("o", _M)),
        exception_suffixes=("ista",),
    ),
    "fr": _Rules(
        determiners={
            "le": _M, "un": _M, "du": _M, "au": _M,
            "la": _F, "une": _F,
            "l'": _U, "l": _U,
        },
        contracted={"l'": _U, "d'": _U},
        suffixes=(_SuffixRule("e", _F, decisive=False),),
    ),
    "de": _Rules(
        determiners={"der": _M, "das": _N, "eine": _F, "ein": _U},
        suffixes=(_SuffixRule("in", _F),),
        die_plural_check=True,
    ),
    "ru": _Rules(
        suffixes=(_SuffixRule("ка", _F), _SuffixRule("а", _F), _SuffixRule("я", _F)),
        masculine_final_consonants=_CYRILLIC_CONSONANTS_RU,
    ),
    "uk": _Rules(
        suffixes=(_SuffixRule("ка", _F), _SuffixRule("а", _F), _SuffixRule("я", _F)),
        masculine_final_consonants=_CYRILLIC_CONSONANTS_UK,
    ),
    "he": _Rules(
        suffixes=(_SuffixRule("ה", _F), _SuffixRule("ת", _F)),
        suffix_exceptions=frozenset(
            {"מורה", "אופה", "רואה", "בונה", "קונה", "מנקה", "מלווה", "זוכה"}
        ),
        article_prefixes=("ה",),
    ),
    "ar": _Rules(
        suffixes=(_SuffixRule("ة", _F),),
        article_prefixes=("ال",),
    ),
}

# German plural heuristic: "die" only signals feminine when the following
# noun does not look plural (-in marks a feminine singular, so it is exempt).
_DE_PLURAL_ENDINGS = ("en", "er", "e", "n", "s")

_APOSTROPHES = ("'", "’")


def _fold(token: str) -> str:
    return unicodedata.normalize("NFC", token).lower()


def supported_languages() -> tuple[str, ...]:
    return DEFAULT_LANGUAGES


def _require_rules(language: str) -> _Rules:
    rules = RULES.get(language)
    if rules is None:
        raise UnsupportedLanguageError(
            f"no morphology rules for language {language!r}"
        )
    return rules


def _split_contracted(folded: str, rules: _Rules) -> tuple[str | None, str]:
    """Split a leading contracted determiner (l'aviatrice -> l', aviatrice)."""
    for prefix in rules.contracted:
        for apostrophe in _APOSTROPHES:
            head = prefix[:-1] + apostrophe
            if folded.startswith(head) and len(folded) > len(head):
                return prefix, folded[len(head):]
    return None, folded


def _lexicon_lookup(
    folded: str, lexicon: GenderLexicon, rules: _Rules
) -> tuple[str, PredictedGender] | None:
    """Try the folded form, then with a leading article stripped."""
    verdict = lexicon.lookup(folded)
    if verdict is not None:
        return folded, verdict
    for prefix in rules.article_prefixes:
        if folded.startswith(prefix) and len(folded) > len(prefix) + 1:
            stripped = folded[len(prefix):]
            verdict = lexicon.lookup(stripped)
            if verdict is not None:
                return stripped, verdict
    return None


def _suffix_evidence(core: str, rules: _Rules) -> tuple[PredictedGender, bool] | None:
    if core in rules.suffix_exceptions:
        return None
    if any(core.endswith(s) for s in rules.exception_suffixes):
        return None
    for rule in rules.suffixes:
        if len(core) >= len(rule.suffix) + _SUFFIX_LENGTH_MARGIN and core.endswith(
            rule.suffix
        ):
            return rule.verdict, rule.decisive
    if rules.masculine_final_consonants and len(core) >= _SUFFIX_LENGTH_MARGIN:
        if core[-1] in rules.masculine_final_consonants:
            return _M, True
    return None


def _determiner_verdict(
    folded: str, position: int, tokens: list[str], rules: _Rules
) -> PredictedGender | None:
    if rules.die_plural_check and folded == "die":
        if position + 1 < len(tokens):
            following = _fold(tokens[position + 1])
            if not following.endswith("in") and following.endswith(_DE_PLURAL_ENDINGS):
                return _U
        return _F
    return rules.determiners.get(folded)


def extract_gender(
    language: str,
    target_tokens: list[str],
    entity_target_indices: set[int] | frozenset[int],
    lexicon: GenderLexicon,
) -> GenderCall:
    """Decide the grammatical gender of the aligned entity tokens."""
    rules = _require_rules(language)
    if not entity_target_indices:
        raise ValueError("entity_target_indices must be non-empty")
    aligned = sorted(entity_target_indices)
    if aligned[0] < 0 or aligned[-1] >= len(target_tokens):
        raise ValueError(
            f"entity index out of range for {len(target_tokens)} tokens: {aligned}"
        )
    window_start = max(0, aligned[0] - 2)
    window_positions = list(range(window_start, aligned[0])) + aligned

    lexicon_evidence: list[GenderEvidence] = []
    determiner_evidence: list[GenderEvidence] = []
    suffix_evidence: list[GenderEvidence] = []
    fixed = False

    for position in aligned:
        token = target_tokens[position]
        folded = _fold(token)
        prefix, core = _split_contracted(folded, rules)
        if prefix is not None:
            determiner_evidence.append(
                GenderEvidence(EvidenceKind.DETERMINER, token, rules.contracted[prefix])
            )
        hit = _lexicon_lookup(core, lexicon, rules)
        if hit is not None:
            form, verdict = hit
            lexicon_evidence.append(
                GenderEvidence(EvidenceKind.LEXICON, token, verdict)
            )
            if form in lexicon.fixed_gender:
                fixed = True
            continue
        found = _suffix_evidence(core, rules)
        if found is not None:
            verdict, decisive = found
            suffix_evidence.append(
                GenderEvidence(EvidenceKind.SUFFIX, token, verdict, decisive)
            )

    for position in window_positions:
        token = target_tokens[position]
        verdict = _determiner_verdict(_fold(token), position, target_tokens, rules)
        if verdict is not None:
            determiner_evidence.append(
                GenderEvidence(EvidenceKind.DETERMINER, token, verdict)
            )

    evidence = tuple(lexicon_evidence + determiner_evidence + suffix_evidence)
    verdict = _decide((lexicon_evidence, determiner_evidence, suffix_evidence))
    return GenderCall(
        verdict=verdict,
        evidence=evidence,
        language=language,
        fixed_gender=fixed,
    )


def _decide(levels: tuple[list[GenderEvidence], ...]) -> PredictedGender:
    """Walk precedence levels; first informative level decides or conflicts."""
    for level in levels:
        informative = {
            e.verdict for e in level if e.decisive and e.verdict is not _U
        }
        if len(informative) == 1:
            return next(iter(informative))
        if len(informative) > 1:
            return _U
    return _U


def base_lexicon(language: str) -> GenderLexicon:
    """Load the bundled lexicon for a supported language."""
    _require_rules(language)
    text = (
        resources.files("gendermt.data")
        .joinpath(f"lexicons/{language}.tsv")
        .read_text(encoding="utf-8")
    )
    entries, fixed = _parse_lexicon_text(text, f"bundled {language} lexicon")
    return GenderLexicon(language, entries, frozenset(fixed))


def load_lexicon(language: str, path: str | Path) -> GenderLexicon:
    """Merge a user lexicon TSV over the bundled base; user entries win."""
    base = base_lexicon(language)
    text = Path(path).read_text(encoding="utf-8")
    entries, fixed = _parse_lexicon_text(text, str(path))
    merged = dict(base.entries)
    merged.update(entries)
    merged_fixed = set(base.fixed_gender)
    # A user redefinition clears the bundled fixed flag unless re-asserted.
    merged_fixed -= set(entries)
    merged_fixed |= set(fixed)
    return GenderLexicon(language, merged, frozenset(merged_fixed))


_LEXICON_GENDERS = {
    "masculine": _M,
    "feminine": _F,
    "neutral": _N,
}


def _parse_lexicon_text(
    text: str, origin: str
) -> tuple[dict[str, PredictedGender], set[str]]:
    entries: dict[str, PredictedGender] = {}
    fixed: set[str] = set()
    for line_number, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) not in (2, 3):
            raise LexiconError(
                f"{origin}, line {line_number}: expected "
                "`surface<TAB>gender[<TAB>fixed_gender]`"
            )
        surface = _fold(fields[0].strip())
        gender = fields[1].strip()
        if gender not in _LEXICON_GENDERS:
            allowed = ", ".join(_LEXICON_GENDERS)
            raise LexiconError(
                f"{origin}, line {line_number}: bad gender {gender!r} "
                f"(allowed: {allowed})"
            )
        entries[surface] = _LEXICON_GENDERS[gender]
        if len(fields) == 3:
            if fields[2].strip() != "fixed_gender":
                raise LexiconError(
                    f"{origin}, line {line_number}: third column must be "
                    "`fixed_gender`"
                )
            fixed.add(surface)
    return entries, fixed
