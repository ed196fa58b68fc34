"""EM word alignment with a diagonal-distortion prior.

The model conditions on the English source and aligns each target token to a
source position (or to null): the probability of target position j aligning
to source position i is proportional to t(f_j | e_i) * exp(-lambda *
|i/n - j/m|), with a fixed null mass p0.  Training is plain EM over the
lexical table; the tension lambda is optionally fit by gradient steps that
match the model's expected diagonal deviation to the posterior's.

Positions inside the deviation feature are 1-based, so the first token of a
length-k sentence sits at 1/k.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .mt_clients import TranslationRecord
from .tokens import tokenize, tokenize_target

logger = logging.getLogger(__name__)

# Tension fitting constants, applied per gradient step.
TENSION_LEARNING_RATE = 20.0
TENSION_MIN = 0.1
TENSION_MAX = 14.0


class AlignerError(ValueError):
    pass


@dataclass(frozen=True)
class TokenizedPair:
    """A lowercased sentence pair; original-case target kept for morphology."""

    pair_id: str
    source_tokens: tuple[str, ...]
    target_tokens: tuple[str, ...]
    target_tokens_original: tuple[str, ...]


@dataclass(frozen=True)
class AlignerConfig:
    iterations: int = 5
    diagonal_tension: float = 4.0
    null_probability: float = 0.08
    optimize_tension: bool = True
    tension_steps: int = 8

    def __post_init__(self):
        if self.iterations < 1:
            raise AlignerError("iterations must be >= 1")
        if self.diagonal_tension <= 0:
            raise AlignerError("diagonal_tension must be positive")
        if not 0 < self.null_probability < 1:
            raise AlignerError("null_probability must be in (0, 1)")


@dataclass(frozen=True)
class Alignment:
    """Viterbi links for one pair; many-to-one toward the source side."""

    pair_id: str
    links: frozenset[tuple[int, int]]

    @property
    def pharaoh(self) -> str:
        return " ".join(f"{i}-{j}" for i, j in sorted(self.links, key=lambda l: (l[1], l[0])))

    def targets_of(self, source_index: int) -> set[int]:
        return {j for i, j in self.links if i == source_index}


@dataclass
class AlignmentModel:
    """Lexical table plus the fitted diagonal tension.

    ``table`` maps source word -> {target word -> probability}; the null
    source word is the key ``None``.  Rows are normalized after every M-step.
    """

    table: dict[str | None, dict[str, float]]
    diagonal_tension: float
    null_probability: float
    iteration_log_likelihoods: list[float] = field(default_factory=list)

    def prob(self, source: str | None, target: str) -> float:
        return self.table.get(source, {}).get(target, 0.0)

    def best_target(self, source: str | None) -> str | None:
        row = self.table.get(source)
        if not row:
            return None
        return max(row.items(), key=lambda item: item[1])[0]


def tokenize_pairs(records: list[TranslationRecord]) -> list[TokenizedPair]:
    """Tokenize usable records; pairs with an empty side are dropped."""
    pairs: list[TokenizedPair] = []
    excluded = 0
    for record in records:
        if not record.ok:
            excluded += 1
            continue
        source = tuple(t.lower() for t in tokenize(record.source))
        original = tuple(tokenize_target(record.target))
        target = tuple(t.lower() for t in original)
        if not source or not target:
            excluded += 1
            continue
        pairs.append(TokenizedPair(record.instance_id, source, target, original))
    if excluded:
        logger.info("excluded %d untrainable records", excluded)
    return pairs


def _deviation(i: int, j: int, n: int, m: int) -> float:
    return abs((i + 1) / n - (j + 1) / m)


def _delta_rows(n: int, m: int, tension: float) -> list[list[float]]:
    """Normalized diagonal prior: rows indexed by j, columns by i."""
    rows = []
    for j in range(m):
        weights = [math.exp(-tension * _deviation(i, j, n, m)) for i in range(n)]
        z = sum(weights)
        rows.append([w / z for w in weights])
    return rows


def expected_diagonal_deviation(
    length_pairs: Iterable[tuple[int, int]], tension: float
) -> float:
    """Sum over target positions of the prior's expected deviation."""
    total = 0.0
    for n, m in length_pairs:
        for j in range(m):
            weights = [math.exp(-tension * _deviation(i, j, n, m)) for i in range(n)]
            z = sum(weights)
            total += sum(w * _deviation(i, j, n, m) for i, w in enumerate(weights)) / z
    return total


def expected_diagonal_deviation_gradient(
    length_pairs: Iterable[tuple[int, int]], tension: float
) -> float:
    """d/d(tension) of expected_diagonal_deviation: minus the summed variance."""
    total = 0.0
    for n, m in length_pairs:
        for j in range(m):
            devs = [_deviation(i, j, n, m) for i in range(n)]
            weights = [math.exp(-tension * d) for d in devs]
            z = sum(weights)
            mean = sum(w * d for w, d in zip(weights, devs)) / z
            second = sum(w * d * d for w, d in zip(weights, devs)) / z
            total += mean * mean - second
    return total


def train(pairs: list[TokenizedPair], config: AlignerConfig | None = None) -> AlignmentModel:
    """Fit the lexical table (and optionally the tension) by EM."""
    if config is None:
        config = AlignerConfig()
    pairs = [p for p in pairs if p.source_tokens and p.target_tokens]
    if not pairs:
        raise AlignerError("no trainable pairs")

    p0 = config.null_probability
    tension = config.diagonal_tension

    # Uniform initialization over co-occurring words; null co-occurs with all.
    table: dict[str | None, dict[str, float]] = {}
    for pair in pairs:
        for f in pair.target_tokens:
            table.setdefault(None, {})[f] = 1.0
            for e in pair.source_tokens:
                table.setdefault(e, {})[f] = 1.0
    for row in table.values():
        uniform = 1.0 / len(row)
        for f in row:
            row[f] = uniform

    length_counts: dict[tuple[int, int], int] = {}
    total_target_tokens = 0
    for pair in pairs:
        key = (len(pair.source_tokens), len(pair.target_tokens))
        length_counts[key] = length_counts.get(key, 0) + 1
        total_target_tokens += len(pair.target_tokens)

    log_likelihoods: list[float] = []
    for _ in range(config.iterations):
        counts: dict[str | None, dict[str, float]] = {}
        delta_cache: dict[tuple[int, int], list[list[float]]] = {}
        log_likelihood = 0.0
        posterior_deviation = 0.0

        for pair in pairs:
            source = pair.source_tokens
            target = pair.target_tokens
            n, m = len(source), len(target)
            key = (n, m)
            delta = delta_cache.get(key)
            if delta is None:
                delta = delta_cache[key] = _delta_rows(n, m, tension)
            null_row = table[None]
            for j, f in enumerate(target):
                delta_j = delta[j]
                null_score = p0 * null_row[f]
                scores = [
                    (1.0 - p0) * delta_j[i] * table[e][f]
                    for i, e in enumerate(source)
                ]
                total = null_score + sum(scores)
                log_likelihood += math.log(total)
                counts.setdefault(None, {})
                counts[None][f] = counts[None].get(f, 0.0) + null_score / total
                for i, e in enumerate(source):
                    gamma = scores[i] / total
                    row = counts.setdefault(e, {})
                    row[f] = row.get(f, 0.0) + gamma
                    posterior_deviation += gamma * _deviation(i, j, n, m)

        # M-step: per-source-word normalization of expected counts.
        table = {}
        for e, row in counts.items():
            row_total = sum(row.values())
            table[e] = {f: c / row_total for f, c in row.items()}
        log_likelihoods.append(log_likelihood)

        if config.optimize_tension:
            emp = posterior_deviation / total_target_tokens
            for _ in range(config.tension_steps):
                mod = (
                    sum(
                        count * expected_diagonal_deviation([size], tension)
                        for size, count in length_counts.items()
                    )
                    / total_target_tokens
                )
                tension += TENSION_LEARNING_RATE * (mod - emp)
                tension = min(max(tension, TENSION_MIN), TENSION_MAX)

    return AlignmentModel(
        table=table,
        diagonal_tension=tension,
        null_probability=p0,
        iteration_log_likelihoods=log_likelihoods,
    )


def viterbi_align(model: AlignmentModel, pair: TokenizedPair) -> Alignment:
    """Link each target token to its argmax source position, or drop it.

    Ties go to the position closest to the diagonal, then to the smaller
    source index; a target word with no lexical mass anywhere falls back to
    the distortion prior alone.
    """
    source = pair.source_tokens
    target = pair.target_tokens
    n, m = len(source), len(target)
    p0 = model.null_probability
    tension = model.diagonal_tension
    links: set[tuple[int, int]] = set()
    if not n or not m:
        return Alignment(pair.pair_id, frozenset())
    delta = _delta_rows(n, m, tension)
    for j, f in enumerate(target):
        null_score = p0 * model.prob(None, f)
        best_i = None
        best_score = 0.0
        best_dev = math.inf
        any_mass = null_score > 0.0
        for i, e in enumerate(source):
            score = (1.0 - p0) * delta[j][i] * model.prob(e, f)
            if score > 0.0:
                any_mass = True
            dev = _deviation(i, j, n, m)
            if score > best_score or (score == best_score and dev < best_dev):
                best_i, best_score, best_dev = i, score, dev
        if not any_mass:
            # Unknown word: distortion-only, i.e. the most diagonal position.
            best = min(range(n), key=lambda i: (_deviation(i, j, n, m), i))
            links.add((best, j))
        elif best_i is not None and best_score >= null_score and best_score > 0.0:
            links.add((best_i, j))
    return Alignment(pair.pair_id, frozenset(links))


def align_corpus(model: AlignmentModel, pairs: list[TokenizedPair]) -> list[Alignment]:
    return [viterbi_align(model, pair) for pair in pairs]


def write_pharaoh(path: str | Path, alignments: list[Alignment]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for alignment in alignments:
            handle.write(alignment.pharaoh + "\n")


def parse_pharaoh_line(line: str) -> frozenset[tuple[int, int]]:
    links = set()
    for token in line.split():
        i, _, j = token.partition("-")
        links.add((int(i), int(j)))
    return frozenset(links)


def read_pharaoh(path: str | Path) -> list[frozenset[tuple[int, int]]]:
    with open(path, encoding="utf-8") as handle:
        return [parse_pharaoh_line(line) for line in handle]


MODEL_HEADER = "gendermt-alignment-model"
MODEL_VERSION = "v1"
_NULL_MARKER = ""


def save_model(path: str | Path, model: AlignmentModel) -> None:
    """Dump the lexical table as TSV triples under a versioned header."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(
            f"{MODEL_HEADER}\t{MODEL_VERSION}\t{model.diagonal_tension!r}"
            f"\t{model.null_probability!r}\n"
        )
        for e in sorted(model.table, key=lambda k: (k is not None, k or "")):
            marker = _NULL_MARKER if e is None else e
            for f in sorted(model.table[e]):
                handle.write(f"{marker}\t{f}\t{model.table[e][f]!r}\n")


def load_model(path: str | Path) -> AlignmentModel:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().rstrip("\n").split("\t")
        if len(header) != 4 or header[0] != MODEL_HEADER or header[1] != MODEL_VERSION:
            raise AlignerError(f"not a {MODEL_HEADER} {MODEL_VERSION} file: {path}")
        tension, p0 = float(header[2]), float(header[3])
        table: dict[str | None, dict[str, float]] = {}
        for line in handle:
            marker, f, prob = line.rstrip("\n").split("\t")
            e = None if marker == _NULL_MARKER else marker
            table.setdefault(e, {})[f] = float(prob)
    return AlignmentModel(table=table, diagonal_tension=tension, null_probability=p0)
