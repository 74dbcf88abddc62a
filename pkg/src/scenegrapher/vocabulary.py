"""Common-vocabulary reference lists for the annotation panel.

Lists are exact frequency counts over a corpus of graph documents or Visual
Genome style records, sorted by count descending (ties lexicographic).  A
builtin pair of 25 attributes + 25 predicates ships as package data for
deployments without a corpus.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

from .errors import ValidationError


@dataclass
class VocabularyList:
    kind: str  # "attribute" | "predicate"
    entries: list[tuple[str, int]] = field(default_factory=list)
    source: str = "builtin"

    def labels(self) -> list[str]:
        return [label for label, _ in self.entries]

    def top_k(self, k: int) -> list[str]:
        if k < 0:
            raise ValidationError(f"k must be nonnegative, got {k}")
        return self.labels()[:k]


def _sorted_entries(counts: Counter) -> list[tuple[str, int]]:
    return sorted(counts.items(), key=lambda item: (-item[1], item[0]))


@dataclass
class CorpusVocabulary:
    attributes: VocabularyList
    predicates: VocabularyList
    skipped_records: int = 0

    def __iter__(self):
        return iter((self.attributes, self.predicates))


def build_from_corpus(records: Iterable[dict], source: str = "corpus") -> CorpusVocabulary:
    """Count attribute labels and predicates over a record stream.

    Accepts our graph documents and Visual Genome style scene-graph records;
    labels are lowercased and trimmed before counting.  A malformed record is
    skipped (and counted in ``skipped_records``), never fatal.
    """
    attribute_counts: Counter = Counter()
    predicate_counts: Counter = Counter()
    skipped = 0
    for record in records:
        try:
            attrs, preds = _extract_labels(record)
        except (KeyError, TypeError, AttributeError, ValueError):
            skipped += 1
            continue
        attribute_counts.update(attrs)
        predicate_counts.update(preds)
    return CorpusVocabulary(
        attributes=VocabularyList("attribute", _sorted_entries(attribute_counts), source),
        predicates=VocabularyList("predicate", _sorted_entries(predicate_counts), source),
        skipped_records=skipped,
    )


def _extract_labels(record: dict) -> tuple[list[str], list[str]]:
    if not isinstance(record, dict):
        raise TypeError("record must be an object")
    attributes: list[str] = []
    predicates: list[str] = []
    for obj in record.get("objects", []):
        for attr in obj.get("attributes", []):
            if isinstance(attr, str):
                label = attr
            else:  # our documents use {"label": ...}; some VG dumps {"attribute": ...}
                label = attr.get("label", attr.get("attribute"))
            attributes.append(_normalize(label))
    for rel in record.get("relationships", []):
        predicates.append(_normalize(rel["predicate"]))
    return attributes, predicates


def _normalize(label) -> str:
    if not isinstance(label, str):
        raise TypeError(f"label must be a string, got {type(label).__name__}")
    normalized = label.strip().lower()
    if not normalized:
        raise ValueError("empty label")
    return normalized


# -- tsv files ("label<TAB>count", one per line) ------------------------------


def save_tsv(vocabulary: VocabularyList, path: str | Path) -> None:
    lines = [f"{label}\t{count}\n" for label, count in vocabulary.entries]
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_tsv(path: str | Path, kind: str, source: str | None = None) -> VocabularyList:
    counts: Counter = Counter()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            label, count = line.split("\t")
            label = label.strip()
            if not label or label in counts:
                raise ValueError(label)
            counts[label] = int(count)
        except ValueError as exc:
            raise ValidationError(f"{path}:{lineno}: bad vocabulary line {line!r}") from exc
    return VocabularyList(kind, _sorted_entries(counts), source or str(path))


@lru_cache(maxsize=1)
def builtin_vocabulary() -> tuple[VocabularyList, VocabularyList]:
    """The shipped 25-attribute / 25-predicate reference lists."""
    data = resources.files("scenegrapher.data")
    with resources.as_file(data / "builtin_attributes.tsv") as path:
        attributes = load_tsv(path, "attribute", source="builtin")
    with resources.as_file(data / "builtin_predicates.tsv") as path:
        predicates = load_tsv(path, "predicate", source="builtin")
    return attributes, predicates
