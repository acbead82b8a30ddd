"""Reference encoders: one-hot and n-gram similarity encoding.

Similarity encoding maps a string to its vector of similarities against a
fixed prototype list; one-hot encoding is the special case of the discrete
exact-match similarity. Prototypes here are chosen by frequency (most common
categories first, ties broken lexicographically), which is deterministic and
keeps the prototype list reproducible.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError, EncodeError
from .textprep import char_ngram_set, normalize


@dataclass
class PrototypeSet:
    """Ordered list of distinct category strings; order fixes the columns."""

    prototypes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not self.prototypes:
            raise ConfigError("prototype set must contain at least one category")
        if len(set(self.prototypes)) != len(self.prototypes):
            raise ConfigError("prototype set contains duplicates")

    def __len__(self) -> int:
        return len(self.prototypes)

    def save(self, path) -> None:
        for p in self.prototypes:
            if "\n" in p or "\r" in p:
                raise ConfigError(
                    f"prototype {p!r} contains a line break and cannot be persisted"
                )
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for p in self.prototypes:
                fh.write(p + "\n")

    @classmethod
    def load(cls, path) -> "PrototypeSet":
        with open(path, "r", encoding="utf-8", newline="\n") as fh:
            return cls([line.rstrip("\n") for line in fh])


def ngram_jaccard(s1: str, s2: str, n_min: int = 2, n_max: int = 4) -> float:
    """Jaccard coefficient of the character n-gram sets of two strings."""
    g1 = char_ngram_set(s1, n_min, n_max)
    g2 = char_ngram_set(s2, n_min, n_max)
    if not g1 or not g2:
        raise EncodeError(
            f"n-gram similarity undefined: {(s1 if not g1 else s2)!r} yields no n-grams"
        )
    return len(g1 & g2) / len(g1 | g2)


def onehot_encode(strings: Sequence[str], categories: PrototypeSet) -> np.ndarray:
    """Indicator matrix against the known categories (exact match after
    normalization); unseen categories get the all-zero row, so distinct unseen
    values collide there."""
    index = {normalize(c): j for j, c in enumerate(categories.prototypes)}
    out = np.zeros((len(strings), len(categories)), dtype=np.float64)
    for i, s in enumerate(strings):
        j = index.get(normalize(s))
        if j is not None:
            out[i, j] = 1.0
    return out


def similarity_encode(
    strings: Sequence[str],
    prototypes: PrototypeSet,
    n_min: int = 2,
    n_max: int = 4,
) -> np.ndarray:
    """Row i = n-gram Jaccard similarities of string i to each prototype."""
    protos = [normalize(p) for p in prototypes.prototypes]
    proto_grams = [char_ngram_set(p, n_min, n_max) for p in protos]
    for p, g in zip(protos, proto_grams):
        if not g:
            raise EncodeError(f"prototype {p!r} yields no n-grams")
    out = np.empty((len(strings), len(protos)), dtype=np.float64)
    for i, s in enumerate(strings):
        gs = char_ngram_set(normalize(s), n_min, n_max)
        if not gs:
            raise EncodeError(f"row {i}: string {s!r} yields no n-grams")
        for j, gp in enumerate(proto_grams):
            out[i, j] = len(gs & gp) / len(gs | gp)
    return out


def select_prototypes_frequency(corpus: Sequence[str], k: int) -> PrototypeSet:
    """The k most frequent distinct normalized categories, ties lexicographic."""
    if k < 1:
        raise ConfigError(f"prototype count must be >= 1, got {k}")
    counts = Counter(normalize(s) for s in corpus)
    if len(counts) < k:
        raise ConfigError(
            f"corpus has only {len(counts)} distinct values, cannot select {k} prototypes"
        )
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return PrototypeSet([cat for cat, _ in ranked[:k]])
