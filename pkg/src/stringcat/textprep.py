"""String normalization, character n-grams, vocabularies, and sparse count matrices.

N-grams are taken over Unicode scalar values (Python ``str`` indexing), never
bytes, so multi-byte code points are not split. Strings shorter than the
minimum gram length contribute themselves as a single degenerate token, which
keeps one-character entries encodable.
"""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, VocabularyError


def normalize(s: str) -> str:
    """Lowercase ``s``; no other mutation."""
    return s.lower()


def _check_range(n_min: int, n_max: int) -> None:
    if n_min < 1 or n_max < n_min:
        raise ConfigError(f"invalid n-gram range [{n_min}, {n_max}]")


def char_ngrams(s: str, n_min: int, n_max: int) -> Counter:
    """Count all consecutive character n-grams of ``s`` for each n in [n_min, n_max].

    Returns an empty counter for the empty string; a string shorter than
    ``n_min`` counts once as its own token.
    """
    _check_range(n_min, n_max)
    if not s:
        return Counter()
    if len(s) < n_min:
        return Counter({s: 1})
    counts: Counter = Counter()
    for n in range(n_min, min(n_max, len(s)) + 1):
        for i in range(len(s) - n + 1):
            counts[s[i : i + n]] += 1
    return counts


def char_ngram_set(s: str, n_min: int, n_max: int) -> set:
    """Deduplicated n-grams of ``s`` (the support of :func:`char_ngrams`)."""
    return set(char_ngrams(s, n_min, n_max))


class Vocabulary:
    """Bijection between n-gram strings and column ids.

    Column order is first-appearance insertion order at build time and is
    persisted verbatim, so column ids are stable across save/load.
    """

    def __init__(self, grams: Iterable[str], n_min: int = 2, n_max: int = 4):
        _check_range(n_min, n_max)
        self.n_min = n_min
        self.n_max = n_max
        self.grams: list[str] = []
        self.index: dict[str, int] = {}
        for g in grams:
            if g not in self.index:
                self.index[g] = len(self.grams)
                self.grams.append(g)
        if not self.grams:
            raise VocabularyError("vocabulary is empty")

    def __len__(self) -> int:
        return len(self.grams)

    def __contains__(self, gram: str) -> bool:
        return gram in self.index

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Vocabulary)
            and self.grams == other.grams
            and (self.n_min, self.n_max) == (other.n_min, other.n_max)
        )

    def column(self, gram: str) -> int:
        return self.index[gram]

    def save(self, path) -> None:
        """One gram per line, UTF-8; line number = column id."""
        for g in self.grams:
            if "\n" in g or "\r" in g:
                raise VocabularyError(
                    f"gram {g!r} contains a line break and cannot be persisted "
                    "in the line-based vocabulary format"
                )
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for g in self.grams:
                fh.write(g + "\n")

    @classmethod
    def load(cls, path, n_min: int = 2, n_max: int = 4) -> "Vocabulary":
        with open(path, "r", encoding="utf-8", newline="\n") as fh:
            grams = [line.rstrip("\n") for line in fh]
        return cls(grams, n_min=n_min, n_max=n_max)


def build_vocabulary(corpus: Sequence[str], n_min: int, n_max: int) -> Vocabulary:
    """Union of n-grams over the normalized corpus, in first-appearance order."""
    _check_range(n_min, n_max)
    if len(corpus) == 0:
        raise VocabularyError("cannot build a vocabulary from an empty corpus")

    def _iter_grams():
        for s in corpus:
            s = normalize(s)
            if not s:
                continue
            if len(s) < n_min:
                yield s
                continue
            for n in range(n_min, min(n_max, len(s)) + 1):
                for i in range(len(s) - n + 1):
                    yield s[i : i + n]

    try:
        return Vocabulary(_iter_grams(), n_min=n_min, n_max=n_max)
    except VocabularyError:
        raise VocabularyError(
            "corpus yields no n-grams (all entries are empty strings)"
        ) from None


def count_matrix(corpus: Sequence[str], vocab: Vocabulary) -> sp.csr_matrix:
    """Sparse n-gram count matrix of the normalized corpus against ``vocab``.

    Entry (i, j) is the occurrence count of vocabulary gram j in string i;
    grams outside the vocabulary are dropped. Rows of out-of-vocabulary
    strings are stored empty.
    """
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for s in corpus:
        counts = char_ngrams(normalize(s), vocab.n_min, vocab.n_max)
        for g, c in counts.items():
            j = vocab.index.get(g)
            if j is not None:
                indices.append(j)
                data.append(float(c))
        indptr.append(len(indices))
    mat = sp.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(corpus), len(vocab)),
    )
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return mat


def hashed_count_matrix(
    corpus: Sequence[str], dim: int, n_min: int, n_max: int
) -> sp.csr_matrix:
    """N-gram counts accumulated into ``dim`` columns via hash32(gram, salt=0) mod dim.

    Deterministic; the row totals equal the exact count-row totals (counts are
    only relocated by the hashing, never lost).
    """
    from .minhash import hash32  # local import: minhash depends on textprep

    _check_range(n_min, n_max)
    if dim < 1:
        raise ConfigError(f"hashed dimension must be >= 1, got {dim}")
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for s in corpus:
        counts = char_ngrams(normalize(s), n_min, n_max)
        for g, c in counts.items():
            indices.append(hash32(g, 0) % dim)
            data.append(float(c))
        indptr.append(len(indices))
    mat = sp.csr_matrix(
        (np.asarray(data), np.asarray(indices, dtype=np.int64), np.asarray(indptr, dtype=np.int64)),
        shape=(len(corpus), dim),
    )
    mat.sum_duplicates()
    mat.eliminate_zeros()
    return mat


def save_count_matrix(mat: sp.spmatrix, path) -> None:
    """Coordinate triplet text format: header ``rows cols nnz``, then ``row col count``."""
    coo = sp.coo_matrix(mat)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{coo.shape[0]} {coo.shape[1]} {coo.nnz}\n")
        for r, c, v in zip(coo.row, coo.col, coo.data):
            fh.write(f"{r} {c} {int(v)}\n")


def load_count_matrix(path) -> sp.csr_matrix:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 3:
            raise ConfigError(f"malformed count-matrix header in {path}")
        rows, cols, nnz = (int(x) for x in header)
        r = np.empty(nnz, dtype=np.int64)
        c = np.empty(nnz, dtype=np.int64)
        v = np.empty(nnz, dtype=np.float64)
        for k in range(nnz):
            parts = fh.readline().split()
            r[k], c[k], v[k] = int(parts[0]), int(parts[1]), float(parts[2])
    return sp.coo_matrix((v, (r, c)), shape=(rows, cols)).tocsr()
