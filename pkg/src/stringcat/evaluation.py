"""Category-recovery scoring, synthetic data generators, and the inclusion
false-positive harness.

The recovery metric treats the (non-negative, row-normalized) encoded matrix
of the ground-truth categories as a two-dimensional probability distribution
and scores its normalized mutual information: 1 for any permutation of the
identity (perfect one-hot recovery), 0 for any constant matrix. Joint and
marginal probabilities are formed in exact rational arithmetic so those two
endpoint values come out exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, EvaluationError
from .minhash import inclusion_test, min_dim_for_inclusion, signature
from .textprep import char_ngram_set, normalize

# ground-truth labels used throughout the simulated recovery studies
ANIMAL_LABELS = (
    "chicken",
    "eagle",
    "giraffe",
    "horse",
    "leopard",
    "lion",
    "tiger",
    "turtle",
)


@dataclass
class RecoveryReport:
    encoder: str
    d: int
    nmi: float
    top_labels: list | None = None


@dataclass
class SyntheticSpec:
    """Configuration for the simulated categorical columns."""

    base_labels: Sequence[str]
    mode: str
    n: int
    poisson_rate: float = 1.0
    typo_rate: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not self.base_labels:
            raise ConfigError("base_labels must be non-empty")
        if self.mode not in ("multilabel", "typos"):
            raise ConfigError(f"unknown simulation mode {self.mode!r}")
        if self.n < 1:
            raise ConfigError(f"sample count must be >= 1, got {self.n}")
        if self.poisson_rate < 0:
            raise ConfigError("poisson_rate must be >= 0")
        if not (0.0 <= self.typo_rate <= 1.0):
            raise ConfigError("typo_rate must lie in [0, 1]")


def nmi_matrix(x) -> float:
    """Normalized mutual information of a non-negative matrix read as a joint
    distribution (rows l1-normalized, then equally weighted).

    Returns 0 when either marginal entropy is zero. Raises on all-zero rows.
    """
    x = np.abs(np.asarray(x, dtype=np.float64))
    if x.ndim != 2 or x.size == 0:
        raise EvaluationError(f"expected a non-empty 2-D matrix, got shape {x.shape}")
    n, m = x.shape

    joint: list[list] = []
    for i in range(n):
        row = [Fraction(v) for v in x[i]]
        total = sum(row)
        if total == 0:
            raise EvaluationError(f"row {i} is all zeros and cannot be normalized")
        joint.append([v / (total * n) for v in row])

    row_marg = [sum(r) for r in joint]
    col_marg = [sum(joint[i][j] for i in range(n)) for j in range(m)]

    info = 0.0
    for i in range(n):
        pi = row_marg[i]
        for j in range(m):
            p = joint[i][j]
            if p > 0:
                info += float(p) * math.log(float(p / (pi * col_marg[j])))
    h_row = sum(float(p) * math.log(float(1 / p)) for p in row_marg if p > 0)
    h_col = sum(float(p) * math.log(float(1 / p)) for p in col_marg if p > 0)
    if h_row == 0.0 or h_col == 0.0:
        return 0.0
    return min(1.0, max(0.0, 2.0 * info / (h_row + h_col)))


def recover_nmi(
    encode_fn: Callable[[Sequence[str]], np.ndarray],
    base_labels: Sequence[str],
    encoder_id: str = "encoder",
    top_labels: list | None = None,
) -> RecoveryReport:
    """Encode exactly the ground-truth categories (one row each) and score how
    close the result is to a one-hot matrix."""
    labels = list(base_labels)
    if len(set(labels)) != len(labels):
        raise ConfigError("base labels must be distinct")
    encoded = np.asarray(encode_fn(labels))
    return RecoveryReport(
        encoder=encoder_id,
        d=int(encoded.shape[1]),
        nmi=nmi_matrix(encoded),
        top_labels=top_labels,
    )


def gen_multilabel(spec: SyntheticSpec) -> list:
    """Each sample concatenates k+2 labels drawn uniformly with replacement,
    k ~ Poisson(poisson_rate), joined by single spaces."""
    if spec.mode != "multilabel":
        raise ConfigError(f"spec mode is {spec.mode!r}, expected 'multilabel'")
    rng = np.random.default_rng(spec.seed)
    labels = list(spec.base_labels)
    out = []
    for _ in range(spec.n):
        k = int(rng.poisson(spec.poisson_rate))
        picks = rng.integers(0, len(labels), size=k + 2)
        out.append(" ".join(labels[i] for i in picks))
    return out


def typo_delete(s: str, i: int) -> str:
    return s[:i] + s[i + 1 :]


def typo_swap(s: str, i: int) -> str:
    """Swap the adjacent characters at positions i and i+1."""
    return s[:i] + s[i + 1] + s[i] + s[i + 2 :]


def typo_insert(s: str, i: int, ch: str) -> str:
    return s[:i] + ch + s[i:]


def typo_replace(s: str, i: int, ch: str) -> str:
    return s[:i] + ch + s[i + 1 :]


_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _one_typo(s: str, rng: np.random.Generator) -> str:
    ops = 4 if len(s) >= 2 else 2  # deletion and swap need at least 2 chars
    op = int(rng.integers(0, ops))
    if op == 0:
        return typo_insert(s, int(rng.integers(0, len(s) + 1)), _LETTERS[int(rng.integers(0, 26))])
    if op == 1:
        return typo_replace(s, int(rng.integers(0, len(s))), _LETTERS[int(rng.integers(0, 26))])
    if op == 2:
        return typo_delete(s, int(rng.integers(0, len(s))))
    return typo_swap(s, int(rng.integers(0, len(s) - 1)))


def gen_typos(spec: SyntheticSpec) -> list:
    """Verbatim labels, except a typo_rate fraction of samples gets exactly one
    random character error (deletion, adjacent swap, insertion, replacement)."""
    if spec.mode != "typos":
        raise ConfigError(f"spec mode is {spec.mode!r}, expected 'typos'")
    rng = np.random.default_rng(spec.seed)
    labels = list(spec.base_labels)
    out = []
    for _ in range(spec.n):
        s = labels[int(rng.integers(0, len(labels)))]
        if rng.random() < spec.typo_rate:
            s = _one_typo(s, rng)
        out.append(s)
    return out


def relative_score(scores: Mapping, groups: Mapping) -> dict:
    """Rescale raw scores to [0, 100] within each group: 100 (s - min)/(max - min).

    Groups whose scores are all equal are undefined and omitted from the
    result.
    """
    out: dict = {}
    for gid, members in groups.items():
        members = list(members)
        if len(members) < 2:
            raise ConfigError(f"group {gid!r} needs at least 2 scores")
        vals = [scores[c] for c in members]
        lo, hi = min(vals), max(vals)
        if hi == lo:
            continue
        for c in members:
            out[c] = 100.0 * (scores[c] - lo) / (hi - lo)
    return out


def fpr_experiment(
    corpus: Sequence[str],
    probe_words: Sequence[str],
    epsilon_grid: Sequence[float],
    ky_max: int | None = None,
    n_min: int = 2,
    n_max: int = 4,
    ratio_convention: str = "grams",
) -> list:
    """Empirical false-positive rates of the inclusion test at the dimension
    the inclusion bound prescribes for each epsilon.

    For every probe word and every corpus entry that does NOT contain the word
    as a substring, count how often the signature inclusion test fires anyway.
    The set-size ratio kx/ky is taken either from gram counts
    (min word-gram-count over max entry-gram-count) or, with
    ``ratio_convention="words"``, as one over the maximum number of
    whitespace-separated words per entry; each result row records the
    convention used.

    A single word's pairs all share that word's one realized signature (and
    corpus entries share grams with each other), so per-word rates scatter
    widely around the nominal level: some words land well above epsilon, most
    well below. Judge the epsilon guarantee on the aggregate across words, or
    on independent random pairs; a per-word row is a diagnostic, not a bound.
    """
    if ratio_convention not in ("grams", "words"):
        raise ConfigError(f"unknown ratio convention {ratio_convention!r}")
    words = [normalize(w) for w in probe_words]
    entries = [normalize(s) for s in corpus]
    if not words or not entries:
        raise ConfigError("need at least one probe word and one corpus entry")

    word_grams = {w: char_ngram_set(w, n_min, n_max) for w in words}
    for w in words:
        if not any(w in e for e in entries):
            raise ConfigError(f"probe word {w!r} does not appear in any corpus entry")

    distinct_entries = list(dict.fromkeys(entries))
    entry_grams = {e: char_ngram_set(e, n_min, n_max) for e in distinct_entries}
    if ky_max is not None:
        entries = [e for e in entries if len(entry_grams[e]) <= ky_max]
        if not entries:
            raise ConfigError(f"no corpus entry has at most {ky_max} grams")

    if ratio_convention == "grams":
        kx = min(len(word_grams[w]) for w in words)
        ky = max(len(entry_grams[e]) for e in entries)
    else:
        kx = 1
        ky = max(len(e.split()) for e in entries)

    rows = []
    for eps in epsilon_grid:
        d = min_dim_for_inclusion(eps, kx, ky)
        entry_sigs = {e: signature(entry_grams[e], d) for e in set(entries)}
        for w in words:
            w_sig = signature(word_grams[w], d)
            negatives = [e for e in entries if w not in e]
            hits = sum(1 for e in negatives if inclusion_test(w_sig, entry_sigs[e]))
            rows.append(
                {
                    "epsilon": float(eps),
                    "d": d,
                    "word": w,
                    "n_pairs": len(negatives),
                    "fpr": (hits / len(negatives)) if negatives else float("nan"),
                    "convention": ratio_convention,
                }
            )
    return rows
