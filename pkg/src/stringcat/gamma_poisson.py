"""Online Gamma-Poisson factorization of n-gram count matrices.

Each count row f is modeled as a Poisson draw around x @ topics, with a Gamma
prior (shape alpha, scale beta) on the non-negative activations x. MAP
estimation alternates multiplicative updates:

  activations:  x <- [x * ((f / xL) @ L.T) + (alpha - 1)] / [colsum(L) + 1/beta]
  topics:       L <- L * (X.T @ (F / XL)) / colsum(X)          (per column)

where L is the (d, m) topic matrix and the divisions are element-wise on the
sparse support. The streaming solver accumulates the topic-update numerator
and denominator in discounted sums (factor rho) and rebuilds the topic matrix
every q processed rows, so memory and time stay linear in the stream. Repeated
category strings warm-start their activation solve from a cache of previously
converged activations, which is where most of the speed on real columns comes
from.

Topic rows stay strictly positive: the k-means-based initialization is
smoothed, and the accumulators start at a vanishingly small positive multiple
of the initial topics (scale 1e-30) so no column can be silently zeroed out by
an unlucky first mini-batch while the very first topic rebuild still matches
the pure batch recurrence to better than 1e-10.
"""

from __future__ import annotations

import dataclasses
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import gammaln

from . import matio
from .errors import ConfigError, NumericError, VocabularyError
from .textprep import (
    Vocabulary,
    build_vocabulary,
    count_matrix,
    hashed_count_matrix,
    normalize,
)

logger = logging.getLogger(__name__)

TOPIC_SMOOTHING = 1e-10
DIVISOR_FLOOR = 1e-10
ACTIVATION_FLOOR = 1e-10
INNER_ITER_CAP = 100
INIT_HASH_DIM = 128
KMEANS_RESTARTS = 10
ACC_INIT_SCALE = 1e-30
TRANSFORM_CHUNK = 4096


@dataclass
class GPParams:
    """Solver configuration; the defaults are sensible for most string columns."""

    d: int
    alpha: float = 1.1
    beta: float = 1.0
    rho: float = 0.95
    q: int = 256
    eta: float = 1e-4
    eps_inner: float = 1e-3
    n_min: int = 2
    n_max: int = 4
    max_epochs: int = 30
    rng_seed: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise ConfigError(f"topic count must be >= 1, got {self.d}")
        if self.alpha <= 0 or self.beta <= 0:
            raise ConfigError("alpha and beta must be positive")
        if not (0.0 < self.rho <= 1.0):
            raise ConfigError(f"discount factor must lie in (0, 1], got {self.rho}")
        if self.q < 1:
            raise ConfigError(f"mini-batch size must be >= 1, got {self.q}")
        if self.eta <= 0 or self.eps_inner <= 0:
            raise ConfigError("tolerances must be positive")
        if self.n_min < 1 or self.n_max < self.n_min:
            raise ConfigError(f"invalid n-gram range [{self.n_min}, {self.n_max}]")
        if self.max_epochs < 1:
            raise ConfigError(f"max_epochs must be >= 1, got {self.max_epochs}")


@dataclass
class GPModel:
    """Fitted state: topics, vocabulary, discounted accumulators, activation cache."""

    topics: np.ndarray
    vocab: Vocabulary
    params: GPParams
    acc_num: np.ndarray
    acc_den: np.ndarray
    activation_cache: dict = field(default_factory=dict)
    pending_num: np.ndarray | None = None
    pending_den: np.ndarray | None = None
    rows_in_window: int = 0
    last_topic_change: float | None = None
    trace: list = field(default_factory=list)
    init_fallback: bool = False
    converged: bool = False
    skipped_rows: int = 0
    capped_solves: int = 0

    def __post_init__(self):
        if self.pending_num is None:
            self.pending_num = np.zeros_like(self.topics)
        if self.pending_den is None:
            self.pending_den = np.zeros(self.topics.shape[0])

    @classmethod
    def initialize(cls, topics: np.ndarray, vocab: Vocabulary, params: GPParams) -> "GPModel":
        topics = np.asarray(topics, dtype=np.float64)
        return cls(
            topics=topics,
            vocab=vocab,
            params=params,
            acc_num=ACC_INIT_SCALE * topics,
            acc_den=np.full(topics.shape[0], ACC_INIT_SCALE),
        )

    @property
    def d(self) -> int:
        return self.topics.shape[0]


def _as_csr(rows) -> sp.csr_matrix:
    if sp.issparse(rows):
        return rows.tocsr()
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    return sp.csr_matrix(arr)


def _ratio_on_support(rows: sp.csr_matrix, product: np.ndarray) -> sp.csr_matrix:
    """Element-wise rows / product on the sparse support of ``rows`` only."""
    out = rows.copy()
    row_of = np.repeat(np.arange(rows.shape[0]), np.diff(rows.indptr))
    denom = product[row_of, rows.indices]
    out.data = rows.data / np.maximum(denom, DIVISOR_FLOOR)
    return out


def _cold_start(n: int, d: int, alpha: float, beta: float) -> np.ndarray:
    # prior mean of the Gamma prior: positive and on the right scale
    return np.full((n, d), alpha * beta, dtype=np.float64)


def batch_activation_update(
    rows, activations: np.ndarray, topics: np.ndarray, alpha: float, beta: float
) -> np.ndarray:
    """One multiplicative activation step for every row of ``rows`` at once."""
    rows = _as_csr(rows)
    x = np.asarray(activations, dtype=np.float64)
    ratio = _ratio_on_support(rows, x @ topics)
    denom = np.maximum(topics.sum(axis=1) + 1.0 / beta, DIVISOR_FLOOR)
    new = (x * np.asarray(ratio @ topics.T) + (alpha - 1.0)) / denom
    return np.maximum(new, ACTIVATION_FLOOR)


def batch_topic_update(rows, activations: np.ndarray, topics: np.ndarray) -> np.ndarray:
    """One full-batch multiplicative topic step (the batch recurrence)."""
    rows = _as_csr(rows)
    x = np.asarray(activations, dtype=np.float64)
    ratio = _ratio_on_support(rows, x @ topics)
    num = topics * np.asarray(x.T @ ratio)
    den = np.maximum(x.sum(axis=0), DIVISOR_FLOOR)
    return num / den[:, None]


def _solve_activations(
    rows: sp.csr_matrix,
    topics: np.ndarray,
    alpha: float,
    beta: float,
    eps_inner: float,
    x0: np.ndarray,
):
    """Iterate the activation update per row until its l2 change is <= eps_inner.

    Rows converge individually and are frozen once converged, matching a
    per-row while loop. Returns (activations, per-row iteration counts,
    number of rows that hit the iteration cap).
    """
    n = rows.shape[0]
    x = np.array(x0, dtype=np.float64, copy=True)
    iters = np.zeros(n, dtype=np.int64)
    denom = np.maximum(topics.sum(axis=1) + 1.0 / beta, DIVISOR_FLOOR)
    active = np.arange(n)
    for step in range(1, INNER_ITER_CAP + 1):
        sub = rows[active]
        xa = x[active]
        ratio = _ratio_on_support(sub, xa @ topics)
        new = (xa * np.asarray(ratio @ topics.T) + (alpha - 1.0)) / denom
        new = np.maximum(new, ACTIVATION_FLOOR)
        if not np.all(np.isfinite(new)):
            raise NumericError(f"non-finite activation at inner iteration {step}")
        delta = np.linalg.norm(new - xa, axis=1)
        x[active] = new
        iters[active] += 1
        active = active[delta > eps_inner]
        if active.size == 0:
            return x, iters, 0
    return x, iters, int(active.size)


def fit_activations(
    f,
    topics: np.ndarray,
    alpha: float = 1.1,
    beta: float = 1.0,
    eps_inner: float = 1e-3,
    x0: np.ndarray | None = None,
    return_n_iter: bool = False,
):
    """Converged activation of a single count row against frozen topics.

    An all-zero row converges to the prior-mode activation
    (alpha - 1) / (colsum(topics) + 1/beta). ``x0`` overrides the cold start
    (the prior mean alpha * beta), e.g. with a cached previous activation.
    """
    topics = np.asarray(topics, dtype=np.float64)
    row = _as_csr(f)
    if row.shape[0] != 1:
        raise ConfigError("fit_activations expects a single count row")
    if row.nnz and np.any(row.data < 0):
        raise ConfigError("count row must be non-negative")
    if x0 is None:
        start = _cold_start(1, topics.shape[0], alpha, beta)
    else:
        start = np.asarray(x0, dtype=np.float64).reshape(1, -1)
    x, iters, _ = _solve_activations(row, topics, alpha, beta, eps_inner, start)
    if return_n_iter:
        return x[0], int(iters[0])
    return x[0]


def init_topics(corpus, params: GPParams, vocab: Vocabulary | None = None) -> np.ndarray:
    """Initial (d, m) topic matrix: exact count rows nearest to seeded k-means
    centroids of the hashed count matrix, smoothed and row-normalized."""
    topics, _ = _init_topics_impl(corpus, params, vocab)
    return topics


def _init_topics_impl(corpus, params: GPParams, vocab: Vocabulary | None = None):
    corpus = list(corpus)
    if not corpus:
        raise ConfigError("corpus is empty")
    if vocab is None:
        vocab = build_vocabulary(corpus, params.n_min, params.n_max)

    uniq: list[str] = []
    weights: list[int] = []
    seen: dict[str, int] = {}
    for s in corpus:
        key = normalize(s)
        if not key:
            continue
        pos = seen.get(key)
        if pos is None:
            seen[key] = len(uniq)
            uniq.append(key)
            weights.append(1)
        else:
            weights[pos] += 1
    if not uniq:
        raise VocabularyError("corpus yields no non-empty strings")

    exact = np.asarray(count_matrix(uniq, vocab).todense())
    d = params.d
    fallback = len(uniq) < d

    if fallback:
        rng = np.random.default_rng([params.rng_seed % (2**63), 1])
        picks = list(range(len(uniq)))
        extra = rng.integers(0, len(uniq), size=d - len(uniq))
        rows = exact[np.concatenate([picks, extra]).astype(int)].astype(np.float64)
        # jitter keeps the duplicated seed rows from collapsing onto each other
        rows[len(uniq):] += rng.uniform(0.0, 0.01, size=(d - len(uniq), rows.shape[1]))
    else:
        from sklearn.cluster import KMeans

        hashed = np.asarray(
            hashed_count_matrix(uniq, INIT_HASH_DIM, params.n_min, params.n_max).todense()
        )
        km = KMeans(
            n_clusters=d,
            n_init=KMEANS_RESTARTS,
            algorithm="lloyd",
            random_state=params.rng_seed % (2**32),
        ).fit(hashed, sample_weight=np.asarray(weights, dtype=np.float64))
        taken: set[int] = set()
        chosen: list[int] = []
        for center in km.cluster_centers_:
            dist = np.einsum("ij,ij->i", hashed - center, hashed - center)
            order = np.argsort(dist, kind="stable")
            pick = next(int(i) for i in order if int(i) not in taken)
            taken.add(pick)
            chosen.append(pick)
        rows = exact[chosen].astype(np.float64)

    rows = rows + TOPIC_SMOOTHING
    rows /= rows.sum(axis=1, keepdims=True)
    return rows, fallback


def _apply_topic_update(model: GPModel) -> None:
    rho = model.params.rho
    model.acc_num = rho * model.acc_num + model.pending_num
    model.acc_den = rho * model.acc_den + model.pending_den
    new = model.acc_num / np.maximum(model.acc_den, DIVISOR_FLOOR)[:, None]
    model.last_topic_change = float(np.linalg.norm(new - model.topics))
    model.topics = new
    model.pending_num = np.zeros_like(model.topics)
    model.pending_den = np.zeros(model.topics.shape[0])
    model.rows_in_window = 0


def partial_fit(model: GPModel, rows, strings=None, activations=None) -> GPModel:
    """Stream count rows through the online solver.

    Activations are solved per row (warm-started from the cache when the raw
    string was seen before) and accumulated; after every q processed rows the
    topic matrix is rebuilt from the discounted accumulators. Rows with empty
    n-gram support are skipped and counted. ``activations`` bypasses the inner
    solve with externally fixed values (frozen-activation mode, used to check
    the online update against the batch recurrence).
    """
    rows = _as_csr(rows)
    p = model.params
    n = rows.shape[0]
    if rows.shape[1] != model.topics.shape[1]:
        raise ConfigError(
            f"count rows have {rows.shape[1]} columns, model expects {model.topics.shape[1]}"
        )
    if strings is not None and len(strings) != n:
        raise ConfigError("strings must align one-to-one with count rows")
    if activations is not None:
        activations = np.asarray(activations, dtype=np.float64)
        if activations.shape != (n, model.d):
            raise ConfigError("frozen activations must have shape (n_rows, d)")

    start = 0
    while start < n:
        take = min(p.q - model.rows_in_window, n - start)
        sub = rows[start : start + take]
        has_support = np.diff(sub.indptr) > 0
        keep = np.flatnonzero(has_support)
        model.skipped_rows += int(take - keep.size)
        if keep.size:
            subk = sub[keep]
            if activations is not None:
                x = activations[start + keep]
            else:
                x0 = _cold_start(keep.size, model.d, p.alpha, p.beta)
                if strings is not None:
                    for local, ridx in enumerate(keep):
                        cached = model.activation_cache.get(strings[start + ridx])
                        if cached is not None:
                            x0[local] = cached
                x, _, capped = _solve_activations(
                    subk, model.topics, p.alpha, p.beta, p.eps_inner, x0
                )
                model.capped_solves += capped
                if strings is not None:
                    for local, ridx in enumerate(keep):
                        model.activation_cache[strings[start + ridx]] = x[local].copy()
            ratio = _ratio_on_support(subk, x @ model.topics)
            model.pending_num += model.topics * np.asarray(x.T @ ratio)
            model.pending_den += x.sum(axis=0)
            model.rows_in_window += int(keep.size)
        if model.rows_in_window >= p.q:
            _apply_topic_update(model)
        start += take
    return model


def _trace_gkl(model: GPModel, counts: sp.csr_matrix, corpus) -> float:
    cached = [model.activation_cache.get(s) for s in corpus]
    keep = [i for i, x in enumerate(cached) if x is not None]
    if not keep:
        return 0.0
    x = np.vstack([cached[i] for i in keep])
    return gkl_divergence(counts[keep], x, model.topics)


def fit(corpus, params: GPParams) -> GPModel:
    """Fit the full model: vocabulary, k-means topic init, then seeded shuffled
    mini-batch streaming until the topic matrix stabilizes (Frobenius change
    between consecutive rebuilds <= eta) or ``max_epochs`` is exhausted.

    The per-epoch generalized KL divergence of the training corpus is recorded
    in ``model.trace``.
    """
    corpus = list(corpus)
    if not corpus:
        raise ConfigError("corpus is empty")
    vocab = build_vocabulary(corpus, params.n_min, params.n_max)
    topics0, fallback = _init_topics_impl(corpus, params, vocab)
    model = GPModel.initialize(topics0, vocab, params)
    model.init_fallback = fallback

    counts = count_matrix(corpus, vocab)
    rng = np.random.default_rng(params.rng_seed)
    n = len(corpus)
    done = False
    for epoch in range(1, params.max_epochs + 1):
        order = rng.permutation(n)
        for lo in range(0, n, params.q):
            idx = order[lo : lo + params.q]
            partial_fit(model, counts[idx], [corpus[i] for i in idx])
            if model.last_topic_change is not None and model.last_topic_change <= params.eta:
                done = True
                break
        model.trace.append((epoch, _trace_gkl(model, counts, corpus)))
        if done:
            model.converged = True
            break
    if not model.converged:
        logger.warning(
            "topic matrix did not stabilize below eta=%g within %d epochs "
            "(last change %.3g); returning the model anyway",
            params.eta,
            params.max_epochs,
            model.last_topic_change if model.last_topic_change is not None else float("nan"),
        )
    if model.skipped_rows:
        logger.warning("%d rows had empty n-gram support and were skipped", model.skipped_rows)
    return model


def transform(strings, model: GPModel, return_report: bool = False):
    """Activations of each string against the frozen topic matrix (raw, not
    normalized). Strings with no in-vocabulary grams converge to the
    prior-mode activation and are counted in the report."""
    strings = list(strings)
    p = model.params
    counts = count_matrix(strings, model.vocab)
    no_support = np.flatnonzero(np.diff(counts.indptr) == 0)

    # solve each distinct string once; duplicates share the result
    order: dict[str, int] = {}
    first_at: dict[str, int] = {}
    for i, s in enumerate(strings):
        if s not in order:
            order[s] = len(order)
            first_at[s] = i
    uniq = list(order)
    uniq_rows = counts[[first_at[s] for s in uniq]]

    solved = np.empty((len(uniq), model.d), dtype=np.float64)
    capped_total = 0
    for lo in range(0, len(uniq), TRANSFORM_CHUNK):
        hi = min(lo + TRANSFORM_CHUNK, len(uniq))
        x0 = _cold_start(hi - lo, model.d, p.alpha, p.beta)
        for local, s in enumerate(uniq[lo:hi]):
            cached = model.activation_cache.get(s)
            if cached is not None:
                x0[local] = cached
        x, _, capped = _solve_activations(
            uniq_rows[lo:hi], model.topics, p.alpha, p.beta, p.eps_inner, x0
        )
        capped_total += capped
        solved[lo:hi] = x

    out = np.empty((len(strings), model.d), dtype=np.float64)
    for i, s in enumerate(strings):
        out[i] = solved[order[s]]

    if no_support.size:
        logger.warning(
            "%d rows had no in-vocabulary n-grams; prior-mode activations used",
            no_support.size,
        )
    if return_report:
        return out, {"rows_without_support": no_support.tolist(), "capped_solves": capped_total}
    return out


def log_likelihood(f, x, topics, alpha, beta) -> float:
    """Joint log-likelihood of one count row: Poisson observation terms plus
    Gamma prior terms on the activations."""
    f = np.asarray(f, dtype=np.float64).ravel()
    x = np.asarray(x, dtype=np.float64).ravel()
    topics = np.asarray(topics, dtype=np.float64)
    d = x.shape[0]
    alpha_v = np.broadcast_to(np.asarray(alpha, dtype=np.float64), (d,))
    beta_v = np.broadcast_to(np.asarray(beta, dtype=np.float64), (d,))

    rate = x @ topics
    if np.any((f > 0) & (rate <= 0)):
        raise NumericError("zero Poisson rate under a positive count")
    if np.any(x < 0):
        raise NumericError("negative activation")
    if np.any((x == 0) & (alpha_v != 1.0)):
        raise NumericError("zero activation with alpha != 1 puts log x out of domain")

    obs = np.where(f > 0, f * np.log(np.where(rate > 0, rate, 1.0)), 0.0).sum()
    obs -= rate.sum() + gammaln(f + 1.0).sum()
    logx = np.log(np.where(x > 0, x, 1.0))
    prior = ((alpha_v - 1.0) * logx - x / beta_v - alpha_v * np.log(beta_v) - gammaln(alpha_v)).sum()
    return float(obs + prior)


def log_likelihood_grad(f, x, topics, alpha, beta):
    """Analytic gradients of :func:`log_likelihood` w.r.t. topics and x."""
    f = np.asarray(f, dtype=np.float64).ravel()
    x = np.asarray(x, dtype=np.float64).ravel()
    topics = np.asarray(topics, dtype=np.float64)
    d = x.shape[0]
    alpha_v = np.broadcast_to(np.asarray(alpha, dtype=np.float64), (d,))
    beta_v = np.broadcast_to(np.asarray(beta, dtype=np.float64), (d,))

    rate = x @ topics
    if np.any((f > 0) & (rate <= 0)):
        raise NumericError("zero Poisson rate under a positive count")
    if np.any(x <= 0):
        raise NumericError("gradients require strictly positive activations")
    ratio = np.where(f > 0, f / np.where(rate > 0, rate, 1.0), 0.0)
    grad_topics = np.outer(x, ratio - 1.0)
    grad_x = (ratio - 1.0) @ topics.T + (alpha_v - 1.0) / x - 1.0 / beta_v
    return grad_topics, grad_x


def gkl_divergence(counts, activations, topics) -> float:
    """Generalized Kullback-Leibler divergence between the counts and their
    low-rank reconstruction, with 0 log 0 = 0."""
    rows = _as_csr(counts)
    x = np.asarray(activations, dtype=np.float64)
    topics = np.asarray(topics, dtype=np.float64)
    if rows.shape[0] != x.shape[0] or x.shape[1] != topics.shape[0]:
        raise ConfigError("shapes do not conform")
    if rows.nnz and np.any(rows.data < 0):
        raise NumericError("counts must be non-negative")
    recon = x @ topics
    row_of = np.repeat(np.arange(rows.shape[0]), np.diff(rows.indptr))
    at_support = recon[row_of, rows.indices]
    if np.any(at_support <= 0):
        raise NumericError("reconstruction is zero where a count is positive")
    term = np.sum(rows.data * (np.log(rows.data) - np.log(at_support)))
    return float(term - rows.data.sum() + recon.sum())


def infer_feature_names(model: GPModel, corpus, top_k: int = 3) -> list:
    """Per-dimension labels: the ``top_k`` corpus words whose activations load
    that dimension the most, ties broken lexicographically."""
    if top_k < 1:
        raise ConfigError(f"top_k must be >= 1, got {top_k}")
    words: list[str] = []
    seen = set()
    for s in corpus:
        for w in normalize(s).split():
            if w not in seen:
                seen.add(w)
                words.append(w)
    if not words:
        raise VocabularyError("corpus yields no words to label dimensions with")
    loadings = transform(words, model)
    labels = []
    for i in range(model.d):
        ranked = sorted(range(len(words)), key=lambda j: (-loadings[j, i], words[j]))
        labels.append([words[j] for j in ranked[:top_k]])
    return labels


# ---------------------------------------------------------------------------
# persistence


def _escape_cache_key(s: str) -> str:
    return s.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _unescape_cache_key(s: str) -> str:
    out = []
    i = 0
    while i < len(s):
        c = s[i]
        if c == "\\" and i + 1 < len(s):
            nxt = s[i + 1]
            out.append({"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}.get(nxt, nxt))
            i += 2
        else:
            out.append(c)
            i += 1
    return "".join(out)


def save_model(model: GPModel, path) -> None:
    """Persist a model directory: vocab.txt, topics.mat, params.json,
    cache.tsv, trace.csv. Deterministic byte-for-byte for a given model."""
    os.makedirs(path, exist_ok=True)
    model.vocab.save(os.path.join(path, "vocab.txt"))
    matio.write_matrix(os.path.join(path, "topics.mat"), model.topics, matio.MAGIC_TOPICS)
    payload = dataclasses.asdict(model.params)
    payload["metadata"] = {
        "acc_init_scale": ACC_INIT_SCALE,
        "converged": model.converged,
        "init_fallback": model.init_fallback,
        "init_hash_dim": INIT_HASH_DIM,
        "inner_iteration_cap": INNER_ITER_CAP,
        "kmeans_restarts": KMEANS_RESTARTS,
        "topic_smoothing": TOPIC_SMOOTHING,
    }
    with open(os.path.join(path, "params.json"), "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(path, "cache.tsv"), "w", encoding="utf-8", newline="\n") as fh:
        for s, act in model.activation_cache.items():
            vals = "\t".join(repr(float(v)) for v in act)
            fh.write(f"{_escape_cache_key(s)}\t{vals}\n")
    with open(os.path.join(path, "trace.csv"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epoch,gkl\n")
        for epoch, g in model.trace:
            fh.write(f"{epoch},{repr(float(g))}\n")


def load_model(path) -> GPModel:
    """Load a persisted model directory. Accumulator history is not persisted:
    the discounted sums restart from the saved topics."""
    with open(os.path.join(path, "params.json"), "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    meta = payload.pop("metadata", {})
    params = GPParams(**payload)
    vocab = Vocabulary.load(os.path.join(path, "vocab.txt"), params.n_min, params.n_max)
    topics = matio.read_matrix(os.path.join(path, "topics.mat"), matio.MAGIC_TOPICS)
    if topics.shape != (params.d, len(vocab)):
        raise ConfigError(
            f"topic matrix shape {topics.shape} does not match params/vocab "
            f"({params.d}, {len(vocab)})"
        )
    model = GPModel.initialize(topics, vocab, params)
    model.converged = bool(meta.get("converged", False))
    model.init_fallback = bool(meta.get("init_fallback", False))
    cache_path = os.path.join(path, "cache.tsv")
    if os.path.exists(cache_path):
        with open(cache_path, "r", encoding="utf-8", newline="\n") as fh:
            for line in fh:
                parts = line.rstrip("\n").split("\t")
                if len(parts) != params.d + 1:
                    continue
                model.activation_cache[_unescape_cache_key(parts[0])] = np.asarray(
                    [float(v) for v in parts[1:]], dtype=np.float64
                )
    trace_path = os.path.join(path, "trace.csv")
    if os.path.exists(trace_path):
        with open(trace_path, "r", encoding="utf-8") as fh:
            next(fh, None)
            for line in fh:
                epoch, g = line.rstrip("\n").split(",")
                model.trace.append((int(epoch), float(g)))
    return model
