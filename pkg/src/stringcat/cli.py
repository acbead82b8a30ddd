"""Command-line front end.

Subcommands: encode, fit, transform, simulate, recover, inclusion-bench,
topics. CSV in/out is RFC 4180 with a header row; empty or missing cells in
the selected column read as the literal string "nan" and all values are
lowercased on ingestion. Flag values override config-file values, which
override defaults. Errors exit nonzero with a single machine-parsable line on
stderr; per-row warnings are counted on stderr but do not fail the run.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

from . import baselines, evaluation, gamma_poisson, matio, minhash
from .errors import ConfigError, StringCatError
from .textprep import normalize

_ENCODERS = ("minhash", "gamma-poisson", "onehot", "similarity")
_PREFIX = {"minhash": "mh_", "gamma-poisson": "gp_", "onehot": "oh_", "similarity": "sim_"}

_DEFAULTS = {
    "encoder": "minhash",
    "dim": 30,
    "ngram_min": 2,
    "ngram_max": 4,
    "seed": 0,
    "format": "csv",
    "passthrough": False,
    "top_k": 3,
    "mode": "multilabel",
    "n": 1000,
    "poisson_rate": 1.0,
    "typo_rate": 0.1,
    "epsilons": "0.5,0.2,0.1,0.05,0.01",
    "ratio_convention": "grams",
    "alpha": 1.1,
    "beta": 1.0,
    "rho": 0.95,
    "q": 256,
    "eta": 1e-4,
    "eps_inner": 1e-3,
    "max_epochs": 30,
}


def read_csv_table(path):
    """Full CSV table as (header, rows); malformed input reports the line."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ConfigError(f"{path}: empty CSV, expected a header row") from None
            try:
                rows = [row for row in reader]
            except csv.Error as exc:
                raise ConfigError(f"{path}: malformed CSV at line {reader.line_num}: {exc}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    return header, rows


def _resolve_column(header, column):
    if column is None:
        raise ConfigError("no column selected; pass --column NAME_OR_INDEX")
    if column in header:
        return header.index(column)
    if isinstance(column, str) and column.lstrip("-").isdigit():
        idx = int(column)
        if 0 <= idx < len(header):
            return idx
        raise ConfigError(f"column index {idx} out of range (header has {len(header)} columns)")
    raise ConfigError(f"unknown column {column!r}; header is {header}")


def ingest_column(path, column):
    """The selected column, lowercased, with empty/missing cells read as "nan"."""
    header, rows = read_csv_table(path)
    idx = _resolve_column(header, column)
    out = []
    for row in rows:
        value = row[idx] if idx < len(row) else ""
        out.append(normalize(value) if value != "" else "nan")
    return out


def _fmt(v: float) -> str:
    return repr(float(v))


def _write_matrix_csv(path, mat, prefix, passthrough=None):
    header = [f"{prefix}{j}" for j in range(mat.shape[1])]
    lead_header, lead_rows = [], None
    if passthrough is not None:
        lead_header, lead_rows = passthrough
        header = list(lead_header) + header
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(mat.shape[0]):
            lead = list(lead_rows[i]) if lead_rows is not None else []
            writer.writerow(lead + [_fmt(v) for v in mat[i]])


def _write_matrix(cfg, mat, prefix, passthrough=None):
    if cfg["format"] == "binary":
        matio.write_matrix(cfg["output"], mat, matio.MAGIC_ENCODED)
    else:
        _write_matrix_csv(cfg["output"], mat, prefix, passthrough)


def _gp_params(cfg) -> gamma_poisson.GPParams:
    return gamma_poisson.GPParams(
        d=int(cfg["dim"]),
        alpha=float(cfg["alpha"]),
        beta=float(cfg["beta"]),
        rho=float(cfg["rho"]),
        q=int(cfg["q"]),
        eta=float(cfg["eta"]),
        eps_inner=float(cfg["eps_inner"]),
        n_min=int(cfg["ngram_min"]),
        n_max=int(cfg["ngram_max"]),
        max_epochs=int(cfg["max_epochs"]),
        rng_seed=int(cfg["seed"]),
    )


def _warn(counts: dict) -> None:
    parts = [f"{k}={v}" for k, v in counts.items() if v]
    if parts:
        print("stringcat: warning: " + " ".join(parts), file=sys.stderr)


def _build_encoder(cfg, corpus):
    """Fit whatever state the chosen encoder needs on the ingested column and
    return (encode_fn, fitted gamma-poisson model or None)."""
    kind = cfg["encoder"]
    d = int(cfg["dim"])
    n_min, n_max = int(cfg["ngram_min"]), int(cfg["ngram_max"])
    if kind == "minhash":
        threads = minhash.threads_from_env()
        return (lambda ss: minhash.encode_column(ss, d, n_min, n_max, threads=threads)), None
    if kind == "gamma-poisson":
        model = gamma_poisson.fit(corpus, _gp_params(cfg))
        return (lambda ss: gamma_poisson.transform(ss, model)), model
    if kind == "similarity":
        protos = baselines.select_prototypes_frequency(corpus, d)
        return (lambda ss: baselines.similarity_encode(ss, protos, n_min, n_max)), None
    if kind == "onehot":
        if cfg.get("dim_given"):
            cats = baselines.select_prototypes_frequency(corpus, d)
        else:
            cats = baselines.PrototypeSet(list(dict.fromkeys(normalize(s) for s in corpus)))
        return (lambda ss: baselines.onehot_encode(ss, cats)), None
    raise ConfigError(f"unknown encoder {kind!r}; choose one of {_ENCODERS}")


def _cmd_encode(cfg) -> int:
    if cfg["passthrough"] and cfg["format"] == "binary":
        raise ConfigError("--passthrough requires --format csv")
    corpus = ingest_column(cfg["input"], cfg["column"])
    header, rows = read_csv_table(cfg["input"]) if cfg["passthrough"] else (None, None)
    encode_fn, model = _build_encoder(cfg, corpus)
    if model is not None:
        mat, report = gamma_poisson.transform(corpus, model, return_report=True)
        _warn(
            {
                "rows_without_vocab_grams": len(report["rows_without_support"]),
                "skipped_fit_rows": model.skipped_rows,
            }
        )
    else:
        mat = encode_fn(corpus)
    passthrough = (header, rows) if cfg["passthrough"] else None
    _write_matrix(cfg, mat, _PREFIX[cfg["encoder"]], passthrough)
    return 0


def _cmd_fit(cfg) -> int:
    if cfg["encoder_given"] and cfg["encoder"] != "gamma-poisson":
        raise ConfigError("fit persists a model only for --encoder gamma-poisson")
    corpus = ingest_column(cfg["input"], cfg["column"])
    model = gamma_poisson.fit(corpus, _gp_params(cfg))
    gamma_poisson.save_model(model, cfg["output"])
    _warn(
        {
            "skipped_fit_rows": model.skipped_rows,
            "not_converged": 0 if model.converged else 1,
        }
    )
    return 0


def _cmd_transform(cfg) -> int:
    model = gamma_poisson.load_model(cfg["model"])
    corpus = ingest_column(cfg["input"], cfg["column"])
    header, rows = read_csv_table(cfg["input"]) if cfg["passthrough"] else (None, None)
    mat, report = gamma_poisson.transform(corpus, model, return_report=True)
    _warn({"rows_without_vocab_grams": len(report["rows_without_support"])})
    passthrough = (header, rows) if cfg["passthrough"] else None
    if passthrough is not None and cfg["format"] == "binary":
        raise ConfigError("--passthrough requires --format csv")
    _write_matrix(cfg, mat, _PREFIX["gamma-poisson"], passthrough)
    return 0


def _labels(cfg):
    raw = cfg.get("labels")
    if raw is None:
        return list(evaluation.ANIMAL_LABELS)
    labels = [s.strip() for s in raw.split(",") if s.strip()]
    if not labels:
        raise ConfigError("--labels must list at least one category")
    return labels


def _cmd_simulate(cfg) -> int:
    spec = evaluation.SyntheticSpec(
        base_labels=_labels(cfg),
        mode=cfg["mode"],
        n=int(cfg["n"]),
        poisson_rate=float(cfg["poisson_rate"]),
        typo_rate=float(cfg["typo_rate"]),
        seed=int(cfg["seed"]),
    )
    data = evaluation.gen_multilabel(spec) if spec.mode == "multilabel" else evaluation.gen_typos(spec)
    with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["category"])
        for s in data:
            writer.writerow([s])
    return 0


def _cmd_recover(cfg) -> int:
    corpus = ingest_column(cfg["input"], cfg["column"])
    labels = _labels(cfg)
    encode_fn, model = _build_encoder(cfg, corpus)
    top = None
    if model is not None:
        top = gamma_poisson.infer_feature_names(model, corpus, int(cfg["top_k"]))
    report = evaluation.recover_nmi(encode_fn, labels, encoder_id=cfg["encoder"], top_labels=top)
    with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["encoder", "d", "nmi", "labels"])
        flat = "|".join(" ".join(ws) for ws in top) if top else ""
        writer.writerow([report.encoder, report.d, _fmt(report.nmi), flat])
    return 0


def _cmd_inclusion_bench(cfg) -> int:
    corpus = ingest_column(cfg["input"], cfg["column"])
    if not cfg.get("words"):
        raise ConfigError("--words must list the probe words")
    words = [w.strip() for w in cfg["words"].split(",") if w.strip()]
    eps = [float(e) for e in str(cfg["epsilons"]).split(",") if e.strip()]
    rows = evaluation.fpr_experiment(
        corpus,
        words,
        eps,
        ky_max=int(cfg["ky_max"]) if cfg.get("ky_max") is not None else None,
        n_min=int(cfg["ngram_min"]),
        n_max=int(cfg["ngram_max"]),
        ratio_convention=cfg["ratio_convention"],
    )
    with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["epsilon", "d", "word", "n_pairs", "fpr", "convention"])
        for r in rows:
            writer.writerow(
                [_fmt(r["epsilon"]), r["d"], r["word"], r["n_pairs"], _fmt(r["fpr"]), r["convention"]]
            )
    return 0


def _cmd_topics(cfg) -> int:
    model = gamma_poisson.load_model(cfg["model"])
    if cfg.get("input"):
        corpus = ingest_column(cfg["input"], cfg["column"])
    else:
        corpus = list(model.activation_cache)
        if not corpus:
            raise ConfigError("model has no cached categories; pass --input/--column")
    names = gamma_poisson.infer_feature_names(model, corpus, int(cfg["top_k"]))
    lines = [f"gp_{i}: {', '.join(ws)}" for i, ws in enumerate(names)]
    print("\n".join(lines))
    if cfg.get("output"):
        with open(cfg["output"], "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["dimension", "label"])
            for i, ws in enumerate(names):
                writer.writerow([i, ", ".join(ws)])
    return 0


_COMMANDS = {
    "encode": _cmd_encode,
    "fit": _cmd_fit,
    "transform": _cmd_transform,
    "simulate": _cmd_simulate,
    "recover": _cmd_recover,
    "inclusion-bench": _cmd_inclusion_bench,
    "topics": _cmd_topics,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stringcat",
        description="Encode high-cardinality string categorical columns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output_required=True):
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--input")
        p.add_argument("--column")
        p.add_argument("--encoder", choices=_ENCODERS)
        p.add_argument("--dim", type=int)
        p.add_argument("--ngram-min", type=int, dest="ngram_min")
        p.add_argument("--ngram-max", type=int, dest="ngram_max")
        p.add_argument("--seed", type=int)
        p.add_argument("--output", required=False)
        p.add_argument("--format", choices=("csv", "binary"))
        p.add_argument("--passthrough", action="store_const", const=True, default=None)
        p.add_argument("--top-k", type=int, dest="top_k")

    for name in ("encode", "fit", "transform", "recover", "simulate", "inclusion-bench", "topics"):
        p = sub.add_parser(name)
        common(p)
        if name in ("transform", "topics"):
            p.add_argument("--model")
        if name == "simulate":
            p.add_argument("--mode", choices=("multilabel", "typos"))
            p.add_argument("--n", type=int)
            p.add_argument("--poisson-rate", type=float, dest="poisson_rate")
            p.add_argument("--typo-rate", type=float, dest="typo_rate")
        if name in ("simulate", "recover"):
            p.add_argument("--labels")
        if name == "inclusion-bench":
            p.add_argument("--words")
            p.add_argument("--epsilons")
            p.add_argument("--ky-max", type=int, dest="ky_max")
            p.add_argument(
                "--ratio-convention", choices=("grams", "words"), dest="ratio_convention"
            )
    return parser


def _merge_config(args: argparse.Namespace) -> dict:
    cfg = dict(vars(args))
    file_values = {}
    if cfg.get("config"):
        try:
            with open(cfg["config"], "r", encoding="utf-8") as fh:
                file_values = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot load config {cfg['config']}: {exc}") from None
        if not isinstance(file_values, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = set(file_values) - set(_DEFAULTS) - {
            "input", "column", "output", "model", "labels", "words", "ky_max",
        }
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    cfg["dim_given"] = cfg.get("dim") is not None or "dim" in file_values
    cfg["encoder_given"] = cfg.get("encoder") is not None or "encoder" in file_values
    for key, value in file_values.items():
        if cfg.get(key) is None:
            cfg[key] = value
    for key, value in _DEFAULTS.items():
        if cfg.get(key) is None:
            cfg[key] = value
    return cfg


def _require(cfg, *keys):
    for key in keys:
        if cfg.get(key) is None:
            raise ConfigError(f"missing required option --{key.replace('_', '-')}")


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _merge_config(args)
        command = cfg["command"]
        if command in ("encode", "fit", "transform", "recover", "inclusion-bench"):
            _require(cfg, "input", "column", "output")
        if command == "simulate":
            _require(cfg, "output")
        if command in ("transform", "topics"):
            _require(cfg, "model")
        return _COMMANDS[command](cfg)
    except StringCatError as exc:
        message = " ".join(str(exc).split())
        print(f"stringcat: error: {message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
