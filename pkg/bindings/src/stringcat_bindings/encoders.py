"""Estimator-style wrappers over the ``stringcat`` command-line core.

All computation is delegated to the core executable through its documented
interfaces: CSV columns in, the ``ENC1`` binary matrix format out, and the
model directory for fitted state. Nothing numeric is reimplemented here, so
the arrays these estimators return are element-for-element the core's own
output.
"""

from __future__ import annotations

import csv
import os
import shutil
import struct
import subprocess
import sys
import tempfile

import numpy as np


class CoreError(RuntimeError):
    """The core CLI failed; the message is the core's error line verbatim."""


class NotFittedError(RuntimeError):
    """transform/get_feature_names called before fit on a stateful encoder."""


def _cli_command() -> list[str]:
    override = os.environ.get("STRINGCAT_CLI")
    if override:
        return override.split()
    exe = shutil.which("stringcat")
    if exe:
        return [exe]
    return [sys.executable, "-m", "stringcat"]


def _run_core(args: list[str]) -> str:
    proc = subprocess.run(
        _cli_command() + list(args), capture_output=True, text=True
    )
    if proc.returncode != 0:
        line = proc.stderr.strip().splitlines()
        message = line[-1] if line else f"core exited with status {proc.returncode}"
        if message.startswith("stringcat: error: "):
            message = message[len("stringcat: error: "):]
        raise CoreError(message)
    return proc.stdout


def _column_to_list(column) -> list[str]:
    arr = np.asarray(column, dtype=object)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-column array of strings, got shape {arr.shape}")
    return [str(v) for v in arr.tolist()]


def _write_column_csv(path, values: list[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["value"])
        for v in values:
            writer.writerow([v])


def _read_enc1(path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != b"ENC1":
            raise CoreError(f"unexpected matrix magic {magic!r} in {path}")
        rows, cols = struct.unpack("<II", fh.read(8))
        payload = fh.read(rows * cols * 8)
    return np.frombuffer(payload, dtype="<f8").reshape(rows, cols).copy()


class MinHashEncoder:
    """Stateless min-hash encoder with the usual fit/transform surface."""

    def __init__(self, d: int = 30, n_min: int = 2, n_max: int = 4):
        self.d = d
        self.n_min = n_min
        self.n_max = n_max

    def fit(self, column) -> "MinHashEncoder":
        if not _column_to_list(column):
            raise ValueError("cannot fit on an empty column")
        return self

    def transform(self, column) -> np.ndarray:
        values = _column_to_list(column)
        if not values:
            raise ValueError("cannot transform an empty column")
        with tempfile.TemporaryDirectory(prefix="stringcat-mh-") as tmp:
            src = os.path.join(tmp, "in.csv")
            dst = os.path.join(tmp, "out.bin")
            _write_column_csv(src, values)
            _run_core(
                [
                    "encode",
                    "--input", src,
                    "--column", "value",
                    "--encoder", "minhash",
                    "--dim", str(self.d),
                    "--ngram-min", str(self.n_min),
                    "--ngram-max", str(self.n_max),
                    "--format", "binary",
                    "--output", dst,
                ]
            )
            return _read_enc1(dst)

    def fit_transform(self, column) -> np.ndarray:
        return self.fit(column).transform(column)

    def get_feature_names(self, top_k: int = 1) -> list[str]:
        return [f"mh_{j}" for j in range(self.d)]


class GammaPoissonEncoder:
    """Gamma-Poisson factorization encoder backed by a core model directory."""

    def __init__(
        self,
        d: int = 8,
        n_min: int = 2,
        n_max: int = 4,
        seed: int = 0,
        alpha: float = 1.1,
        beta: float = 1.0,
        rho: float = 0.95,
        q: int = 256,
        eta: float = 1e-4,
        eps_inner: float = 1e-3,
        max_epochs: int = 30,
    ):
        self.d = d
        self.n_min = n_min
        self.n_max = n_max
        self.seed = seed
        self.alpha = alpha
        self.beta = beta
        self.rho = rho
        self.q = q
        self.eta = eta
        self.eps_inner = eps_inner
        self.max_epochs = max_epochs
        self._workdir: tempfile.TemporaryDirectory | None = None
        self._model_dir: str | None = None
        self._train_csv: str | None = None

    @property
    def model_dir(self) -> str | None:
        """Path of the fitted core model directory (the opaque handle)."""
        return self._model_dir

    def _config_args(self) -> list[str]:
        import json

        cfg = {
            "alpha": self.alpha,
            "beta": self.beta,
            "rho": self.rho,
            "q": self.q,
            "eta": self.eta,
            "eps_inner": self.eps_inner,
            "max_epochs": self.max_epochs,
        }
        path = os.path.join(self._workdir.name, "gp.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(cfg, fh, sort_keys=True)
        return ["--config", path]

    def fit(self, column) -> "GammaPoissonEncoder":
        values = _column_to_list(column)
        if not values:
            raise ValueError("cannot fit on an empty column")
        if self._workdir is not None:
            self._workdir.cleanup()
        self._workdir = tempfile.TemporaryDirectory(prefix="stringcat-gp-")
        self._train_csv = os.path.join(self._workdir.name, "train.csv")
        self._model_dir = os.path.join(self._workdir.name, "model")
        _write_column_csv(self._train_csv, values)
        _run_core(
            [
                "fit",
                "--input", self._train_csv,
                "--column", "value",
                "--dim", str(self.d),
                "--ngram-min", str(self.n_min),
                "--ngram-max", str(self.n_max),
                "--seed", str(self.seed),
                "--output", self._model_dir,
                *self._config_args(),
            ]
        )
        return self

    def _require_fitted(self) -> None:
        if self._model_dir is None:
            raise NotFittedError("encoder is not fitted; call fit first")

    def transform(self, column) -> np.ndarray:
        self._require_fitted()
        values = _column_to_list(column)
        if not values:
            raise ValueError("cannot transform an empty column")
        src = os.path.join(self._workdir.name, "transform_in.csv")
        dst = os.path.join(self._workdir.name, "transform_out.bin")
        _write_column_csv(src, values)
        _run_core(
            [
                "transform",
                "--model", self._model_dir,
                "--input", src,
                "--column", "value",
                "--format", "binary",
                "--output", dst,
            ]
        )
        return _read_enc1(dst)

    def fit_transform(self, column) -> np.ndarray:
        return self.fit(column).transform(column)

    def get_feature_names(self, top_k: int = 1) -> list[str]:
        self._require_fitted()
        dst = os.path.join(self._workdir.name, "topics.csv")
        _run_core(
            [
                "topics",
                "--model", self._model_dir,
                "--input", self._train_csv,
                "--column", "value",
                "--top-k", str(top_k),
                "--output", dst,
            ]
        )
        with open(dst, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            next(reader)
            return [row[1] for row in reader]

    def close(self) -> None:
        if self._workdir is not None:
            self._workdir.cleanup()
            self._workdir = None
            self._model_dir = None
            self._train_csv = None
