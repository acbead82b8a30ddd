"""Low-dimensional encoders for high-cardinality string categorical variables.

Two core encoders: a stateless min-hash encoder over character n-gram sets
(:mod:`stringcat.minhash`), and an online Gamma-Poisson factorization of
n-gram counts with interpretable inferred feature names
(:mod:`stringcat.gamma_poisson`). One-hot and n-gram similarity encoding live
in :mod:`stringcat.baselines`; recovery metrics, synthetic data, and the
inclusion false-positive harness in :mod:`stringcat.evaluation`.
"""

from .errors import (
    ConfigError,
    EncodeError,
    EvaluationError,
    NumericError,
    StringCatError,
    VocabularyError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "EncodeError",
    "EvaluationError",
    "NumericError",
    "StringCatError",
    "VocabularyError",
    "__version__",
]
