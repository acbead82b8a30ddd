"""Estimator wrappers (fit / transform / fit_transform / get_feature_names)
around the stringcat command-line core."""

from .encoders import CoreError, GammaPoissonEncoder, MinHashEncoder, NotFittedError

__all__ = ["CoreError", "GammaPoissonEncoder", "MinHashEncoder", "NotFittedError"]
