from .quality import Criterion, CriterionContext, quality, get_criterion
from .quality import argmax_equivalence_check, expected_gain_max_ratio
from .quality import path_gain_quality, path_ratio_quality, expected_gain_quality

__all__ = [
    "Criterion",
    "CriterionContext",
    "quality",
    "get_criterion",
    "argmax_equivalence_check",
    "expected_gain_max_ratio",
    "path_gain_quality",
    "path_ratio_quality",
    "expected_gain_quality",
]
