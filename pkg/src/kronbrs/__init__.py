"""Digital Kronecker sequences over finite fields, their net structure, Walsh
analysis of local discrepancy, and bounded remainder box experiments."""

from __future__ import annotations

from .brs import BoxSpec, GammaSpec, brs_profile, delta_count, dichotomy_report, star_discrepancy_exhaustive
from .config import RunConfig
from .errors import (
    DimensionError,
    DomainError,
    EndConditionFailed,
    InternalCheckError,
    KronbrsError,
    PrecisionError,
)
from .finite_field import BijectionFamily, FieldSpec
from .laurent import LaurentSeries, laurent_from_quadratic_L, laurent_from_rational, quadratic_root
from .nets import compute_T, kappa, net_check
from .sequences import BadicPoint, DigitalSequence, KroneckerSystem, digital_point, hankel_matrix, kronecker_point
from .walsh import WalshContext, char_sum_sigma, delta_direct, delta_via_walsh, dual_set, lemma6_search

__all__ = [
    "BadicPoint",
    "BijectionFamily",
    "BoxSpec",
    "DigitalSequence",
    "DimensionError",
    "DomainError",
    "EndConditionFailed",
    "FieldSpec",
    "GammaSpec",
    "InternalCheckError",
    "KronbrsError",
    "KroneckerSystem",
    "LaurentSeries",
    "PrecisionError",
    "RunConfig",
    "WalshContext",
    "brs_profile",
    "char_sum_sigma",
    "compute_T",
    "delta_count",
    "delta_direct",
    "delta_via_walsh",
    "dichotomy_report",
    "digital_point",
    "dual_set",
    "hankel_matrix",
    "kappa",
    "kronecker_point",
    "laurent_from_quadratic_L",
    "laurent_from_rational",
    "lemma6_search",
    "net_check",
    "quadratic_root",
    "star_discrepancy_exhaustive",
]
