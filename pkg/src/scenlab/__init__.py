"""scenlab: verification lab for scenario decision algorithms.

Risk estimation, consistency/stability probes, shattering and compression
certificates, sample-size bounds, and the path-planning application systems.
"""

from .core import (
    ConstraintDistribution,
    PacCurve,
    PropertyReport,
    RiskEstimate,
    ScenarioSystem,
    check_consistency,
    check_stability,
    hoeffding_radius,
    pac_curve,
    satisfies_all,
    violation_probability_mc,
)
from .analyzers import (
    BoundQuery,
    adversarial_pac_experiment,
    certify_no_compression_scheme,
    check_shattered,
    compression_bound,
    dvc_lower_bound,
    find_compression_subtuple,
    vc_sample_bound,
    verify_range_shattering_witness,
)
from .registry import SYSTEMS, get_bundle

__version__ = "0.1.0"

__all__ = [
    "BoundQuery",
    "ConstraintDistribution",
    "PacCurve",
    "PropertyReport",
    "RiskEstimate",
    "SYSTEMS",
    "ScenarioSystem",
    "adversarial_pac_experiment",
    "certify_no_compression_scheme",
    "check_consistency",
    "check_shattered",
    "check_stability",
    "compression_bound",
    "dvc_lower_bound",
    "find_compression_subtuple",
    "get_bundle",
    "hoeffding_radius",
    "pac_curve",
    "satisfies_all",
    "vc_sample_bound",
    "verify_range_shattering_witness",
    "violation_probability_mc",
]
