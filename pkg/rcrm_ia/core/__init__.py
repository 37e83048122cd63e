"""Signal/interference algebra, metrics and filter normalization."""

from rcrm_ia.core.filters import (
    FilterSet,
    orthonormalize_filters,
    apply_power,
    normalize_columns,
    pd_signal_pairs,
    pd_signal_transform,
)
from rcrm_ia.core.links import LinkMatrices, build_links, interference_blocks
from rcrm_ia.core.metrics import (
    per_user_dof,
    sum_rate,
    interference_cov,
    interference_cov_reverse,
    leakage,
    leakage_frobenius,
    user_dims,
    rate_at_power,
)

__all__ = [
    "FilterSet",
    "orthonormalize_filters",
    "apply_power",
    "normalize_columns",
    "pd_signal_pairs",
    "pd_signal_transform",
    "LinkMatrices",
    "build_links",
    "interference_blocks",
    "per_user_dof",
    "sum_rate",
    "interference_cov",
    "interference_cov_reverse",
    "leakage",
    "leakage_frobenius",
    "user_dims",
    "rate_at_power",
]
