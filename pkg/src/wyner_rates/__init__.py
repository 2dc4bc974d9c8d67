"""Per-cell uplink rates of collaboration schemes on Wyner cellular models."""

from .info_core import (
    GaussianMac,
    awgn_capacity,
    log_det_psd,
    mac_region_contains,
    mac_subset_rate,
    subset_rate_table,
)
from .polymatroid import (
    RateGrouping,
    brute_force_grouped_rate,
    max_grouped_rate,
)
from .schemes import (
    SCHEME_IDS,
    SchemeResult,
    evaluate_scheme,
    hk_region_constraints,
    hk_single_cell_rate,
    multilayer_scheduled_rate,
    naive_rate,
    nonoverlap_cluster_rate,
    overlap_full_rate,
    overlap_scheduled_rate,
    overlap_simplified_rate,
    scheduled_digital_rate,
    time_sharing_rate,
    wyner_bound,
)
from .topology import (
    CellArrayModel,
    Dimension,
    PowerSplit,
    SchemeMatrices,
    build_nonoverlap,
    build_overlap_full,
    build_overlap_scheduled_phase1,
    build_overlap_simplified,
)

__version__ = "0.1.0"
