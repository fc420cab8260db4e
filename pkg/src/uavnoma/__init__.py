"""Outage probability of NOMA UAV relay clusters with non-linear energy harvesting."""
from ._jit import USE_NUMBA
from .analysis import (OutageReport, aleph1, baseline_no_eh_outage, cmu_outage, e2e_outage,
                       hop1_outage, hop2_outage, network_outage, outage_report)
from .channel import ChannelStats, cluster_channels, make_stats
from .config import Position3D, SystemConfig, dbm_to_watts, distance, validate, watts_to_dbm
from .link import OutageThresholds, thresholds
from .montecarlo import McEstimate, estimate, simulate
from .specfun import QuadratureSpec, integrate, reg_lower_gamma

__version__ = "0.1.0"
