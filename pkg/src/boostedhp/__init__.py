"""HP, boosted HP and AR trend-cycle filters with simulation and panel tools."""

SCHEMA_VERSION = 1

from .boosting import BoostConfig, ICPath, boosted_hp, boosted_hp_bic, ic_path  # noqa: E402
from .hp import FilterResult, hp_smooth  # noqa: E402

__all__ = [
    "SCHEMA_VERSION",
    "BoostConfig",
    "FilterResult",
    "ICPath",
    "boosted_hp",
    "boosted_hp_bic",
    "hp_smooth",
    "ic_path",
]
