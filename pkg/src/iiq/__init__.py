"""Streaming AI-adoption metrics: raw adoption index (IAI) and the 0-1000 IIQ index."""

from .config import (
    ComplexityTable,
    ConfigError,
    EngineConfig,
    InteractionEvent,
    LeverageTable,
    PeriodResult,
    TaskRepresentation,
    UserState,
    complexity_multiplier,
    config_hash,
    leverage_multiplier,
    load_config,
    render_config,
)
from .engine import (
    PeriodOrderError,
    convert_decay,
    convert_lambda,
    delta_iiq,
    init_state,
    micro_iai,
    process_period,
    run_user,
)
from .interpretation import hours_saved, iiq_index, usd_impact

__version__ = "0.1.0"

__all__ = [
    "ComplexityTable",
    "ConfigError",
    "EngineConfig",
    "InteractionEvent",
    "LeverageTable",
    "PeriodOrderError",
    "PeriodResult",
    "TaskRepresentation",
    "UserState",
    "complexity_multiplier",
    "config_hash",
    "convert_decay",
    "convert_lambda",
    "delta_iiq",
    "hours_saved",
    "iiq_index",
    "init_state",
    "leverage_multiplier",
    "load_config",
    "micro_iai",
    "process_period",
    "render_config",
    "run_user",
    "usd_impact",
]
