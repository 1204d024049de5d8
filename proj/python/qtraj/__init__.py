"""Bayesian quantum trajectories of continuously measured superconducting qubits."""

from ._core import (
    ConfigError,
    DomainError,
    GeneratorSettings,
    InsufficientStatistics,
    MeasurementAxis,
    MeasurementConfig,
    cascade,
    config_from_timescale,
    ensemble_moments,
    generate,
    guessing_game,
    load_config,
    preset_names,
    rabi_rotate,
    reconstruct,
    smooth,
    update_phi,
    update_z,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "GeneratorSettings",
    "InsufficientStatistics",
    "MeasurementAxis",
    "MeasurementConfig",
    "cascade",
    "config_from_timescale",
    "ensemble_moments",
    "generate",
    "guessing_game",
    "load_config",
    "preset_names",
    "rabi_rotate",
    "reconstruct",
    "smooth",
    "update_phi",
    "update_z",
]
