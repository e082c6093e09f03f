"""Experiment orchestration: configs, campaigns and the CLI."""

from .campaigns import (
    BER_COLUMNS,
    CurvePoint,
    FrameSimulator,
    build_code,
    required_snr,
    run_ber,
    run_exchange_rate,
    run_exit,
    run_optimize,
    run_pcm_gen,
    run_rate,
)
from .config import ExperimentConfig, StopRule, load_config
