"""Batch command-line pipeline."""

from .commands import COMMANDS, PipelineConfig
from .pipeline import build_config, main, run_command

__all__ = ["COMMANDS", "PipelineConfig", "build_config", "main", "run_command"]
