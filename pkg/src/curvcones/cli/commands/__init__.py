"""CLI commands package."""

from . import analyze_cmd, cones_cmd, model_cmd, verify_cmd

__all__ = ["analyze_cmd", "cones_cmd", "model_cmd", "verify_cmd"]
