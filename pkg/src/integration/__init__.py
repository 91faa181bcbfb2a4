"""Subcommand dispatch for the command line"""

from .lab_runner import COMMANDS, PRESETS, LabRunner

__all__ = ["COMMANDS", "PRESETS", "LabRunner"]
