"""Command-line interface: diag, realize, verify, probe and charpoly."""

from .commands import CommandResult, dump_json, render_text
from .main import build_parser, main, run
from .models import CommandConfig, ExitCode, OutputFormat, ProbeTarget

__all__ = [
    "CommandResult",
    "dump_json",
    "render_text",
    "build_parser",
    "main",
    "run",
    "CommandConfig",
    "ExitCode",
    "OutputFormat",
    "ProbeTarget",
]
