"""Command-line harness."""

from .config import DEFAULT_CONFIG, HarnessConfig
from .main import cmd_verify, main
from .report import RunReport

__all__ = ["DEFAULT_CONFIG", "HarnessConfig", "RunReport", "cmd_verify", "main"]
