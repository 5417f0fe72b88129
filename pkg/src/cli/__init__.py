"""Command-line interface."""

from src.cli.main import build_parser, execute, main, run

__all__ = ["build_parser", "execute", "main", "run"]
