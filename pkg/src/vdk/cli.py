"""Console entry point; the implementation lives in :mod:`vdk.scene.cli`."""

from vdk.scene.cli import build_parser, main

__all__ = ["build_parser", "main"]
