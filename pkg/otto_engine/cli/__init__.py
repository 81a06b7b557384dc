# CLI package initialization
"""
Command-line front end: run configs, artifact I/O and subcommands.
"""

from otto_engine.cli.artifacts import read_distribution_artifact
from otto_engine.cli.config import RunConfig, load_config
from otto_engine.cli.main import main

__all__ = ["RunConfig", "load_config", "main", "read_distribution_artifact"]
