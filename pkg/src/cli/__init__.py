"""Command line front-end for the Wiener-Hopf toolkit."""

from .config import RunConfig, load_run_config
from .runner import RunResult, main, run

__all__ = ["RunConfig", "RunResult", "load_run_config", "main", "run"]
