"""Comparison-model laboratory for element distinctness and set intersection."""

from .core import Answer, CountingOracle, Instance, Outcome, RunReport

__all__ = ["Answer", "CountingOracle", "Instance", "Outcome", "RunReport"]
__version__ = "0.1.0"
