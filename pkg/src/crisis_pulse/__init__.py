"""Batch analytics for disaster-period tweet corpora."""

__version__ = "0.1.0"
