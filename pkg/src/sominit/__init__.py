"""Batch 1-D SOMs under principal-component and random initialization."""

__version__ = "0.1.0"
