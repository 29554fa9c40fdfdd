"""Reversed-digit (RevOrder) arithmetic traces, CSID analysis and dataset synthesis."""

__version__ = "0.1.0"
