"""Desk-scale packet capture analysis: parse, dissect, aggregate, report."""

__version__ = "0.1.0"
