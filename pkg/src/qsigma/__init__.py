"""Exact and high-precision verification of q-series identities around sigma(q)."""

__version__ = "0.1.0"
