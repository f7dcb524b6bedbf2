"""Exact verification of the identities behind an unramified local zeta-integral computation."""

__version__ = "0.1.0"
