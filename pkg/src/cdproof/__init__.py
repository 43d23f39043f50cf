"""Condensed detachment proofs as D-terms: checking, measuring, compressing, searching."""

__version__ = "0.1.0"
