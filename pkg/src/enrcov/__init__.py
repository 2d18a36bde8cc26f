"""Exact algebra for characteristic-2 derivations on Enriques coverings."""

__version__ = "0.1.0"
