"""Okounkov bodies of divisors on toric varieties and surface models."""

__version__ = "0.1.0"
