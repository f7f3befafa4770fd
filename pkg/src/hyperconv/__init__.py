"""Polarized hyperplane arrangements, their convolution algebras and the
Ozsváth–Szabó algebras, in exact arithmetic."""

__version__ = "0.1.0"
