"""Weighted one-level densities of Dirichlet L-functions modulo a prime."""

__version__ = "0.1.0"

from .numeric import DomainError, PoleError  # noqa: E402

__all__ = ["__version__", "DomainError", "PoleError"]
