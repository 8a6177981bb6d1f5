"""Exact D0-D6 invariants from ordered products in the tropical vertex group."""

__version__ = "0.1.0"

from .ring import MultiPoly, chi  # noqa: E402
from .series import Cap, GradedSeries  # noqa: E402

__all__ = ["__version__", "Cap", "GradedSeries", "MultiPoly", "chi"]
