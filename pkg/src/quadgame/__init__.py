"""Workbench for Schmidt games and badly approximable vectors on rational quadrics."""

__version__ = "0.1.0"

from .forms import QuadraticForm, DefiniteForm, FormError, diagonalize, parse_form

__all__ = [
    "__version__",
    "QuadraticForm",
    "DefiniteForm",
    "FormError",
    "diagonalize",
    "parse_form",
]
