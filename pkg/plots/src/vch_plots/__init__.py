"""Figure rendering for vch simulation output files."""

from .data import DataError, load
from .figures import KINDS, FigureSpec, render

__all__ = ["DataError", "FigureSpec", "KINDS", "load", "render"]

__version__ = "0.1.0"
