"""Exact eigenform database engine for totally real fields of small degree.

The computation path runs entirely in exact arithmetic: ideal classes of a
definite quaternion order, level structure on a projective line over a
residue ring, Hecke and involution actions, old/new splitting, and exact
eigensystems over each constituent's coefficient field.
"""

__version__ = "0.1.0"

from .field import make_field

__all__ = ["make_field", "__version__"]
