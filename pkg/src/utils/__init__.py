"""Shared helpers: exact matrices and canonical digests."""

from src.utils.digest import canonical_digest
from src.utils.matrices import parse_matrix, to_int_matrix, to_matrix

__all__ = ["canonical_digest", "parse_matrix", "to_int_matrix", "to_matrix"]
