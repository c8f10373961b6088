"""
Series truncation control shared by the special functions.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerance:
    """
    Combined absolute/relative tolerance with a hard cap on series length.

    A series is considered converged once its remainder is below
    ``abs_tol + rel_tol * |value|``.
    """

    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_terms: int = 20000

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f'abs_tol must be > 0, got {self.abs_tol}')
        if not self.rel_tol > 0:
            raise ValueError(f'rel_tol must be > 0, got {self.rel_tol}')
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f'max_terms must be a positive integer, got {self.max_terms}')

    def bound(self, value: float) -> float:
        """Allowed error for a result of the given magnitude."""
        return self.abs_tol + self.rel_tol * abs(value)


DEFAULT_TOLERANCE = Tolerance()
