"""Verification lab for the Paley equiangular tight frame and the Paley graph extractor.

Constructs both objects exactly at desk scale, measures RIP constants,
double character sums, clique numbers and extractor biases, and runs the
RIP -> character-sum-property -> extractor-bound implication as an
executable inequality chain.
"""

__version__ = "0.1.0"

from .field import FieldCtx, chi, gauss_sum, new_field, psi

__all__ = ["FieldCtx", "new_field", "chi", "psi", "gauss_sum", "__version__"]
