"""Finite-model workbench: filters and ultrafilters on finite index sets,
reduced products and homomorphism factorization, annihilator/centralizer
machinery with the orthogonality construction, and totally nonsingular
matrices over exact fields."""

__version__ = "0.1.0"
