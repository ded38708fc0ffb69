class DimensionMismatchError(ValueError):
    """Raised when the shapes of vectors, matrices or lattices handed to an operation do not agree."""
    pass
