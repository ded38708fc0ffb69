class NumericalInstabilityError(ArithmeticError):
    """Raised when a computation produces non-finite values or a residual imaginary part that should vanish."""
    pass
