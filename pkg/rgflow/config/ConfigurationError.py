class ConfigurationError(ValueError):
    """Raised when an experiment configuration is missing, malformed or inconsistent."""
    pass
