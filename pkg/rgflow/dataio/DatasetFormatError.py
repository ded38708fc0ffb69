class DatasetFormatError(IOError):
    """Raised when a dataset or parameters file is malformed, truncated or cannot be ingested."""
    pass
