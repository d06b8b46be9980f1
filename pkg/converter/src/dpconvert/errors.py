class ConvertError(Exception):
    """Missing files, shape mismatches, or malformed outputs."""
