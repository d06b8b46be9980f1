"""Offline conversion of published AWA2/CUB distributions into portable
DPM1 matrices, label files, and split files."""

from .convert import convert_awa2, convert_cub
from .dpm1 import read_matrix, write_matrix
from .errors import ConvertError
from .verify import VerifyReport, verify

__version__ = "0.1.0"

__all__ = ["convert_awa2", "convert_cub", "read_matrix", "write_matrix",
           "ConvertError", "VerifyReport", "verify", "__version__"]
