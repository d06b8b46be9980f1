from . import dpm1
from .textfiles import (load_attribute_matrix, read_attribute_csv,
                        read_classes, read_labels, read_lines, read_split,
                        write_attribute_csv, write_classes, write_labels,
                        write_lines, write_split)

__all__ = [
    "dpm1",
    "load_attribute_matrix", "read_attribute_csv",
    "read_classes", "read_labels", "read_lines", "read_split",
    "write_attribute_csv", "write_classes", "write_labels",
    "write_lines", "write_split",
]
