from .checkpoint import (
    FORMAT_VERSION,
    load_checkpoint,
    load_head,
    read_entries,
    save_checkpoint,
    save_head,
    write_entries,
)
from .idx import load_idx, read_idx, save_idx, save_idx_dataset
from .reports import read_json, write_csv, write_json

__all__ = [
    "FORMAT_VERSION",
    "load_idx",
    "read_idx",
    "save_idx",
    "save_idx_dataset",
    "save_checkpoint",
    "load_checkpoint",
    "save_head",
    "load_head",
    "read_entries",
    "write_entries",
    "write_json",
    "read_json",
    "write_csv",
]
