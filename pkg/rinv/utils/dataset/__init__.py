from .base import Dataset, stratified_subset
from .label_shift import LabelShiftMap
from .synth import synth_dataset, synth_shifted_split

__all__ = ["Dataset", "LabelShiftMap", "stratified_subset", "synth_dataset", "synth_shifted_split"]
