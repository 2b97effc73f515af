from .augment import random_crop_flip
from .normalize import DEFAULT_MEAN, DEFAULT_STD, channel_statistics, normalize

__all__ = ["normalize", "channel_statistics", "random_crop_flip", "DEFAULT_MEAN", "DEFAULT_STD"]
