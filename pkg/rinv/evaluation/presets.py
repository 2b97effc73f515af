import numpy as np

__all__ = [
    "MASK_SWEEP",
    "NOISE_SWEEP",
    "DECREASING_MASK",
    "DECREASING_NOISE",
    "LABEL_FRACTIONS",
    "N_INSTANTIATIONS",
    "sweeps",
]

N_INSTANTIATIONS = 10

# severities above a mask Range(0.5, 0.95) training range
MASK_SWEEP = [0.96, 0.97, 0.98, 0.99]

# severities above a noise Range(0.0, 0.3) training range
NOISE_SWEEP = [0.35, 0.4, 0.45, 0.5]

# severities below the training range
DECREASING_MASK = [0.3, 0.35, 0.4, 0.45]
DECREASING_NOISE = [float(sigma) for sigma in np.round(np.linspace(0.02, 0.08, 4), 2)]

LABEL_FRACTIONS = [0.05, 0.1, 0.25, 0.5, 1.0]

sweeps = {
    "mask": MASK_SWEEP,
    "noise": NOISE_SWEEP,
    "decreasing_mask": DECREASING_MASK,
    "decreasing_noise": DECREASING_NOISE,
}
