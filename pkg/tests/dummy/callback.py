def dummy_function(_) -> None:
    pass


class DummyCallback:
    def __init__(self) -> None:
        self.n_calls = 0

    def __call__(self, _) -> None:
        self.n_calls += 1


class EpochRecorder:
    r"""Record ``trainer.epoch`` at every call."""

    def __init__(self) -> None:
        self.epochs = []

    def __call__(self, trainer) -> None:
        self.epochs.append(trainer.epoch)
