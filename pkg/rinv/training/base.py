from typing import Callable, List, Optional, Union

__all__ = ["EpochTrainerBase"]


class EpochTrainerBase:
    r"""Base class of epoch-based trainers.

    This class provides prototype of training loops over epochs.

    Args:
        callbacks (callable or list[callable], optional):
            Callback functions. Each function is called before training and after every epoch.
            Default: ``None``.
        record_loss (bool):
            Record the mean batch loss of every epoch if ``record_loss=True``.
            Default: ``True``.
    """

    def __init__(
        self,
        callbacks: Optional[
            Union[
                Callable[["EpochTrainerBase"], None],
                List[Callable[["EpochTrainerBase"], None]],
            ]
        ] = None,
        record_loss: bool = True,
    ) -> None:
        if callbacks is not None:
            if callable(callbacks):
                callbacks = [callbacks]
            self.callbacks = callbacks
        else:
            self.callbacks = None

        self.record_loss = record_loss

        if self.record_loss:
            self.loss = []
        else:
            self.loss = None

        self.epoch = 0

    def __call__(self, n_epochs: int = 1, initial_call: bool = True) -> None:
        r"""Iteratively call ``update_once``.

        Args:
            n_epochs (int):
                The number of epochs.
                Default: ``1``.
            initial_call (bool):
                If ``True``, perform callbacks before the first epoch.
        """
        if initial_call:
            self.epoch = 0

            if self.callbacks is not None:
                for callback in self.callbacks:
                    callback(self)

        for _ in range(n_epochs):
            loss = self.update_once()
            self.epoch += 1

            if self.record_loss:
                self.loss.append(loss)

            if self.callbacks is not None:
                for callback in self.callbacks:
                    callback(self)

    def update_once(self) -> float:
        r"""Run one epoch.

        Returns:
            Mean batch loss of the epoch.
        """
        raise NotImplementedError("Implement 'update_once' method.")
