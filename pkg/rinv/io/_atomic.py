import contextlib
import os
import tempfile
from typing import BinaryIO, Iterator

__all__ = ["atomic_open"]


@contextlib.contextmanager
def atomic_open(path: str, mode: str = "wb") -> Iterator[BinaryIO]:
    r"""Open a temporary file next to ``path`` and move it onto ``path`` on success.

    Readers never observe a partially written file. On failure, ``path`` is left
    untouched and the temporary file is removed.
    """
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))

    try:
        with os.fdopen(fd, mode) as f:
            yield f

        os.replace(tmp_path, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.remove(tmp_path)

        raise
