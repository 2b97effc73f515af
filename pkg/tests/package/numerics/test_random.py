import numpy as np
import pytest

from rinv.errors import DomainError
from rinv.numerics import RngStream, rng_draw

parameters_kind = ["uniform", "standard_normal", "permutation"]


@pytest.mark.parametrize("kind", parameters_kind)
def test_rng_stream_replay(kind: str):
    args = (10,) if kind == "permutation" else ()
    kwargs = {} if kind == "permutation" else {"size": 10}

    a = RngStream(7, "corruption")
    b = RngStream(7, "corruption")

    x = rng_draw(a, kind, *args, **kwargs)
    y = rng_draw(b, kind, *args, **kwargs)

    assert np.array_equal(x, y)
    assert a.counter == b.counter == 1

    # replay from (seed, label, counter)
    c = RngStream(7, "corruption", counter=0)

    assert np.array_equal(rng_draw(c, kind, *args, **kwargs), x)


def test_rng_stream_independence():
    a = RngStream(0, "shuffle")

    x = a.uniform(size=100)
    y = a.uniform(size=100)
    z = RngStream(0, "augment").uniform(size=100)
    w = RngStream(1, "shuffle").uniform(size=100)

    assert not np.array_equal(x, y)
    assert not np.array_equal(x, z)
    assert not np.array_equal(x, w)


def test_rng_stream_split():
    parent = RngStream(3, "student")
    child = parent.split("corruption")

    assert child.label == "student/corruption"
    assert child.counter == 0
    assert parent.counter == 0

    # splitting does not depend on the parent's draws
    parent.uniform(size=3)

    x = parent.split("corruption").uniform(size=5)
    y = RngStream(3, "student/corruption").uniform(size=5)

    assert np.array_equal(x, y)


def test_rng_stream_copy():
    a = RngStream(0, "x")
    a.uniform()
    b = a.copy()

    assert a == b
    assert np.array_equal(a.uniform(size=3), b.uniform(size=3))


def test_index_subset():
    rng = RngStream(0, "labels")

    indices = rng.index_subset(10, 4)

    assert len(np.unique(indices)) == 4
    assert np.all(np.diff(indices) > 0)

    with pytest.raises(DomainError):
        rng.index_subset(3, 4)

    with pytest.raises(NotImplementedError):
        rng_draw(rng, "poisson")
