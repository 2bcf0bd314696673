import numpy as np
import pytest

from protorecon.model import Dataset, Params


def random_params(rng: np.random.Generator, n: int, w_lo: float = 0.15, w_hi: float = 1.0) -> Params:
    """Valid random parameters with |w| away from the projection floor."""
    sign = np.where(rng.integers(0, 2, n) == 1, 1.0, -1.0)
    return Params(
        a=rng.uniform(-0.5, 0.5, n),
        w=sign * rng.uniform(w_lo, w_hi, n),
        b=rng.uniform(-0.5, 0.5, n),
        c=float(rng.uniform(-0.2, 0.2)),
    )


def random_dataset(rng: np.random.Generator, n: int) -> Dataset:
    x = np.sort(rng.uniform(0.0, 1.0, n))
    return Dataset(x=x, y=rng.uniform(0.0, 1.0, n))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
