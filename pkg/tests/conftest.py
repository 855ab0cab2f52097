import math
import random
from fractions import Fraction

import pytest

from toricfloer import Fiber, load_toric

BUILTIN_NAMES = ["CP1", "CP2", "CP1xCP1", "CPn(3)"]


@pytest.fixture(params=BUILTIN_NAMES)
def builtin(request):
    return load_toric(request.param)


def balanced_fiber(X):
    """The balanced fiber of a built-in (center of the simplex or square)."""
    if X.name == "CP1xCP1":
        return Fiber((Fraction(1, 2), Fraction(1, 2)))
    return Fiber(tuple(Fraction(1, X.n + 1) for _ in range(X.n)))


def random_interior_fiber(X, rng: random.Random, denom: int = 60) -> Fiber:
    bounds = X.coordinate_bounds()
    for _ in range(1000):
        u = []
        for lo, hi in bounds:
            low = math.floor(lo * denom) + 1
            high = math.ceil(hi * denom) - 1
            u.append(Fraction(rng.randint(low, high), denom))
        point = tuple(u)
        if all(
            sum(ui * vi for ui, vi in zip(point, v)) - lam > 0
            for v, lam in zip(X.normals, X.offsets)
        ):
            return Fiber(point)
    raise RuntimeError(f"could not sample an interior point of {X.name}")
