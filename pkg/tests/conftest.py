import numpy as np
import pytest

from l0landscape import Instance


@pytest.fixture
def instability_original() -> Instance:
    """Identity sensing with zero measurements: one degenerate minimizer."""
    return Instance.from_arrays(np.eye(2), [0.0, 0.0], 1)


@pytest.fixture
def instability_perturbed() -> Instance:
    """Measurements nudged to (0.1, 0.1): two minimizers plus a saddle."""
    return Instance.from_arrays(np.eye(2), [0.1, 0.1], 1)


@pytest.fixture
def saddle_instance() -> Instance:
    """Identity sensing with b = (1, 1): the classic two-minimizer landscape."""
    return Instance.from_arrays(np.eye(2), [1.0, 1.0], 1)


@pytest.fixture
def complementarity_instance() -> Instance:
    """Identity sensing with b = (-1, 0): nondegenerate minimizer plus a degenerate origin."""
    return Instance.from_arrays(np.eye(2), [-1.0, 0.0], 1)
