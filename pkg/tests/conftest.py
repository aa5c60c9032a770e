"""Shared fixtures: small worked instances with hand-checked expectations."""

from __future__ import annotations

import numpy as np
import pytest

from momext import MomentSequence


@pytest.fixture
def seq_101() -> MomentSequence:
    """Scalar moments (1, 0, 1): total mass 1, mean 0, second moment 1.

    Solved exactly by the two-atom measure (delta_{-1} + delta_{+1}) / 2,
    which is the measure the unimodular parameter theta = 0 must produce.
    """
    return MomentSequence.scalar([1.0, 0.0, 1.0])


@pytest.fixture
def seq_identity_2() -> MomentSequence:
    """N = 2 moments (I, 0, I): the block version of seq_101."""
    return MomentSequence.from_arrays(
        [np.eye(2), np.zeros((2, 2)), np.eye(2)])


def moments_of_atoms(locations, weights, count: int) -> list:
    """Moments S_0..S_{count-1} of an atomic matrix measure, directly."""
    locations = np.asarray(locations, dtype=float)
    weights = np.asarray(weights, dtype=complex)
    return [sum((t ** n) * w for t, w in zip(locations, weights))
            for n in range(count)]
