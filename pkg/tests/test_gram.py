"""The Gram-space model of the trailing Hankel section.

Checked here:
- the factor reproduces the section: coords @ coords^H equals H_d,
- representing-vector inner products return the prescribed moments,
- the hand-checked rank-1 example (1, 1, 1) with eigenvalues {2, 0},
- the deterministic phase convention (leading entry of each eigenvector
  column real positive), byte-stable across repeated factorizations,
- indefinite input is rejected with the trailing-section error.
"""

from __future__ import annotations

import numpy as np
import pytest

from momext import (MomentSequence, NotPSD, build_block_hankel, factor_psd)
from momext.linalg import inner
from momext.sampling import random_feasible_instance

RNG_SEED = 20260802
N_RANDOM_INSTANCES = 30


def _space_for(seq):
    return factor_psd(build_block_hankel(seq, seq.max_hankel_order))


def test_identity_section_gives_identity_coordinates(seq_101):
    space = _space_for(seq_101)
    assert space.ambient_dim == 2
    assert space.n_vectors == 2
    assert np.allclose(space.coords, np.eye(2), atol=1e-14)
    assert np.allclose(space.eigenvalues, [1.0, 1.0], atol=1e-14)


def test_rank_one_example_drops_the_null_direction():
    # (1, 1, 1) is delta_1: H_1 = ones(2, 2), eigenvalues {2, 0}, rank 1.
    seq = MomentSequence.scalar([1.0, 1.0, 1.0])
    space = _space_for(seq)
    assert np.allclose(sorted(space.eigenvalues), [0.0, 2.0], atol=1e-14)
    assert space.ambient_dim == 1
    # Both representing vectors collapse onto the same unit-mass direction.
    assert np.allclose(space.coords[0], space.coords[1], atol=1e-14)
    assert inner(space.vector(0), space.vector(0)) == pytest.approx(1.0)


def test_factor_reproduces_the_section():
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(N_RANDOM_INSTANCES):
        n = int(rng.integers(1, 4))
        d = int(rng.integers(1, 4))
        seq, _ = random_feasible_instance(rng, n, d)
        h = build_block_hankel(seq, d)
        space = factor_psd(h)
        assert np.allclose(space.gram(), h.matrix,
                           atol=1e-10 * max(1.0, np.abs(h.matrix).max()))


def test_inner_products_return_moments():
    rng = np.random.default_rng(RNG_SEED + 1)
    for _ in range(10):
        n = int(rng.integers(1, 4))
        d = int(rng.integers(1, 4))
        seq, _ = random_feasible_instance(rng, n, d)
        space = _space_for(seq)
        scale = max(1.0, seq.scale)
        # (x_a, x_b) = H[a, b] = S-entry: check a random sample of pairs.
        for _ in range(8):
            a = int(rng.integers(0, space.n_vectors))
            b = int(rng.integers(0, space.n_vectors))
            expected = build_block_hankel(seq, d).matrix[a, b]
            got = inner(space.vector(a), space.vector(b))
            assert abs(got - expected) <= 1e-10 * scale


def test_first_nonnegligible_entry_of_each_column_is_real_positive():
    rng = np.random.default_rng(RNG_SEED + 2)
    for _ in range(10):
        n = int(rng.integers(1, 3))
        d = int(rng.integers(1, 4))
        seq, _ = random_feasible_instance(rng, n, d)
        space = _space_for(seq)
        # Eigenvalue-scaled columns: coords[:, i] ~ U[:, i] sqrt(lambda_i).
        for i in range(space.ambient_dim):
            col = space.coords[:, i]
            mags = np.abs(col)
            lead = int(np.argmax(mags >= (1.0 - 1e-9) * mags.max()))
            assert col[lead].imag == pytest.approx(0.0, abs=1e-12 * mags.max())
            assert col[lead].real > 0.0


def test_factorization_is_deterministic():
    rng = np.random.default_rng(RNG_SEED + 3)
    seq, _ = random_feasible_instance(rng, 3, 3)
    h = build_block_hankel(seq, 3)
    a = factor_psd(h)
    b = factor_psd(h)
    assert np.array_equal(a.coords, b.coords)
    assert np.array_equal(a.eigenvalues, b.eigenvalues)


def test_eigenvalues_are_descending():
    rng = np.random.default_rng(RNG_SEED + 4)
    seq, _ = random_feasible_instance(rng, 2, 3)
    space = _space_for(seq)
    assert np.all(np.diff(space.eigenvalues) <= 1e-12)


def test_indefinite_section_is_rejected():
    seq = MomentSequence.scalar([1.0, 0.0, -1.0])
    with pytest.raises(NotPSD) as exc_info:
        _space_for(seq)
    assert exc_info.value.section == "trailing"
