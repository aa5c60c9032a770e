"""Moment sequences and the two nested block Hankel conditions.

Checked here:
- block Hankel assembly places S_{r+t} at block (r, t) (asserted entrywise),
- the solvability report: strict positivity of the order d-1 section and
  semidefiniteness of the order d section, with hand-checked eigenvalues,
- moments of genuine atomic measures always pass, and targeted corruptions
  fail on the correct section,
- input validation (Hermitian moments, odd count, shape agreement).
"""

from __future__ import annotations

import numpy as np
import pytest

from momext import (InsufficientMoments, MomentSequence, build_block_hankel,
                    check_solvability_prefix, check_truncated_conditions)
from momext.sampling import random_feasible_instance

RNG_SEED = 20260801
N_RANDOM_INSTANCES = 25


def _random_hermitian(rng, n):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (a + a.conj().T) / 2


def test_sequence_requires_square_matching_shapes():
    with pytest.raises(ValueError):
        MomentSequence.from_arrays([np.eye(2), np.eye(3)])
    with pytest.raises(ValueError):
        MomentSequence.from_arrays([np.ones((2, 3))])


def test_sequence_rejects_clearly_non_hermitian_moments():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        MomentSequence.from_arrays([np.eye(2), bad, np.eye(2)])


def test_sequence_symmetrizes_roundoff_level_defects():
    almost = np.eye(2) + np.array([[0.0, 1e-14], [0.0, 0.0]])
    seq = MomentSequence.from_arrays([np.eye(2), almost, np.eye(2)])
    s1 = seq[1]
    assert np.allclose(s1, s1.conj().T, atol=0, rtol=0)


def test_scalar_constructor_wraps_values():
    seq = MomentSequence.scalar([2.0, -1.0, 3.0])
    assert seq.dim == 1
    assert seq[1][0, 0] == -1.0


def test_block_hankel_entries_are_shifted_moments():
    rng = np.random.default_rng(RNG_SEED)
    n, d = 2, 2
    mats = [_random_hermitian(rng, n) for _ in range(2 * d + 1)]
    seq = MomentSequence.from_arrays(mats)
    h = build_block_hankel(seq, d)
    assert h.matrix.shape == ((d + 1) * n, (d + 1) * n)
    for r in range(d + 1):
        for t in range(d + 1):
            block = h.matrix[r * n:(r + 1) * n, t * n:(t + 1) * n]
            assert np.allclose(block, mats[r + t], atol=1e-15)


def test_block_hankel_needs_enough_moments():
    seq = MomentSequence.scalar([1.0, 0.0, 1.0])
    with pytest.raises(InsufficientMoments):
        build_block_hankel(seq, 2)


def test_conditions_on_two_atom_instance(seq_101):
    report = check_truncated_conditions(seq_101)
    assert report.block_dim == 1
    assert report.order == 1
    assert report.leading_positive and report.trailing_psd and report.solvable
    # H_0 = [1], H_1 = I_2: both minimal eigenvalues are exactly 1.
    assert report.min_eig_leading == pytest.approx(1.0, abs=1e-14)
    assert report.min_eig_trailing == pytest.approx(1.0, abs=1e-14)


def test_conditions_need_an_odd_moment_count():
    with pytest.raises(InsufficientMoments):
        check_truncated_conditions(MomentSequence.scalar([1.0, 0.0]))
    with pytest.raises(InsufficientMoments):
        check_truncated_conditions(MomentSequence.scalar([1.0]))


def test_leading_failure_detected():
    report = check_truncated_conditions(MomentSequence.scalar([-1.0, 0.0, 1.0]))
    assert not report.leading_positive
    assert not report.solvable
    assert report.min_eig_leading == pytest.approx(-1.0, abs=1e-14)


def test_trailing_failure_detected():
    # H_1 = [[1, 0], [0, -1]] has eigenvalue -1; H_0 = [1] is fine.
    report = check_truncated_conditions(MomentSequence.scalar([1.0, 0.0, -1.0]))
    assert report.leading_positive
    assert not report.trailing_psd
    assert report.min_eig_trailing == pytest.approx(-1.0, abs=1e-14)


def test_rank_deficient_trailing_section_still_solvable():
    # delta_1: moments all 1; H_1 = ones(2, 2) is PSD with eigenvalue 0.
    report = check_truncated_conditions(MomentSequence.scalar([1.0, 1.0, 1.0]))
    assert report.solvable
    assert report.min_eig_trailing == pytest.approx(0.0, abs=1e-12)


def test_moments_of_atomic_measures_always_pass():
    rng = np.random.default_rng(RNG_SEED)
    for _ in range(N_RANDOM_INSTANCES):
        n = int(rng.integers(1, 4))
        d = int(rng.integers(1, 4))
        seq, _ = random_feasible_instance(rng, n, d)
        report = check_truncated_conditions(seq)
        assert report.solvable, (n, d)


def test_corrupted_top_moment_fails_trailing_only():
    rng = np.random.default_rng(RNG_SEED + 1)
    for _ in range(10):
        n = int(rng.integers(1, 3))
        d = int(rng.integers(1, 4))
        seq, _ = random_feasible_instance(rng, n, d)
        mats = [seq[k] for k in range(len(seq))]
        # Dropping the top diagonal well below its Cauchy-Schwarz floor
        # breaks H_d but never touches H_{d-1}.
        mats[-1] = mats[-1] - 10.0 * np.trace(mats[-1]).real * np.eye(n)
        report = check_truncated_conditions(MomentSequence.from_arrays(mats))
        assert report.leading_positive
        assert not report.trailing_psd


def test_prefix_flags_match_section_checks():
    seq = MomentSequence.scalar([1.0, 0.0, 1.0, 0.0, -5.0])
    flags = check_solvability_prefix(seq)
    # H_0 = [1] ok, H_1 = I ok, H_2 contains s_4 = -5 on the diagonal.
    assert flags == [True, True, False]
