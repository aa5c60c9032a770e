"""End-to-end orchestration: prepare, solve, and the parameter sweep.

Checked here:
- the worked instance (1, 0, 1): preparation report, best-margin default
  parameter theta = 0, the frozen two-atom measure,
- both solution routes (atomic for isometric parameters, transform plus
  contour recovery for contractions, samples only for lam-dependent ones),
- the admissibility gate on supplied parameters,
- the unique-extension case (defect 0) and the sweep refusing it,
- the theta sweep on (1, 0, 1): seven admissible angles, pi flagged
  forbidden, pairwise distinct measures,
- determinism of repeated solves,
- unitary invariance: conjugating the data by a unitary U conjugates the
  solution weights by U, once the parameter is transported through the
  canonical intertwiner between the two Gram spaces.
"""

from __future__ import annotations

import numpy as np
import pytest

from momext import (ExtensionParameter, MomentSequence, NotAdmissible,
                    default_parameter, measure_distance, prepare,
                    selfadjoint_extension, solve_truncated, spectral_measure,
                    theta_sweep)
from momext.sampling import (haar_unitary, random_admissible_isometry,
                             random_deficient_instance,
                             random_feasible_instance)

RNG_SEED = 20260807
ORACLE_ATOL = 1e-12


def test_prepare_reports_the_worked_instance(seq_101):
    ws = prepare(seq_101)
    assert ws.condition.solvable
    assert ws.space.ambient_dim == 2
    assert ws.defect == 1


def test_default_parameter_picks_the_best_margin_angle(seq_101):
    ws = prepare(seq_101)
    parameter, report, theta = default_parameter(ws)
    assert theta == 0.0
    assert report.margin == pytest.approx(np.sqrt(2.0), abs=1e-10)
    assert np.allclose(parameter.constant_matrix(1), np.eye(1))


def test_solve_default_returns_the_frozen_measure(seq_101):
    result = solve_truncated(seq_101)
    assert result.kind == "atomic"
    assert result.defect == 1
    assert result.gram_rank == 2
    assert np.allclose(result.measure.locations, [-1.0, 1.0],
                       atol=ORACLE_ATOL)
    assert np.allclose([w[0, 0] for w in result.measure.weights], [0.5, 0.5],
                       atol=ORACLE_ATOL)
    assert result.verification.passed
    assert result.verification.max_deviation <= 1e-12


def test_solve_rejects_an_inadmissible_parameter(seq_101):
    with pytest.raises(NotAdmissible):
        solve_truncated(seq_101,
                        parameter=ExtensionParameter.unimodular(np.pi, 1))


def test_contraction_route_recovers_the_moments(seq_101):
    parameter = ExtensionParameter.contraction(np.zeros((1, 1)))
    result = solve_truncated(seq_101, parameter=parameter)
    assert result.kind == "transform"
    assert result.measure is None
    assert result.recovery is not None
    assert result.verification.passed
    assert result.recovery.doubling_gap <= 1e-10
    assert len(result.transform_samples) == 3


def test_sampler_route_returns_samples_only(seq_101):
    parameter = ExtensionParameter.from_sampler(
        lambda lam: 0.5 * (lam - 1j) / (lam + 1j) * np.eye(1))
    result = solve_truncated(seq_101, parameter=parameter)
    assert result.kind == "transform"
    assert result.recovery is None and result.verification is None
    for lam, tv in result.transform_samples:
        imt = (tv - tv.conj().T) / 2j
        assert np.linalg.eigvalsh(imt).min() >= -1e-9


def test_unique_extension_when_the_defect_vanishes():
    rng = np.random.default_rng(RNG_SEED)
    seq, truth = random_deficient_instance(rng, 1, 2)
    result = solve_truncated(seq)
    assert result.defect == 0
    assert result.kind == "atomic"
    assert result.verification.passed
    # The unique solution is the generating measure itself.
    assert measure_distance(result.measure, truth, site_tol=1e-6) <= 1e-7
    with pytest.raises(ValueError):
        theta_sweep(seq)


def test_sweep_flags_the_forbidden_angle(seq_101):
    res = theta_sweep(seq_101, n_thetas=8)
    assert res.thetas.shape == (8,)
    assert np.allclose(res.forbidden_thetas, [np.pi], atol=1e-12)
    admissible = [e for e in res.entries if e.admissibility.admissible]
    assert len(admissible) == 7
    for entry in admissible:
        assert entry.verification.passed
    # All admissible angles give genuinely different measures.
    dm = res.distance_matrix
    for i in range(8):
        for j in range(8):
            if i == j:
                continue
            if res.entries[i].measure is None or res.entries[j].measure is None:
                assert np.isnan(dm[i, j])
            else:
                assert dm[i, j] > 1e-3
                assert dm[i, j] == pytest.approx(dm[j, i], rel=1e-12)


def test_repeated_solves_are_bitwise_identical():
    rng = np.random.default_rng(RNG_SEED + 1)
    seq, _ = random_feasible_instance(rng, 2, 2)
    a = solve_truncated(seq)
    b = solve_truncated(seq)
    assert np.array_equal(a.measure.locations, b.measure.locations)
    assert np.array_equal(a.measure.weights, b.measure.weights)
    assert np.array_equal(a.gram_eigenvalues, b.gram_eigenvalues)
    assert a.parameter_theta == b.parameter_theta


def test_random_instances_solve_to_tight_tolerance():
    rng = np.random.default_rng(RNG_SEED + 2)
    for _ in range(25):
        n = int(rng.integers(1, 4))
        d = int(rng.integers(1, 5))
        seq, _ = random_feasible_instance(rng, n, d)
        result = solve_truncated(seq)
        assert result.verification.passed, (n, d)
        assert result.verification.max_deviation \
            <= 1e-7 * result.verification.scale


def _intertwiner(ws_src, ws_dst, u):
    """Coordinates of the unitary intertwining the two Gram models.

    The destination vectors y_{r, l} = sum_k conj(u[k, l]) x'_{r, k} have
    the same Gram matrix as the source vectors x_{r, l}, so x_{r, l} -> y
    extends to a unitary that carries the source shift onto the destination
    shift.
    """
    n = ws_src.condition.block_dim
    d = ws_src.condition.order
    coords_dst = ws_dst.space.coords
    y = np.zeros_like(coords_dst)
    for r in range(d + 1):
        for l in range(n):
            for k in range(n):
                y[r * n + l] += np.conj(u[k, l]) * coords_dst[r * n + k]
    t_map, *_ = np.linalg.lstsq(ws_src.space.coords, y, rcond=None)
    return t_map.T


def test_unitary_invariance_of_the_whole_construction():
    rng = np.random.default_rng(RNG_SEED + 3)
    for _ in range(5):
        n, d = 2, 2
        seq, _ = random_feasible_instance(rng, n, d)
        u = haar_unitary(rng, n)
        seq_u = MomentSequence.from_arrays(
            [u @ seq[k] @ u.conj().T for k in range(len(seq))])

        ws = prepare(seq)
        ws_u = prepare(seq_u)
        assert ws.defect == ws_u.defect

        t_map = _intertwiner(ws, ws_u, u)
        assert np.allclose(t_map.conj().T @ t_map,
                           np.eye(ws.space.ambient_dim), atol=1e-9)

        # Transport a random admissible parameter through the intertwiner.
        parameter = random_admissible_isometry(rng, ws.shift, ws.pair,
                                               ws.forbidden)
        v = parameter.constant_matrix(ws.defect)
        c_plus = ws_u.pair.basis_plus.conj().T @ (t_map @ ws.pair.basis_plus)
        c_minus = ws_u.pair.basis_minus.conj().T @ (t_map @ ws.pair.basis_minus)
        v_u = c_minus @ v @ c_plus.conj().T

        ext = selfadjoint_extension(ws.shift, ws.pair, parameter)
        measure = spectral_measure(ext, ws.shift)
        ext_u = selfadjoint_extension(ws_u.shift, ws_u.pair,
                                      ExtensionParameter.isometric(v_u))
        measure_u = spectral_measure(ext_u, ws_u.shift)

        assert measure.n_atoms == measure_u.n_atoms
        assert np.allclose(measure.locations, measure_u.locations, atol=1e-8)
        for w, w_u in zip(measure.weights, measure_u.weights):
            assert np.allclose(u @ w @ u.conj().T, w_u, atol=1e-8)
