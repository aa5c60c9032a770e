"""Solutions as matrix measures, and the transforms that certify them.

A self-adjoint extension A_V yields an atomic N x N matrix measure through
its spectral decomposition: each eigenvalue cluster t_j carries the weight

    W_j[k, l] = sum over cluster members v of (x_k, v) conj((x_l, v)),

and M = sum of W_j delta_{t_j} solves the truncated problem.  Contractive
parameters are certified instead through the transform

    T(lam)[k, l] = (R(lam) x_k, x_l),

a matrix Herglotz function whose boundary behavior carries the measure:
moments come back through a contour integral of the rational continuation,
and densities through Stieltjes-Perron inversion

    M([a, b)) = limit over eps of (1/pi) integral over [a, b) of
                Im T(u + i eps) du .

Cells are half-open [x, x+h); an atom sitting exactly on a cell boundary
splits its mass roughly 1/4 / 1/4 between the two adjacent cells at finite
eps, so checks around atoms should sum windows, not single cells.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import NotConverged, RadiusTooSmall
from .hankel import MomentSequence
from .linalg import max_abs, read_only, solve_with_residual_check
from .extensions import (ExtensionParameter, SelfAdjointExtension,
                         apply_generalized_resolvent, default_contour_radius,
                         extension_blocks, pencil_spectral_radius,
                         resolvent_systems)
from .shift import DeficiencyPair, ShiftOperator
from .tolerances import DEFAULT, Tolerances


@dataclasses.dataclass(frozen=True, eq=False)
class AtomicMatrixMeasure:
    """Finitely many atoms t_j with Hermitian PSD matrix weights W_j.

    locations is strictly increasing; weights[j] is the N x N weight at
    locations[j].
    """

    locations: np.ndarray       # (J,)
    weights: np.ndarray         # (J, N, N)

    @property
    def n_atoms(self) -> int:
        return self.locations.shape[0]

    @property
    def block_dim(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def from_atoms(cls, locations, weights, block_dim: int | None = None,
                   merge_tol: float = 0.0, drop_tol: float = 0.0,
                   psd_rel: float = 1e-8,
                   validate: bool = True) -> "AtomicMatrixMeasure":
        """Sort atoms, merge near-coincident ones, drop negligible weights."""
        locs = np.asarray(locations, dtype=float).reshape(-1)
        w = np.asarray(weights, dtype=complex)
        if w.ndim == 1:                      # scalar weights -> 1 x 1 blocks
            w = w.reshape(-1, 1, 1)
        if w.shape[0] != locs.shape[0]:
            raise ValueError("locations and weights disagree in length")
        if block_dim is None:
            block_dim = w.shape[1] if w.shape[0] else 1
        order = np.argsort(locs, kind="stable")
        locs, w = locs[order], w[order]
        out_locs, out_w = [], []
        i = 0
        while i < len(locs):
            j = i + 1
            while j < len(locs) and locs[j] - locs[j - 1] <= merge_tol:
                j += 1
            out_locs.append(float(np.mean(locs[i:j])))
            out_w.append(w[i:j].sum(axis=0))
            i = j
        locs = np.array(out_locs, dtype=float)
        w = (np.array(out_w, dtype=complex) if out_w
             else np.zeros((0, block_dim, block_dim), dtype=complex))
        w = 0.5 * (w + np.conj(np.swapaxes(w, -1, -2)))
        if drop_tol > 0.0 and len(locs):
            keep = np.array([max_abs(w[j]) > drop_tol for j in range(len(locs))])
            locs, w = locs[keep], w[keep]
        if validate and len(locs):
            scale = max(max_abs(w), 1.0)
            for j in range(len(locs)):
                emin = float(np.linalg.eigvalsh(w[j])[0])
                if emin < -psd_rel * scale:
                    raise ValueError(f"weight at t = {locs[j]:.6g} is not PSD: "
                                     f"min eigenvalue {emin:.3e}")
        return cls(locations=read_only(locs), weights=read_only(w))

    def moment(self, n: int) -> np.ndarray:
        """integral of x^n dM as an N x N matrix."""
        if self.n_atoms == 0:
            return np.zeros((self.block_dim, self.block_dim), dtype=complex)
        powers = self.locations ** n
        return np.einsum("j,jkl->kl", powers, self.weights)

    def total_mass(self) -> np.ndarray:
        return self.moment(0)

    def transform(self, lam: complex) -> np.ndarray:
        """Sum of W_j / (t_j - lam)."""
        if self.n_atoms == 0:
            return np.zeros((self.block_dim, self.block_dim), dtype=complex)
        coef = 1.0 / (self.locations - complex(lam))
        return np.einsum("j,jkl->kl", coef, self.weights)


def spectral_measure(extension: SelfAdjointExtension, shift: ShiftOperator,
                     tol: Tolerances = DEFAULT) -> AtomicMatrixMeasure:
    """Atomic solution measure read off the eigendecomposition of A_V.

    Eigenvalues are clustered at gaps below cluster_rel times the spectral
    radius; each cluster contributes W_j = C_j C_j^H with
    C_j[k, i] = (x_k, v_i), manifestly Hermitian PSD.  Weights below
    weight_rel times the total-mass scale are dropped.
    """
    n = shift.block_dim
    m = shift.ambient_dim
    if m == 0:
        return AtomicMatrixMeasure.from_atoms(np.zeros(0),
                                              np.zeros((0, n, n)), block_dim=n)
    vals, vecs = np.linalg.eigh(extension.matrix)
    xn = shift.space.coords[:n]                      # (N, m)
    c = xn @ np.conj(vecs)                           # c[k, i] = (x_k, v_i)
    radius = max_abs(vals)
    gap = tol.cluster_rel * radius
    mass = c @ np.conj(c.T)                          # equals S_0
    drop = tol.weight_rel * max(max_abs(mass), 0.0)
    locs, weights = [], []
    i = 0
    while i < m:
        j = i + 1
        while j < m and vals[j] - vals[j - 1] <= gap:
            j += 1
        block = c[:, i:j]
        locs.append(float(np.mean(vals[i:j])))
        weights.append(block @ np.conj(block.T))
        i = j
    return AtomicMatrixMeasure.from_atoms(np.array(locs), np.array(weights),
                                          block_dim=n, merge_tol=0.0,
                                          drop_tol=drop, psd_rel=tol.psd_rel,
                                          validate=True)


@dataclasses.dataclass(frozen=True)
class VerificationReport:
    """Per-order deviations between produced and prescribed moments."""

    deviations: tuple           # max |recovered_n - S_n| for each n
    max_deviation: float
    scale: float                # max(1, largest |S_n| entry)
    rel_tol: float
    passed: bool


def _verification(recovered, seq: MomentSequence,
                  rel_tol: float) -> VerificationReport:
    devs = tuple(float(max_abs(recovered[k] - seq[k])) for k in range(len(seq)))
    scale = max(1.0, seq.scale)
    worst = max(devs) if devs else 0.0
    return VerificationReport(deviations=devs, max_deviation=worst,
                              scale=scale, rel_tol=rel_tol,
                              passed=bool(worst <= rel_tol * scale))


def verify_moments(measure: AtomicMatrixMeasure, seq: MomentSequence,
                   rel_tol: float = 1e-8) -> VerificationReport:
    """Compare integral x^n dM against S_n for every prescribed n."""
    rec = [measure.moment(k) for k in range(len(seq))]
    return _verification(rec, seq, rel_tol)


def verify_recovered_moments(recovered, seq: MomentSequence,
                             rel_tol: float = 1e-6) -> VerificationReport:
    """Same report for moments recovered by other means (contour, Perron)."""
    if len(recovered) < len(seq):
        raise ValueError("recovered moment list shorter than the sequence")
    return _verification(recovered, seq, rel_tol)


@dataclasses.dataclass(eq=False)
class StieltjesTransform:
    """T(lam)[k, l] = (R(lam) x_k, x_l) for a fixed parameter.

    Callable on any nonreal lam; the lower half-plane uses the mirror branch
    so T(conj lam) = T(lam)^H.  Im T(lam) is PSD for Im lam > 0.
    """

    shift: ShiftOperator
    pair: DeficiencyPair
    parameter: ExtensionParameter
    tol: Tolerances = DEFAULT

    @property
    def block_dim(self) -> int:
        return self.shift.block_dim

    def _first_coords(self) -> np.ndarray:
        return self.shift.space.coords[:self.shift.block_dim]   # (N, m)

    def __call__(self, lam: complex) -> np.ndarray:
        xn = self._first_coords()
        h = apply_generalized_resolvent(self.shift, self.pair, self.parameter,
                                        complex(lam), xn.T.copy(), self.tol)
        return (np.conj(xn) @ h).T        # [k, l] = (h_k, x_l)

    def eval_upper_many(self, lams: np.ndarray,
                        chunk: int = 8192) -> np.ndarray:
        """Vectorized upper-branch evaluation at many points.

        For a constant parameter this evaluates the single rational function
        that continues the upper branch, at arbitrary complex points; that is
        exactly what the contour integrator needs.  Samplers fall back to a
        per-point loop and are only meaningful for Im lam > 0.
        """
        lams = np.asarray(lams, dtype=complex).reshape(-1)
        n = self.shift.block_dim
        xn = self._first_coords()
        out = np.empty((lams.size, n, n), dtype=complex)
        if not self.parameter.is_constant:
            for i, lam in enumerate(lams):
                sys_mat, lift = resolvent_systems(self.shift, self.pair,
                                                  self.parameter, complex(lam),
                                                  self.tol)
                sol = solve_with_residual_check(sys_mat, xn.T.copy(),
                                                self.tol.solve_rel,
                                                context=f"transform at {lam}")
                h = lift @ sol
                out[i] = (np.conj(xn) @ h).T
            return out
        vmat = self.parameter.constant_matrix(self.pair.defect, self.tol)
        dom, img = extension_blocks(self.shift, self.pair, vmat)
        rhs = xn.T.copy()                                  # (m, N)
        for start in range(0, lams.size, chunk):
            lb = lams[start:start + chunk]
            sys_block = img[None, :, :] - lb[:, None, None] * dom[None, :, :]
            try:
                sols = np.linalg.solve(sys_block,
                                       np.broadcast_to(rhs, (lb.size,) + rhs.shape))
            except np.linalg.LinAlgError:
                sols = np.empty((lb.size,) + rhs.shape, dtype=complex)
                for i, lam in enumerate(lb):
                    sols[i] = solve_with_residual_check(
                        img - lam * dom, rhs, self.tol.solve_rel,
                        context=f"transform at {lam}")
            h = dom @ sols                                 # (B, m, N)
            out[start:start + chunk] = np.swapaxes(np.conj(xn) @ h, -1, -2)
        return out


def stieltjes_transform(shift: ShiftOperator, pair: DeficiencyPair,
                        parameter: ExtensionParameter, lam: complex,
                        tol: Tolerances = DEFAULT) -> np.ndarray:
    """One-shot evaluation of T(lam)."""
    return StieltjesTransform(shift, pair, parameter, tol)(lam)


@dataclasses.dataclass(frozen=True)
class ContourRecovery:
    """Moments S_hat_n recovered by contour integration of the transform."""

    moments: tuple              # of (N, N) arrays, n = 0..n_max
    radius: float
    n_points: int
    doubling_gap: float         # max deviation between radius R and 2R runs


def _contour_moments(transform: StieltjesTransform, n_max: int,
                     radius: float, n_points: int) -> tuple:
    """Moments at one radius, plus max |T| on that circle (for error bars)."""
    ks = np.arange(n_points)
    lams = radius * np.exp(2j * np.pi * (ks + 0.5) / n_points)
    tvals = transform.eval_upper_many(lams)            # (B, N, N)
    out = []
    for n in range(n_max + 1):
        coef = lams ** (n + 1)
        out.append(-np.einsum("b,bkl->kl", coef, tvals) / n_points)
    return out, float(np.abs(tvals).max(initial=0.0))


def moments_from_transform(transform: StieltjesTransform, n_max: int,
                           radius: float | None = None, n_points: int = 256,
                           tol: Tolerances | None = None) -> ContourRecovery:
    """Recover S_0..S_{n_max} via -(1/2 pi i) contour integral of lam^n T.

    The transform of a constant parameter is rational with all singularities
    inside a computable radius, so the integrand is evaluated as that single
    rational function on the whole circle (half-shifted trapezoid grid, which
    is spectrally accurate).  The radius is doubled once as a safety check;
    disagreement raises RadiusTooSmall.  Samplers are rejected: a lam-slice
    of samples does not determine the lower branch, so only the smoothed
    inversion path applies to them.
    """
    tol = tol or transform.tol
    if not transform.parameter.is_constant:
        raise ValueError("contour recovery needs a constant parameter; "
                         "use perron_inversion for sampled families")
    vmat = transform.parameter.constant_matrix(transform.pair.defect, tol)
    rho = pencil_spectral_radius(transform.shift, transform.pair, vmat)
    if radius is None:
        radius = default_contour_radius(transform.shift, transform.pair, vmat)
        # The summands of the n-th recovered moment grow like R^{n+1}, so a
        # generous radius amplifies machine epsilon in high moments.  When
        # the cautious default would push eps * R^{n_max+1} past 1e-9, back
        # off toward the poles, but never below a 1.25x clearance (the
        # trapezoid rule converges geometrically in the clearance ratio, so
        # 1.25x is already overkill at the default point count).
        round_cap = (1e-9 / float(np.finfo(float).eps)) ** (1.0 / (n_max + 1))
        radius = min(radius, max(1.25 * rho + 1.0, round_cap))
    radius = float(radius)
    if radius <= 0.0:
        raise ValueError("contour radius must be positive")
    # The singularities of the rational continuation are known exactly (the
    # finite pencil eigenvalues), so a contour that fails to enclose them is
    # rejected up front; the doubling comparison below only has to catch
    # quadrature trouble, not topology.
    if radius <= rho * (1.0 + 1e-9):
        raise RadiusTooSmall(
            f"contour radius {radius:g} does not enclose every singularity "
            f"of the transform (outermost at modulus {rho:g})")
    base, _tmax_base = _contour_moments(transform, n_max, radius, n_points)
    check, tmax_check = _contour_moments(transform, n_max, 2.0 * radius,
                                         n_points)
    scale = max(1.0, max(max_abs(b) for b in base))
    eps = float(np.finfo(float).eps)
    gap = 0.0
    for n, (b, c) in enumerate(zip(base, check)):
        gap_n = float(max_abs(b - c))
        gap = max(gap, gap_n)
        # The summands at radius 2R have magnitude up to (2R)^{n+1} |T|, so
        # even an exact quadrature rule leaves roundoff of that order times
        # machine epsilon; an under-resolved or barely-enclosing contour
        # errs at the scale of the moments themselves, far above this bar.
        roundoff = 16.0 * eps * (2.0 * radius) ** (n + 1) * tmax_check
        if gap_n > max(tol.contour_rel * scale, roundoff):
            raise RadiusTooSmall(
                f"moment {n} recovered at radius {radius:g} and "
                f"{2 * radius:g} differs by {gap_n:.3e} (allowed "
                f"{tol.contour_rel:.1e} * {scale:.3g} or roundoff "
                f"{roundoff:.1e}); the contour integral is not trustworthy "
                f"at this radius and point count")
    return ContourRecovery(moments=tuple(read_only(b) for b in base),
                           radius=radius, n_points=n_points,
                           doubling_gap=float(gap))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(4)


def _smoothed_cell_integrals(transform: StieltjesTransform, edges: np.ndarray,
                             eps: float, max_subdiv: int = 2000) -> np.ndarray:
    """(1/pi) integral over each cell of Im T(u + i eps) du.

    Composite 4-point Gauss-Legendre with subintervals no wider than about
    eps, so the Poisson peaks of near-atoms are resolved; everything is
    evaluated in one vectorized batch.
    """
    widths = np.diff(edges)
    h = float(np.max(widths))
    nsub = int(min(max(4, int(np.ceil(h / eps))), max_subdiv))
    k = len(widths)
    # nodes for all cells at once: (K, nsub, 4)
    sub_edges = edges[:-1, None] + widths[:, None] * np.arange(nsub + 1)[None, :] / nsub
    mid = 0.5 * (sub_edges[:, :-1] + sub_edges[:, 1:])
    half = 0.5 * (sub_edges[:, 1:] - sub_edges[:, :-1])
    nodes = mid[:, :, None] + half[:, :, None] * _GL_NODES[None, None, :]
    wts = half[:, :, None] * _GL_WEIGHTS[None, None, :]
    tvals = transform.eval_upper_many(nodes.reshape(-1) + 1j * eps)
    n = transform.block_dim
    tvals = tvals.reshape(k, nsub * 4, n, n)
    imt = (tvals - np.conj(np.swapaxes(tvals, -1, -2))) / 2j
    return np.einsum("ks,ksab->kab", wts.reshape(k, nsub * 4), imt) / np.pi


@dataclasses.dataclass(frozen=True, eq=False)
class PerronResult:
    """Cell masses from Stieltjes-Perron inversion.

    increments[i] approximates M([edges[i], edges[i+1])) and is exactly PSD
    (positive quadrature weights on a PSD integrand at the reported eps).
    extrapolated holds the eps -> 0 Richardson extrapolant used for the
    stabilization decision.
    """

    edges: np.ndarray           # (K+1,)
    increments: np.ndarray      # (K, N, N) at eps_used
    extrapolated: np.ndarray    # (K, N, N)
    eps_used: float
    history: tuple              # of (eps, max-abs change of extrapolant)


def perron_inversion(transform: StieltjesTransform, start: float, stop: float,
                     cell_width: float, eps_sequence=None,
                     tol: Tolerances | None = None) -> PerronResult:
    """Masses of half-open cells [x, x+h) on [start, stop).

    For each eps in the decreasing sequence the smoothed cell integrals are
    computed; consecutive pairs form a linear-in-eps Richardson extrapolant,
    and the sweep stops once two successive extrapolants agree within
    perron_abs.  Raises NotConverged (with diagnostics) when the sequence is
    exhausted first.
    """
    tol = tol or transform.tol
    if not (stop > start and cell_width > 0.0):
        raise ValueError("need stop > start and a positive cell width")
    n_cells = int(np.floor((stop - start) / cell_width + 1e-9))
    if n_cells < 1:
        raise ValueError("grid holds no complete cell")
    edges = start + cell_width * np.arange(n_cells + 1)
    if eps_sequence is None:
        eps_sequence = [0.01 * 0.5 ** k for k in range(11)]
    eps_sequence = [float(e) for e in eps_sequence]
    if any(e <= 0 for e in eps_sequence) or any(
            b >= a for a, b in zip(eps_sequence, eps_sequence[1:])):
        raise ValueError("eps_sequence must be positive and decreasing")

    prev_integral = None
    prev_eps = None
    prev_extrap = None
    history = []
    for eps in eps_sequence:
        integral = _smoothed_cell_integrals(transform, edges, eps)
        if prev_integral is not None:
            extrap = ((prev_eps * integral - eps * prev_integral)
                      / (prev_eps - eps))
            if prev_extrap is not None:
                change = max_abs(extrap - prev_extrap)
                history.append((eps, float(change)))
                if change <= tol.perron_abs:
                    return PerronResult(edges=read_only(edges),
                                        increments=read_only(integral),
                                        extrapolated=read_only(extrap),
                                        eps_used=eps,
                                        history=tuple(history))
            prev_extrap = extrap
        prev_integral, prev_eps = integral, eps
    raise NotConverged(
        f"smoothed inversion did not stabilize within {tol.perron_abs:.1e} "
        f"over eps sequence {eps_sequence}",
        diagnostics={"history": history, "edges": edges})


def measure_distance(m1: AtomicMatrixMeasure, m2: AtomicMatrixMeasure,
                     site_tol: float = 1e-6) -> float:
    """Largest weight discrepancy over the merged atom sites of two measures.

    Sites of both measures are merged when closer than site_tol; a site
    carried by only one measure contributes its full weight norm, so the
    value is positive exactly when the measures differ as atom sets (up to
    site_tol) or in any weight entry.
    """
    sites = np.concatenate([m1.locations, m2.locations])
    if sites.size == 0:
        return 0.0
    sites = np.sort(sites)
    merged = [sites[0]]
    for s in sites[1:]:
        if s - merged[-1] > site_tol:
            merged.append(s)
    n = max(m1.block_dim, m2.block_dim)

    def site_weight(measure, s):
        total = np.zeros((n, n), dtype=complex)
        for j in range(measure.n_atoms):
            if abs(measure.locations[j] - s) <= site_tol:
                total += measure.weights[j]
        return total

    return max(max_abs(site_weight(m1, s) - site_weight(m2, s))
               for s in merged)
