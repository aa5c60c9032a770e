"""End-to-end drivers: moments in, measures or transforms out.

solve_truncated runs the full construction,

    conditions -> Gram space -> shift -> defect subspaces -> forbidden
    operator -> parameter -> extension -> measure (or transform),

and theta_sweep walks the unimodular parameter family e^{i theta}, reporting
which angles are forbidden and how the resulting measures differ.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import NotAdmissible, NotPSD
from .gram import GramSpace, factor_psd
from .hankel import (ConditionReport, MomentSequence, build_block_hankel,
                     check_truncated_conditions)
from .measures import (AtomicMatrixMeasure, ContourRecovery,
                       StieltjesTransform, VerificationReport,
                       measure_distance, moments_from_transform,
                       spectral_measure, verify_moments,
                       verify_recovered_moments)
from .extensions import (KIND_ISOMETRIC, ExtensionParameter,
                         SelfAdjointExtension, selfadjoint_extension)
from .shift import (AdmissibilityReport, DeficiencyPair, ForbiddenOperator,
                    ShiftOperator, build_shift, deficiency_subspaces,
                    forbidden_operator, is_admissible)
from .tolerances import DEFAULT, Tolerances

#: angles tried (in order) when no parameter is supplied; the best margin wins
DEFAULT_THETA_CANDIDATES = tuple(2.0 * np.pi * k / 8 for k in range(8))

#: diagnostic spectral points sampled for transform-route results
TRANSFORM_SAMPLE_POINTS = (1j, 2j, 1.0 + 1j)


@dataclasses.dataclass(eq=False)
class Workspace:
    """Everything the construction derives from the data before a parameter."""

    sequence: MomentSequence
    condition: ConditionReport
    space: GramSpace
    shift: ShiftOperator
    pair: DeficiencyPair
    forbidden: ForbiddenOperator

    @property
    def defect(self) -> int:
        return self.pair.defect


def prepare(seq: MomentSequence, tol: Tolerances = DEFAULT) -> Workspace:
    """Check solvability and build the operator stage; raises NotPSD if not.

    The leading condition failing raises NotPSD(section="leading"); the
    trailing one NotPSD(section="trailing").
    """
    report = check_truncated_conditions(seq, tol)
    if not report.leading_positive:
        raise NotPSD(
            f"the leading section (order {report.order - 1}) is not positive "
            f"definite: min eigenvalue {report.min_eig_leading:.6e}",
            section="leading", min_eigenvalue=report.min_eig_leading)
    if not report.trailing_psd:
        raise NotPSD(
            f"the trailing section (order {report.order}) is not positive "
            f"semidefinite: min eigenvalue {report.min_eig_trailing:.6e}",
            section="trailing", min_eigenvalue=report.min_eig_trailing)
    space = factor_psd(build_block_hankel(seq, report.order), tol)
    shift = build_shift(space, tol)
    pair = deficiency_subspaces(shift, tol)
    forb = forbidden_operator(shift, pair, tol)
    return Workspace(sequence=seq, condition=report, space=space, shift=shift,
                     pair=pair, forbidden=forb)


def default_parameter(ws: Workspace, tol: Tolerances = DEFAULT,
                      candidates=DEFAULT_THETA_CANDIDATES):
    """The unimodular candidate e^{i theta} I with the best admissibility margin."""
    q = ws.defect
    if q == 0:
        return ExtensionParameter.empty(), is_admissible(
            np.zeros((0, 0), dtype=complex), ws.shift, ws.pair, ws.forbidden,
            tol), None
    best = None
    for theta in candidates:
        v = np.exp(1j * theta) * np.eye(q, dtype=complex)
        report = is_admissible(v, ws.shift, ws.pair, ws.forbidden, tol)
        if best is None or (report.margin or 0.0) > (best[1].margin or 0.0):
            best = (ExtensionParameter.isometric(v), report, theta)
    if not best[1].admissible:
        raise NotAdmissible("no admissible unimodular parameter found; "
                            "supply one explicitly", margin=best[1].margin)
    return best


@dataclasses.dataclass(eq=False)
class SolveResult:
    """Outcome of solve_truncated; kind is "atomic" or "transform"."""

    kind: str
    condition: ConditionReport
    defect: int
    gram_rank: int
    gram_eigenvalues: np.ndarray
    parameter: ExtensionParameter
    parameter_theta: float | None
    admissibility: AdmissibilityReport
    measure: AtomicMatrixMeasure | None
    extension: SelfAdjointExtension | None
    verification: VerificationReport | None
    recovery: ContourRecovery | None
    transform_samples: tuple | None
    workspace: Workspace


def solve_truncated(seq: MomentSequence,
                    parameter: ExtensionParameter | None = None,
                    tol: Tolerances = DEFAULT,
                    contour_radius: float | None = None,
                    contour_points: int = 256) -> SolveResult:
    """Produce a solution of the truncated problem for one parameter choice.

    Isometric constant parameters give an atomic measure verified against
    every prescribed moment; contractive ones give the transform route with
    contour-recovered moments.  With no parameter supplied, the best
    unimodular candidate is used (the unique choice when the defect is 0).
    """
    ws = prepare(seq, tol)
    theta = None
    if parameter is None:
        parameter, report, theta = default_parameter(ws, tol)
    else:
        if parameter.is_constant:
            report = is_admissible(
                parameter.constant_matrix(ws.defect, tol), ws.shift, ws.pair,
                ws.forbidden, tol)
            if not report.admissible:
                raise NotAdmissible(
                    f"supplied parameter is not admissible "
                    f"(margin {report.margin:.3e})", margin=report.margin)
        else:
            report = AdmissibilityReport(
                admissible=True, margin=None, parameter_norm=float("nan"),
                forbidden_gap=None, coincides_with_forbidden=False,
                borderline=False)

    common = dict(condition=ws.condition, defect=ws.defect,
                  gram_rank=ws.space.ambient_dim,
                  gram_eigenvalues=ws.space.eigenvalues,
                  parameter=parameter, parameter_theta=theta,
                  admissibility=report, workspace=ws)

    if parameter.is_constant and parameter.kind == KIND_ISOMETRIC:
        ext = selfadjoint_extension(ws.shift, ws.pair, parameter, tol)
        measure = spectral_measure(ext, ws.shift, tol)
        verification = verify_moments(measure, seq, rel_tol=1e-8)
        return SolveResult(kind="atomic", measure=measure, extension=ext,
                           verification=verification, recovery=None,
                           transform_samples=None, **common)

    transform = StieltjesTransform(ws.shift, ws.pair, parameter, tol)
    samples = tuple((lam, transform(lam)) for lam in TRANSFORM_SAMPLE_POINTS)
    recovery = None
    verification = None
    if parameter.is_constant:
        recovery = moments_from_transform(transform, 2 * ws.condition.order,
                                          radius=contour_radius,
                                          n_points=contour_points, tol=tol)
        verification = verify_recovered_moments(recovery.moments, seq,
                                                rel_tol=1e-6)
    return SolveResult(kind="transform", measure=None, extension=None,
                       verification=verification, recovery=recovery,
                       transform_samples=samples, **common)


@dataclasses.dataclass(frozen=True, eq=False)
class SweepEntry:
    theta: float
    admissibility: AdmissibilityReport
    measure: AtomicMatrixMeasure | None
    verification: VerificationReport | None


@dataclasses.dataclass(eq=False)
class SweepResult:
    """theta grid, per-angle outcomes, and pairwise measure distances."""

    thetas: np.ndarray
    entries: tuple
    forbidden_thetas: np.ndarray
    distance_matrix: np.ndarray     # nan where either angle was inadmissible
    workspace: Workspace


def theta_sweep(seq: MomentSequence, n_thetas: int = 8,
                thetas=None, tol: Tolerances = DEFAULT,
                site_tol: float = 1e-3) -> SweepResult:
    """Walk the unimodular family e^{i theta} I over a theta grid.

    Needs defect >= 1 (otherwise there is nothing to sweep).  Angles whose
    parameter coincides with the forbidden operator (or whose margin is below
    adm_tol) are flagged and skipped; the rest produce measures, compared
    pairwise with measure_distance.
    """
    ws = prepare(seq, tol)
    q = ws.defect
    if q == 0:
        raise ValueError("the defect is zero: the extension is unique and "
                         "there is no family to sweep")
    if thetas is None:
        thetas = 2.0 * np.pi * np.arange(n_thetas) / n_thetas
    thetas = np.asarray(thetas, dtype=float)
    entries = []
    for theta in thetas:
        v = np.exp(1j * theta) * np.eye(q, dtype=complex)
        report = is_admissible(v, ws.shift, ws.pair, ws.forbidden, tol)
        if not report.admissible:
            entries.append(SweepEntry(theta=float(theta),
                                      admissibility=report, measure=None,
                                      verification=None))
            continue
        parameter = ExtensionParameter.isometric(v)
        ext = selfadjoint_extension(ws.shift, ws.pair, parameter, tol)
        measure = spectral_measure(ext, ws.shift, tol)
        entries.append(SweepEntry(
            theta=float(theta), admissibility=report, measure=measure,
            verification=verify_moments(measure, ws.sequence, rel_tol=1e-8)))
    k = len(entries)
    dist = np.full((k, k), np.nan)
    for i in range(k):
        if entries[i].measure is None:
            continue
        dist[i, i] = 0.0
        for j in range(i + 1, k):
            if entries[j].measure is None:
                continue
            dij = measure_distance(entries[i].measure, entries[j].measure,
                                   site_tol=site_tol)
            dist[i, j] = dist[j, i] = dij
    forbidden = np.array([e.theta for e in entries
                          if not e.admissibility.admissible])
    return SweepResult(thetas=thetas, entries=tuple(entries),
                       forbidden_thetas=forbidden, distance_matrix=dist,
                       workspace=ws)
