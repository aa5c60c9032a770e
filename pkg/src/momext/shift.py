"""The symmetric block shift, its deficiency subspaces, and admissibility.

In the Gram space of the trailing Hankel section the operator

    A x_a = x_{a+N},    a = 0..dN-1,

is symmetric on D(A) = span{x_0..x_{dN-1}} whenever the leading section is
positive definite.  Self-adjoint (and more generally quasi-self-adjoint)
extensions of A are what produce solutions of the moment problem, and they
are parameterized by contractions V mapping the defect subspace at +i,

    N_plus  = orthogonal complement of (A - i)D(A),

into the one at -i,

    N_minus = orthogonal complement of (A + i)D(A).

Not every isometric V qualifies: V must stay away from the "forbidden"
operator X, the restriction to N_plus of the projection correspondence
induced by the orthogonal complement of D(A).  Parameters with
V psi = X psi for some psi != 0 do not generate an extension; the
admissibility margin computed here is the smallest singular value of the
matrix deciding that, so margin > adm_tol certifies a usable parameter.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import (DependentDomain, IllConditionedProjection, NormViolation)
from .gram import GramSpace
from .linalg import (max_abs, orthonormal_columns, orthonormal_complement,
                     read_only, singular_values, operator_norm)
from .tolerances import DEFAULT, Tolerances


@dataclasses.dataclass(frozen=True, eq=False)
class ShiftOperator:
    """The block shift restricted to its natural domain.

    dom_matrix / shift_matrix hold the vectors x_0..x_{dN-1} and their images
    x_N..x_{dN+N-1} as columns; dom_basis is an orthonormal basis of D(A) and
    action maps dom_basis coordinates to the image in ambient coordinates,
    so A v = action @ (dom_basis^H v) for v in D(A).
    """

    space: GramSpace
    block_dim: int
    order: int
    dom_matrix: np.ndarray      # m x dN
    shift_matrix: np.ndarray    # m x dN
    dom_basis: np.ndarray       # m x dN, orthonormal
    action: np.ndarray          # m x dN

    @property
    def ambient_dim(self) -> int:
        return self.space.ambient_dim

    @property
    def dom_dim(self) -> int:
        return self.dom_matrix.shape[1]

    @property
    def defect(self) -> int:
        return self.ambient_dim - self.dom_dim

    def apply(self, v: np.ndarray) -> np.ndarray:
        """A v for v in D(A) (no membership check)."""
        return self.action @ (np.conj(self.dom_basis.T) @ v)


def build_shift(space: GramSpace, tol: Tolerances = DEFAULT) -> ShiftOperator:
    """Construct the shift; raises DependentDomain if x_0..x_{dN-1} degenerate.

    Degeneracy here is exactly failure of the leading section to be positive
    definite, so a clean error beats a meaningless operator.
    """
    n = space.block_dim
    d = space.order
    dn = d * n
    m = space.ambient_dim
    if space.n_vectors < dn + n:
        raise ValueError("Gram space does not hold enough vectors for the shift")
    dom = np.ascontiguousarray(space.coords[:dn].T)
    img = np.ascontiguousarray(space.coords[n:dn + n].T)
    if dn > 0:
        if m < dn:
            raise DependentDomain(
                f"domain needs {dn} independent vectors but the space has "
                f"dimension {m}")
        sv = singular_values(dom)
        if sv[0] == 0.0 or sv[dn - 1] <= tol.rank_rel * sv[0]:
            raise DependentDomain(
                f"domain vectors are numerically dependent: smallest singular "
                f"value {sv[dn - 1]:.3e} vs largest {sv[0]:.3e}")
    basis = orthonormal_columns(dom, tol.rank_rel)
    if basis.shape[1] != dn:
        raise DependentDomain(
            f"domain rank {basis.shape[1]} < {dn} after orthogonalization")
    if dn > 0:
        coeff, *_ = np.linalg.lstsq(dom, basis, rcond=None)
        action = img @ coeff
    else:
        action = np.zeros((m, 0), dtype=complex)
    return ShiftOperator(
        space=space, block_dim=n, order=d,
        dom_matrix=read_only(dom), shift_matrix=read_only(img),
        dom_basis=read_only(basis), action=read_only(action),
    )


@dataclasses.dataclass(frozen=True, eq=False)
class DeficiencyPair:
    """Orthonormal bases of the defect subspaces at +i and -i."""

    basis_plus: np.ndarray      # m x q, spans N_plus
    basis_minus: np.ndarray     # m x q, spans N_minus
    defect: int


def deficiency_subspaces(shift: ShiftOperator,
                         tol: Tolerances = DEFAULT) -> DeficiencyPair:
    """Compute N_plus and N_minus; both have dimension m - dN."""
    dom, img = shift.dom_matrix, shift.shift_matrix
    basis_plus = orthonormal_complement(img - 1j * dom, tol.rank_rel)
    basis_minus = orthonormal_complement(img + 1j * dom, tol.rank_rel)
    expected = shift.ambient_dim - shift.dom_dim
    if basis_plus.shape[1] != expected or basis_minus.shape[1] != expected:
        raise IllConditionedProjection(
            f"defect dimensions ({basis_plus.shape[1]}, {basis_minus.shape[1]}) "
            f"disagree with ambient - domain = {expected}; (A -+ i) lost "
            f"injectivity numerically")
    return DeficiencyPair(basis_plus=read_only(basis_plus),
                          basis_minus=read_only(basis_minus),
                          defect=expected)


@dataclasses.dataclass(frozen=True, eq=False)
class ForbiddenOperator:
    """The operator X: N_plus -> N_minus that parameters must avoid.

    For h in the orthogonal complement of D(A), X maps the projection of h
    onto N_plus to the projection of h onto N_minus.  matrix expresses X in
    the (basis_plus, basis_minus) coordinate pair; dom_basis is an
    orthonormal basis (in basis_plus coordinates) of the projected domain,
    which fills all of N_plus when the construction is healthy.
    """

    dom_basis: np.ndarray       # q x q
    matrix: np.ndarray          # q x q


def forbidden_operator(shift: ShiftOperator, pair: DeficiencyPair,
                       tol: Tolerances = DEFAULT) -> ForbiddenOperator:
    """Build X from the complement of D(A); X is an isometry of N_plus.

    Raises IllConditionedProjection when projecting the complement onto
    N_plus loses rank, which would leave X defined on a proper subspace.
    """
    q = pair.defect
    if q == 0:
        empty = np.zeros((0, 0), dtype=complex)
        return ForbiddenOperator(dom_basis=read_only(empty.copy()),
                                 matrix=read_only(empty.copy()))
    perp = orthonormal_complement(shift.dom_matrix, tol.rank_rel)
    if perp.shape[1] != q:
        raise IllConditionedProjection(
            f"complement of D(A) has dimension {perp.shape[1]}, expected {q}")
    u = np.conj(pair.basis_plus.T) @ perp       # q x q
    w = np.conj(pair.basis_minus.T) @ perp      # q x q
    sv = singular_values(u)
    if sv[-1] <= tol.proj_abs * max(sv[0], 1.0):
        raise IllConditionedProjection(
            f"projection of the domain complement onto N_plus is nearly "
            f"singular: smallest singular value {sv[-1]:.3e}")
    x_mat = np.linalg.solve(u.T, w.T).T
    return ForbiddenOperator(dom_basis=read_only(orthonormal_columns(u, tol.rank_rel)),
                             matrix=read_only(x_mat))


@dataclasses.dataclass(frozen=True)
class AdmissibilityReport:
    """Outcome of the admissibility test for a constant parameter matrix.

    margin is the smallest singular value of P_perp (B_minus V - B_plus)
    restricted to the complement of D(A); None when the defect is zero (then
    every parameter is vacuously admissible).  forbidden_gap is the smallest
    singular value of V - X when the forbidden operator was supplied.
    """

    admissible: bool
    margin: float | None
    parameter_norm: float
    forbidden_gap: float | None
    coincides_with_forbidden: bool
    borderline: bool


def is_admissible(matrix: np.ndarray, shift: ShiftOperator,
                  pair: DeficiencyPair,
                  forbidden: ForbiddenOperator | None = None,
                  tol: Tolerances = DEFAULT) -> AdmissibilityReport:
    """Decide whether a constant q x q parameter matrix is admissible.

    Raises NormViolation when the matrix is not a contraction (operator norm
    above 1 + norm_abs); isometry vs strict contraction is the caller's
    business.
    """
    q = pair.defect
    v = np.asarray(matrix, dtype=complex)
    if v.shape != (q, q):
        raise ValueError(f"parameter must be {q} x {q}, got {v.shape}")
    norm = operator_norm(v)
    if norm > 1.0 + tol.norm_abs:
        raise NormViolation(f"parameter norm {norm:.12g} exceeds 1 + "
                            f"{tol.norm_abs:.1e}")
    if q == 0:
        return AdmissibilityReport(admissible=True, margin=None,
                                   parameter_norm=norm, forbidden_gap=None,
                                   coincides_with_forbidden=False,
                                   borderline=False)
    perp = orthonormal_complement(shift.dom_matrix, tol.rank_rel)
    adm = np.conj(perp.T) @ (pair.basis_minus @ v - pair.basis_plus)
    margin = float(singular_values(adm)[-1])
    gap = None
    coincides = False
    if forbidden is not None:
        gap = float(singular_values(v - forbidden.matrix)[-1])
        coincides = gap <= tol.adm_abs
    admissible = margin > tol.adm_abs
    return AdmissibilityReport(
        admissible=admissible,
        margin=margin,
        parameter_norm=norm,
        forbidden_gap=gap,
        coincides_with_forbidden=coincides,
        borderline=bool(admissible and margin <= 1e3 * tol.adm_abs),
    )
