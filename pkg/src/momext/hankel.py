"""Moment sequences and their block Hankel sections.

A truncated matrix Hamburger problem hands us Hermitian N x N moments
S_0, ..., S_{2d} and asks for a nondecreasing N x N matrix measure M on the
real line with

    integral of x^n dM(x) = S_n,   n = 0..2d.

The data enters every later stage only through the block Hankel sections

    H_k = [ S_{r+t} ]_{r,t = 0..k}     ((k+1)N square),

whose positivity encodes solvability: H_{d-1} positive definite together with
H_d positive semidefinite makes the whole operator construction go through.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .errors import InsufficientMoments
from .linalg import as_complex_matrix, hermitize, max_abs, read_only
from .tolerances import DEFAULT, Tolerances


@dataclasses.dataclass(frozen=True, eq=False)
class MomentSequence:
    """Hermitian matrix moments S_0..S_{count-1}, stored symmetrized."""

    dim: int
    moments: tuple

    @classmethod
    def from_arrays(cls, arrays, herm_rel: float = DEFAULT.herm_rel):
        mats = [as_complex_matrix(a, f"moment S_{i}") for i, a in enumerate(arrays)]
        if not mats:
            raise InsufficientMoments("a moment sequence needs at least S_0")
        dim = mats[0].shape[0]
        fixed = []
        for i, m in enumerate(mats):
            if m.shape != (dim, dim):
                raise ValueError(f"moment S_{i} has shape {m.shape}, "
                                 f"expected ({dim}, {dim})")
            fixed.append(read_only(hermitize(m, herm_rel, f"moment S_{i}")))
        return cls(dim=dim, moments=tuple(fixed))

    @classmethod
    def scalar(cls, values, herm_rel: float = DEFAULT.herm_rel):
        """Convenience constructor for N = 1 from plain numbers."""
        return cls.from_arrays([np.array([[v]], dtype=complex) for v in values],
                               herm_rel=herm_rel)

    def __len__(self) -> int:
        return len(self.moments)

    def __getitem__(self, n: int) -> np.ndarray:
        return self.moments[n]

    @property
    def max_hankel_order(self) -> int:
        """Largest k for which H_k can be built from this data."""
        return (len(self.moments) - 1) // 2

    @property
    def scale(self) -> float:
        return max(max_abs(m) for m in self.moments)


@dataclasses.dataclass(frozen=True, eq=False)
class BlockHankel:
    """The section H_k = [S_{r+t}]_{r,t=0..k}; Hermitian by construction."""

    order: int
    block_dim: int
    matrix: np.ndarray

    @property
    def size(self) -> int:
        return (self.order + 1) * self.block_dim


def build_block_hankel(seq: MomentSequence, order: int) -> BlockHankel:
    """Assemble H_order from the sequence; needs moments up to S_{2*order}."""
    if order < 0:
        raise ValueError(f"Hankel order must be >= 0, got {order}")
    if 2 * order + 1 > len(seq):
        raise InsufficientMoments(
            f"building the order-{order} section needs {2 * order + 1} moments, "
            f"got {len(seq)}")
    n = seq.dim
    size = (order + 1) * n
    g = np.zeros((size, size), dtype=complex)
    for r in range(order + 1):
        for t in range(order + 1):
            g[r * n:(r + 1) * n, t * n:(t + 1) * n] = seq[r + t]
    return BlockHankel(order=order, block_dim=n, matrix=read_only(g))


def min_eigenvalue(matrix: np.ndarray) -> float:
    if matrix.size == 0:
        return float("inf")
    return float(np.linalg.eigvalsh(matrix)[0])


@dataclasses.dataclass(frozen=True)
class ConditionReport:
    """Solvability conditions for the truncated problem of order d."""

    block_dim: int
    order: int
    leading_positive: bool      # H_{d-1} > 0
    trailing_psd: bool          # H_d >= 0
    min_eig_leading: float
    min_eig_trailing: float
    scale_leading: float
    scale_trailing: float

    @property
    def solvable(self) -> bool:
        return self.leading_positive and self.trailing_psd


def check_truncated_conditions(seq: MomentSequence,
                               tol: Tolerances = DEFAULT) -> ConditionReport:
    """Decide solvability of the order-d problem from S_0..S_{2d}.

    The sequence must contain an odd number (>= 3) of moments so both the
    leading section H_{d-1} and the trailing section H_d exist.
    """
    count = len(seq)
    if count < 3 or count % 2 == 0:
        raise InsufficientMoments(
            f"the truncated problem needs an odd number (>= 3) of moments "
            f"S_0..S_2d, got {count}")
    d = (count - 1) // 2
    lead = build_block_hankel(seq, d - 1)
    trail = build_block_hankel(seq, d)
    e_lead = min_eigenvalue(lead.matrix)
    e_trail = min_eigenvalue(trail.matrix)
    s_lead = max_abs(lead.matrix)
    s_trail = max_abs(trail.matrix)
    return ConditionReport(
        block_dim=seq.dim,
        order=d,
        leading_positive=bool(e_lead > tol.pos_rel * s_lead),
        trailing_psd=bool(e_trail >= -tol.psd_rel * s_trail),
        min_eig_leading=e_lead,
        min_eig_trailing=e_trail,
        scale_leading=s_lead,
        scale_trailing=s_trail,
    )


def check_solvability_prefix(seq: MomentSequence, max_order: int | None = None,
                             tol: Tolerances = DEFAULT) -> list[bool]:
    """PSD flags for H_0, H_1, ... as far as the data (or max_order) allows."""
    top = seq.max_hankel_order if max_order is None else min(
        max_order, seq.max_hankel_order)
    flags = []
    for k in range(top + 1):
        h = build_block_hankel(seq, k)
        flags.append(bool(min_eigenvalue(h.matrix)
                          >= -tol.psd_rel * max_abs(h.matrix)))
    return flags
