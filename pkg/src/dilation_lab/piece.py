"""Maximal commuting pieces of operator tuples.

Two independent characterizations are computed and cross-checked: the
orthogonal complement of the smallest invariant subspace containing all
commutator ranges (forward closure), and the joint kernel of the adjoint
commutators composed with all adjoint words (computed by kernel
refinement, which reaches the same subspace as stacking words up to the
ambient dimension without enumerating them).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._linalg import (
    DEFAULT_RANK_TOL,
    Array,
    complement_frame,
    containment_defect,
    extend_frame,
    intersection_frame,
    invariant_kernel,
    max_principal_angle,
    numerical_rank,
    opnorm,
    orthonormal_columns,
    stacked_kernel,
)
from .errors import CharacterizationMismatch, PreconditionError
from .tuples import OperatorTuple, commutator_norm

DEFAULT_ANGLE_TOL = 1e-8


@dataclass(frozen=True)
class Subspace:
    """An orthonormal frame plus the tolerance used to build it."""

    ambient_dim: int
    frame: Array
    tol: float = DEFAULT_RANK_TOL

    def __post_init__(self):
        if self.frame.shape[0] != self.ambient_dim:
            raise ValueError(
                f"frame rows {self.frame.shape[0]} != ambient {self.ambient_dim}")

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    @classmethod
    def from_columns(cls, ambient_dim: int, columns: Array,
                     rank_tol: float = DEFAULT_RANK_TOL) -> "Subspace":
        frame, _ = orthonormal_columns(columns, rank_tol)
        return cls(ambient_dim, frame, rank_tol)

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.complex128))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=np.complex128))

    @classmethod
    def coordinate_block(cls, ambient_dim: int, count: int) -> "Subspace":
        """Span of the first ``count`` coordinate directions."""
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.complex128)[:, :count])

    def complement(self) -> "Subspace":
        return Subspace(self.ambient_dim, complement_frame(self.frame), self.tol)

    def intersect(self, other: "Subspace", angle_tol: float = DEFAULT_ANGLE_TOL) -> "Subspace":
        frame = intersection_frame(self.frame, other.frame, angle_tol, self.tol)
        return Subspace(self.ambient_dim, frame, self.tol)

    def angle_to(self, other: "Subspace") -> float:
        return max_principal_angle(self.frame, other.frame)

    def contains(self, other: "Subspace", tol: float = DEFAULT_ANGLE_TOL) -> bool:
        return containment_defect(other.frame, self.frame) <= tol

    def equals(self, other: "Subspace", tol: float = DEFAULT_ANGLE_TOL) -> bool:
        return self.dim == other.dim and self.angle_to(other) <= tol


@dataclass(frozen=True)
class PieceResult:
    """Maximal commuting piece: the subspace, the compressed tuple on it,
    and the residual commutator norm of the compression."""

    subspace: Subspace
    piece: OperatorTuple
    residual: float
    warnings: tuple[str, ...] = field(default=())


def commutator_closure(r: OperatorTuple, rank_tol: float = DEFAULT_RANK_TOL) -> Subspace:
    """Smallest subspace containing all commutator ranges and invariant
    under every operator of the tuple, by iterated frame growth."""
    seeds = []
    for i in range(r.n):
        for j in range(i + 1, r.n):
            seeds.append(r.mats[i] @ r.mats[j] - r.mats[j] @ r.mats[i])
    frame, _ = orthonormal_columns(np.hstack(seeds), rank_tol)
    while frame.shape[1] < r.dim:
        candidates = np.hstack([m @ frame for m in r.mats])
        grown, _ = extend_frame(frame, candidates, rank_tol)
        if grown.shape[1] == 0:
            break
        frame = np.hstack([frame, grown])
    return Subspace(r.dim, frame, rank_tol)


def adjoint_kernel(r: OperatorTuple, rank_tol: float = DEFAULT_RANK_TOL,
                   word_bound: int | None = None) -> Subspace:
    """Joint kernel of the adjoint commutators composed with all adjoint
    words up to ``word_bound`` (ambient dimension by default; the kernel
    chain stabilizes within that many refinement rounds)."""
    adj = r.adjoints()
    blocks = []
    for i in range(r.n):
        for j in range(i + 1, r.n):
            blocks.append(adj[i] @ adj[j] - adj[j] @ adj[i])
    seed, _ = stacked_kernel(blocks, rank_tol)
    appliers = [lambda x, a=a: a @ x for a in adj]
    frame = invariant_kernel(appliers, seed, rank_tol, max_rounds=word_bound)
    return Subspace(r.dim, frame, rank_tol)


def compress(r: OperatorTuple, s: Subspace, tol: float = DEFAULT_ANGLE_TOL) -> OperatorTuple:
    """Compression to a co-invariant subspace, in frame coordinates."""
    f = s.frame
    worst = 0.0
    for m in r.mats:
        image = m.conj().T @ f
        worst = max(worst, opnorm(image - f @ (f.conj().T @ image)))
    if worst > tol:
        raise PreconditionError(
            f"subspace is not co-invariant: adjoint leakage {worst:.3e} > {tol:.1e}")
    return OperatorTuple(np.stack([f.conj().T @ m @ f for m in r.mats]))


def maximal_commuting_piece(r: OperatorTuple, tol: float = DEFAULT_ANGLE_TOL,
                            rank_tol: float = DEFAULT_RANK_TOL,
                            word_bound: int | None = None,
                            window: Subspace | None = None) -> PieceResult:
    """Maximal commuting piece with the two characterizations cross-checked.

    On truncated graded spaces pass ``window`` (the degrees on which
    forward words stay inside the truncation): the comparison is then
    restricted to the window, while the returned subspace is always the
    adjoint-kernel one, which is exact there.
    """
    kernel_side = adjoint_kernel(r, rank_tol, word_bound)
    closure_perp = commutator_closure(r, rank_tol).complement()
    if window is not None:
        a = kernel_side.intersect(window, tol)
        b = closure_perp.intersect(window, tol)
    else:
        a, b = kernel_side, closure_perp
    if a.dim != b.dim or a.angle_to(b) > tol:
        raise CharacterizationMismatch(
            f"commuting-piece characterizations disagree: adjoint-kernel dim "
            f"{a.dim}, closure-complement dim {b.dim}, principal angle "
            f"{a.angle_to(b):.3e} (tol {tol:.1e}); adjust tolerances")
    warnings = []
    piece = compress(r, kernel_side, tol)
    residual = commutator_norm(piece) if piece.dim else 0.0
    if residual > tol:
        raise CharacterizationMismatch(
            f"compressed piece fails to commute: residual {residual:.3e} > {tol:.1e}")
    return PieceResult(subspace=kernel_side, piece=piece, residual=residual,
                       warnings=tuple(warnings))


def rank_stability_warnings(r: OperatorTuple,
                            rank_tol: float = DEFAULT_RANK_TOL) -> list[str]:
    """Warnings when singular values of the defining blocks straddle the
    rank threshold within a factor of 10 (the rank decision is then
    unstable and results should be read with care)."""
    warnings = []
    adj = r.adjoints()
    fwd_blocks, adj_blocks = [], []
    for i in range(r.n):
        for j in range(i + 1, r.n):
            fwd_blocks.append(r.mats[i] @ r.mats[j] - r.mats[j] @ r.mats[i])
            adj_blocks.append(adj[i] @ adj[j] - adj[j] @ adj[i])
    for label, blocks in (("commutator", fwd_blocks), ("adjoint-commutator", adj_blocks)):
        svals = np.linalg.svd(np.vstack(blocks), compute_uv=False)
        _, unstable = numerical_rank(svals, rank_tol)
        if unstable:
            warnings.append(
                f"singular values of the {label} stack straddle the rank "
                f"threshold (rank_tol {rank_tol:.1e}); piece dimensions may "
                f"be tolerance-sensitive")
    return warnings


def piece_intersection_check(t: OperatorTuple, dil, tol: float = DEFAULT_ANGLE_TOL,
                             rank_tol: float = DEFAULT_RANK_TOL) -> bool:
    """Whether the commuting piece of the original space equals the
    dilation's commuting piece intersected with the embedded space.

    ``dil`` is a DilationResult; its embedding must be verified (isometry
    and adjoint-dilation property) before the subspace comparison.
    """
    embed = dil.embed
    iso = opnorm(embed.conj().T @ embed - np.eye(embed.shape[1]))
    prop = max(opnorm(m.conj().T @ embed - embed @ tm.conj().T)
               for m, tm in zip(dil.dilation.mats, t.mats))
    slack = max(tol, 10.0 * (dil.tail_bound or 0.0))
    if iso > slack or prop > slack:
        raise PreconditionError(
            f"not a verified dilation: isometry defect {iso:.3e}, adjoint "
            f"defect {prop:.3e} exceed {slack:.1e}")
    h_piece = adjoint_kernel(t, rank_tol)
    embedded, _ = orthonormal_columns(embed @ h_piece.frame, rank_tol)
    embedded_h, _ = orthonormal_columns(embed, rank_tol)
    big_piece = adjoint_kernel(dil.dilation, rank_tol)
    lhs = Subspace(embed.shape[0], embedded, rank_tol)
    rhs = big_piece.intersect(Subspace(embed.shape[0], embedded_h, rank_tol), tol)
    return lhs.equals(rhs, max(tol, np.arcsin(min(1.0, slack))))
