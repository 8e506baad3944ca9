"""Concrete dilations of contractive tuples.

Four constructions: the isometric embedding of a pure tuple into the
truncated full Fock space tensored with its defect space, the same
embedding restricted to the symmetric Fock space (the standard commuting
dilation), the Schaeffer form of the minimal isometric dilation, and the
one-dimensional sphere-point case of the latter (Cuntz-state form).

Truncation policy: the top Fock degree is annihilated, every result
carries the degree window on which the untruncated identities hold
exactly, and nothing is asserted at the truncation boundary.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ._linalg import (
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    Array,
    as_complex,
    invariant_kernel,
    kernel_frame,
    opnorm,
    orthonormal_columns,
    extend_frame,
    psd_sqrt_clamped,
)
from .errors import PreconditionError
from .fock import TruncatedFock, creation_tuple, symmetric_basis, compressed_tuple
from .piece import Subspace
from .tuples import (
    OperatorTuple,
    apply_word,
    commutator_norm,
    defect,
    is_commuting,
    is_row_contraction,
    phi,
    row_sum,
    scalar_tuple,
)


def tail_bound(t: OperatorTuple, M: int) -> float:
    """Norm of the degree-(M+1) moment sum, the truncation error scale of
    the pure embedding."""
    x = np.eye(t.dim, dtype=np.complex128)
    for _ in range(M + 1):
        x = phi(t, x)
    return opnorm(x)


def embedding_gram(t: OperatorTuple, M: int) -> Array:
    """Gram matrix G with ||A h||^2 = <h, G h> for the degree-M truncated
    embedding; equals I minus the degree-(M+1) moment sum. Computable for
    any M without materializing the Fock space."""
    x = np.eye(t.dim, dtype=np.complex128)
    for _ in range(M + 1):
        x = phi(t, x)
    return np.eye(t.dim) - x


@dataclass(frozen=True, eq=False)
class DilationResult:
    """A dilation tuple with the isometric embedding of the original space.

    ``safe_degree`` is the largest Fock degree window on which the
    truncated construction satisfies the untruncated identities exactly;
    ``tail_bound`` is the truncation error scale for pure embeddings
    (None for the exact Schaeffer forms).
    """

    base: OperatorTuple
    dilation: OperatorTuple
    embed: Array
    kind: str
    fock: TruncatedFock
    defect_frame: Array
    safe_degree: int
    tail_bound: float | None = None
    extras: dict = field(default_factory=dict)

    @property
    def ambient_dim(self) -> int:
        return self.dilation.dim

    @property
    def defect_rank(self) -> int:
        return self.defect_frame.shape[1]

    def window_subspace(self, max_degree: int | None = None) -> Subspace:
        """Coordinate block of all ambient directions of Fock degree at
        most ``max_degree`` (default: the safe degree)."""
        deg = self.safe_degree if max_degree is None else max_degree
        wdim = self.fock.window_dim(deg) * self.defect_rank
        if self.kind in ("schaeffer", "cuntz-state"):
            wdim += self.base.dim
        return Subspace.coordinate_block(self.ambient_dim, wdim)

    def residual_report(self, word_len: int = 3) -> dict:
        """Measured residuals of the three dilation invariants."""
        e = self.embed
        iso = opnorm(e.conj().T @ e - np.eye(e.shape[1]))
        adj = max(opnorm(m.conj().T @ e - e @ tm.conj().T)
                  for m, tm in zip(self.dilation.mats, self.base.mats))
        wl = min(word_len, self.safe_degree)
        moment = 0.0
        from .fock import enumerate_indices
        words = [w for m in range(wl + 1) for w in enumerate_indices(self.base.n, m)]
        # E* dil^a (dil^b)* E from adjoint-word images of E, built by letter
        # recursion so no ambient-sized products are formed
        adj_images: dict = {(): e}
        for w in words:
            if w:
                adj_images[w] = (self.dilation.mats[w[-1] - 1].conj().T
                                 @ adj_images[w[:-1]])
        for a in words:
            for b in words:
                got = adj_images[a].conj().T @ adj_images[b]
                want = apply_word(self.base, a) @ apply_word(self.base, b).conj().T
                moment = max(moment, opnorm(got - want))
        return {
            "isometry_defect": iso,
            "adjoint_dilation_defect": adj,
            "moment_defect": moment,
            "moment_word_length": wl,
        }


@dataclass(frozen=True, eq=False)
class SchaefferDefect:
    """The block defect [delta_ij I - T_i* T_j] with its PSD square root
    and an orthonormal frame of the root's range."""

    d2: Array
    root: Array
    frame: Array

    @property
    def rank(self) -> int:
        return self.frame.shape[1]


def schaeffer_defect(t: OperatorTuple, tol: float = DEFAULT_TOL,
                     rank_tol: float = DEFAULT_RANK_TOL) -> SchaefferDefect:
    if not is_row_contraction(t, tol):
        raise PreconditionError("Schaeffer defect requires a row contraction")
    n, d = t.n, t.dim
    d2 = np.eye(n * d, dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            d2[i * d:(i + 1) * d, j * d:(j + 1) * d] -= t.mats[i].conj().T @ t.mats[j]
    root, evals, evecs = psd_sqrt_clamped(d2, clamp_tol=10 * tol)
    # rank decided on the squared spectrum, as in tuples.defect
    from ._linalg import numerical_rank
    rank, _ = numerical_rank(evals, rank_tol)
    order = np.argsort(evals)[::-1]
    frame = evecs[:, order[:rank]]
    return SchaefferDefect(d2=d2, root=root, frame=frame)


class SchaefferStructure:
    """Graded coordinates of the Schaeffer dilation space
    H ⊕ (Fock ⊗ defect-range), with cheap forward/adjoint appliers.

    Ambient coordinate layout: the original space first, then one block of
    ``rank`` defect coordinates per Fock word in graded-lex order. Forward
    application shifts Fock blocks up one degree (top degree annihilated);
    adjoint application shifts down and never truncates, so adjoint-side
    identities are exact.
    """

    def __init__(self, t: OperatorTuple, M: int, tol: float = DEFAULT_TOL,
                 rank_tol: float = DEFAULT_RANK_TOL):
        self.base = t
        self.fock = TruncatedFock.build(t.n, M)
        self.defect = schaeffer_defect(t, tol, rank_tol)
        n, d, r = t.n, t.dim, self.defect.rank
        q = self.defect.frame
        # frame coordinates of h -> D(e_i ⊗ h), one r x d block per letter
        self.b = np.stack([q.conj().T @ self.defect.root[:, i * d:(i + 1) * d]
                           for i in range(n)])
        self.ambient_dim = d + self.fock.dim * r
        self.rank_tol = rank_tol

    def _fock_block(self, m: int) -> tuple[int, int]:
        d, r = self.base.dim, self.defect.rank
        off = self.fock.degree_offsets
        return d + off[m] * r, d + off[m + 1] * r

    def apply_forward(self, i: int, x: Array) -> Array:
        """Apply the i-th dilation operator (0-based) to a column block."""
        t = self.base
        d, r, M = t.dim, self.defect.rank, self.fock.M
        n = t.n
        y = np.zeros_like(x)
        y[:d] = t.mats[i] @ x[:d]
        y[d:d + r] = self.b[i] @ x[:d]
        off = self.fock.degree_offsets
        for m in range(M):
            lo, hi = self._fock_block(m)
            width = (off[m + 1] - off[m]) * r
            dst = d + (off[m + 1] + i * (off[m + 1] - off[m])) * r
            y[dst:dst + width] = x[lo:hi]
        return y

    def apply_adjoint(self, i: int, x: Array) -> Array:
        t = self.base
        d, r, M = t.dim, self.defect.rank, self.fock.M
        y = np.zeros_like(x)
        y[:d] = t.mats[i].conj().T @ x[:d] + self.b[i].conj().T @ x[d:d + r]
        off = self.fock.degree_offsets
        for m in range(M):
            lo, hi = self._fock_block(m)
            width = (off[m + 1] - off[m]) * r
            src = d + (off[m + 1] + i * (off[m + 1] - off[m])) * r
            y[lo:hi] = x[src:src + width]
        return y

    def materialize(self) -> tuple[OperatorTuple, Array]:
        eye = np.eye(self.ambient_dim, dtype=np.complex128)
        mats = np.stack([self.apply_forward(i, eye) for i in range(self.base.n)])
        embed = eye[:, :self.base.dim].copy()
        return OperatorTuple(mats), embed

    def commutator_kernel_seed(self) -> Array:
        """Orthonormal frame of the joint kernel of the adjoint commutators,
        assembled from the graded block structure without a large SVD.

        The adjoint commutator sends a vector with components
        (x_H, x_0, x_1, x_2, ...) to a small block acting on (x_H, x_0, x_1)
        plus, per degree m >= 2, the antisymmetrization of the first two
        tensor slots of x_m.
        """
        t = self.base
        n, d, r, M = t.n, t.dim, self.defect.rank, self.fock.M
        adj = t.adjoints()
        badj = self.b.conj().transpose(0, 2, 1)
        head_cols = d + r + n * r
        blocks = []
        for i in range(n):
            for j in range(i + 1, n):
                w = np.zeros((d, head_cols), dtype=np.complex128)
                w[:, :d] = adj[i] @ adj[j] - adj[j] @ adj[i]
                w[:, d:d + r] = adj[i] @ badj[j] - adj[j] @ badj[i]
                w[:, d + r + j * r: d + r + (j + 1) * r] += badj[i]
                w[:, d + r + i * r: d + r + (i + 1) * r] -= badj[j]
                blocks.append(w)
        head_kernel, _ = kernel_frame(np.vstack(blocks), self.rank_tol)
        sym_cols = sum((n * (n + 1) // 2) * n ** (m - 2) * r for m in range(2, M + 1))
        total = head_kernel.shape[1] + sym_cols
        f0 = np.zeros((self.ambient_dim, total), dtype=np.complex128)
        f0[:head_cols, :head_kernel.shape[1]] = head_kernel
        col = head_kernel.shape[1]
        off = self.fock.degree_offsets
        inv_sqrt2 = 1.0 / np.sqrt(2.0)
        for m in range(2, M + 1):
            tails = np.arange(n ** (m - 2))
            qs = np.arange(r)
            for p in range(n):
                for s in range(p, n):
                    width = tails.size * r
                    cols = col + np.arange(width)
                    base1 = p * n ** (m - 1) + s * n ** (m - 2)
                    rows1 = (d + (off[m] + base1 + tails)[:, None] * r + qs[None, :]).ravel()
                    if p == s:
                        f0[rows1, cols] = 1.0
                    else:
                        base2 = s * n ** (m - 1) + p * n ** (m - 2)
                        rows2 = (d + (off[m] + base2 + tails)[:, None] * r + qs[None, :]).ravel()
                        f0[rows1, cols] = inv_sqrt2
                        f0[rows2, cols] = inv_sqrt2
                    col += width
        return f0


def schaeffer_adjoint_kernel(structure: SchaefferStructure,
                             rank_tol: float = DEFAULT_RANK_TOL,
                             max_rounds: int | None = None) -> Subspace:
    """Adjoint-kernel commuting-piece subspace of the Schaeffer dilation,
    computed with the graded appliers (no dense ambient matrices)."""
    seed = structure.commutator_kernel_seed()
    appliers = [lambda x, i=i: structure.apply_adjoint(i, x)
                for i in range(structure.base.n)]
    frame = invariant_kernel(appliers, seed, rank_tol, max_rounds)
    return Subspace(structure.ambient_dim, frame, rank_tol)


def schaeffer_dilation(t: OperatorTuple, M: int, tol: float = DEFAULT_TOL,
                       rank_tol: float = DEFAULT_RANK_TOL) -> DilationResult:
    """Minimal isometric dilation in Schaeffer form on
    H ⊕ (truncated Fock ⊗ defect-range)."""
    structure = SchaefferStructure(t, M, tol, rank_tol)
    dilation, embed = structure.materialize()
    return DilationResult(
        base=t, dilation=dilation, embed=embed, kind="schaeffer",
        fock=structure.fock, defect_frame=structure.defect.frame,
        safe_degree=M - 1, tail_bound=None,
        extras={"structure": structure})


def cuntz_state_rep(w, M: int, tol: float = DEFAULT_TOL,
                    rank_tol: float = DEFAULT_RANK_TOL) -> DilationResult:
    """Dilation of a sphere point: the GNS form of the associated state on
    C ⊕ (truncated Fock ⊗ w-orthogonal complement)."""
    w = np.asarray(w, dtype=np.complex128).ravel()
    gap = abs(float(np.sum(np.abs(w) ** 2)) - 1.0)
    if gap > tol:
        raise PreconditionError(
            f"point is not on the unit sphere: |sum|w_i|^2 - 1| = {gap:.3e} > {tol:.1e}")
    structure = SchaefferStructure(scalar_tuple(w), M, tol, rank_tol)
    dilation, embed = structure.materialize()
    result = DilationResult(
        base=structure.base, dilation=dilation, embed=embed, kind="cuntz-state",
        fock=structure.fock, defect_frame=structure.defect.frame,
        safe_degree=M - 1, tail_bound=None,
        extras={"structure": structure})
    return result


def _embedding_blocks(t: OperatorTuple, M: int, tol: float,
                      rank_tol: float) -> tuple[Array, TruncatedFock, Any, float]:
    tb = tail_bound(t, M)
    if tb > tol:
        raise PreconditionError(
            f"tuple is not pure enough at degree {M}: tail_bound {tb:.3e} > "
            f"{tol:.1e}; raise the truncation degree")
    dd = defect(t, tol, rank_tol)
    if dd.defect_rank == 0:
        raise PreconditionError("pure embedding needs a nonzero defect space")
    fock = TruncatedFock.build(t.n, M)
    r, d = dd.defect_rank, t.dim
    qh_delta = dd.defect_frame.conj().T @ dd.delta
    embed = np.zeros((fock.dim * r, d), dtype=np.complex128)
    adj_words: list[Array] = [np.eye(d, dtype=np.complex128)]
    embed[0:r] = qh_delta
    for f, word in enumerate(fock.indices):
        if f == 0:
            continue
        parent = fock.index(word[1:])
        aw = adj_words[parent] @ t.mats[word[0] - 1].conj().T
        adj_words.append(aw)
        embed[f * r:(f + 1) * r] = qh_delta @ aw
    return embed, fock, dd, tb


def pure_embedding(t: OperatorTuple, M: int, tol: float = DEFAULT_TOL,
                   rank_tol: float = DEFAULT_RANK_TOL) -> DilationResult:
    """Isometric embedding of a pure tuple into truncated Fock ⊗ defect,
    with the ampliated creation tuple as dilation."""
    embed, fock, dd, tb = _embedding_blocks(t, M, tol, rank_tol)
    r = dd.defect_rank
    ambient = fock.dim * r
    mats = np.zeros((t.n, ambient, ambient), dtype=np.complex128)
    eye_r = np.eye(r, dtype=np.complex128)
    for f, word in enumerate(fock.indices):
        if len(word) == fock.M:
            continue
        for i in range(1, t.n + 1):
            dst = fock.index((i,) + word)
            mats[i - 1, dst * r:(dst + 1) * r, f * r:(f + 1) * r] = eye_r
    return DilationResult(
        base=t, dilation=OperatorTuple(mats), embed=embed, kind="pure",
        fock=fock, defect_frame=dd.defect_frame, safe_degree=M, tail_bound=tb)


def standard_commuting_dilation_pure(t: OperatorTuple, M: int,
                                     tol: float = DEFAULT_TOL,
                                     rank_tol: float = DEFAULT_RANK_TOL) -> DilationResult:
    """The same embedding with the ambient restricted to the symmetric
    Fock window; requires a commuting pure tuple."""
    if not is_commuting(t, tol):
        raise PreconditionError(
            f"standard commuting dilation requires a commuting tuple "
            f"(commutator norm {commutator_norm(t):.3e})")
    embed_full, fock, dd, tb = _embedding_blocks(t, M, tol, rank_tol)
    r, d = dd.defect_rank, t.dim
    sym = symmetric_basis(fock)
    sdim = sym.dim
    resh = embed_full.reshape(fock.dim, r, d)
    embed_s = np.einsum("fs,frd->srd", sym.frame.conj(), resh).reshape(sdim * r, d)
    recon = np.einsum("fs,srd->frd", sym.frame, embed_s.reshape(sdim, r, d))
    leakage = opnorm((resh - recon).reshape(fock.dim * r, d))
    v = creation_tuple(fock)
    s_tuple = compressed_tuple(v, sym)
    eye_r = np.eye(r, dtype=np.complex128)
    mats = np.stack([np.kron(m, eye_r) for m in s_tuple.mats])
    dilation = OperatorTuple(mats)
    frame, _ = orthonormal_columns(embed_s, rank_tol)
    for _ in range(M + 1):
        candidates = np.hstack([m @ frame for m in dilation.mats])
        grown, _ = extend_frame(frame, candidates, rank_tol)
        if grown.shape[1] == 0:
            break
        frame = np.hstack([frame, grown])
    return DilationResult(
        base=t, dilation=dilation, embed=embed_s, kind="symmetric",
        fock=fock, defect_frame=dd.defect_frame, safe_degree=M, tail_bound=tb,
        extras={"leakage": leakage,
                "symmetric_basis": sym,
                "orbit_dim": frame.shape[1],
                "orbit_full_dim": sdim * r})


def defect_pair_differences(t: OperatorTuple, hs: Array) -> Array:
    """h_ij = T_j* h_i - T_i* h_j for a stacked vector tuple hs (n, dim)."""
    hs = as_complex(hs)
    adj = t.adjoints()
    out = np.zeros((t.n, t.n, t.dim), dtype=np.complex128)
    for i in range(t.n):
        for j in range(t.n):
            out[i, j] = adj[j] @ hs[i] - adj[i] @ hs[j]
    return out


def schaeffer_defect_action(t: OperatorTuple, hs: Array,
                            tol: float = DEFAULT_TOL) -> Array:
    """D(h_1, ..., h_n) evaluated through the pairwise differences
    sum_{i,j} e_i ⊗ T_j h_ij, valid when the tuple commutes and
    sum T_i T_i* = I (then D is a projection)."""
    hs = as_complex(hs)
    if hs.shape != (t.n, t.dim):
        raise ValueError(f"expected vector tuple of shape {(t.n, t.dim)}, got {hs.shape}")
    if opnorm(row_sum(t) - np.eye(t.dim)) > tol:
        raise PreconditionError("formula requires sum T_i T_i* = I")
    if not is_commuting(t, tol):
        raise PreconditionError("formula requires a commuting tuple")
    hij = defect_pair_differences(t, hs)
    out = np.zeros(t.n * t.dim, dtype=np.complex128)
    for i in range(t.n):
        acc = np.zeros(t.dim, dtype=np.complex128)
        for j in range(t.n):
            acc += t.mats[j] @ hij[i, j]
        out[i * t.dim:(i + 1) * t.dim] = acc
    return out


def poisson_value(t: OperatorTuple, r: float, M: int, alpha, beta) -> Array:
    """Compression of the word pair V^alpha (V^beta)* through the degree-M
    truncated embedding of the rescaled tuple, in closed form."""
    if not 0.0 < r < 1.0:
        raise PreconditionError(f"scale must lie in (0, 1), got {r}")
    alpha, beta = tuple(alpha), tuple(beta)
    s_free = M - max(len(alpha), len(beta))
    if s_free < 0:
        return np.zeros((t.dim, t.dim), dtype=np.complex128)
    x = np.eye(t.dim, dtype=np.complex128)
    for _ in range(s_free + 1):
        x = (r * r) * phi(t, x)
    partial = np.eye(t.dim) - x
    scale = r ** (len(alpha) + len(beta))
    return scale * (apply_word(t, alpha) @ partial @ apply_word(t, beta).conj().T)


def poisson_check(t: OperatorTuple, r: float, M: int, word_len: int,
                  tol: float = 1e-8) -> dict:
    """Max deviation of the truncated compression from
    r^(|a|+|b|) T^a (T^b)* over all word pairs up to ``word_len``."""
    if not 0.0 < r < 1.0:
        raise PreconditionError(f"scale must lie in (0, 1), got {r}")
    from .fock import enumerate_indices
    powers = [np.eye(t.dim, dtype=np.complex128)]
    for _ in range(M + 1):
        powers.append((r * r) * phi(t, powers[-1]))
    words = [w for m in range(word_len + 1) for w in enumerate_indices(t.n, m)]
    t_words = {w: apply_word(t, w) for w in words}
    max_dev = 0.0
    for a in words:
        for b in words:
            s_free = M - max(len(a), len(b))
            scale = r ** (len(a) + len(b))
            dev = scale * opnorm(t_words[a] @ powers[s_free + 1] @ t_words[b].conj().T)
            max_dev = max(max_dev, dev)
    return {
        "scale": r,
        "degree": M,
        "word_length": word_len,
        "pairs_checked": len(words) ** 2,
        "max_deviation": max_dev,
        "identity_deviation": opnorm(powers[M + 1]),
        "tolerance": tol,
        "pass": bool(max_dev <= tol),
    }
