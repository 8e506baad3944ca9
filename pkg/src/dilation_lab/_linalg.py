"""Dense linear algebra helpers shared by all modules.

All rank decisions in the toolkit go through :func:`rank_cut` /
:func:`numerical_rank` so that rank claims are consistent everywhere:
a singular (or eigen) value counts toward the rank when it exceeds
``rank_tol * max(1, largest value)``. The ``max(1, .)`` floor keeps the
rule stable on numerically-zero matrices; all operators handled here are
O(1) in norm, so the floor only bites where the relative rule would
otherwise admit roundoff noise.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

Array = np.ndarray

DEFAULT_TOL = 1e-10
DEFAULT_RANK_TOL = 1e-9


def as_complex(a) -> Array:
    return np.ascontiguousarray(np.asarray(a, dtype=np.complex128))


def opnorm(x: Array) -> float:
    """Operator (spectral) norm; 0.0 for empty matrices."""
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def hermitize(x: Array) -> Array:
    return 0.5 * (x + x.conj().T)


def rank_cut(vmax: float, rank_tol: float) -> float:
    return rank_tol * max(1.0, vmax)


def numerical_rank(values: Sequence[float], rank_tol: float) -> tuple[int, bool]:
    """Rank of a nonnegative value sequence plus an instability flag.

    The flag is set when some value falls within a factor of 10 of the
    cut, i.e. the rank decision straddles the threshold.
    """
    v = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    if v.size == 0:
        return 0, False
    cut = rank_cut(float(v[0]), rank_tol)
    rank = int(np.sum(v > cut))
    unstable = bool(np.any((v > cut / 10.0) & (v < cut * 10.0)))
    return rank, unstable


def orthonormal_columns(x: Array, rank_tol: float = DEFAULT_RANK_TOL) -> tuple[Array, bool]:
    """Orthonormal frame for the column space of ``x`` (SVD based)."""
    x = as_complex(x)
    m = x.shape[0]
    if x.size == 0:
        return np.zeros((m, 0), dtype=np.complex128), False
    u, s, _ = np.linalg.svd(x, full_matrices=False)
    rank, unstable = numerical_rank(s, rank_tol)
    return u[:, :rank], unstable


def extend_frame(frame: Array, candidates: Array,
                 rank_tol: float = DEFAULT_RANK_TOL) -> tuple[Array, bool]:
    """New orthonormal columns extending ``frame`` toward ``candidates``.

    Projection is applied twice (re-orthogonalized Gram-Schmidt in block
    form) before the SVD cut, so the returned columns are orthogonal to
    ``frame`` to machine precision.
    """
    candidates = as_complex(candidates)
    if candidates.size == 0:
        return np.zeros((frame.shape[0], 0), dtype=np.complex128), False
    r = candidates
    if frame.shape[1]:
        r = r - frame @ (frame.conj().T @ r)
        r = r - frame @ (frame.conj().T @ r)
    return orthonormal_columns(r, rank_tol)


def kernel_frame(x: Array, rank_tol: float = DEFAULT_RANK_TOL) -> tuple[Array, bool]:
    """Orthonormal frame of the (right) null space of ``x``.

    Always a direct SVD: forming the Gram matrix would square the
    conditioning and push kernel directions above the rank cut.
    """
    x = as_complex(x)
    m, k = x.shape
    if k == 0:
        return np.zeros((0, 0), dtype=np.complex128), False
    if m == 0:
        return np.eye(k, dtype=np.complex128), False
    # the economy factorization already carries all k right-singular
    # vectors when the matrix is tall
    _, s, vh = np.linalg.svd(x, full_matrices=(m < k))
    rank, unstable = numerical_rank(s, rank_tol)
    return vh[rank:].conj().T, unstable


def stacked_kernel(blocks: list[Array], rank_tol: float = DEFAULT_RANK_TOL) -> tuple[Array, bool]:
    """Joint null space of vertically stacked blocks."""
    blocks = [b for b in blocks if b.shape[0]]
    if not blocks:
        raise ValueError("stacked_kernel needs at least one block")
    return kernel_frame(np.vstack(blocks), rank_tol)


def complement_frame(frame: Array) -> Array:
    """Orthonormal frame of the orthogonal complement of an orthonormal frame."""
    frame = as_complex(frame)
    m, k = frame.shape
    if k == 0:
        return np.eye(m, dtype=np.complex128)
    u, _, _ = np.linalg.svd(frame, full_matrices=True)
    return u[:, k:]


def max_principal_angle(a: Array, b: Array) -> float:
    """Largest principal angle between two orthonormal frames, in radians.

    Computed from residual norms (sine form), which stays accurate down to
    machine precision; the arccos-of-singular-values form loses everything
    below ~1e-8.
    """
    ka, kb = a.shape[1], b.shape[1]
    if ka == 0 and kb == 0:
        return 0.0
    if ka == 0 or kb == 0:
        return 0.5 * np.pi
    ra = opnorm(a - b @ (b.conj().T @ a))
    rb = opnorm(b - a @ (a.conj().T @ b))
    return float(np.arcsin(min(1.0, max(ra, rb))))


def containment_defect(a: Array, b: Array) -> float:
    """sin of the largest angle by which span(a) sticks out of span(b)."""
    if a.shape[1] == 0:
        return 0.0
    if b.shape[1] == 0:
        return 1.0
    return opnorm(a - b @ (b.conj().T @ a))


def intersection_frame(a: Array, b: Array, angle_tol: float = 1e-8,
                       rank_tol: float = DEFAULT_RANK_TOL) -> Array:
    """Orthonormal frame of span(a) ∩ span(b) (directions of a lying in b
    up to ``angle_tol`` in sine)."""
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=np.complex128)
    resid = a - b @ (b.conj().T @ a)
    _, s, vh = np.linalg.svd(resid, full_matrices=True)
    s = np.concatenate([s, np.zeros(a.shape[1] - s.size)])
    keep = s <= angle_tol
    if not np.any(keep):
        return np.zeros((a.shape[0], 0), dtype=np.complex128)
    frame, _ = orthonormal_columns(a @ vh[keep].conj().T, rank_tol)
    return frame


def psd_sqrt_clamped(h: Array, clamp_tol: float,
                     rank_tol: float = DEFAULT_RANK_TOL) -> tuple[Array, Array, Array]:
    """PSD square root via Hermitian eigendecomposition.

    Eigenvalues in ``[-clamp_tol, 0)`` are clamped to 0; anything more
    negative raises.  Nonnegative eigenvalues below the rank cut are also
    zeroed: the square root would otherwise amplify eps-level jitter to
    sqrt(eps), polluting identities built from the root.  Returns
    (sqrt, clamped eigenvalues, eigenvectors).
    """
    h = hermitize(as_complex(h))
    w, v = np.linalg.eigh(h)
    if w.size and w[0] < -clamp_tol:
        raise ValueError(
            f"matrix is not positive semidefinite: min eigenvalue {w[0]:.3e} "
            f"< -{clamp_tol:.1e}")
    w = np.clip(w, 0.0, None)
    if w.size:
        w[w <= rank_cut(float(w[-1]), rank_tol)] = 0.0
    root = (v * np.sqrt(w)) @ v.conj().T
    return hermitize(root), w, v


def invariant_kernel(adjoint_appliers: list[Callable[[Array], Array]],
                     seed: Array,
                     rank_tol: float = DEFAULT_RANK_TOL,
                     max_rounds: int | None = None) -> Array:
    """Largest subspace of span(seed) invariant under every applier map.

    ``seed`` must be an orthonormal frame.  Each round keeps the directions
    whose images stay inside the current subspace; the loop stops when the
    dimension stabilizes, which happens within ambient-dimension rounds.
    """
    f = seed
    ambient = f.shape[0]
    rounds = max_rounds if max_rounds is not None else ambient + 1
    for _ in range(rounds):
        k = f.shape[1]
        if k == 0:
            break
        blocks = []
        for apply_adj in adjoint_appliers:
            g = apply_adj(f)
            g = g - f @ (f.conj().T @ g)
            g = g - f @ (f.conj().T @ g)
            blocks.append(g)
        kern, _ = stacked_kernel(blocks, rank_tol)
        if kern.shape[1] == k:
            break
        f = f @ kern
    return f
