"""Analysis of tuples satisfying the Cuntz relations on a degree window:
spherical/residual decomposition and classification of the spherical part
by its joint spectral atoms.

Finite dimensions force atomic joint spectra, so the unitary-equivalence
invariant of a spherical unitary is the multiset of sphere points with
multiplicities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._linalg import (
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    Array,
    extend_frame,
    hermitize,
    opnorm,
)
from .errors import DiagonalizationError, PreconditionError
from .piece import Subspace, adjoint_kernel, compress
from .tuples import OperatorTuple, is_spherical_unitary, row_sum

DEFAULT_MERGE_TOL = 1e-7
_CLUSTER_GAP = 1e-6
_MAX_REDRAWS = 5


@dataclass(frozen=True)
class SphericalAtoms:
    """Multiset of (sphere point, multiplicity): the equivalence invariant
    of a finite-dimensional spherical unitary."""

    n: int
    atoms: tuple[tuple[tuple[complex, ...], int], ...]
    merge_tol: float = DEFAULT_MERGE_TOL

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.atoms)


@dataclass(frozen=True, eq=False)
class SphericalDecomposition:
    """Orthogonal split of a window-exact Cuntz tuple into the orbit of its
    commuting piece and the complement, plus the piece itself."""

    spherical_part: Subspace
    residual_part: Subspace
    piece: OperatorTuple
    piece_subspace: Subspace
    safe_degree: int
    residuals: dict


def _atom_sort_key(point: tuple[complex, ...]):
    return tuple(x for c in point for x in (round(c.real, 12), round(c.imag, 12)))


def spectral_atoms(z: OperatorTuple, tol: float = DEFAULT_TOL,
                   rank_tol: float = DEFAULT_RANK_TOL,
                   merge_tol: float = DEFAULT_MERGE_TOL,
                   seed: int = 0) -> SphericalAtoms:
    """Joint eigenvalues of a commuting normal family with multiplicities.

    Diagonalizes a seeded random Hermitian combination of the real and
    imaginary parts of the operators; eigenvalue clusters on which the
    family is not scalar trigger a coefficient re-draw (at most 5).
    Near-identical joint eigenvalues are merged within ``merge_tol``.
    """
    if not is_spherical_unitary(z, max(tol, 1e-9)):
        raise PreconditionError("spectral atoms require a spherical unitary")
    d, n = z.dim, z.n
    if d == 0:
        return SphericalAtoms(n=n, atoms=(), merge_tol=merge_tol)
    rng = np.random.default_rng(seed)
    hermitian_parts = []
    for m in z.mats:
        hermitian_parts.append(hermitize(m))
        hermitian_parts.append(hermitize(1j * m))
    last_residual = np.inf
    for _ in range(_MAX_REDRAWS + 1):
        coeffs = rng.standard_normal(len(hermitian_parts))
        combo = sum(c * h for c, h in zip(coeffs, hermitian_parts))
        evals, basis = np.linalg.eigh(hermitize(combo))
        scale = max(1.0, float(np.max(np.abs(evals))))
        clusters: list[list[int]] = [[0]]
        for k in range(1, d):
            if evals[k] - evals[k - 1] < _CLUSTER_GAP * scale:
                clusters[-1].append(k)
            else:
                clusters.append([k])
        raw_atoms: list[tuple[tuple[complex, ...], int]] = []
        worst = 0.0
        for cluster in clusters:
            block = basis[:, cluster]
            point = []
            for m in z.mats:
                sub = block.conj().T @ m @ block
                mean = complex(np.trace(sub) / len(cluster))
                worst = max(worst, opnorm(sub - mean * np.eye(len(cluster))))
                point.append(mean)
            raw_atoms.append((tuple(point), len(cluster)))
        if worst <= max(tol, 1e-10) * 100:
            break
        last_residual = worst
    else:
        raise DiagonalizationError(
            f"joint diagonalization did not resolve after {_MAX_REDRAWS} "
            f"re-draws: cluster residual {last_residual:.3e}")
    merged: list[tuple[np.ndarray, int]] = []
    for point, mult in raw_atoms:
        vec = np.asarray(point, dtype=np.complex128)
        for k, (rep, rep_mult) in enumerate(merged):
            if np.linalg.norm(rep / max(rep_mult, 1) - vec) <= merge_tol:
                merged[k] = (rep + vec * mult, rep_mult + mult)
                break
        else:
            merged.append((vec * mult, mult))
    atoms = []
    for vec, mult in merged:
        mean = vec / mult
        radius = abs(float(np.sum(np.abs(mean) ** 2)) - 1.0)
        if radius > 100 * max(tol, 1e-10):
            raise DiagonalizationError(
                f"recovered joint eigenvalue is off the sphere by {radius:.3e}")
        atoms.append((tuple(complex(c) for c in mean), int(mult)))
    atoms.sort(key=lambda a: _atom_sort_key(a[0]))
    return SphericalAtoms(n=n, atoms=tuple(atoms), merge_tol=merge_tol)


def equivalent_spherical(a: SphericalAtoms, b: SphericalAtoms,
                         tol: float = 1e-8) -> bool:
    """Multiset equality of atoms within distance ``tol``; ambiguous
    matchings and any multiplicity mismatch return False."""
    if a.n != b.n:
        raise ValueError(f"atom sets live on different spheres: n={a.n} vs {b.n}")
    if len(a.atoms) != len(b.atoms) or a.total_multiplicity != b.total_multiplicity:
        return False
    unmatched = list(b.atoms)
    for point, mult in a.atoms:
        pvec = np.asarray(point)
        hits = [k for k, (q, _) in enumerate(unmatched)
                if np.linalg.norm(pvec - np.asarray(q)) <= tol]
        if len(hits) != 1:
            return False
        if unmatched[hits[0]][1] != mult:
            return False
        unmatched.pop(hits[0])
    return not unmatched


def spherical_decomposition(w: OperatorTuple, safe_degree: int,
                            tol: float = DEFAULT_TOL,
                            rank_tol: float = DEFAULT_RANK_TOL,
                            window: Subspace | None = None) -> SphericalDecomposition:
    """Split the space into the word orbit of the maximal commuting piece
    and its complement; both reduce the tuple within the window.

    The Cuntz relations are verified on the window (or globally when no
    window is given); the orbit is grown up to word length ``safe_degree``,
    so the decomposition is window-exact, not asserted at the truncation
    boundary.
    """
    check_frame = window.frame if window is not None else np.eye(w.dim)
    cuntz_residual = 0.0
    for i in range(w.n):
        for j in range(w.n):
            block = w.mats[i].conj().T @ w.mats[j] @ check_frame
            if i == j:
                block = block - check_frame
            cuntz_residual = max(cuntz_residual, opnorm(block))
    cuntz_residual = max(cuntz_residual,
                         opnorm((row_sum(w) - np.eye(w.dim)) @ check_frame))
    if cuntz_residual > max(tol, 1e-9) * 10:
        raise PreconditionError(
            f"Cuntz relations violated on the window: residual "
            f"{cuntz_residual:.3e}")
    piece_space = adjoint_kernel(w, rank_tol)
    frame = piece_space.frame
    previous = frame
    for _ in range(safe_degree):
        candidates = np.hstack([m @ frame for m in w.mats]) if frame.shape[1] else frame
        grown, _ = extend_frame(frame, candidates, rank_tol)
        if grown.shape[1] == 0:
            break
        previous = frame
        frame = np.hstack([frame, grown])
    orbit = Subspace(w.dim, frame, rank_tol)
    complement = orbit.complement()
    piece = compress(w, piece_space, max(tol, 1e-8))
    res_into_complement = max(
        (opnorm(complement.frame.conj().T @ (m @ previous)) for m in w.mats),
        default=0.0)
    if window is not None:
        comp_windowed = complement.intersect(window).frame
    else:
        comp_windowed = complement.frame
    res_into_orbit = max(
        (opnorm(frame.conj().T @ (m @ comp_windowed)) for m in w.mats),
        default=0.0) if comp_windowed.shape[1] else 0.0
    return SphericalDecomposition(
        spherical_part=orbit,
        residual_part=complement,
        piece=piece,
        piece_subspace=piece_space,
        safe_degree=safe_degree,
        residuals={
            "cuntz_window_residual": cuntz_residual,
            "orbit_leak_into_complement": res_into_complement,
            "complement_leak_into_orbit": res_into_orbit,
            "note": "window-exact decomposition",
        })
