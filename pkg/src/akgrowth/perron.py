"""Finite-dimensional oracle for dominant-eigenvalue positivity theory.

Generators of positive semigroups are, in finite dimension, exactly the
Metzler matrices (nonnegative off-diagonal entries).  For an irreducible
Metzler matrix the spectral bound is a real simple eigenvalue whose right
and left eigenvectors can be chosen strictly positive, and no other
eigenvalue admits a positive eigenvector.  This module checks all of those
conclusions directly on matrices, including the discretized circle generator
(whose positivity comes from the underlying operator rather than from the
sign pattern of the collocation matrix).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import PerronViolationError
from .tolerances import DEFAULT_TOLERANCES, Tolerances


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Dense square matrix standing in for a positive-semigroup generator."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"entries must be square, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("entries must be finite")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def is_metzler(self, tolerances: Tolerances = DEFAULT_TOLERANCES) -> bool:
        off = self.entries - np.diag(np.diag(self.entries))
        return bool(off.min() >= -tolerances.metzler_slack)


def is_irreducible(gen: GeneratorMatrix) -> bool:
    """Strong connectivity of the directed graph of nonzero off-diagonals.

    Computed by boolean reachability closure (repeated squaring), so the test
    is independent of any eigenvalue computation it is used to certify.
    """
    m = gen.dim
    adj = (gen.entries != 0.0) & ~np.eye(m, dtype=bool)
    reach = adj | np.eye(m, dtype=bool)
    for _ in range(int(np.ceil(np.log2(max(m, 2))))):
        reach = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
    return bool(reach.all())


def _rotate_to_real(vector: np.ndarray, tol: float) -> np.ndarray | None:
    """Remove a global phase; return the real vector or None if impossible."""
    pivot = vector[np.argmax(np.abs(vector))]
    if pivot == 0:
        return None
    rotated = vector * (np.conj(pivot) / abs(pivot))
    if np.abs(rotated.imag).max() > tol * max(1.0, float(np.abs(rotated).max())):
        return None
    return rotated.real


def _positive_version(vector: np.ndarray, realness_tol: float, positivity_tol: float) -> np.ndarray | None:
    """Entrywise positive representative of an eigenvector, if one exists.

    The vector is declared positive only when a global phase makes all
    entries real and, after normalizing the largest entry to 1, every entry
    exceeds the positivity tolerance.
    """
    real = _rotate_to_real(vector, realness_tol)
    if real is None:
        return None
    if real.max() <= 0:
        real = -real
    scaled = real / real.max()
    if scaled.min() <= positivity_tol:
        return None
    return scaled


@dataclass(frozen=True, eq=False)
class PerronData:
    """Spectral bound with its normalized positive right/left eigenvectors."""

    spectral_bound: float
    right: np.ndarray   # unit max entry
    left: np.ndarray    # normalized so that left @ right = 1
    gap: float          # distance from the bound to the rest of the spectrum


def perron_data(
    gen: GeneratorMatrix,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    require_metzler: bool = True,
) -> PerronData:
    """Spectral bound and strictly positive eigenvector pair.

    Asserts that the spectral bound is real and simple and that both Perron
    vectors are strictly positive; any failure raises PerronViolationError
    (flagging a bug or a non-irreducible input).  ``require_metzler=False``
    admits matrices, such as the spectral collocation generator, whose
    semigroup positivity is known at the operator level even though the
    discretized entries change sign.
    """
    if require_metzler and not gen.is_metzler(tolerances):
        raise PerronViolationError("matrix is not Metzler")
    eigenvalues, left_vectors, right_vectors = scipy.linalg.eig(
        gen.entries, left=True, right=True
    )
    scale = max(1.0, float(np.abs(eigenvalues).max()))
    idx = int(np.argmax(eigenvalues.real))
    bound = eigenvalues[idx]
    if abs(bound.imag) > tolerances.perron_realness * scale:
        raise PerronViolationError(f"spectral bound {bound!r} is not real")
    others = np.delete(eigenvalues, idx)
    gap = float(np.abs(others - bound).min()) if others.size else float("inf")
    if gap <= tolerances.perron_simplicity * scale:
        raise PerronViolationError(
            f"spectral bound {bound.real!r} is not simple (gap {gap:g})"
        )
    right = _positive_version(
        right_vectors[:, idx], tolerances.perron_realness, tolerances.perron_positivity
    )
    # scipy returns left vectors y with y^H A = lambda y^H; conjugation is a
    # no-op here because the bound is real
    left = _positive_version(
        left_vectors[:, idx].conj(), tolerances.perron_realness, tolerances.perron_positivity
    )
    if right is None or left is None:
        raise PerronViolationError(
            "Perron eigenvector has a nonpositive entry; input may be reducible"
        )
    left = left / float(left @ right)
    return PerronData(
        spectral_bound=float(bound.real), right=right, left=left, gap=gap
    )


def eigenvalues_admitting_positive_eigenvector(
    gen: GeneratorMatrix,
    side: str = "right",
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> list[float]:
    """Brute-force scan of all eigenpairs for entrywise positive eigenvectors.

    Used to certify uniqueness: for an irreducible Metzler matrix only the
    spectral bound may appear in the returned list.
    """
    matrix = gen.entries if side == "right" else gen.entries.T
    eigenvalues, vectors = np.linalg.eig(matrix)
    admitted = []
    for k in range(eigenvalues.size):
        positive = _positive_version(
            vectors[:, k], tolerances.perron_realness, tolerances.perron_positivity
        )
        if positive is not None:
            admitted.append(float(eigenvalues[k].real))
    return admitted


@dataclass(frozen=True, eq=False)
class BoundarySpectrum:
    """Eigenvalues on the line Re = spectral bound, with structure diagnostics."""

    eigenvalues: list[complex]
    spectral_bound: float
    progression_ok: bool   # imaginary parts form an arithmetic set containing 0
    note: str


def boundary_spectrum(
    gen: GeneratorMatrix,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> BoundarySpectrum:
    """Eigenvalues whose real part matches the spectral bound.

    The imaginary parts are checked for arithmetic-progression structure
    containing 0; a violation is reported in the result, not raised, since it
    signals numerical degeneracy rather than a usage error.
    """
    eigenvalues = np.linalg.eigvals(gen.entries)
    scale = max(1.0, float(np.abs(eigenvalues).max()))
    bound = float(eigenvalues.real.max())
    on_line = eigenvalues[np.abs(eigenvalues.real - bound) <= tolerances.perron_realness * scale]
    imags = np.sort(on_line.imag)
    note = ""
    ok = bool(np.abs(imags).min() <= tolerances.perron_realness * scale)
    if not ok:
        note = "boundary spectrum does not contain a real point"
    elif imags.size > 1:
        spacings = np.diff(imags)
        if np.abs(spacings - spacings[0]).max() > tolerances.perron_realness * scale:
            ok = False
            note = "imaginary parts are not equally spaced"
    return BoundarySpectrum(
        eigenvalues=[complex(v) for v in on_line],
        spectral_bound=bound,
        progression_ok=ok,
        note=note,
    )


def random_irreducible_metzler(
    dim: int,
    rng: np.random.Generator,
    density: float = 0.5,
) -> GeneratorMatrix:
    """Seeded random irreducible Metzler matrix for oracle batteries.

    A directed cycle is always included, which guarantees strong
    connectivity regardless of the sparsity draw.
    """
    if dim < 2:
        raise ValueError("dim must be >= 2")
    mask = rng.random((dim, dim)) < density
    entries = np.where(mask, rng.random((dim, dim)), 0.0)
    np.fill_diagonal(entries, 0.0)
    cycle = (np.arange(dim) + 1) % dim
    entries[np.arange(dim), cycle] += rng.random(dim) + 0.1
    diagonal = -rng.random(dim) * dim
    entries[np.diag_indices(dim)] = diagonal
    return GeneratorMatrix(entries)
