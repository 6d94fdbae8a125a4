"""Dense complex-matrix plumbing: Hermitian operators, the Hilbert-Schmidt
inner product, and eigenanalysis.

Everything here is a pure function of immutable inputs; operators are plain
numpy arrays wrapped in a frozen dataclass that validates hermiticity once at
construction, so values can be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

# Entrywise asymmetry above this is rejected instead of silently symmetrized.
HERMITICITY_ATOL = 1e-12

# Reconstruction residual allowed for an eigendecomposition before we call it
# a solver failure.
EIG_RESIDUAL_ATOL = 1e-10


def as_square_matrix(entries) -> np.ndarray:
    """Coerce ``entries`` to a finite square complex matrix (a fresh copy)."""
    mat = np.array(entries, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 1:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise ValueError("matrix entries must be finite")
    return mat


@dataclass(frozen=True)
class HermitianOp:
    """A d x d Hermitian matrix with its trace cached at construction.

    Construct through :meth:`from_matrix`, which validates; the arithmetic
    dunders build results directly since sums and real scalings of Hermitian
    matrices are exactly Hermitian.
    """

    mat: np.ndarray
    trace: float

    @classmethod
    def from_matrix(cls, entries, atol: float = HERMITICITY_ATOL) -> "HermitianOp":
        """Admit ``entries`` as Hermitian, symmetrizing (m + m†)/2.

        Raises ValueError if any entry of m − m† exceeds ``atol`` in modulus.
        """
        mat = as_square_matrix(entries)
        asym = float(np.abs(mat - mat.conj().T).max())
        if asym > atol:
            raise ValueError(f"matrix is not Hermitian: max |m - m†| = {asym:.3e}")
        sym = (mat + mat.conj().T) / 2.0
        sym.flags.writeable = False
        return cls(mat=sym, trace=float(sym.diagonal().real.sum()))

    @classmethod
    def identity(cls, dim: int) -> "HermitianOp":
        mat = np.eye(dim, dtype=np.complex128)
        mat.flags.writeable = False
        return cls(mat=mat, trace=float(dim))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def _combine(self, other: "HermitianOp", sign: float) -> "HermitianOp":
        if not isinstance(other, HermitianOp):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        mat = self.mat + sign * other.mat
        mat.flags.writeable = False
        return HermitianOp(mat=mat, trace=self.trace + sign * other.trace)

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, scalar):
        s = float(scalar)
        mat = s * self.mat
        mat.flags.writeable = False
        return HermitianOp(mat=mat, trace=s * self.trace)

    __rmul__ = __mul__

    def to_json_dict(self) -> dict:
        return matrix_to_json_dict(self.mat)

    @classmethod
    def from_json_dict(cls, obj: dict, atol: float = HERMITICITY_ATOL) -> "HermitianOp":
        return cls.from_matrix(matrix_from_json_dict(obj), atol=atol)


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues sorted descending, with the tolerance used to decide
    multiplicity/rank questions."""

    values: tuple[float, ...]
    tol: float = 1e-8

    def __post_init__(self):
        vals = self.values
        if any(vals[i] < vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("spectrum values must be sorted descending")

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def max_abs_diff(self, other) -> float:
        """Max entrywise distance to another descending spectrum."""
        mine = np.asarray(self.values)
        theirs = np.asarray(list(other))
        if mine.shape != theirs.shape:
            raise ValueError("spectra have different lengths")
        return float(np.abs(mine - theirs).max())


def hs_inner(a: HermitianOp, b: HermitianOp) -> float:
    """Hilbert-Schmidt inner product tr(ab).

    Exactly real for Hermitian inputs; the numerical imaginary residue
    (≤ 1e−12) is discarded.
    """
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(np.trace(a.mat @ b.mat).real)


def hermitian_eigensystem(h: HermitianOp, tol: float = 1e-8) -> tuple[Spectrum, np.ndarray]:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns.

    Raises ValueError if the reconstruction residual ‖h − VΛV†‖_max exceeds
    EIG_RESIDUAL_ATOL, which signals an eigensolver failure.
    """
    w, v = np.linalg.eigh(h.mat)
    w = w[::-1]
    v = v[:, ::-1]
    residual = float(np.abs(h.mat - (v * w) @ v.conj().T).max())
    if residual > EIG_RESIDUAL_ATOL:
        raise ValueError(f"eigendecomposition failed: residual {residual:.3e}")
    return Spectrum(values=tuple(float(x) for x in w), tol=tol), v


def matrix_rank(h: HermitianOp, tol: float = 1e-8) -> int:
    """Number of eigenvalues with |λ| > tol."""
    if tol <= 0:
        raise ValueError("rank tolerance must be positive")
    spectrum, _ = hermitian_eigensystem(h, tol=tol)
    return int(sum(1 for x in spectrum.values if abs(x) > tol))


def third_moment(h: HermitianOp) -> float:
    """tr(h³); equals 1 exactly when h is a rank-one projector."""
    m2 = h.mat @ h.mat
    return float(np.trace(m2 @ h.mat).real)


# --- JSON operator format -------------------------------------------------
#
# { "dim": d, "entries": [[re, im], ...] }  row-major, length d*d.
# Shared by every artifact file that carries a single operator.


def matrix_to_json_dict(mat: np.ndarray) -> dict:
    mat = as_square_matrix(mat)
    d = mat.shape[0]
    flat = mat.reshape(d * d)
    return {"dim": d, "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json_dict(obj: dict) -> np.ndarray:
    try:
        d = int(obj["dim"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed operator object: {exc}") from exc
    if d < 1:
        raise ValueError(f"operator dim must be positive, got {d}")
    if len(entries) != d * d:
        raise ValueError(f"expected {d * d} entries for dim {d}, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    return flat.reshape(d, d)


def write_operator_json(path, op: HermitianOp) -> None:
    with open(path, "w") as fh:
        json.dump(op.to_json_dict(), fh)
        fh.write("\n")


def read_operator_json(path, atol: float = HERMITICITY_ATOL) -> HermitianOp:
    with open(path) as fh:
        return HermitianOp.from_json_dict(json.load(fh), atol=atol)
