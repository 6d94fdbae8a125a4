"""Shift/clock operator pair on C^d (d prime), the monomial operator basis,
complete families of mutually unbiased bases, and the rotation-covariant
Hermitian basis built from the commuting monomial classes.

Conventions, fixed once here and relied on everywhere downstream:

* Z|n⟩ = ω^n|n⟩ with ω = exp(2πi/d).
* X lowers the computational index: X|n⟩ = |n−1 mod d⟩, equivalently
  X[i, j] = 1 iff j = i+1 mod d.  This is the direction that satisfies
  ω·Z·X = X·Z, which every rotation/covariance identity below uses.
* Basis label b = d is the computational (Z eigen-) basis; labels 0..d−1 are
  the unbiased partners.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import HermitianOp


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def require_prime(d: int) -> int:
    d = int(d)
    if not is_prime(d):
        raise ValueError(f"d must be prime, got {d}")
    return d


def require_odd_prime(d: int) -> int:
    d = require_prime(d)
    if d == 2:
        raise ValueError("d = 2 is excluded here; need an odd prime")
    return d


@dataclass(frozen=True)
class WeylPair:
    """The clock Z and down-shift X on C^d, with ω·Z·X = X·Z."""

    d: int
    X: np.ndarray
    Z: np.ndarray
    omega: complex


def build_weyl_pair(d: int) -> WeylPair:
    d = require_prime(d)
    omega = np.exp(2j * np.pi / d)
    Z = np.diag(omega ** np.arange(d))
    X = np.zeros((d, d), dtype=np.complex128)
    X[np.arange(d), (np.arange(d) + 1) % d] = 1.0
    X.flags.writeable = False
    Z.flags.writeable = False
    return WeylPair(d=d, X=X, Z=Z, omega=complex(omega))


def monomial(wp: WeylPair, a: int, b: int) -> np.ndarray:
    """The operator X^a Z^b, one element of the d² monomial basis.

    Built in closed form, (X^a Z^b)[i, j] = ω^{bj} δ_{j, i+a mod d}, so the
    phases are exact to machine precision.
    """
    d = wp.d
    a, b = int(a), int(b)
    if not (0 <= a < d and 0 <= b < d):
        raise ValueError(f"monomial exponents must lie in 0..{d - 1}, got ({a}, {b})")
    rows = np.arange(d)
    cols = (rows + a) % d
    mat = np.zeros((d, d), dtype=np.complex128)
    mat[rows, cols] = wp.omega ** ((b * cols) % d)
    mat.flags.writeable = False
    return mat


# --- mutually unbiased bases ------------------------------------------------


@dataclass(frozen=True)
class MubFamily:
    """A family of orthonormal bases of C^d; ``bases[b, m]`` is ket m of
    basis b.  A complete family has d+1 bases with b = d computational."""

    d: int
    bases: np.ndarray

    @property
    def n_bases(self) -> int:
        return self.bases.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "bases": [
                [[[float(z.real), float(z.imag)] for z in ket] for ket in basis]
                for basis in self.bases
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "MubFamily":
        try:
            d = int(obj["d"])
            raw = obj["bases"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed basis-family object: {exc}") from exc
        bases = np.array(
            [[[complex(re, im) for re, im in ket] for ket in basis] for basis in raw],
            dtype=np.complex128,
        )
        if bases.ndim != 3 or bases.shape[1] != d or bases.shape[2] != d:
            raise ValueError(f"expected bases shaped (n, {d}, {d}), got {bases.shape}")
        bases.flags.writeable = False
        return cls(d=d, bases=bases)


def build_mub(d: int) -> MubFamily:
    """The complete set of d+1 mutually unbiased bases in prime dimension d.

    For odd primes, basis b has kets |m;b⟩ with components
    ω^{b·n(n−1)/2 + m·n}/√d; exponents are reduced mod d as integers before
    exponentiating so every phase is an exact root of unity.  For d = 2 the
    three unbiased bases are the σx, σy, σz eigenbases.
    """
    d = require_prime(d)
    bases = np.zeros((d + 1, d, d), dtype=np.complex128)
    if d == 2:
        s = 1.0 / np.sqrt(2.0)
        bases[0] = [[s, s], [s, -s]]
        bases[1] = [[s, 1j * s], [s, -1j * s]]
    else:
        omega = np.exp(2j * np.pi / d)
        n = np.arange(d)
        tri = (n * (n - 1) // 2) % d
        for b in range(d):
            for m in range(d):
                bases[b, m] = omega ** ((b * tri + m * n) % d) / np.sqrt(d)
    bases[d] = np.eye(d)
    bases.flags.writeable = False
    return MubFamily(d=d, bases=bases)


def verify_mub(mub: MubFamily) -> float:
    """Max deviation of |⟨m;b|m';b'⟩|² from its target.

    Targets: 1 on the diagonal, 0 within a basis, 1/d across bases.  A family
    with a single basis only sees the orthonormality targets.
    """
    d = mub.d
    overlaps = np.abs(np.einsum("bmk,cnk->bmcn", mub.bases.conj(), mub.bases)) ** 2
    n_bases = mub.n_bases
    target = np.full((n_bases, d, n_bases, d), 1.0 / d)
    for b in range(n_bases):
        target[b, :, b, :] = np.eye(d)
    return float(np.abs(overlaps - target).max())


# --- commuting monomial classes and the h/g Hermitian basis -----------------


def commuting_classes(wp: WeylPair) -> list[list[tuple[int, int]]]:
    """Generator exponents of the d+1 maximal commuting monomial classes.

    Entry j < d lists (k, kj mod d) for k = 1..(d−1)/2 (the X^k Z^{kj} class);
    the last entry is the pure-clock class (0, k).  Together with adjoints and
    the identity these exhaust all d² monomials.  Odd primes only: for d = 2
    no half-range of k exists.
    """
    d = require_odd_prime(wp.d)
    half = (d - 1) // 2
    classes = [[(k, (k * j) % d) for k in range(1, half + 1)] for j in range(d)]
    classes.append([(0, k) for k in range(1, half + 1)])
    return classes


@dataclass(frozen=True)
class HGBasis:
    """Hermitian basis pairs h_{j,k}, g_{j,k} built from monomial class
    generators M: h = ζM + ζ*M†, g = −i(ζM − ζ*M†) with ζ = |ζ|e^{iφ_{j,k}}.

    Row index j runs over classes 0..d (clock class last); column index k−1
    over generators k = 1..(d−1)/2.  Stored as stacked (d+1, (d−1)/2, d, d)
    arrays; use :meth:`h_op`/:meth:`g_op` for validated wrappers.
    """

    d: int
    zeta_modulus: float
    phases: np.ndarray
    h: np.ndarray
    g: np.ndarray

    def h_op(self, j: int, k: int) -> HermitianOp:
        return HermitianOp.from_matrix(self.h[j, k - 1])

    def g_op(self, j: int, k: int) -> HermitianOp:
        return HermitianOp.from_matrix(self.g[j, k - 1])


def build_hg_basis(
    wp: WeylPair,
    phases: np.ndarray | None = None,
    zeta_modulus: float | None = None,
) -> HGBasis:
    """Construct the h/g basis for all d+1 classes.

    ``phases`` is (d+1, (d−1)/2) with row j, column k−1 (defaults to all
    zero); ``zeta_modulus`` defaults to √(1/(2d)), the value that makes every
    h and g unit-normalized in Hilbert-Schmidt norm (tr h² = 2d|ζ|² = 1).
    """
    d = require_odd_prime(wp.d)
    half = (d - 1) // 2
    if zeta_modulus is None:
        zeta_modulus = float(np.sqrt(1.0 / (2 * d)))
    if zeta_modulus <= 0:
        raise ValueError("zeta_modulus must be positive")
    if phases is None:
        phases = np.zeros((d + 1, half))
    else:
        phases = np.asarray(phases, dtype=float)
        if phases.shape != (d + 1, half):
            raise ValueError(
                f"phases must have shape ({d + 1}, {half}), got {phases.shape}"
            )
    classes = commuting_classes(wp)
    h = np.zeros((d + 1, half, d, d), dtype=np.complex128)
    g = np.zeros_like(h)
    for j, gens in enumerate(classes):
        for idx, (a, b) in enumerate(gens):
            m = monomial(wp, a, b)
            zeta = zeta_modulus * np.exp(1j * phases[j, idx])
            h[j, idx] = zeta * m + np.conj(zeta) * m.conj().T
            g[j, idx] = -1j * (zeta * m - np.conj(zeta) * m.conj().T)
    phases = phases.copy()
    phases.flags.writeable = False
    h.flags.writeable = False
    g.flags.writeable = False
    return HGBasis(d=d, zeta_modulus=float(zeta_modulus), phases=phases, h=h, g=g)


def verify_rotation_action(basis: HGBasis) -> float:
    """Max spectral-norm residual of the conjugation rotation identities.

    Class j ≠ d rotates under Z by angle 2πk/d and under X† by 2πkj/d; the
    clock class (j = d) is fixed by Z and rotates under X† by 2πk/d:

        Z h Z†  = cos·h + sin·g,   Z g Z†  = −sin·h + cos·g,
        X† h X  = cos·h + sin·g,   X† g X  = −sin·h + cos·g.
    """
    d = basis.d
    wp = build_weyl_pair(d)
    half = (d - 1) // 2
    worst = 0.0

    def spin(u, rows_h, rows_g, angle):
        c, s = np.cos(angle), np.sin(angle)
        rh = u @ rows_h @ u.conj().T - (c * rows_h + s * rows_g)
        rg = u @ rows_g @ u.conj().T - (-s * rows_h + c * rows_g)
        return max(np.linalg.norm(rh, 2), np.linalg.norm(rg, 2))

    for j in range(d + 1):
        for idx in range(half):
            k = idx + 1
            h, g = basis.h[j, idx], basis.g[j, idx]
            if j == d:
                z_angle = 0.0
                x_angle = 2 * np.pi * k / d
            else:
                z_angle = 2 * np.pi * k / d
                x_angle = 2 * np.pi * k * j / d
            worst = max(worst, spin(wp.Z, h, g, z_angle))
            worst = max(worst, spin(wp.X.conj().T, h, g, x_angle))
    return worst
