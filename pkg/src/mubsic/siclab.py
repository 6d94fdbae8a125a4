"""Equal-overlap projector families on the shift/clock orbit and everything
needed to hunt, certify, and dissect them: fiducial kets, the d² covariant
projectors, the unbiased probability-operator columns extracted over the dual
affine plane, spectra bookkeeping, cyclic probability-vector solving, phase
reconstruction of the fiducial state, and a seeded numerical search.

The orbit convention is λ_{a,b} = X^†ᵇ Zᵃ ρ₀ Z^†ᵃ Xᵇ with ρ₀ = |ψ₀⟩⟨ψ₀|, so
conjugating the whole family by X^†ᴮ Zᴬ permutes labels (a, b) → (a⊕A, b⊕B).
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .linalg import (
    HermitianOp,
    Spectrum,
    hermitian_eigensystem,
    matrix_rank,
    third_moment,
)
from .plane import Dapg, build_dapg
from .weyl import MubFamily, WeylPair, build_weyl_pair, monomial, require_prime

PointKey = tuple[int, int]
LineKey = tuple[int, int]


def canonical_ket(vec, atol: float = 1e-12) -> np.ndarray:
    """Normalize and fix the global phase: first component with modulus above
    ``atol`` is made real nonnegative."""
    vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
    if not np.all(np.isfinite(vec.real)) or not np.all(np.isfinite(vec.imag)):
        raise ValueError("ket components must be finite")
    norm = float(np.linalg.norm(vec))
    if norm <= atol:
        raise ValueError("cannot normalize a (near-)zero vector")
    vec = vec / norm
    for z in vec:
        if abs(z) > atol:
            vec = vec * np.exp(-1j * np.angle(z))
            break
    vec.flags.writeable = False
    return vec


@dataclass(frozen=True)
class Fiducial:
    """A unit ket that seeds a covariant projector family.

    ``source`` records provenance: 'closed-form', 'searched', or 'ingested'.
    """

    d: int
    ket: np.ndarray
    source: str = "ingested"

    def __post_init__(self):
        if self.ket.shape != (self.d,):
            raise ValueError(f"ket must have length {self.d}, got {self.ket.shape}")
        norm = float(np.linalg.norm(self.ket))
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"ket must be unit-norm, got ‖ψ‖ = {norm!r}")

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "ket": [[float(z.real), float(z.imag)] for z in self.ket],
        }

    @classmethod
    def from_json_dict(cls, obj: dict, source: str = "ingested") -> "Fiducial":
        try:
            d = int(obj["d"])
            raw = obj["ket"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed fiducial object: {exc}") from exc
        if len(raw) != d:
            raise ValueError(f"ket has length {len(raw)}, expected d = {d}")
        vec = np.array([complex(re, im) for re, im in raw], dtype=np.complex128)
        norm = float(np.linalg.norm(vec))
        if abs(norm - 1.0) > 1e-6:
            raise ValueError(f"ingested ket is not normalized: ‖ψ‖ = {norm!r}")
        return cls(d=d, ket=canonical_ket(vec), source=source)


def qubit_fiducial() -> Fiducial:
    """Closed-form d = 2 fiducial: Bloch vector (1, 1, 1)/√3."""
    c = 1.0 / np.sqrt(3.0)
    ket = np.array(
        [np.sqrt((1 + c) / 2), np.exp(1j * np.pi / 4) * np.sqrt((1 - c) / 2)]
    )
    return Fiducial(d=2, ket=canonical_ket(ket), source="closed-form")


def qutrit_fiducial() -> Fiducial:
    """Closed-form d = 3 fiducial (|0⟩ − ω²|1⟩)/√2, ω = exp(2πi/3)."""
    omega = np.exp(2j * np.pi / 3)
    ket = np.array([1.0, -(omega**2), 0.0]) / np.sqrt(2.0)
    return Fiducial(d=3, ket=canonical_ket(ket), source="closed-form")


# --- covariant family ---------------------------------------------------------


@dataclass(frozen=True)
class SicFamily:
    """d² rank-one trace-one operators keyed (a, b), generated from (or read
    alongside) a fiducial ket."""

    d: int
    fiducial: Fiducial
    projectors: dict

    def proj(self, a: int, b: int) -> HermitianOp:
        return self.projectors[(a, b)]

    def keys(self) -> list[LineKey]:
        return [(a, b) for a in range(self.d) for b in range(self.d)]

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "fiducial": self.fiducial.to_json_dict()["ket"],
            "ops": [self.projectors[k].to_json_dict() for k in self.keys()],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "SicFamily":
        try:
            d = int(obj["d"])
            raw_ops = obj["ops"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed family object: {exc}") from exc
        fid = Fiducial.from_json_dict({"d": d, "ket": obj.get("fiducial")})
        if len(raw_ops) != d * d:
            raise ValueError(f"expected {d * d} ops, got {len(raw_ops)}")
        keys = [(a, b) for a in range(d) for b in range(d)]
        projectors = {k: HermitianOp.from_json_dict(o) for k, o in zip(keys, raw_ops)}
        return cls(d=d, fiducial=fid, projectors=projectors)


def generate_hw_sic(fid: Fiducial) -> SicFamily:
    """Conjugate |ψ₀⟩⟨ψ₀| around the shift/clock orbit.

    λ_{a,b} = U ρ₀ U† with U = X^†ᵇ Zᵃ; U is realized as monomial(b, −a)†,
    which equals it up to a global phase that conjugation cancels.
    """
    d = require_prime(fid.d)
    wp = build_weyl_pair(d)
    rho0 = np.outer(fid.ket, fid.ket.conj())
    projectors = {}
    for a in range(d):
        for b in range(d):
            u = monomial(wp, b, (d - a) % d).conj().T
            projectors[(a, b)] = HermitianOp.from_matrix(u @ rho0 @ u.conj().T)
    return SicFamily(d=d, fiducial=fid, projectors=projectors)


def verify_sic(fam: SicFamily) -> float:
    """Max deviation of tr(λ λ') from the pattern {1 on the diagonal,
    1/(d+1) off it}."""
    d = fam.d
    stack = np.stack([fam.projectors[k].mat for k in fam.keys()])
    gram = np.einsum("aij,bji->ab", stack, stack).real
    n = d * d
    target = np.full((n, n), 1.0 / (d + 1))
    np.fill_diagonal(target, 1.0)
    return float(np.abs(gram - target).max())


# --- measurement columns over the dual affine plane ---------------------------


@dataclass(frozen=True)
class MuPomFamily:
    """The d(d+1) trace-one operators τ_m^(j) = (1/d) Σ_{μ∋(m,j)} λ_μ keyed by
    dual-plane point (m, j); each column j sums to the identity."""

    d: int
    ops: dict

    def op(self, m: int, j: int) -> HermitianOp:
        return self.ops[(m, j)]

    def keys(self) -> list[PointKey]:
        return [(m, j) for j in range(self.d + 1) for m in range(self.d)]

    def column(self, j: int) -> list[HermitianOp]:
        return [self.ops[(m, j)] for m in range(self.d)]


def extract_mu_pom(
    fam: SicFamily, geom: Dapg | None = None, verify_tol: float = 1e-8
) -> MuPomFamily:
    """Average the projector family along dual-plane lines through each point.

    The input family is verified first: if its overlap deviation exceeds
    ``verify_tol`` the extraction is refused, since the output pattern is
    only meaningful on an equal-overlap family.
    """
    d = fam.d
    dev = verify_sic(fam)
    if dev > verify_tol:
        raise ValueError(f"family fails equal-overlap check: deviation {dev:.3e}")
    if geom is None:
        geom = build_dapg(d)
    if geom.d != d:
        raise ValueError(f"geometry order {geom.d} does not match family d = {d}")
    ops = {}
    for p in [(m, j) for j in range(d + 1) for m in range(d)]:
        total = np.zeros((d, d), dtype=np.complex128)
        for ln in geom.lines_through(p):
            total += fam.projectors[ln].mat
        ops[p] = HermitianOp.from_matrix(total / d)
    return MuPomFamily(d=d, ops=ops)


def verify_mu_pom(fam: MuPomFamily) -> float:
    """Max deviation of tr(τ τ') from the three-value pattern
    {1/d across columns; 2/(d+1) on the diagonal; 1/(d+1) within a column}."""
    d = fam.d
    keys = fam.keys()
    stack = np.stack([fam.ops[k].mat for k in keys])
    gram = np.einsum("aij,bji->ab", stack, stack).real
    target = np.empty_like(gram)
    for i, (m, j) in enumerate(keys):
        for i2, (m2, j2) in enumerate(keys):
            if j != j2:
                target[i, i2] = 1.0 / d
            elif m == m2:
                target[i, i2] = 2.0 / (d + 1)
            else:
                target[i, i2] = 1.0 / (d + 1)
    return float(np.abs(gram - target).max())


# --- spectra bookkeeping -------------------------------------------------------


def spectra_table(fam: MuPomFamily) -> dict:
    """Descending eigenvalue tuples for every point operator, keyed (m, j)."""
    return {k: hermitian_eigensystem(fam.ops[k])[0] for k in fam.keys()}


@dataclass
class ColumnReport:
    """Within-column spectrum spread; columns are constant when every member
    of a column shares one spectrum up to tolerance."""

    d: int
    max_spread: float
    per_column: dict
    tol: float

    @property
    def ok(self) -> bool:
        return self.max_spread <= self.tol


def assert_column_constant(table: dict, tol: float = 1e-8) -> ColumnReport:
    d = max(k[1] for k in table)
    per_column = {}
    for j in range(d + 1):
        specs = [np.asarray(table[(m, j)].values) for m in range(d)]
        spread = 0.0
        for i in range(len(specs)):
            for i2 in range(i + 1, len(specs)):
                spread = max(spread, float(np.abs(specs[i] - specs[i2]).max()))
        per_column[j] = spread
    return ColumnReport(
        d=d, max_spread=max(per_column.values()), per_column=per_column, tol=tol
    )


@dataclass
class Grouping:
    """Partition of column labels by shared spectrum, with each group's mean
    spectrum as its representative."""

    groups: list
    spectra: list

    def sizes(self) -> list[int]:
        return sorted(len(g) for g in self.groups)

    def to_json_dict(self) -> dict:
        return {"groups": self.groups, "spectra": self.spectra}


def group_columns_by_spectrum(table: dict, tol: float = 1e-6) -> Grouping:
    """Greedy partition of columns 0..d by entrywise spectrum agreement.

    Each column is represented by the mean of its members' spectra (callers
    should have checked column-constancy first); a column joins the first
    group whose founding representative matches within ``tol``.
    """
    d = max(k[1] for k in table)
    reps = {}
    for j in range(d + 1):
        reps[j] = np.mean([np.asarray(table[(m, j)].values) for m in range(d)], axis=0)
    groups: list[list[int]] = []
    founders: list[np.ndarray] = []
    for j in range(d + 1):
        for gi, f in enumerate(founders):
            if float(np.abs(reps[j] - f).max()) <= tol:
                groups[gi].append(j)
                break
        else:
            groups.append([j])
            founders.append(reps[j])
    spectra = [
        [float(x) for x in np.mean([reps[j] for j in g], axis=0)] for g in groups
    ]
    return Grouping(groups=groups, spectra=spectra)


def spectra_to_csv(table: dict) -> str:
    """CSV with header m,j,lambda_1..lambda_d; rows ordered (j asc, m asc);
    12 significant digits, '.' decimal separator."""
    d = max(k[1] for k in table)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["m", "j"] + [f"lambda_{i}" for i in range(1, d + 1)])
    for j in range(d + 1):
        for m in range(d):
            writer.writerow([m, j] + [f"{x:.12g}" for x in table[(m, j)].values])
    return buf.getvalue()


def spectra_from_csv(text: str) -> dict:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or rows[0][:2] != ["m", "j"]:
        raise ValueError("spectra CSV must start with header m,j,lambda_1..")
    table = {}
    for row in rows[1:]:
        if not row:
            continue
        m, j = int(row[0]), int(row[1])
        table[(m, j)] = Spectrum(values=tuple(float(x) for x in row[2:]))
    return table


# --- cyclic probability conditions ---------------------------------------------


@dataclass(frozen=True)
class ProbabilityVector:
    """Nonnegative entries summing to one (within 1e−12 slack)."""

    entries: tuple

    def __post_init__(self):
        vals = np.asarray(self.entries, dtype=float)
        if vals.min() < -1e-12:
            raise ValueError(f"negative probability entry: {vals.min()!r}")
        if abs(vals.sum() - 1.0) > 1e-12:
            raise ValueError(f"entries must sum to 1, got {vals.sum()!r}")

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def autocorrelation(self, m: int) -> float:
        p = np.asarray(self.entries)
        return float(p @ np.roll(p, -m))


@dataclass
class CyclicSolutions:
    """Solutions of Σ_k p_k p_{k⊕m} = 2/(d+1) (m = 0), 1/(d+1) (else).

    ``solutions`` holds canonical representatives up to cyclic shift and
    reflection.  For d = 3 the full solution set is the one-parameter family
    exposed via ``family`` on ``family_bounds``; for d ≥ 5 the set is a
    positive-dimensional variety and ``solutions`` are deduped sample points
    found from seeded restarts.
    """

    d: int
    solutions: list
    residuals: list
    family: object = None
    family_bounds: tuple | None = None


def cyclic_residuals(p, d: int) -> np.ndarray:
    """Autocorrelation and normalization residuals for a candidate vector."""
    p = np.asarray(p, dtype=float)
    half = (d - 1) // 2 if d % 2 else d // 2
    res = [p.sum() - 1.0]
    for m in range(half + 1):
        target = 2.0 / (d + 1) if m == 0 else 1.0 / (d + 1)
        res.append(float(p @ np.roll(p, -m)) - target)
    return np.asarray(res)


def qutrit_cyclic_family(p1: float) -> ProbabilityVector:
    """The d = 3 solution family p₀ = (1 − p₁ + √(2p₁ − 3p₁²))/2, feasible for
    p₁ ∈ [0, 2/3]."""
    if not 0.0 <= p1 <= 2.0 / 3.0 + 1e-12:
        raise ValueError(f"p1 must lie in [0, 2/3], got {p1}")
    radicand = max(2.0 * p1 - 3.0 * p1 * p1, 0.0)
    p0 = (1.0 - p1 + np.sqrt(radicand)) / 2.0
    p2 = 1.0 - p0 - p1
    return ProbabilityVector(entries=(float(p0), float(p1), max(float(p2), 0.0)))


def _canonical_cycle(p: np.ndarray) -> tuple:
    d = len(p)
    best = None
    for q in (p, p[::-1]):
        for s in range(d):
            cand = tuple(np.roll(q, s))
            if best is None or cand > best:
                best = cand
    return best


def solve_cyclic_probability(
    d: int, seed: int = 0, restarts: int = 64, tol: float = 1e-12
) -> CyclicSolutions:
    """Solve the cyclic overlap conditions for probability vectors.

    d = 2 and d = 3 use closed forms; d ≥ 5 runs seeded bounded least-squares
    restarts and returns residual-clean solutions deduped up to cyclic shift
    and reflection.
    """
    d = require_prime(d)
    if d == 2:
        hi = (3.0 + np.sqrt(3.0)) / 6.0
        sols = [
            ProbabilityVector(entries=(hi, 1.0 - hi)),
            ProbabilityVector(entries=(1.0 - hi, hi)),
        ]
        return CyclicSolutions(
            d=2,
            solutions=sols,
            residuals=[
                float(np.abs(cyclic_residuals(list(s), 2)).max()) for s in sols
            ],
        )
    if d == 3:
        distinguished = qutrit_cyclic_family(0.5)
        return CyclicSolutions(
            d=3,
            solutions=[distinguished],
            residuals=[float(np.abs(cyclic_residuals(list(distinguished), 3)).max())],
            family=qutrit_cyclic_family,
            family_bounds=(0.0, 2.0 / 3.0),
        )

    half = (d - 1) // 2
    targets = np.array([2.0 / (d + 1)] + [1.0 / (d + 1)] * half)

    def fun(p):
        res = np.empty(half + 2)
        res[0] = p.sum() - 1.0
        for m in range(half + 1):
            res[m + 1] = p @ np.roll(p, -m) - targets[m]
        return res

    def jac(p):
        out = np.empty((half + 2, d))
        out[0] = 1.0
        for m in range(half + 1):
            out[m + 1] = np.roll(p, -m) + np.roll(p, m)
        return out

    rng = np.random.default_rng(seed)
    found: dict[tuple, tuple] = {}
    for _ in range(restarts):
        x0 = rng.dirichlet(np.ones(d))
        res = least_squares(
            fun, x0, jac=jac, bounds=(0.0, 1.0), method="trf",
            xtol=1e-15, ftol=1e-15, gtol=1e-15,
        )
        resid = float(np.abs(fun(res.x)).max())
        if resid > tol:
            continue
        p = np.where(res.x < 1e-14, 0.0, res.x)
        p = p / p.sum()
        canon = _canonical_cycle(p)
        key = tuple(round(x, 8) for x in canon)
        if key not in found:
            found[key] = (canon, float(np.abs(fun(np.asarray(canon))).max()))
    solutions = []
    residuals = []
    for canon, resid in sorted(found.values(), reverse=True):
        solutions.append(ProbabilityVector(entries=tuple(float(x) for x in canon)))
        residuals.append(resid)
    return CyclicSolutions(d=d, solutions=solutions, residuals=residuals)


# --- fiducial from measurement columns ------------------------------------------


def mu_pom_from_probabilities(mub: MubFamily, probs) -> list[HermitianOp]:
    """Build one diagonal operator per basis: τ_b = Σ_m p_m |m;b⟩⟨m;b|."""
    d = mub.d
    if mub.n_bases != d + 1:
        raise ValueError(f"need a complete family of {d + 1} bases")
    probs = [np.asarray(list(p), dtype=float) for p in probs]
    if len(probs) != d + 1:
        raise ValueError(f"need one probability vector per basis ({d + 1})")
    ops = []
    for b, p in enumerate(probs):
        if p.shape != (d,):
            raise ValueError(f"probability vector for basis {b} has wrong length")
        mat = np.zeros((d, d), dtype=np.complex128)
        for m in range(d):
            ket = mub.bases[b, m]
            mat += p[m] * np.outer(ket, ket.conj())
        ops.append(HermitianOp.from_matrix(mat))
    return ops


@dataclass
class FiducialExtraction:
    """Result of assembling λ₀ = Σ_b τ₀^(b) − 1 from per-basis operators.

    ``fiducial`` is populated only when λ₀ is rank one (then Σ_b τ₀^(b) has
    eigenvalues {2, 1, …, 1} and λ₀'s top eigenvector is the fiducial ket).
    """

    lambda0: HermitianOp
    sum_spectrum: Spectrum
    third_moment: float
    rank: int
    fiducial: Fiducial | None


def fiducial_from_mu_pom(
    taus, mub: MubFamily, diag_tol: float = 1e-10, rank_tol: float = 1e-8
) -> FiducialExtraction:
    """Assemble a candidate fiducial projector from d+1 basis-diagonal
    operators (one per unbiased basis, in basis order).

    Each τ must be diagonal in its own basis within ``diag_tol``; rank-one-ness
    of λ₀ is decided by ``rank_tol`` and certified by tr λ₀³ = 1.
    """
    d = mub.d
    taus = list(taus)
    if len(taus) != d + 1:
        raise ValueError(f"need {d + 1} operators, got {len(taus)}")
    for b, tau in enumerate(taus):
        if tau.dim != d:
            raise ValueError(f"operator {b} has dim {tau.dim}, expected {d}")
        rep = mub.bases[b].conj() @ tau.mat @ mub.bases[b].T
        off = float(np.abs(rep - np.diag(rep.diagonal())).max())
        if off > diag_tol:
            raise ValueError(
                f"operator {b} is not diagonal in basis {b}: off-diagonal {off:.3e}"
            )
    total = taus[0]
    for tau in taus[1:]:
        total = total + tau
    lambda0 = total - HermitianOp.identity(d)
    sum_spectrum, _ = hermitian_eigensystem(total)
    spectrum, vectors = hermitian_eigensystem(lambda0, tol=rank_tol)
    rank = matrix_rank(lambda0, tol=rank_tol)
    fid = None
    if rank == 1 and abs(spectrum.values[0] - 1.0) <= 1e-6:
        fid = Fiducial(d=d, ket=canonical_ket(vectors[:, 0]), source="closed-form")
    return FiducialExtraction(
        lambda0=lambda0,
        sum_spectrum=sum_spectrum,
        third_moment=third_moment(lambda0),
        rank=rank,
        fiducial=fid,
    )


# --- phase reconstruction --------------------------------------------------------


def _raising_monomial(wp: WeylPair, k: int, b: int) -> np.ndarray:
    """(X†)ᵏ Zᵇ in closed form: maps |n⟩ → ω^{bn}|n+k⟩.

    Not the adjoint of monomial(k, −b), which differs by a global phase; here
    the absolute phase matters.
    """
    d = wp.d
    n = np.arange(d)
    mat = np.zeros((d, d), dtype=np.complex128)
    mat[(n + k) % d, n] = wp.omega ** ((b * n) % d)
    return mat


def phases_from_fiducial(fid: Fiducial) -> np.ndarray:
    """Class phases φ_{j,k} of a fiducial ket, shaped (d+1, (d−1)/2).

    Row j < d holds arg⟨ψ|(X†)ᵏZ^{−jk}|ψ⟩ (the class-j generator
    coefficient); row d holds −arg⟨ψ|Zᵏ|ψ⟩.  Inverse of
    :func:`build_sigma0_from_phases` whenever ψ satisfies the equal-overlap
    conditions.
    """
    d = fid.d
    if d == 2:
        raise ValueError("phase reconstruction needs an odd prime d")
    wp = build_weyl_pair(d)
    half = (d - 1) // 2
    psi = fid.ket
    phases = np.empty((d + 1, half))
    for k in range(1, half + 1):
        phases[d, k - 1] = -np.angle(psi.conj() @ monomial(wp, 0, k) @ psi)
        for j in range(d):
            op = _raising_monomial(wp, k, (-j * k) % d)
            phases[j, k - 1] = np.angle(psi.conj() @ op @ psi)
    return phases


def build_sigma0_from_phases(d: int, phases) -> HermitianOp:
    """Rebuild the distinguished trace-one operator from (d²−1)/2 phases.

    Diagonal: σ_nn = (1/d)[1 + (2/√(d+1)) Σ_k cos(φ_{d,k} + 2πkn/d)].
    Off-diagonal: σ_{n,n⊕k} = (1/(d√(d+1))) Σ_j e^{iφ_{j,k}} ω^{njk}.
    When the phases come from an equal-overlap fiducial, σ is that fiducial's
    projector (unit purity, tr σ³ = 1).
    """
    d = require_prime(d)
    if d == 2:
        raise ValueError("phase reconstruction needs an odd prime d")
    half = (d - 1) // 2
    phases = np.asarray(phases, dtype=float)
    if phases.size != (d * d - 1) // 2:
        raise ValueError(
            f"need {(d * d - 1) // 2} phases for d = {d}, got {phases.size}"
        )
    phases = phases.reshape(d + 1, half)
    omega = np.exp(2j * np.pi / d)
    root = np.sqrt(d + 1.0)
    mat = np.zeros((d, d), dtype=np.complex128)
    for n in range(d):
        acc = 1.0
        for k in range(1, half + 1):
            acc += (2.0 / root) * np.cos(phases[d, k - 1] + 2 * np.pi * k * n / d)
        mat[n, n] = acc / d
    for k in range(1, half + 1):
        for n in range(d):
            z = sum(
                np.exp(1j * phases[j, k - 1]) * omega ** ((n * j * k) % d)
                for j in range(d)
            )
            mat[n, (n + k) % d] = z / (d * root)
            mat[(n + k) % d, n] = np.conj(mat[n, (n + k) % d])
    return HermitianOp.from_matrix(mat)


# --- rank-one (equal-overlap) conditions ------------------------------------------


def rank_one_conditions(fid: Fiducial) -> tuple[float, float]:
    """Deviations of |⟨ψ|XᵃZᵇ|ψ⟩|² from 1/(d+1).

    Returns (full, reduced): ``full`` ranges over all d²−1 nontrivial
    monomials; ``reduced`` over the d(d−1)/2 monomials XᵏZ^{−mk} with
    k = 1..(d−1)/2, m = 0..d−1 (for d = 2 the reduced set is the full set).
    """
    d = fid.d
    wp = build_weyl_pair(d)
    c = 1.0 / (d + 1)
    psi = fid.ket

    def dev(a, b):
        amp = psi.conj() @ monomial(wp, a, b) @ psi
        return abs(abs(amp) ** 2 - c)

    full = 0.0
    for a in range(d):
        for b in range(d):
            if a == 0 and b == 0:
                continue
            full = max(full, dev(a, b))
    if d == 2:
        return full, full
    reduced = 0.0
    half = (d - 1) // 2
    for k in range(1, half + 1):
        for m in range(d):
            reduced = max(reduced, dev(k, (-m * k) % d))
    return full, reduced


# --- numerical search --------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the seeded fiducial search; defaults favor determinism."""

    seed: int = 0
    restarts: int = 24
    max_iters: int = 1000
    objective_tol: float = 1e-14
    step_tol: float = 1e-15

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.objective_tol <= 0:
            raise ValueError("objective_tol must be positive")
        if self.step_tol <= 0:
            raise ValueError("step_tol must be positive")


@dataclass
class SearchResult:
    """Best ket found, its objective F = Σ(|⟨ψ|XᵃZᵇ|ψ⟩|² − 1/(d+1))², and
    whether F reached the configured tolerance within the restart budget."""

    fiducial: Fiducial
    objective: float
    converged: bool
    restarts_used: int


def _monomial_stack(wp: WeylPair) -> np.ndarray:
    d = wp.d
    mats = [
        monomial(wp, a, b)
        for a in range(d)
        for b in range(d)
        if not (a == 0 and b == 0)
    ]
    return np.stack(mats)


def search_fiducial(
    d: int, cfg: SearchConfig | None = None, callback=None
) -> SearchResult:
    """Seeded restarts of trust-region least squares on the overlap residuals.

    The residual vector is r_M(ψ) = |⟨ψ|Mψ⟩|²/‖ψ‖⁴ − 1/(d+1) over nontrivial
    monomials M, with the exact Jacobian in the 2d real coordinates of ψ.
    Budget exhaustion is reported, not raised: the best ket is returned with
    ``converged = False``.  ``callback``, if given, receives each normalized
    candidate ket as the optimizer evaluates it.
    """
    d = require_prime(d)
    cfg = cfg or SearchConfig()
    wp = build_weyl_pair(d)
    mons = _monomial_stack(wp)
    mons_conj = mons.conj()
    c = 1.0 / (d + 1)

    def split(x):
        return x[:d] + 1j * x[d:]

    def fun(x):
        psi = split(x)
        nrm2 = float((psi.conj() @ psi).real)
        amps = mons @ psi
        a = amps @ psi.conj()
        if callback is not None:
            callback(psi / np.sqrt(nrm2))
        return (np.abs(a) ** 2) / nrm2**2 - c

    def jac(x):
        psi = split(x)
        nrm2 = float((psi.conj() @ psi).real)
        m_psi = mons @ psi
        md_psi = np.einsum("nij,i->nj", mons_conj, psi)
        a = m_psi @ psi.conj()
        u = (a.conj()[:, None] * m_psi + a[:, None] * md_psi) / nrm2**2
        u -= (2.0 * np.abs(a) ** 2 / nrm2**3)[:, None] * psi[None, :]
        return np.concatenate([2.0 * u.real, 2.0 * u.imag], axis=1)

    rng = np.random.default_rng(cfg.seed)
    best_x = None
    best_f = np.inf
    used = 0
    for _ in range(cfg.restarts):
        used += 1
        x0 = rng.standard_normal(2 * d)
        res = least_squares(
            fun, x0, jac=jac, method="trf", max_nfev=cfg.max_iters,
            xtol=cfg.step_tol, ftol=cfg.step_tol, gtol=cfg.step_tol,
        )
        f_val = float(np.sum(res.fun**2))
        if f_val < best_f:
            best_f = f_val
            best_x = res.x
        if best_f <= cfg.objective_tol:
            break
    ket = canonical_ket(split(best_x))
    fid = Fiducial(d=d, ket=ket, source="searched")
    return SearchResult(
        fiducial=fid,
        objective=best_f,
        converged=bool(best_f <= cfg.objective_tol),
        restarts_used=used,
    )


def ingest_fiducial(path, d: int) -> Fiducial:
    """Read a fiducial ket from a JSON file and validate it for dimension d.

    The stored ket may be off unit norm by up to 1e−6 (it is renormalized);
    anything worse, a length mismatch, or a zero vector is an error.
    """
    with open(path) as fh:
        obj = json.load(fh)
    try:
        file_d = int(obj["d"])
        raw = obj["ket"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed fiducial file: {exc}") from exc
    if file_d != d:
        raise ValueError(f"fiducial file has d = {file_d}, expected {d}")
    if len(raw) != d:
        raise ValueError(f"ket has length {len(raw)}, expected {d}")
    vec = np.array([complex(re, im) for re, im in raw], dtype=np.complex128)
    norm = float(np.linalg.norm(vec))
    if abs(norm - 1.0) > 1e-6:
        raise ValueError(f"ket norm {norm!r} is too far from 1 to renormalize")
    return Fiducial(d=d, ket=canonical_ket(vec), source="ingested")


def write_fiducial_json(path, fid: Fiducial) -> None:
    with open(path, "w") as fh:
        json.dump(fid.to_json_dict(), fh)
        fh.write("\n")
