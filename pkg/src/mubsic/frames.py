"""Operator frames indexed by the dual affine plane: column-orthogonal
families of traceless Hermitian point operators, the line operators obtained
by summing over geometry lines, and the quasi-probability calculus they
induce.

A point frame of strength β satisfies, for traceless ops t_m^(j),

    tr(t_m^(j) t_m'^(j')) = 0            j ≠ j'
                          = β            j = j', m = m'
                          = −β/(d−1)     j = j', m ≠ m'

and the bridged line operators l_μ = Σ_{(m,j)∈μ} t_m^(j) then satisfy

    tr(l_μ l_μ') = α δ_μμ' − α/(d²−1)·(1 − δ_μμ'),   α = β(d+1).

Trace-one companions are τ = (1 + t)/d and λ = (1 + l)/d.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import HermitianOp, hs_inner
from .plane import Dapg
from .weyl import HGBasis, MubFamily, require_odd_prime, verify_mub

PointKey = tuple[int, int]   # (m, j), j ∈ 0..d
LineKey = tuple[int, int]    # (a, b)


@dataclass(frozen=True)
class SimplexVectors:
    """d unit-pattern vectors in R^(d−1) with constant mutual angle:
    v_m · v_m = (d−1)/2 and v_m · v_m' = −1/2 for m ≠ m'."""

    d: int
    vectors: np.ndarray

    def dot(self, m: int, m2: int) -> float:
        return float(self.vectors[m] @ self.vectors[m2])


def build_simplex_vectors(d: int) -> SimplexVectors:
    """Rows v_m interleave cos(2πkm/d), sin(2πkm/d) for k = 1..(d−1)/2."""
    d = require_odd_prime(d)
    half = (d - 1) // 2
    m = np.arange(d)[:, None]
    k = np.arange(1, half + 1)[None, :]
    angles = 2 * np.pi * k * m / d
    vectors = np.empty((d, d - 1))
    vectors[:, 0::2] = np.cos(angles)
    vectors[:, 1::2] = np.sin(angles)
    vectors.flags.writeable = False
    return SimplexVectors(d=d, vectors=vectors)


# --- frames ------------------------------------------------------------------


def _point_keys(d: int):
    return [(m, j) for j in range(d + 1) for m in range(d)]


def _line_keys(d: int):
    return [(a, b) for a in range(d) for b in range(d)]


@dataclass(frozen=True)
class PointFrame:
    """d(d+1) traceless point operators keyed (m, j), plus the strength β."""

    d: int
    beta: float
    ops: dict

    def t(self, m: int, j: int) -> HermitianOp:
        return self.ops[(m, j)]

    def tau(self, m: int, j: int) -> HermitianOp:
        """Trace-one companion (1 + t)/d."""
        return (1.0 / self.d) * (HermitianOp.identity(self.d) + self.ops[(m, j)])

    def keys(self) -> list[PointKey]:
        return _point_keys(self.d)


@dataclass(frozen=True)
class LineFrame:
    """d² traceless line operators keyed (a, b), plus the strength α."""

    d: int
    alpha: float
    ops: dict

    def l(self, a: int, b: int) -> HermitianOp:
        return self.ops[(a, b)]

    def lam(self, a: int, b: int) -> HermitianOp:
        """Trace-one companion (1 + l)/d."""
        return (1.0 / self.d) * (HermitianOp.identity(self.d) + self.ops[(a, b)])

    def keys(self) -> list[LineKey]:
        return _line_keys(self.d)


def point_frame_from_mub(mub: MubFamily, verify_tol: float = 1e-10) -> PointFrame:
    """Point frame t = d·|m;b⟩⟨m;b| − 1 from a complete unbiased family.

    Strength β = d(d−1).  The family is verified first and rejected if its
    overlap deviation exceeds ``verify_tol``.
    """
    d = mub.d
    if mub.n_bases != d + 1:
        raise ValueError(f"need a complete family of {d + 1} bases, got {mub.n_bases}")
    dev = verify_mub(mub)
    if dev > verify_tol:
        raise ValueError(f"basis family fails unbiasedness: deviation {dev:.3e}")
    eye = np.eye(d)
    ops = {}
    for j in range(d + 1):
        for m in range(d):
            ket = mub.bases[j, m]
            ops[(m, j)] = HermitianOp.from_matrix(d * np.outer(ket, ket.conj()) - eye)
    return PointFrame(d=d, beta=float(d * (d - 1)), ops=ops)


def point_frame_from_hg(basis: HGBasis, atol: float = 1e-12) -> PointFrame:
    """Point frame f_m^(j) = Σ_k [cos(2πkm/d) h_{j,k} + sin(2πkm/d) g_{j,k}].

    Requires the unit-normalized basis (|ζ|² = 1/(2d)); strength is then
    β = (d−1)/2, the minimal one realized by Hermitian operator frames here.
    """
    d = basis.d
    if abs(basis.zeta_modulus**2 - 1.0 / (2 * d)) > atol:
        raise ValueError(
            f"need |ζ|² = 1/(2d); got |ζ|² = {basis.zeta_modulus**2:.6e}"
        )
    simplex = build_simplex_vectors(d)
    half = (d - 1) // 2
    ops = {}
    for j in range(d + 1):
        for m in range(d):
            cosines = simplex.vectors[m, 0::2]
            sines = simplex.vectors[m, 1::2]
            mat = np.tensordot(cosines, basis.h[j], axes=1) + np.tensordot(
                sines, basis.g[j], axes=1
            )
            ops[(m, j)] = HermitianOp.from_matrix(mat)
    assert half * 2 == d - 1
    return PointFrame(d=d, beta=float((d - 1) / 2), ops=ops)


def with_beta(frame: PointFrame, beta: float) -> PointFrame:
    """Rescale a point frame to a new strength (ops scale by √(β/β_old))."""
    if beta <= 0 or frame.beta <= 0:
        raise ValueError("frame strengths must be positive")
    c = float(np.sqrt(beta / frame.beta))
    return PointFrame(
        d=frame.d, beta=float(beta), ops={k: c * op for k, op in frame.ops.items()}
    )


def line_ops_from_points(frame: PointFrame, geom: Dapg) -> LineFrame:
    """Bridge points to lines: l_μ = Σ_{(m,j)∈μ} t_m^(j); α = β(d+1)."""
    if frame.d != geom.d:
        raise ValueError(f"dimension mismatch: frame d={frame.d}, geometry d={geom.d}")
    ops = {}
    for ln in _line_keys(frame.d):
        total = HermitianOp.identity(frame.d) * 0.0
        for m, j in geom.points_on(ln):
            total = total + frame.t(m, j)
        ops[ln] = total
    return LineFrame(d=frame.d, alpha=float(frame.beta * (frame.d + 1)), ops=ops)


def point_ops_from_lines(frame: LineFrame, geom: Dapg) -> PointFrame:
    """Bridge lines back to points: t_m^(j) = (1/d) Σ_{μ∋(m,j)} l_μ."""
    if frame.d != geom.d:
        raise ValueError(f"dimension mismatch: frame d={frame.d}, geometry d={geom.d}")
    d = frame.d
    ops = {}
    for p in _point_keys(d):
        total = HermitianOp.identity(d) * 0.0
        for a, b in geom.lines_through(p):
            total = total + frame.l(a, b)
        ops[p] = (1.0 / d) * total
    return PointFrame(d=d, beta=float(frame.alpha / (d + 1)), ops=ops)


# --- verification ------------------------------------------------------------


def _gram(ops_in_order) -> np.ndarray:
    stack = np.stack([op.mat for op in ops_in_order])
    return np.einsum("aij,bji->ab", stack, stack).real


def verify_point_table(frame: PointFrame) -> float:
    """Max deviation of tr(t t') from {β; −β/(d−1); 0 across columns}."""
    d, beta = frame.d, frame.beta
    keys = frame.keys()
    gram = _gram(frame.ops[k] for k in keys)
    target = np.zeros_like(gram)
    for i, (m, j) in enumerate(keys):
        for i2, (m2, j2) in enumerate(keys):
            if j == j2:
                target[i, i2] = beta if m == m2 else -beta / (d - 1)
    return float(np.abs(gram - target).max())


def verify_line_table(frame: LineFrame) -> float:
    """Max deviation of tr(l l') from {α; −α/(d²−1)}."""
    d, alpha = frame.d, frame.alpha
    gram = _gram(frame.ops[k] for k in frame.keys())
    n = d * d
    target = np.full((n, n), -alpha / (d * d - 1))
    np.fill_diagonal(target, alpha)
    return float(np.abs(gram - target).max())


@dataclass
class PointLineReport:
    """Deviations of point-line products from the on/off-line constants.

    Traceless products tr(t l): β on-line, −β(d+1)/(d²−1) off-line.
    Trace-one products tr(τ λ): (d+β)/d² on-line, (d − β/(d−1))/d² off-line.
    """

    d: int
    beta: float
    max_dev_traceless: float
    max_dev_trace_one: float

    @property
    def max_dev(self) -> float:
        return max(self.max_dev_traceless, self.max_dev_trace_one)


def verify_point_line_products(
    points: PointFrame, lines: LineFrame, geom: Dapg
) -> PointLineReport:
    if not (points.d == lines.d == geom.d):
        raise ValueError("dimension mismatch between frames and geometry")
    d, beta = points.d, points.beta
    on_t = beta
    off_t = -beta * (d + 1) / (d * d - 1)
    on_tau = (d + beta) / d**2
    off_tau = (d - beta / (d - 1)) / d**2
    dev_t = 0.0
    dev_tau = 0.0
    for ln in lines.keys():
        members = set(geom.points_on(ln))
        l_op = lines.l(*ln)
        lam_op = lines.lam(*ln)
        for p in points.keys():
            on = p in members
            dev_t = max(dev_t, abs(hs_inner(points.t(*p), l_op) - (on_t if on else off_t)))
            dev_tau = max(
                dev_tau, abs(hs_inner(points.tau(*p), lam_op) - (on_tau if on else off_tau))
            )
    return PointLineReport(
        d=d, beta=beta, max_dev_traceless=dev_t, max_dev_trace_one=dev_tau
    )


# --- scaled line family and quasi-probabilities -------------------------------


def scaled_so(frame: LineFrame, atol: float = 1e-8) -> dict:
    """Unit-purity rescaling σ_μ = (1/d)(1 + √(2d/(d+1)) l_μ).

    Only defined at the minimal strength α = (d+1)(d−1)/2, where it gives
    tr σ² = 1 and tr(σ σ') = 1/(d+1) — unbiased-measurement geometry without
    positivity.
    """
    d = frame.d
    expected = (d + 1) * (d - 1) / 2.0
    if abs(frame.alpha - expected) > atol:
        raise ValueError(
            f"scaled family needs α = (d+1)(d−1)/2 = {expected}; got {frame.alpha}"
        )
    c = float(np.sqrt(2.0 * d / (d + 1)))
    eye = HermitianOp.identity(d)
    return {k: (1.0 / d) * (eye + c * frame.ops[k]) for k in frame.keys()}


def quasi_distribution(rho: HermitianOp, points: PointFrame, atol: float = 1e-10) -> dict:
    """Q_(m,j) = tr(τ_m^(j) ρ) over all points, for a unit-trace ρ.

    Columns each sum to 1; entries may be negative unless the τ are positive.
    """
    if rho.dim != points.d:
        raise ValueError(f"dimension mismatch: ρ is {rho.dim}, frame is {points.d}")
    if abs(rho.trace - 1.0) > atol:
        raise ValueError(f"ρ must have unit trace, got {rho.trace!r}")
    return {k: hs_inner(points.tau(*k), rho) for k in points.keys()}


def line_probabilities(q: dict, geom: Dapg) -> dict:
    """p_μ = (Σ_{(m,j)∈μ} Q_(m,j) − 1)/d for each line μ.

    Equals tr(λ_μ ρ)/d when Q came from the bridged point frame; sums to 1
    over all lines.
    """
    d = geom.d
    out = {}
    for ln in sorted({tuple(ln) for ln in geom.lines}):
        total = 0.0
        for p in geom.points_on(ln):
            total += q[p]
        out[ln] = (total - 1.0) / d
    return out


# --- serialization ------------------------------------------------------------
#
# Frame JSON: { "d": d, "beta"|"alpha": x, "ops": [operator, ...] } with ops
# listed (j major, m minor) for points and (a major, b minor) for lines.


def point_frame_to_json_dict(frame: PointFrame) -> dict:
    return {
        "d": frame.d,
        "beta": frame.beta,
        "ops": [frame.ops[k].to_json_dict() for k in frame.keys()],
    }


def line_frame_to_json_dict(frame: LineFrame) -> dict:
    return {
        "d": frame.d,
        "alpha": frame.alpha,
        "ops": [frame.ops[k].to_json_dict() for k in frame.keys()],
    }


def _frame_ops_from_json(obj: dict, n: int, keys) -> dict:
    raw = obj.get("ops")
    if not isinstance(raw, list) or len(raw) != n:
        raise ValueError(f"expected {n} ops, got {len(raw) if isinstance(raw, list) else raw!r}")
    return {k: HermitianOp.from_json_dict(o) for k, o in zip(keys, raw)}


def point_frame_from_json_dict(obj: dict) -> PointFrame:
    try:
        d = int(obj["d"])
        beta = float(obj["beta"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed point-frame object: {exc}") from exc
    keys = _point_keys(d)
    return PointFrame(d=d, beta=beta, ops=_frame_ops_from_json(obj, d * (d + 1), keys))


def line_frame_from_json_dict(obj: dict) -> LineFrame:
    try:
        d = int(obj["d"])
        alpha = float(obj["alpha"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed line-frame object: {exc}") from exc
    keys = _line_keys(d)
    return LineFrame(d=d, alpha=alpha, ops=_frame_ops_from_json(obj, d * d, keys))


def write_json(path, obj: dict) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh)
        fh.write("\n")


def read_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
