import numpy as np
import pytest

from helpers import random_density
from mubsic import siclab
from mubsic.frames import (
    LineFrame,
    build_simplex_vectors,
    line_ops_from_points,
    line_frame_from_json_dict,
    line_frame_to_json_dict,
    line_probabilities,
    point_frame_from_hg,
    point_frame_from_json_dict,
    point_frame_from_mub,
    point_frame_to_json_dict,
    point_ops_from_lines,
    quasi_distribution,
    scaled_so,
    verify_line_table,
    verify_point_line_products,
    verify_point_table,
    with_beta,
)
from mubsic.linalg import HermitianOp, hs_inner
from mubsic.plane import build_dapg
from mubsic.weyl import build_hg_basis, build_mub, build_weyl_pair, monomial


def mub_points(d):
    return point_frame_from_mub(build_mub(d))


def hg_points(d, phases=None):
    wp = build_weyl_pair(d)
    return point_frame_from_hg(build_hg_basis(wp, phases=phases))


# --- simplex vectors -----------------------------------------------------------


def test_simplex_qutrit():
    sv = build_simplex_vectors(3)
    assert sv.vectors.shape == (3, 2)
    for m in range(3):
        assert sv.dot(m, m) == pytest.approx(1.0, abs=1e-12)
        for m2 in range(m + 1, 3):
            assert sv.dot(m, m2) == pytest.approx(-0.5, abs=1e-12)


def test_simplex_self_dot():
    sv = build_simplex_vectors(5)
    for m in range(5):
        assert sv.dot(m, m) == pytest.approx(2.0, abs=1e-12)


def test_simplex_vectors_sum_to_zero():
    for d in (3, 5, 7):
        sv = build_simplex_vectors(d)
        assert np.abs(sv.vectors.sum(axis=0)).max() <= 1e-12


def test_simplex_rejects_even_and_composite():
    for bad in (2, 4, 9):
        with pytest.raises(ValueError):
            build_simplex_vectors(bad)


# --- point frames ----------------------------------------------------------------


def test_mub_frame_strength_and_overlaps():
    pf = mub_points(3)
    assert pf.beta == pytest.approx(6.0)
    # projectors: same point 1, same column 0, cross-column 1/d
    assert hs_inner(pf.tau(0, 0), pf.tau(0, 0)) == pytest.approx(1.0, abs=1e-12)
    assert hs_inner(pf.tau(0, 0), pf.tau(1, 0)) == pytest.approx(0.0, abs=1e-12)
    assert hs_inner(pf.tau(0, 0), pf.tau(0, 1)) == pytest.approx(1 / 3, abs=1e-12)
    assert hs_inner(pf.t(0, 0), pf.t(0, 0)) == pytest.approx(6.0, abs=1e-10)


def test_point_tables_small_primes():
    for d in (2, 3, 5, 7):
        assert verify_point_table(mub_points(d)) <= 1e-10
    for d in (3, 5, 7):
        assert verify_point_table(hg_points(d)) <= 1e-10


def test_columns_resolve_identity():
    for pf in (mub_points(3), hg_points(5)):
        d = pf.d
        eye = np.eye(d)
        for j in range(d + 1):
            total = sum(pf.tau(m, j).mat for m in range(d))
            assert np.abs(total - eye).max() <= 1e-12
            traceless = sum(pf.t(m, j).mat for m in range(d))
            assert np.abs(traceless).max() <= 1e-10


def test_hg_frame_strength_and_column_products():
    pf = hg_points(3)
    assert pf.beta == pytest.approx(1.0)
    for m in range(3):
        assert hs_inner(pf.t(m, 0), pf.t(m, 0)) == pytest.approx(1.0, abs=1e-10)
        for m2 in range(m + 1, 3):
            assert hs_inner(pf.t(m, 0), pf.t(m2, 0)) == pytest.approx(-0.5, abs=1e-10)
    assert hs_inner(pf.t(0, 0), pf.t(0, 1)) == pytest.approx(0.0, abs=1e-10)


def test_hg_frame_rejects_wrong_modulus():
    wp = build_weyl_pair(3)
    with pytest.raises(ValueError):
        point_frame_from_hg(build_hg_basis(wp, zeta_modulus=0.5))


def test_hg_frame_covariance():
    # Conjugating by (X†)^b Z^a sends the point (m, j) to (m ⊕ a ⊕ jb, j) for
    # j < d and to (m ⊕ b, d) in the clock column — the same index action
    # that maps the fiducial line across the dual plane.
    d = 3
    wp = build_weyl_pair(d)
    rng = np.random.default_rng(1)
    pf = hg_points(d, phases=rng.uniform(0, 2 * np.pi, size=(d + 1, 1)))
    for a in range(d):
        for b in range(d):
            u = np.linalg.matrix_power(wp.X.conj().T, b) @ monomial(wp, 0, a)
            for j in range(d + 1):
                for m in range(d):
                    m2 = (m + b) % d if j == d else (m + a + j * b) % d
                    got = u @ pf.t(m, j).mat @ u.conj().T
                    assert np.abs(got - pf.t(m2, j).mat).max() <= 1e-10


def test_with_beta_rescales():
    pf = with_beta(mub_points(3), 2.0)
    assert pf.beta == pytest.approx(2.0)
    assert verify_point_table(pf) <= 1e-10
    with pytest.raises(ValueError):
        with_beta(mub_points(3), -1.0)


# --- bridges ------------------------------------------------------------------------


def test_lines_from_mub_points_give_orthogonal_basis():
    for d in (2, 3, 5):
        lf = line_ops_from_points(mub_points(d), build_dapg(d))
        assert lf.alpha == pytest.approx(d * (d - 1) * (d + 1))
        assert verify_line_table(lf) <= 1e-10
        lams = [lf.lam(a, b).mat for a in range(d) for b in range(d)]
        for i, l1 in enumerate(lams):
            for i2, l2 in enumerate(lams):
                want = float(d) if i == i2 else 0.0
                assert np.trace(l1 @ l2).real == pytest.approx(want, abs=1e-10)


def test_line_sum_vanishes():
    for pf in (mub_points(3), hg_points(5), with_beta(mub_points(2), 0.7)):
        lf = line_ops_from_points(pf, build_dapg(pf.d))
        total = sum(lf.ops[k].mat for k in lf.keys())
        assert np.abs(total).max() <= 1e-10


def test_equal_overlap_strength_gives_uniform_gram():
    d = 3
    beta = d * (d - 1) / (d + 1)
    lf = line_ops_from_points(with_beta(mub_points(d), beta), build_dapg(d))
    lams = [lf.lam(a, b).mat for a in range(d) for b in range(d)]
    for i, l1 in enumerate(lams):
        for i2, l2 in enumerate(lams):
            want = 1.0 if i == i2 else 1 / (d + 1)
            assert np.trace(l1 @ l2).real == pytest.approx(want, abs=1e-10)


def test_points_from_lines_round_trip():
    d = 3
    pf = with_beta(mub_points(d), 2.0)
    geom = build_dapg(d)
    lf = line_ops_from_points(pf, geom)
    back = point_ops_from_lines(lf, geom)
    assert back.beta == pytest.approx(lf.alpha / (d + 1))
    assert back.beta == pytest.approx(2.0)
    for k in pf.keys():
        assert np.abs(back.ops[k].mat - pf.ops[k].mat).max() <= 1e-10


def test_points_from_zero_lines_are_maximally_mixed():
    d = 3
    zero = HermitianOp.from_matrix(np.zeros((d, d)))
    lf = LineFrame(d=d, alpha=0.0, ops={(a, b): zero for a in range(d) for b in range(d)})
    pf = point_ops_from_lines(lf, build_dapg(d))
    for k in pf.keys():
        assert np.abs(pf.ops[k].mat).max() == 0.0
        assert np.abs(pf.tau(*k).mat - np.eye(d) / d).max() <= 1e-15


def test_bridge_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        line_ops_from_points(mub_points(3), build_dapg(5))


# --- point-line product tables --------------------------------------------------------


def test_products_for_basis_strength():
    for d in (2, 3, 5):
        pf = mub_points(d)
        geom = build_dapg(d)
        lf = line_ops_from_points(pf, geom)
        report = verify_point_line_products(pf, lf, geom)
        assert report.max_dev <= 1e-10
        # with β = d(d−1) the trace-one products are exactly 1 on-line, 0 off
        lam = lf.lam(0, 0)
        on = {p: hs_inner(pf.tau(*p), lam) for p in geom.points_on((0, 0))}
        assert all(abs(v - 1.0) <= 1e-10 for v in on.values())


def test_products_at_equal_overlap_strength():
    d = 3
    beta = d * (d - 1) / (d + 1)  # 3/2
    pf = with_beta(mub_points(d), beta)
    geom = build_dapg(d)
    lf = line_ops_from_points(pf, geom)
    report = verify_point_line_products(pf, lf, geom)
    assert report.max_dev <= 1e-10
    on_value = (d + beta) / d**2
    assert on_value == pytest.approx(0.5)
    lam = lf.lam(1, 2)
    p_on = geom.points_on((1, 2))[0]
    assert hs_inner(pf.tau(*p_on), lam) == pytest.approx(0.5, abs=1e-10)


def test_on_off_product_gap():
    # on-line minus off-line trace-one product is always β·d/((d−1)d²)
    d, beta = 3, 2.2
    pf = with_beta(mub_points(d), beta)
    geom = build_dapg(d)
    lf = line_ops_from_points(pf, geom)
    lam = lf.lam(0, 1)
    members = set(geom.points_on((0, 1)))
    on = hs_inner(pf.tau(*next(iter(members))), lam)
    off_point = next(p for p in pf.keys() if p not in members)
    off = hs_inner(pf.tau(*off_point), lam)
    assert on - off == pytest.approx(beta * d / ((d - 1) * d**2), abs=1e-10)


# --- unit-purity rescaling --------------------------------------------------------------


def test_scaled_family_gram():
    for d in (3, 5, 7):
        lf = line_ops_from_points(hg_points(d), build_dapg(d))
        assert lf.alpha == pytest.approx((d + 1) * (d - 1) / 2)
        sig = scaled_so(lf)
        mats = [sig[k].mat for k in lf.keys()]
        for m in mats:
            assert np.trace(m).real == pytest.approx(1.0, abs=1e-12)
        for i, m1 in enumerate(mats):
            for i2, m2 in enumerate(mats):
                want = 1.0 if i == i2 else 1 / (d + 1)
                assert np.trace(m1 @ m2).real == pytest.approx(want, abs=1e-10)


def test_scaled_family_rejects_other_strengths():
    lf = line_ops_from_points(mub_points(3), build_dapg(3))
    with pytest.raises(ValueError):
        scaled_so(lf)


# --- quasi-probabilities ----------------------------------------------------------------


def test_uniform_state_is_flat():
    d = 3
    pf = mub_points(d)
    rho = (1.0 / d) * HermitianOp.identity(d)
    q = quasi_distribution(rho, pf)
    assert all(abs(v - 1 / d) <= 1e-12 for v in q.values())
    geom = build_dapg(d)
    p = line_probabilities(q, geom)
    assert all(abs(v - 1 / d**2) <= 1e-12 for v in p.values())


def test_column_sums_are_one():
    rng = np.random.default_rng(2)
    d = 5
    pf = hg_points(d)
    rho = random_density(rng, d)
    q = quasi_distribution(rho, pf)
    for j in range(d + 1):
        assert sum(q[(m, j)] for m in range(d)) == pytest.approx(1.0, abs=1e-10)


def test_line_sum_identity_random_states():
    rng = np.random.default_rng(3)
    d = 5
    pf = mub_points(d)
    geom = build_dapg(d)
    lf = line_ops_from_points(pf, geom)
    for _ in range(10):
        rho = random_density(rng, d)
        p = line_probabilities(quasi_distribution(rho, pf), geom)
        for (a, b), value in p.items():
            direct = hs_inner(lf.lam(a, b), rho) / d
            assert value == pytest.approx(direct, abs=1e-12)
        assert sum(p.values()) == pytest.approx(1.0, abs=1e-12)


def test_quasi_distribution_rejects_bad_trace():
    pf = mub_points(2)
    with pytest.raises(ValueError):
        quasi_distribution(HermitianOp.identity(2), pf)


def test_quasi_distribution_on_sic_lines_is_nonnegative():
    fam = siclab.generate_hw_sic(siclab.qutrit_fiducial())
    d = 3
    lf = LineFrame(
        d=d,
        alpha=float(d * (d - 1)),
        ops={k: d * fam.projectors[k] - HermitianOp.identity(d) for k in fam.keys()},
    )
    geom = build_dapg(d)
    pf = point_ops_from_lines(lf, geom)
    rng = np.random.default_rng(4)
    rho = random_density(rng, d)
    p = line_probabilities(quasi_distribution(rho, pf), geom)
    assert all(v >= -1e-12 for v in p.values())
    assert sum(p.values()) == pytest.approx(1.0, abs=1e-12)


# --- serialization -----------------------------------------------------------------------


def test_point_frame_json_round_trip():
    pf = mub_points(3)
    back = point_frame_from_json_dict(point_frame_to_json_dict(pf))
    assert back.d == 3 and back.beta == pytest.approx(pf.beta)
    for k in pf.keys():
        assert np.abs(back.ops[k].mat - pf.ops[k].mat).max() <= 1e-15


def test_line_frame_json_round_trip():
    lf = line_ops_from_points(hg_points(3), build_dapg(3))
    back = line_frame_from_json_dict(line_frame_to_json_dict(lf))
    assert back.d == 3 and back.alpha == pytest.approx(lf.alpha)
    for k in lf.keys():
        assert np.abs(back.ops[k].mat - lf.ops[k].mat).max() <= 1e-15
