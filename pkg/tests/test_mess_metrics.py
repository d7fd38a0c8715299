import numpy as np
import pytest

from adsgeo import embedding as emb
from adsgeo import mess_metrics as mm
from adsgeo.errors import TransferPreconditionError
from adsgeo.fd import DiffConfig


def test_zero_shape_operator_gives_base_metric():
    F = emb.make_immersion("totally_geodesic")
    d = emb.embedding_data_at(F, [0.2, -0.4])
    for sign in (+1, -1):
        assert np.allclose(mm.mess_metric(d, sign), d.I, atol=1e-12)


def test_family_left_metric_is_base_hyperbolic(rng):
    # I#_+ = I((E + tan(s) J)., same) cancels the cos^2 factor exactly
    for s in (-0.2, -0.7, -1.2):
        F = emb.family_immersion(s)
        u = rng.uniform(-0.8, 0.8, 2)
        d = emb.embedding_data_at(F, u)
        g = emb.hyperbolic_metric(u)
        assert np.abs(mm.mess_metric(d, +1) - g).max() < 1e-8
        assert np.abs(mm.mess_metric(d, -1) - g).max() < 1e-8


def test_family_left_equals_right(rng):
    F = emb.family_immersion(-0.5)
    u = rng.uniform(-0.8, 0.8, 2)
    d = emb.embedding_data_at(F, u)
    assert np.abs(mm.mess_metric(d, +1) - mm.mess_metric(d, -1)).max() < 1e-9


def test_plus_minus_differ_iff_umbilic(bump):
    # umbilic: B commutes with J, the two metrics coincide
    F = emb.family_immersion(-0.7)
    d = emb.embedding_data_at(F, [0.3, 0.2])
    assert np.abs(mm.mess_metric(d, +1) - mm.mess_metric(d, -1)).max() < 1e-9
    db = emb.embedding_data_at(bump, [0.3, 0.2])
    assert np.abs(mm.mess_metric(db, +1) - mm.mess_metric(db, -1)).max() > 1e-4


def test_surface_independence_across_family(rng):
    fa = emb.family_immersion(-0.2)
    fb = emb.family_immersion(-1.2)
    for _ in range(5):
        u = rng.uniform(-0.8, 0.8, 2)
        a = mm.mess_metric(emb.embedding_data_at(fa, u), +1)
        b = mm.mess_metric(emb.embedding_data_at(fb, u), +1)
        assert np.abs(a - b).max() < 1e-6


def test_sharp_frame_trivial_when_b_zero():
    F = emb.make_immersion("totally_geodesic")
    u = np.array([0.25, 0.1])
    frame = mm.sharp_frame(F, u)
    d = emb.embedding_data_at(F, u)
    assert np.allclose(frame.I_sharp, d.I, atol=1e-10)
    assert np.allclose(frame.J_sharp, d.J, atol=1e-10)
    assert frame.K_sharp == pytest.approx(-1.0, abs=1e-6)
    gamma_base = emb.christoffels(emb.metric_field(F), u, DiffConfig().field)
    assert np.abs(frame.christoffels - gamma_base).max() < 1e-8


def test_sharp_curvature_minus_one(bump, rng):
    for immersion, tol in ((emb.family_immersion(-0.7), 1e-6), (bump, 1e-5)):
        _, worst = mm.verify_left_metric_hyperbolic(
            immersion, rng.uniform(-0.8, 0.8, size=(10, 2)))
        assert worst < tol


def test_sharp_curvature_totally_geodesic_plane(rng):
    # B = 0 makes det(E + JB) exactly 1, so K# inherits only the curvature
    # measurement error of the difference scheme
    F = emb.make_immersion("totally_geodesic")
    _, worst = mm.verify_left_metric_hyperbolic(F, rng.uniform(-0.8, 0.8, (5, 2)))
    assert worst < 1e-6


def test_sharp_frame_family_j_preserved(rng):
    # E + tan(s) J commutes with J, so J# = J on the family
    F = emb.family_immersion(-0.9)
    u = rng.uniform(-0.8, 0.8, 2)
    frame = mm.sharp_frame(F, u)
    d = emb.embedding_data_at(F, u)
    assert np.abs(frame.J_sharp - d.J).max() < 1e-9


def test_sharp_structure_identities(bump):
    frame = mm.sharp_frame(bump, [0.2, -0.3])
    j = frame.J_sharp
    assert np.abs(j @ j + np.eye(2)).max() < 1e-10
    assert np.abs(j.T @ frame.I_sharp @ j - frame.I_sharp).max() < 1e-10
    assert frame.da_sharp == pytest.approx(np.sqrt(np.linalg.det(frame.I_sharp)))


def test_sharp_connection_metric_and_torsion_free(bump):
    for u in ([0.25, -0.4], [0.0, 0.3]):
        assert mm.sharp_metric_derivative_residual(bump, u) < 1e-6
        assert mm.sharp_torsion_residual(bump, u) < 1e-6


def test_sharp_connection_residual_convergence(bump):
    u = np.array([0.15, 0.05])
    errs = []
    for factor in (1.0, 0.5):
        cfg = DiffConfig(field_step=0.1 * factor, richardson=False)
        errs.append(mm.sharp_metric_derivative_residual(bump, u, cfg=cfg))
    assert np.log2(errs[0] / errs[1]) > 1.7


def test_transfer_precondition_detector():
    # an immersion-free frame cannot be built from non-Codazzi data; fake it
    # by perturbing the fixture evaluator off the quadric-compatible family

    def crooked(u):
        y = emb.hyperboloid_point(u)
        t = -0.5 + 0.2 * np.sin(2.0 * u[0]) * np.sin(2.0 * u[1])
        return np.array([np.cos(t) * y[0], np.cos(t) * y[1], np.cos(t) * y[2],
                         np.sin(t)])

    F = emb.Immersion("crooked", crooked)
    # the surface is fine (it satisfies Codazzi), so the frame must build
    frame = mm.sharp_frame(F, [0.1, 0.2])
    assert frame.codazzi_residual < 1e-4

    # a genuinely broken operator field trips the guard inside the residual
    g_field = emb.metric_field(F)

    def broken_a(w):
        return np.eye(2) + 0.3 * np.array([[np.sin(4 * w[0]), 0.0],
                                           [w[1], np.cos(3 * w[1])]])

    resid = emb.codazzi_residual_fields(g_field, broken_a, [0.1, 0.2],
                                        DiffConfig().field)
    assert resid > mm.TRANSFER_CODAZZI_TOL
