"""Pre-Lagrangian constructions and the loop straightening procedure."""

import numpy as np
import pytest

from openbooks.contact import coordinate_open_book, quadric_open_book
from openbooks.errors import DomainError, OffManifold
from openbooks.forms import constant_field
from openbooks.manifolds import Submanifold, sample
from openbooks.prelagrangian import (Loop, binding_torus_prelagrangian,
                                     hopf_circle_submanifold,
                                     legendrian_check, loop_integral,
                                     real_circle_submanifold,
                                     real_circle_torus_prelagrangian,
                                     restricted_form_values, straighten_loop,
                                     verify_prelagrangian)

PHI1_FIELD = constant_field(6, [0, 0, 0, 0, 1, 0])


def _desk_loop(wobble=0.5):
    def gamma(t):
        return np.array([np.cos(t), 0.0, np.sin(t), 0.0,
                         t + wobble * np.sin(t), 0.0])

    return gamma


# ---------------------------------------------------------------------------
# pre-Lagrangians


def test_circle_torus_is_prelagrangian():
    pl = real_circle_torus_prelagrangian()
    pts = sample(pl.submanifold, 400, seed=1)
    report = verify_prelagrangian(pl, pts, tol=1e-7)
    assert report.passed
    assert report.max_residual < 1e-7


def test_circle_torus_restriction_is_dphi1():
    # oracle: direct evaluation on the three tangent directions; on L the
    # rescaled form has f_x / fhat_x = 1, f_y = 0 and alpha_0|TL = 0
    pl = real_circle_torus_prelagrangian()
    pts = sample(pl.submanifold, 100, seed=2)
    bases, vals = restricted_form_values(pl, pts)
    np.testing.assert_allclose(vals, bases[:, :, 4], atol=1e-12)


def test_binding_torus_is_prelagrangian():
    pl = binding_torus_prelagrangian()
    pts = sample(pl.submanifold, 400, seed=3)
    report = verify_prelagrangian(pl, pts, tol=1e-7)
    assert report.passed


def test_binding_torus_beta_part_vanishes_exactly():
    # both components of f vanish along K x T^2; with the parametrized
    # binding sampler the cancellation is exact in floating point
    pl = binding_torus_prelagrangian()
    pts = sample(pl.submanifold, 300, seed=4)
    rep = quadric_open_book(2)
    assert np.max(np.abs(rep.f.value(pts[:, :4]))) == 0.0
    e_phi = np.zeros((2, 6))
    e_phi[0, 4] = 1.0
    e_phi[1, 5] = 1.0
    from openbooks.bourgeois import bourgeois_form
    beta = bourgeois_form(rep).beta
    for v in e_phi:
        vals = np.array([beta(p, v) for p in pts])
        assert np.max(np.abs(vals)) == 0.0


def test_wrong_dimension_fixture_fails():
    pl = real_circle_torus_prelagrangian()

    def constraints(p):
        base = pl.submanifold.constraints(p)
        return np.concatenate([base, p[..., 5:6]], axis=-1)

    def sampler(rng, count):
        pts = pl.submanifold.sampler(rng, count)
        pts[:, 5] = 0.0
        return pts

    wrong = Submanifold(6, constraints, 4, name="L x S^1",
                        periodic_mask=pl.submanifold.periodic_mask,
                        orientation=None, sampler=sampler)
    from openbooks.prelagrangian import PreLagrangian
    fixture = PreLagrangian(wrong, pl.ambient_contact, pl.alpha_hat,
                            name="wrong dimension")
    pts = sample(wrong, 100, seed=5)
    report = verify_prelagrangian(fixture, pts)
    assert not report.passed
    assert "VIOLATED" in report.note


# ---------------------------------------------------------------------------
# Legendrian checks


def test_real_circle_is_legendrian_in_zero_page():
    rep = quadric_open_book(2)
    l_sub = real_circle_submanifold()
    pts = sample(l_sub, 200, seed=6)
    report = legendrian_check(l_sub, rep, pts)
    assert report.passed
    # alpha_0 on real tangent vectors at real points vanishes identically
    named = {d.name: d for d in report.details}
    assert named["alpha_vanishing"].max_residual < 1e-15
    # f = 1 on the real circle, so theta is constant 0
    np.testing.assert_allclose(rep.f.value(pts), 1.0, atol=1e-12)


def test_hopf_fixture_fails_alpha_vanishing():
    rep = quadric_open_book(2)
    hopf = hopf_circle_submanifold()
    pts = sample(hopf, 200, seed=7)
    report = legendrian_check(hopf, rep, pts)
    assert not report.passed
    named = {d.name: d for d in report.details}
    assert named["alpha_vanishing"].max_residual > 0.4


def test_binding_circle_fails_page_containment():
    rep = coordinate_open_book(2)

    def constraints(p):
        return np.stack([np.sum(p * p, axis=-1) - 1.0, p[..., 0],
                         p[..., 1]], axis=-1)

    k_circle = Submanifold(4, constraints, 3, name="binding circle",
                           orientation=None,
                           sampler=rep.binding.sampler)
    pts = sample(k_circle, 100, seed=8)
    report = legendrian_check(k_circle, rep, pts)
    assert not report.passed
    named = {d.name: d for d in report.details}
    assert named["page_containment"].min_margin == 0.0


# ---------------------------------------------------------------------------
# straightening


def test_straighten_desk_loop():
    pl = real_circle_torus_prelagrangian()
    loop = Loop.from_function(_desk_loop(), 2048,
                              pl.submanifold.periodic_mask)
    out, report = straighten_loop(loop, pl, PHI1_FIELD)
    assert report.passed
    named = {d.name: d for d in report.details}
    assert named["transverse_speed"].max_residual < 1e-5
    assert named["integral_conserved"].max_residual < 1e-6
    # oracle: quadrature of the output loop gives the same C = 2 pi and a
    # uniform speed C / (2 pi) = 1
    c_out, g_out, _ = loop_integral(pl, out)
    np.testing.assert_allclose(c_out, 2 * np.pi, atol=1e-9)
    np.testing.assert_allclose(g_out, 1.0, atol=1e-7)
    # f(t) = -0.5 sin t for this loop, so the angle is straightened to t
    t = np.linspace(0, 2 * np.pi, 2049)[:-1]
    np.testing.assert_allclose(out.values[:-1, 4], t, atol=1e-7)


def test_already_transverse_loop_is_fixed():
    pl = real_circle_torus_prelagrangian()
    loop = Loop.from_function(_desk_loop(wobble=0.0), 2048,
                              pl.submanifold.periodic_mask)
    out, report = straighten_loop(loop, pl, PHI1_FIELD)
    assert report.passed
    assert np.max(np.abs(out.values - loop.values)) < 1e-12


def test_negative_integral_rejected():
    pl = real_circle_torus_prelagrangian()

    def backwards(t):
        return np.array([np.cos(t), 0.0, np.sin(t), 0.0, -t, 0.0])

    loop = Loop.from_function(backwards, 1024,
                              pl.submanifold.periodic_mask)
    with pytest.raises(DomainError):
        straighten_loop(loop, pl, PHI1_FIELD)


def test_bad_field_rejected():
    pl = real_circle_torus_prelagrangian()
    loop = Loop.from_function(_desk_loop(), 1024,
                              pl.submanifold.periodic_mask)
    # not alpha_hat(Y) = 1
    with pytest.raises(DomainError):
        straighten_loop(loop, pl, constant_field(6, [1, 0, 0, 0, 0, 0]))
    # alpha_hat(Y) = 1 along the loop (the radial direction pairs to zero
    # with alpha_0 at real points) but the flow leaves P
    def off_p(p):
        out = np.zeros_like(p)
        out[..., 4] = 1.0
        out[..., 0] = 0.5
        return out

    from openbooks.forms import VecField
    with pytest.raises(OffManifold):
        straighten_loop(loop, pl, VecField(6, off_p))


def test_open_loop_rejected():
    pl = real_circle_torus_prelagrangian()

    def arc(t):
        return np.array([np.cos(t / 2), 0.0, np.sin(t / 2), 0.0, t, 0.0])

    loop = Loop.from_function(arc, 512, pl.submanifold.periodic_mask)
    with pytest.raises(DomainError):
        straighten_loop(loop, pl, PHI1_FIELD)


def test_loop_derivative_stencil_accuracy():
    pl = real_circle_torus_prelagrangian()
    loop = Loop.from_function(_desk_loop(), 2048,
                              pl.submanifold.periodic_mask)
    der = loop.derivatives()
    t = np.linspace(0, 2 * np.pi, 2049)[:-1]
    exact = np.stack([-np.sin(t), np.zeros_like(t), np.cos(t),
                      np.zeros_like(t), 1 + 0.5 * np.cos(t),
                      np.zeros_like(t)], axis=-1)
    assert np.max(np.abs(der - exact)) < 1e-10
