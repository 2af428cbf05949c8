"""Completions, model identifications, the trivial-monodromy
hypersurface, Weinstein checks and the subcritical coordinate change."""

import numpy as np
import pytest

from openbooks.contact import verify_adapted, verify_contact, \
    verify_representation
from openbooks.errors import DomainError
from openbooks.liouville import (angle_spinning_field, averaged_domain,
                                 completion_check,
                                 complex_plane_weinstein,
                                 disk_bundle_domain, hypersurface_build,
                                 identification_check,
                                 interior_identification, lyapunov_ratio,
                                 page_volume_identity, quartic_disk_domain,
                                 subcritical_check, subcritical_coordinates,
                                 subcritical_map, torus_cotangent_weinstein,
                                 weinstein_check, weinstein_disk_domain)
from openbooks.manifolds import rng_for, sample
from openbooks.monodromy import (flow, spinning_definition_check,
                                 spinning_field)


def _disk_boundary(m, count, seed):
    rng = rng_for(seed)
    b = rng.normal(size=(count, m))
    return b / np.linalg.norm(b, axis=-1, keepdims=True)


# ---------------------------------------------------------------------------
# completion


def test_quartic_disk_completion_values():
    ld = quartic_disk_domain(2)
    pts = sample(ld.manifold, 400, seed=1)
    # du(X) = -2 |z|^4 for u = 1 - |z|^4 and the radial half field
    np.testing.assert_allclose(ld.du_along_field(pts),
                               -2.0 * np.sum(pts ** 2, axis=-1) ** 2,
                               atol=1e-12)
    boundary = _disk_boundary(4, 100, seed=2)
    np.testing.assert_allclose(ld.du_along_field(boundary), -2.0,
                               atol=1e-12)
    center = np.zeros((1, 4))
    assert ld.du_along_field(center)[0] == 0.0 and ld.u(center)[0] == 1.0
    report = completion_check(ld, pts, boundary)
    assert report.passed


def test_disk_bundle_completion():
    ld = disk_bundle_domain(2)
    pts = sample(ld.manifold, 400, seed=3)
    # -2|p|^2 < 1 - |p|^2 on |p| < 1: margin is 1 + |p|^2 > 0
    margin = ld.u(pts) - ld.du_along_field(pts)
    np.testing.assert_allclose(
        margin, 1.0 + np.sum(pts[:, 2:] ** 2, axis=-1), atol=1e-12)
    boundary = pts[:80].copy()
    boundary[:, 2:] /= np.linalg.norm(boundary[:, 2:], axis=-1,
                                      keepdims=True)
    report = completion_check(ld, pts, boundary)
    assert report.passed


def test_completion_convexity():
    # oracle: if u_1 and u_2 are admissible so is their average, checked
    # at the same samples
    quartic = quartic_disk_domain(2)
    from openbooks.liouville import LiouvilleDomain
    quadratic = LiouvilleDomain(
        quartic.manifold, quartic.lambda_c, quartic.liouville_field,
        lambda p: 1.0 - np.sum(p * p, axis=-1),
        lambda p: -2.0 * p, name="quadratic disk")
    pts = sample(quartic.manifold, 300, seed=4)
    boundary = _disk_boundary(4, 80, seed=5)
    for ld in (quartic, quadratic, averaged_domain(quartic, quadratic)):
        assert completion_check(ld, pts, boundary).passed


# ---------------------------------------------------------------------------
# interior identifications


def test_disk_identification_center_and_radius():
    assert np.all(interior_identification("disk", np.zeros((1, 4))) == 0.0)
    z = np.zeros((1, 4))
    z[0, 0] = 0.7
    out = interior_identification("disk", z)
    np.testing.assert_allclose(out[0, 0],
                               0.7 / np.sqrt(1 - 0.7 ** 4), atol=1e-14)


def test_disk_identification_pullback():
    ld = quartic_disk_domain(2)
    pts = sample(ld.manifold, 400, seed=6)
    report = identification_check("disk", ld, pts[ld.u(pts) > 0.05])
    assert report.passed and report.max_residual < 1e-8


def test_bundle_identification_pullback():
    ld = disk_bundle_domain(2)
    pts = sample(ld.manifold, 400, seed=7)
    report = identification_check("disk_bundle", ld,
                                  pts[ld.u(pts) > 0.05])
    assert report.passed and report.max_residual < 1e-8


def test_identification_rejects_boundary():
    boundary = _disk_boundary(4, 3, seed=8)
    with pytest.raises(DomainError):
        interior_identification("disk", boundary)
    with pytest.raises(DomainError):
        interior_identification("unknown", boundary)


# ---------------------------------------------------------------------------
# trivial-monodromy hypersurface


@pytest.fixture(scope="module")
def hypersurface():
    return hypersurface_build(weinstein_disk_domain())


def test_hypersurface_is_three_manifold(hypersurface):
    assert hypersurface.manifold.dim == 3
    assert hypersurface.transversality_margin > 1e-3
    pts = sample(hypersurface.manifold, 2000, seed=9)
    report = verify_contact(hypersurface.rep.contact, pts, tolerance=1e-3)
    assert report.passed


def test_hypersurface_representation_suite(hypersurface):
    rep = hypersurface.rep
    pts = sample(rep.manifold, 500, seed=10)
    bind = sample(rep.binding, 100, seed=11)
    report = verify_representation(rep, pts, bind)
    assert report.passed, [(d.name, d.min_margin) for d in report.details]
    assert verify_adapted(rep.contact, rep.f, pts, bind,
                          tolerance=1e-3).passed


def test_hypersurface_binding_is_boundary_circle(hypersurface):
    bind = sample(hypersurface.rep.binding, 100, seed=12)
    np.testing.assert_allclose(np.linalg.norm(bind[:, :2], axis=-1), 1.0,
                               atol=1e-12)
    np.testing.assert_allclose(bind[:, 2:], 0.0, atol=1e-15)


def test_hypersurface_spinning_field(hypersurface):
    rep = hypersurface.rep
    pts = sample(rep.manifold, 600, seed=13)
    off = pts[rep.f.modulus(pts) > 1e-2][:200]
    y = angle_spinning_field(rep)
    report = spinning_definition_check(rep, y, off)
    assert report.passed
    # the angle field differs from the kernel-normalized solve (it is the
    # trivial-monodromy representative), but both satisfy the pairing row
    solved = spinning_field(rep, off[:20])
    mu = rep.f.mu_form()
    vals = np.array([mu(off[i], solved[i]) for i in range(20)])
    np.testing.assert_allclose(
        vals, 2 * np.pi * rep.f.modulus(off[:20]) ** 2, rtol=1e-8)


def test_hypersurface_identity_monodromy(hypersurface):
    rep = hypersurface.rep
    pts = sample(rep.manifold, 200, seed=14)
    off = pts[rep.f.modulus(pts) > 1e-2][:50]
    end = flow(angle_spinning_field(rep), off, 1.0, 1e-3)
    assert np.max(np.abs(end - off)) < 1e-7
    # the exact rotation by 2 pi is the identity outright
    angle = 2 * np.pi
    rot = off.copy()
    rot[:, 2] = np.cos(angle) * off[:, 2] - np.sin(angle) * off[:, 3]
    rot[:, 3] = np.sin(angle) * off[:, 2] + np.cos(angle) * off[:, 3]
    np.testing.assert_allclose(rot, off, atol=1e-15)


def test_page_volume_identity_two_sided():
    ld = weinstein_disk_domain()
    pts = sample(ld.manifold, 500, seed=15)
    report = page_volume_identity(ld, pts)
    assert report.passed and report.max_residual < 1e-8
    # oracle: both sides equal (u - du(X)/2) d(lambda) with
    # d(lambda) = da^db; at the center this is u * (d lambda)
    center = np.zeros((1, 2))
    from openbooks.forms import ext_deriv
    dlam = ext_deriv(ld.lambda_c)
    base = np.array([[[1.0, 0.0], [0.0, 1.0]]])
    lhs = (np.sqrt(ld.u(center)) ** 3
           * ext_deriv(
               __import__("openbooks.forms", fromlist=["scale_form"])
               .scale_form(lambda p: 1 / np.sqrt(ld.u(p)), ld.lambda_c))
           .at_basis(center, base))
    np.testing.assert_allclose(lhs, ld.u(center) * dlam.at_basis(
        center, base), atol=1e-8)


def test_page_volume_near_boundary_margin():
    ld = weinstein_disk_domain()
    rng = rng_for(16)
    ang = rng.uniform(0, 2 * np.pi, 100)
    r = np.sqrt(1.0 - 0.06)
    pts = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)
    report = page_volume_identity(ld, pts, interior_band=0.05)
    # near the boundary the margin approaches |du(X)|/2 = r^2 > 0
    assert report.passed
    np.testing.assert_allclose(report.min_margin,
                               ld.u(pts)[0] + r * r / 1.0 - r * r / 2.0,
                               atol=1e-9)


# ---------------------------------------------------------------------------
# Weinstein checks


def test_complex_plane_ratio_is_four_seventeenths():
    # oracle: scalar minimization of df(X) / (|X|^2 + |df|^2) on the
    # annulus; the ratio is constant 4/17
    w = complex_plane_weinstein()
    pts = sample(w.manifold, 500, seed=17)
    ratio = lyapunov_ratio(w, pts)
    np.testing.assert_allclose(ratio, 4.0 / 17.0, atol=1e-12)
    assert weinstein_check(w, pts, delta=0.2).passed


def test_torus_cotangent_ratio_is_two_fifths():
    w = torus_cotangent_weinstein()
    pts = sample(w.manifold, 500, seed=18)
    ratio = lyapunov_ratio(w, pts)
    np.testing.assert_allclose(ratio, 0.4, atol=1e-12)
    assert weinstein_check(w, pts, delta=0.4).passed
    assert not weinstein_check(w, pts, delta=0.41).passed


def test_zero_field_fixture_fails():
    from openbooks.forms import VecField
    from openbooks.liouville import WeinsteinStructure
    base = torus_cotangent_weinstein()
    broken = WeinsteinStructure(
        base.manifold, base.omega, VecField(4, lambda p: np.zeros_like(p)),
        base.lyapunov, base.dlyapunov, base.lam, name="zero field")
    pts = sample(base.manifold, 200, seed=19)
    report = weinstein_check(broken, pts, delta=0.1)
    assert not report.passed


# ---------------------------------------------------------------------------
# subcritical coordinates


def test_subcritical_map_at_origin():
    p = np.array([0.0, 0.0, 0.0, 0.0, 1.2, 0.7])
    out = subcritical_coordinates(p)
    np.testing.assert_allclose(out, [0.0, 0.0, -1.2, 0.7, 0.0, 0.0],
                               atol=1e-15)


def test_subcritical_identities():
    rng = rng_for(20)
    pts = np.concatenate([rng.normal(size=(1000, 4)),
                          rng.uniform(0, 2 * np.pi, size=(1000, 2))],
                         axis=-1)
    report = subcritical_check(pts)
    assert report.passed
    named = {d.name: d for d in report.details}
    assert named["one_form_pullback"].max_residual <= 1e-10
    assert named["lyapunov_pullback"].max_residual == 0.0
    assert "winner: minus" in named["one_form_pullback"].note
    assert "-1" in named["slice_measure"].note


def test_subcritical_jacobian_determinant():
    phi = subcritical_map(2)
    jac = phi.jacobian(np.zeros((1, 6)))[0]
    assert abs(np.linalg.det(jac[2:, 2:])) == 1.0
    np.testing.assert_allclose(np.linalg.det(jac[2:, 2:]), -1.0)


def test_lyapunov_pullback_componentwise():
    # x^2 + y^2 = p_1^2 + p_2^2 exactly: the map copies the coordinates
    rng = rng_for(21)
    pts = np.concatenate([rng.normal(size=(50, 4)),
                          rng.uniform(0, 2 * np.pi, size=(50, 2))],
                         axis=-1)
    out = subcritical_coordinates(pts)
    assert np.array_equal(out[:, 4], pts[:, 2])
    assert np.array_equal(out[:, 5], pts[:, 3])


def test_smooth_page_embedding(hypersurface):
    # the collar-reparametrized embedding lands on V, is smooth up to the
    # boundary (bounded radial derivative of the fiber radius, unlike the
    # naive sqrt(u) embedding), and pulls alpha/|z| back to the
    # reparametrized page Liouville form
    from openbooks.forms import pullback, scale_form
    from openbooks.liouville import smooth_page_embedding
    ld = weinstein_disk_domain()
    phi, u_tilde, reparam = smooth_page_embedding(ld, theta=0.0)

    rng = rng_for(22)
    ang = rng.uniform(0, 2 * np.pi, 200)
    r = np.sqrt(rng.uniform(0, 1, 200))
    pts = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)
    image = phi(pts)
    assert np.max(hypersurface.manifold.residual(image)) < 1e-12

    # one-sided radial derivative of the fiber radius stays bounded at
    # the boundary; for sqrt(u) itself it blows up like 1/sqrt(1-r)
    t = np.array([1e-2, 1e-3, 1e-4, 1e-5])
    edge = np.stack([1.0 - t, np.zeros_like(t)], axis=-1)
    closer = np.stack([1.0 - t / 2, np.zeros_like(t)], axis=-1)
    slope = (u_tilde(edge) - u_tilde(closer)) / (t / 2)
    assert np.all(np.abs(slope) < 2.0)
    naive = (np.sqrt(ld.u(edge)) - np.sqrt(ld.u(closer))) / (t / 2)
    assert np.abs(naive[-1]) > 50.0

    # pullback of alpha/|z| equals (reparametrization pullback of
    # lambda_c) / u_tilde on the open page
    rep = hypersurface.rep
    quotient = scale_form(lambda x: 1.0 / rep.f.modulus(x),
                          rep.contact.alpha)
    pulled = pullback(phi, quotient)
    from openbooks.forms import SmoothMap
    reparam_map = SmoothMap(2, 2, reparam)
    lam_back = pullback(reparam_map, ld.lambda_c)
    inner = pts[ld.u(reparam(pts)) > 0.05]
    vecs = rng.normal(size=(len(inner), 1, 2))
    np.testing.assert_allclose(
        pulled.at_basis(inner, vecs),
        lam_back.at_basis(inner, vecs) / u_tilde(inner), atol=1e-6)
