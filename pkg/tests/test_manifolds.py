"""Submanifolds: tangent bases, orientation, sampling, projection."""

import numpy as np
import pytest

from openbooks.contact import coordinate_open_book, quadric_open_book
from openbooks.errors import BindingPoint, DegenerateSystem, OffManifold
from openbooks.manifolds import (Submanifold, disk_cotangent_bundle,
                                 flat_torus, orient_page_basis,
                                 product_with_torus, rng_for, sample,
                                 tangent_bases, tangent_basis, unit_sphere)


def test_circle_basis_at_east_pole():
    circle = unit_sphere(2)
    basis = tangent_basis(circle, np.array([1.0, 0.0]))
    np.testing.assert_allclose(basis.vectors, [[0.0, 1.0]], atol=1e-12)
    assert basis.sign == 1


def test_sphere_bases_orthogonal_to_position():
    sphere = unit_sphere(4)
    pts = sample(sphere, 200, seed=3)
    bases = tangent_bases(sphere, pts)
    inner = np.einsum("njm,nm->nj", bases, pts)
    assert np.max(np.abs(inner)) < 1e-10
    gram = np.einsum("nim,njm->nij", bases, bases)
    np.testing.assert_allclose(gram, np.broadcast_to(np.eye(3), gram.shape),
                               atol=1e-10)


def test_sphere_bases_positively_oriented():
    sphere = unit_sphere(4)
    pts = sample(sphere, 100, seed=4)
    bases = tangent_bases(sphere, pts)
    frames = np.concatenate([pts[:, None, :], bases], axis=1)
    assert np.all(np.linalg.det(frames) > 0)


def test_quadric_binding_rank():
    # oracle: SVD of the joint constraint Jacobian (sphere + both
    # components of f) stays full rank along the binding
    rep = quadric_open_book(2)
    bind = sample(rep.binding, 100, seed=5)
    jac = np.concatenate([2.0 * bind[:, None, :], rep.f.grad(bind)], axis=1)
    svals = np.linalg.svd(jac, compute_uv=False)
    assert np.min(svals[:, -1]) > 1e-6 * np.max(svals[:, 0])
    # the binding of the quadric book in S^3 is one dimensional
    from openbooks.contact import binding_manifold
    k_sub = binding_manifold(rep)
    assert k_sub.dim == 1
    basis = tangent_basis(k_sub, bind[0])
    assert basis.vectors.shape == (1, 4)


def test_off_manifold_rejected():
    sphere = unit_sphere(4)
    with pytest.raises(OffManifold):
        tangent_basis(sphere, np.array([1.1, 0.0, 0.0, 0.0]))


def test_rank_deficient_jacobian_rejected():
    # cusp-like constraint: gradient vanishes at the origin
    def constraints(p):
        return (np.sum(p * p, axis=-1) ** 2)[..., None]

    bad = Submanifold(3, constraints, 1, name="cusp")
    with pytest.raises(DegenerateSystem) as err:
        tangent_basis(bad, np.zeros(3), tol=1.0)
    assert err.value.singular_values is not None


# ---------------------------------------------------------------------------
# sampling


def test_sphere_sampler_residual_and_determinism():
    sphere = unit_sphere(4)
    pts = sample(sphere, 1000, seed=7)
    assert np.max(np.abs(np.linalg.norm(pts, axis=-1) - 1.0)) < 1e-12
    again = sample(sphere, 1000, seed=7)
    assert np.array_equal(pts, again)
    other = sample(sphere, 1000, seed=8)
    assert not np.array_equal(pts, other)


def test_product_sampler():
    sphere = unit_sphere(4)
    product = product_with_torus(sphere, 2)
    pts = sample(product, 1000, seed=7)
    assert product.dim == 5
    assert np.max(product.residual(pts)) < 1e-12
    angles = pts[:, 4:]
    assert np.all((angles >= 0.0) & (angles < 2 * np.pi))


def test_hypersurface_sampler():
    from openbooks.liouville import hypersurface_build, weinstein_disk_domain
    hs = hypersurface_build(weinstein_disk_domain())
    pts = sample(hs.manifold, 500, seed=7)
    base = pts[:, :2]
    u = 1.0 - np.sum(base * base, axis=-1)
    direct = u - (pts[:, 2] ** 2 + pts[:, 3] ** 2)
    assert np.max(np.abs(direct)) < 1e-10


def test_no_sampler_registered():
    bare = Submanifold(3, lambda p: (np.sum(p * p, -1) - 1)[..., None], 1)
    with pytest.raises(OffManifold):
        sample(bare, 5, seed=0)


def test_disk_bundle_sampler():
    bundle = disk_cotangent_bundle(3)
    pts = sample(bundle, 300, seed=9)
    assert np.max(bundle.residual(pts)) < 1e-12
    assert np.all(bundle.boundary(pts) >= -1e-12)


def test_projection_converges():
    rep = quadric_open_book(2)
    target = rep.binding
    pts = sample(target, 50, seed=11)
    assert np.max(np.abs(rep.f.value(pts))) < 1e-10


def test_tangent_basis_after_sample_never_errors():
    # rank safety margin across every registered manifold used in checks
    manifolds = [unit_sphere(4), unit_sphere(6),
                 product_with_torus(unit_sphere(4), 2),
                 disk_cotangent_bundle(2), disk_cotangent_bundle(3),
                 flat_torus(3)]
    for mf in manifolds:
        pts = sample(mf, 200, seed=13)
        bases = tangent_bases(mf, pts)
        assert bases.shape == (200, mf.dim, mf.ambient_dim)


# ---------------------------------------------------------------------------
# page bases


def _page_setup():
    rep = coordinate_open_book(2)
    mu = rep.f.mu_form()
    alpha = rep.contact.alpha
    from openbooks.contact import openbook_volume_form
    volume = openbook_volume_form(rep)
    return rep, mu, volume


def test_page_basis_oriented_against_reeb():
    rep, mu, volume = _page_setup()
    pts = sample(rep.manifold, 50, seed=15)
    pts = pts[rep.f.modulus(pts) > 0.2]
    from openbooks.contact import standard_reeb_field
    reeb = standard_reeb_field(2)
    for p in pts[:10]:
        page = orient_page_basis(rep.manifold, p, mu, volume)
        assert page.vectors.shape == (2, 4)
        # oracle: the volume form on (Reeb, page basis) is positive
        frame = np.vstack([reeb(p)[None, :], page.vectors])
        assert volume.at_basis(p, frame) > 0
        assert np.max(np.abs([mu(p, v) for v in page.vectors])) < 1e-12


def test_page_orientation_continuity():
    rep, mu, volume = _page_setup()
    p = np.array([0.8, 0.0, 0.6, 0.0])
    page = orient_page_basis(rep.manifold, p, mu, volume)
    # walk a short path and check transported bases stay positive
    step = 0.02 * page.vectors[0]
    current = p
    basis = page.vectors
    for _ in range(10):
        nxt = current + step
        nxt /= np.linalg.norm(nxt)
        frame_next = tangent_bases(rep.manifold, nxt[None])[0]
        coords = basis @ frame_next.T
        # orthogonal projection preserves orientation for short steps
        transported = coords @ frame_next
        w = np.array([mu(nxt, v) for v in frame_next])
        r_vec = (w / np.linalg.norm(w)) @ frame_next
        value = volume.at_basis(nxt, np.vstack([r_vec[None], transported]))
        ref = orient_page_basis(rep.manifold, nxt, mu, volume)
        ref_value = volume.at_basis(nxt, np.vstack([r_vec[None],
                                                    ref.vectors]))
        assert np.sign(value) == np.sign(ref_value)
        current, basis = nxt, ref.vectors


def test_page_basis_rejects_binding_point():
    rep, mu, volume = _page_setup()
    binding_point = np.array([0.0, 0.0, 1.0, 0.0])
    with pytest.raises(BindingPoint):
        orient_page_basis(rep.manifold, binding_point, mu, volume)


def test_philox_generator_is_splittable():
    rng = rng_for(42)
    a, b = rng.spawn(2)
    assert not np.array_equal(a.normal(size=4), b.normal(size=4))
    again = rng_for(42)
    c, _ = again.spawn(2)
    assert np.array_equal(a.normal(size=0), c.normal(size=0))
