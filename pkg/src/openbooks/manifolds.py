"""Constraint-defined submanifolds: tangent bases, orientation, sampling.

A submanifold of R^m is given by c constraint functions whose joint zero
set it is.  Tangent spaces are kernels of the constraint Jacobian, sampled
points are produced by registered samplers driven by a counter-based
(Philox) generator so that runs are reproducible given a seed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import BindingPoint, DegenerateSystem, OffManifold
from .forms import KForm

ON_MANIFOLD_TOL = 1e-8
RANK_RATIO = 1e-6
FD_STEP = 1e-6


def rng_for(seed) -> np.random.Generator:
    """Counter-based generator; splittable and reproducible given the seed."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(int(seed))))


@dataclass(frozen=True)
class Submanifold:
    """Zero set of `constraints` inside R^m, with orientation convention.

    orientation is one of
      - "normal_first": hypersurface-type; a tangent basis is positive when
        prepending the outward constraint gradient gives a positively
        oriented ambient frame (also correct for hypersurface x torus
        products, where the gradient has zero angle components);
      - "ambient": full-dimensional pieces of R^m, oriented by the ambient
        coordinate order;
      - None: unoriented (all bases accepted with sign +1);
      - a callable (point, basis (d, m)) -> +-1.
    """

    ambient_dim: int
    constraints: Callable | None
    n_constraints: int
    name: str = ""
    periodic_mask: np.ndarray | None = None
    orientation: object = "normal_first"
    sampler: Callable | None = None
    constraint_jac: Callable | None = None
    boundary: Callable | None = None   # >= 0 inside, 0 on the boundary

    @property
    def dim(self) -> int:
        return self.ambient_dim - self.n_constraints

    def residual(self, p):
        if self.constraints is None:
            return np.zeros(np.shape(p)[:-1])
        c = np.asarray(self.constraints(np.asarray(p, float)))
        return np.linalg.norm(np.atleast_1d(c), axis=-1)

    def jacobian(self, p):
        """Constraint Jacobian (..., c, m)."""
        p = np.asarray(p, float)
        if self.constraint_jac is not None:
            return self.constraint_jac(p)
        cols = []
        for i in range(self.ambient_dim):
            dp = np.zeros(self.ambient_dim)
            dp[i] = FD_STEP
            cols.append((np.asarray(self.constraints(p + dp))
                         - np.asarray(self.constraints(p - dp))) / (2 * FD_STEP))
        return np.stack(cols, axis=-1)

    def with_sampler(self, sampler):
        return replace(self, sampler=sampler)


@dataclass(frozen=True)
class OrientedBasis:
    point: np.ndarray
    vectors: np.ndarray        # (dim, m), orthonormal rows
    sign: int


def _orientation_sign(manifold: Submanifold, p, basis):
    conv = manifold.orientation
    if conv is None:
        return 1
    if callable(conv):
        return conv(p, basis)
    if conv == "ambient":
        return np.sign(np.linalg.det(basis))
    if conv == "normal_first":
        jac = manifold.jacobian(p)
        normal = jac[0] / np.linalg.norm(jac[0])
        frame = np.vstack([normal[None, :], basis])
        return np.sign(np.linalg.det(frame))
    raise ValueError(f"unknown orientation convention {conv!r}")


def tangent_basis(manifold: Submanifold, p, tol=ON_MANIFOLD_TOL) -> OrientedBasis:
    """Oriented orthonormal basis of the tangent space at p."""
    p = np.asarray(p, float)
    if manifold.residual(p) > tol:
        raise OffManifold(
            f"point not on {manifold.name or 'manifold'}: residual "
            f"{manifold.residual(p):.3e}")
    if manifold.constraints is None:
        basis = np.eye(manifold.ambient_dim)
    else:
        jac = np.atleast_2d(manifold.jacobian(p))
        _, s, vh = np.linalg.svd(jac)
        if not (s[0] > 0 and s[-1] > RANK_RATIO * s[0]):
            raise DegenerateSystem(
                "constraint Jacobian is rank deficient", singular_values=s)
        basis = vh[manifold.n_constraints:]
    sign = _orientation_sign(manifold, p, basis)
    if sign < 0:
        basis = basis.copy()
        basis[-1] = -basis[-1]
        sign = 1
    return OrientedBasis(p, basis, int(sign) if sign != 0 else 0)


def tangent_bases(manifold: Submanifold, points, tol=ON_MANIFOLD_TOL):
    """Batched oriented bases: points (N, m) -> vectors (N, d, m).

    The returned bases are already flipped to be positively oriented.
    """
    pts = np.asarray(points, float)
    res = manifold.residual(pts)
    if np.any(res > tol):
        bad = int(np.argmax(res))
        raise OffManifold(
            f"{manifold.name or 'manifold'}: worst residual {res.max():.3e} "
            f"at sample {bad}")
    n = pts.shape[0]
    if manifold.constraints is None:
        bases = np.broadcast_to(np.eye(manifold.ambient_dim),
                                (n, manifold.ambient_dim, manifold.ambient_dim)).copy()
    else:
        jac = manifold.jacobian(pts)
        _, s, vh = np.linalg.svd(jac)
        if not np.all((s[..., 0] > 0) & (s[..., -1] > RANK_RATIO * s[..., 0])):
            raise DegenerateSystem("rank-deficient constraint Jacobian in batch",
                                   singular_values=s)
        bases = vh[:, manifold.n_constraints:, :].copy()
    conv = manifold.orientation
    if conv is None:
        return bases
    if conv == "normal_first":
        jac = manifold.jacobian(pts)
        normal = jac[:, 0, :] / np.linalg.norm(jac[:, 0, :], axis=-1, keepdims=True)
        frames = np.concatenate([normal[:, None, :], bases], axis=1)
        signs = np.sign(np.linalg.det(frames))
    elif conv == "ambient":
        signs = np.sign(np.linalg.det(bases))
    else:
        signs = np.array([conv(pts[i], bases[i]) for i in range(n)])
    flip = signs < 0
    bases[flip, -1, :] = -bases[flip, -1, :]
    return bases


def sample(manifold: Submanifold, n: int, seed, tol=1e-10):
    """n points on the manifold, deterministic given the seed."""
    if manifold.sampler is None:
        raise OffManifold(f"no sampler registered for {manifold.name!r}")
    pts = manifold.sampler(rng_for(seed), n)
    res = manifold.residual(pts)
    if np.any(res > tol):
        raise OffManifold(
            f"sampler for {manifold.name!r} violated constraints: "
            f"max residual {res.max():.3e}")
    return pts


def project_to_constraints(manifold: Submanifold, points, tol=1e-12,
                           max_iter=60):
    """Gauss-Newton projection of points onto the constraint set (batched)."""
    p = np.array(points, float)
    single = p.ndim == 1
    if single:
        p = p[None, :]
    for _ in range(max_iter):
        c = np.atleast_2d(np.asarray(manifold.constraints(p)))
        if c.ndim == 1:
            c = c[:, None]
        res = np.linalg.norm(c, axis=-1)
        if np.all(res <= tol):
            break
        jac = manifold.jacobian(p)
        gram = jac @ np.swapaxes(jac, -1, -2)
        lam = np.linalg.solve(gram, c[..., None])[..., 0]
        p = p - np.einsum("...cm,...c->...m", jac, lam)
    else:
        raise OffManifold(
            f"projection to {manifold.name!r} did not converge: residual "
            f"{res.max():.3e}")
    return p[0] if single else p


def orient_page_basis(manifold: Submanifold, p, theta_form: KForm,
                      volume: KForm, binding_tol=1e-8) -> OrientedBasis:
    """Basis of the page tangent space ker d(theta) inside T_p M, oriented
    so that prepending any R with positive theta pairing gives a positively
    oriented basis of M (the contraction-of-volume convention).

    theta_form is the regularized 1-form rho^2 d(theta); its kernel on the
    tangent space equals the page tangent space off the binding.
    """
    frame = tangent_basis(manifold, p)
    w = np.array([theta_form(p, v) for v in frame.vectors])
    norm_w = np.linalg.norm(w)
    if norm_w <= binding_tol:
        raise BindingPoint(
            "d(theta) vanishes on the tangent space; point is on the binding")
    w = w / norm_w
    # orthonormal page basis = tangent vectors annihilated by w
    d = frame.vectors.shape[0]
    proj = np.eye(d) - np.outer(w, w)
    eigval, eigvec = np.linalg.eigh(proj)
    page_coords = eigvec[:, eigval > 0.5].T          # (d-1, d)
    page = page_coords @ frame.vectors
    r_vec = w @ frame.vectors                         # positive theta pairing
    value = volume.at_basis(p, np.vstack([r_vec[None, :], page]))
    sign = 1
    if value < 0:
        page = page.copy()
        page[-1] = -page[-1]
    elif value == 0:
        raise DegenerateSystem("volume form vanished on assembled basis")
    return OrientedBasis(np.asarray(p, float), page, sign)


# ---------------------------------------------------------------------------
# stock manifolds and samplers


def _gaussian_sphere_sampler(dim_ambient):
    def sampler(rng, n):
        g = rng.normal(size=(n, dim_ambient))
        return g / np.linalg.norm(g, axis=-1, keepdims=True)
    return sampler


def unit_sphere(dim_ambient: int, name=None) -> Submanifold:
    """Unit sphere in R^m; constraint |x|^2 - 1 so the gradient is outward."""

    def constraints(p):
        return (np.sum(p * p, axis=-1) - 1.0)[..., None]

    def jac(p):
        return 2.0 * p[..., None, :]

    return Submanifold(
        ambient_dim=dim_ambient,
        constraints=constraints,
        n_constraints=1,
        name=name or f"S^{dim_ambient - 1}",
        periodic_mask=np.zeros(dim_ambient, bool),
        orientation="normal_first",
        sampler=_gaussian_sphere_sampler(dim_ambient),
        constraint_jac=jac,
    )


def flat_torus(k: int, name=None) -> Submanifold:
    """k-torus as R^k with all coordinates periodic, oriented by coordinates."""
    def sampler(rng, n):
        return rng.uniform(0.0, 2 * np.pi, size=(n, k))

    return Submanifold(
        ambient_dim=k,
        constraints=None,
        n_constraints=0,
        name=name or f"T^{k}",
        periodic_mask=np.ones(k, bool),
        orientation="ambient",
        sampler=sampler,
    )


def product_with_torus(base: Submanifold, k: int = 2, name=None) -> Submanifold:
    """base x T^k embedded in R^(m+k); last k coordinates are angles."""
    m = base.ambient_dim

    def constraints(p):
        return base.constraints(p[..., :m])

    def jac(p):
        jb = base.jacobian(p[..., :m])
        pad = np.zeros(jb.shape[:-1] + (k,))
        return np.concatenate([jb, pad], axis=-1)

    def sampler(rng, n):
        base_rng, angle_rng = rng.spawn(2)
        pts = base.sampler(base_rng, n)
        ang = angle_rng.uniform(0.0, 2 * np.pi, size=(n, k))
        return np.concatenate([pts, ang], axis=-1)

    mask = np.concatenate([
        base.periodic_mask if base.periodic_mask is not None
        else np.zeros(m, bool),
        np.ones(k, bool)])

    return Submanifold(
        ambient_dim=m + k,
        constraints=constraints,
        n_constraints=base.n_constraints,
        name=name or f"{base.name} x T^{k}",
        periodic_mask=mask,
        orientation=base.orientation if base.orientation != "ambient" else "ambient",
        sampler=sampler if base.sampler is not None else None,
        constraint_jac=jac if base.constraint_jac is not None else None,
    )


def disk_cotangent_bundle(n: int, p_max=1.0, name=None) -> Submanifold:
    """Unit-disk cotangent bundle of S^(n-1) embedded in R^n x R^n:
    |q| = 1, q . p = 0, |p| <= p_max."""

    def constraints(x):
        q, p = x[..., :n], x[..., n:]
        return np.stack([np.sum(q * q, axis=-1) - 1.0,
                         np.sum(q * p, axis=-1)], axis=-1)

    def jac(x):
        q, p = x[..., :n], x[..., n:]
        row1 = np.concatenate([2 * q, np.zeros_like(p)], axis=-1)
        row2 = np.concatenate([p, q], axis=-1)
        return np.stack([row1, row2], axis=-2)

    def sampler(rng, count):
        q = rng.normal(size=(count, n))
        q /= np.linalg.norm(q, axis=-1, keepdims=True)
        g = rng.normal(size=(count, n))
        g -= np.sum(g * q, axis=-1, keepdims=True) * q
        g /= np.linalg.norm(g, axis=-1, keepdims=True)
        r = rng.uniform(0.0, p_max, size=(count, 1))
        return np.concatenate([q, r * g], axis=-1)

    def boundary(x):
        p = x[..., n:]
        return p_max**2 - np.sum(p * p, axis=-1)

    return Submanifold(
        ambient_dim=2 * n,
        constraints=constraints,
        n_constraints=2,
        name=name or f"D(T*S^{n - 1})",
        periodic_mask=np.zeros(2 * n, bool),
        orientation=None,
        sampler=sampler,
        constraint_jac=jac,
        boundary=boundary,
    )
