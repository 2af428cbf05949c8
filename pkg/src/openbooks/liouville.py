"""Ideal Liouville completions, the two model domains, the
trivial-monodromy hypersurface, Weinstein checks and the subcritical
coordinate change.

A classical Liouville domain (F, lambda_c) is completed to an ideal one by
choosing u >= 0 with u^{-1}(0) = boundary(F) regular and du(X) < u, and
rescaling: omega = d(lambda_c / u) is symplectic on the interior and
u * (lambda_c / u) extends to a contact form on the boundary.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .contact import ContactForm, DefiningFunction, Representation
from .errors import DomainError
from .forms import (KForm, SmoothMap, VecField, coordinate_differential,
                    ext_deriv, form_from_components, interior, scale_form,
                    wedge_power)
from .manifolds import Submanifold, tangent_bases
from .report import CheckReport, make_report, merge_reports


def canonical_one_form(n: int) -> KForm:
    """lambda_can = - sum p_j dq_j on R^n x R^n (q first, then p)."""
    def coeffs(x):
        out = np.zeros_like(x)
        out[..., :n] = -x[..., n:]
        return out

    return KForm(1, 2 * n, coeffs)


def radial_liouville_form(n: int) -> KForm:
    """lambda_0 = 1/2 sum (x_j dy_j - y_j dx_j), interleaved coordinates."""
    from .contact import standard_contact_form
    return standard_contact_form(n)


@dataclass(frozen=True)
class LiouvilleDomain:
    """Compact domain F cut out by ``inside`` >= 0, its Liouville form,
    Liouville field, and a completion function u."""

    manifold: Submanifold          # equality constraints of the ambient model
    lambda_c: KForm
    liouville_field: VecField
    u: Callable
    du: Callable                   # analytic gradient of u, (..., m)
    name: str = ""

    def du_along_field(self, p):
        return np.einsum("...m,...m->...", self.du(np.asarray(p, float)),
                         self.liouville_field(p))


def _full_ambient(m, name, sampler=None, boundary=None):
    return Submanifold(ambient_dim=m, constraints=None, n_constraints=0,
                       name=name, periodic_mask=np.zeros(m, bool),
                       orientation="ambient", sampler=sampler,
                       boundary=boundary)


def quartic_disk_domain(n: int) -> LiouvilleDomain:
    """Closed unit disk in C^n with u = 1 - |z|^4 (the quartic choice makes
    the completed interior match the zero page of the z_1 open book)."""
    m = 2 * n

    def sampler(rng, count):
        g = rng.normal(size=(count, m))
        g /= np.linalg.norm(g, axis=-1, keepdims=True)
        r = rng.uniform(0.0, 1.0, size=(count, 1)) ** (1.0 / m)
        return r * g

    manifold = _full_ambient(m, f"D^{m}", sampler,
                             boundary=lambda p: 1.0 - np.sum(p * p, axis=-1))

    def u(p):
        return 1.0 - np.sum(p * p, axis=-1) ** 2

    def du(p):
        return -4.0 * np.sum(p * p, axis=-1)[..., None] * p

    field = VecField(m, lambda p: 0.5 * p)
    return LiouvilleDomain(manifold, radial_liouville_form(n), field, u, du,
                           name=f"quartic disk D^{m}")


def disk_bundle_domain(n: int) -> LiouvilleDomain:
    """Unit-disk cotangent bundle of S^(n-1) with u = 1 - |p|^2."""
    from .manifolds import disk_cotangent_bundle
    manifold = disk_cotangent_bundle(n)
    m = 2 * n

    def u(x):
        return 1.0 - np.sum(x[..., n:] ** 2, axis=-1)

    def du(x):
        out = np.zeros_like(x)
        out[..., n:] = -2.0 * x[..., n:]
        return out

    def field_eval(x):
        out = np.zeros_like(x)
        out[..., n:] = x[..., n:]
        return out

    return LiouvilleDomain(manifold, canonical_one_form(n),
                           VecField(m, field_eval), u, du,
                           name=f"disk bundle D(T*S^{n - 1})")


def weinstein_disk_domain() -> LiouvilleDomain:
    """The unit 2-disk with its radial Weinstein structure and the
    completion u = C - f = 1 - a^2 - b^2."""
    def sampler(rng, count):
        ang = rng.uniform(0.0, 2 * np.pi, size=count)
        r = np.sqrt(rng.uniform(0.0, 1.0, size=count))
        return np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)

    manifold = _full_ambient(2, "D^2", sampler,
                             boundary=lambda p: 1.0 - np.sum(p * p, axis=-1))
    lam = form_from_components(2, 1, {(0,): lambda p: -0.5 * p[..., 1],
                                      (1,): lambda p: 0.5 * p[..., 0]})

    def u(p):
        return 1.0 - np.sum(p * p, axis=-1)

    return LiouvilleDomain(manifold, lam, VecField(2, lambda p: 0.5 * p), u,
                           lambda p: -2.0 * p, name="Weinstein 2-disk")


# ---------------------------------------------------------------------------
# completion checks


def liouville_relation_residual(ld: LiouvilleDomain, samples):
    """Residual of iota_X d(lambda_c) = lambda_c on tangent vectors."""
    pts = np.asarray(samples, float)
    bases = tangent_bases(ld.manifold, pts)
    contracted = interior(ld.liouville_field, ext_deriv(ld.lambda_c))
    gaps = []
    for j in range(bases.shape[1]):
        v = bases[:, None, j, :]
        gaps.append(contracted.at_basis(pts, v)
                    - ld.lambda_c.at_basis(pts, v))
    return np.max(np.abs(np.stack(gaps, axis=-1)))


def completion_check(ld: LiouvilleDomain, samples, boundary_samples,
                     tolerance=1e-9, rel_tol=1e-8, interior_band=0.05,
                     seed=0) -> CheckReport:
    """Admissibility of u for the completion: du(X) < u strictly in the
    interior and du(X) < 0 on the boundary, plus nondegeneracy of
    omega = d(lambda_c/u) through the contraction identity

        iota_X omega^n = u^(-n) (1 - X(ln u)) iota_X omega_c^n .
    """
    t0 = time.perf_counter()
    pts = np.asarray(samples, float)
    details = []

    details.append(make_report(
        "liouville_relation", n_samples=len(pts),
        max_residual=float(liouville_relation_residual(ld, pts)),
        tolerance=1e-8, seed=seed,
        note="iota_X d(lambda_c) = lambda_c"))

    margin_interior = ld.u(pts) - ld.du_along_field(pts)
    details.append(make_report(
        "interior_inequality", n_samples=len(pts),
        min_margin=float(np.min(margin_interior)), tolerance=tolerance,
        seed=seed, note="du(X) < u on the interior"))

    bpts = np.asarray(boundary_samples, float)
    details.append(make_report(
        "boundary_inequality", n_samples=len(bpts),
        min_margin=float(np.min(-ld.du_along_field(bpts))),
        tolerance=tolerance, seed=seed,
        note="du(X) < 0 where u = 0"))

    # nondegeneracy identity at interior points away from the boundary
    inner = pts[ld.u(pts) >= interior_band]
    n = ld.manifold.dim // 2
    lam_over_u = scale_form(lambda p: 1.0 / ld.u(p), ld.lambda_c)
    omega = ext_deriv(lam_over_u, step_scale=lambda p: np.maximum(
        ld.u(p), 1e-6))
    lhs_form = interior(ld.liouville_field, wedge_power(omega, n))
    omega_c = ext_deriv(ld.lambda_c)
    rhs_form = interior(ld.liouville_field, wedge_power(omega_c, n))
    bases = tangent_bases(ld.manifold, inner)
    args = bases[:, : 2 * n - 1, :]
    lhs = lhs_form.at_basis(inner, args)
    factor = (1.0 - ld.du_along_field(inner) / ld.u(inner)) \
        / ld.u(inner) ** n
    rhs = factor * rhs_form.at_basis(inner, args)
    scale = np.maximum(np.max(np.abs(lhs)), np.max(np.abs(rhs)))
    details.append(make_report(
        "rescaled_nondegeneracy", n_samples=len(inner),
        max_residual=float(np.max(np.abs(lhs - rhs)) / scale),
        min_margin=float(np.min(1.0 - ld.du_along_field(inner)
                                / ld.u(inner))),
        tolerance=tolerance, residual_tolerance=rel_tol, seed=seed,
        note="iota_X omega^n = u^-n (1 - X(ln u)) iota_X omega_c^n, "
             "with 1 - X(ln u) > 0"))

    out = merge_reports(f"completion[{ld.name}]", details, seed=seed,
                        note="u admissible for the ideal completion")
    out.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out


def averaged_domain(ld1: LiouvilleDomain, ld2: LiouvilleDomain
                    ) -> LiouvilleDomain:
    """Convex combination (u1 + u2)/2 of two completion functions on the
    same domain (admissible functions form a convex set)."""
    u1, u2, d1, d2 = ld1.u, ld2.u, ld1.du, ld2.du
    return LiouvilleDomain(ld1.manifold, ld1.lambda_c, ld1.liouville_field,
                           lambda p: 0.5 * (u1(p) + u2(p)),
                           lambda p: 0.5 * (d1(p) + d2(p)),
                           name=f"average[{ld1.name}]")


# ---------------------------------------------------------------------------
# identification of the completed interior with the model spaces


def interior_identification(example_id: str, p):
    """Diffeomorphism from the open interior onto the completed model:

      - "disk":        z -> z / sqrt(1 - |z|^4)        (onto C^n)
      - "disk_bundle": (q, p) -> (q, p / (1 - |p|^2))  (onto T*S^(n-1))

    Boundary points are rejected.
    """
    p = np.asarray(p, float)
    if example_id == "disk":
        w = 1.0 - np.sum(p * p, axis=-1) ** 2
        if np.any(w <= 1e-12):
            raise DomainError("identification only defined on the open "
                              "interior", point=p)
        return p / np.sqrt(w)[..., None]
    if example_id == "disk_bundle":
        n = p.shape[-1] // 2
        w = 1.0 - np.sum(p[..., n:] ** 2, axis=-1)
        if np.any(w <= 1e-12):
            raise DomainError("identification only defined on the open "
                              "interior", point=p)
        out = p.copy()
        out[..., n:] = p[..., n:] / w[..., None]
        return out
    raise DomainError(f"unknown identification {example_id!r}")


def identification_check(example_id: str, ld: LiouvilleDomain, samples,
                         tol=1e-8, seed=0) -> CheckReport:
    """The identification pulls the model Liouville form back to
    lambda_c / u (the completed interior is exact-symplectomorphic to the
    model)."""
    t0 = time.perf_counter()
    pts = np.asarray(samples, float)
    m = ld.manifold.ambient_dim
    if example_id == "disk":
        target = radial_liouville_form(m // 2)

        def jac(x):
            r4 = np.sum(x * x, axis=-1) ** 2
            s = 1.0 / np.sqrt(1.0 - r4)
            eye = np.zeros(np.shape(x)[:-1] + (m, m))
            idx = np.arange(m)
            eye[..., idx, idx] = s[..., None]
            r2 = np.sum(x * x, axis=-1)
            return eye + 2.0 * (r2 * s ** 3)[..., None, None] \
                * x[..., :, None] * x[..., None, :]
    else:
        target = canonical_one_form(m // 2)

        def jac(x):
            n = m // 2
            p = x[..., n:]
            w = 1.0 - np.sum(p * p, axis=-1)
            out = np.zeros(np.shape(x)[:-1] + (m, m))
            idx = np.arange(n)
            out[..., idx, idx] = 1.0
            out[..., n + idx, n + idx] = (1.0 / w)[..., None]
            out[..., n:, n:] += 2.0 / (w ** 2)[..., None, None] \
                * p[..., :, None] * p[..., None, :]
            return out

    phi = SmoothMap(m, m, lambda x: interior_identification(example_id, x),
                    jac=jac)
    from .forms import pullback
    pulled = pullback(phi, target)
    expected = scale_form(lambda x: 1.0 / ld.u(x), ld.lambda_c)
    bases = tangent_bases(ld.manifold, pts)
    gaps = []
    for j in range(bases.shape[1]):
        v = bases[:, None, j, :]
        gaps.append(pulled.at_basis(pts, v) - expected.at_basis(pts, v))
    gap = float(np.max(np.abs(np.stack(gaps, axis=-1))))
    return make_report(
        f"interior_identification[{example_id}]", n_samples=len(pts),
        max_residual=gap, tolerance=tol, seed=seed,
        note="pullback of the model Liouville form equals lambda_c / u",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


# ---------------------------------------------------------------------------
# trivial-monodromy hypersurface


@dataclass(frozen=True)
class HypersurfaceData:
    """Contact hypersurface V = {|z|^2 = u(p)} in F x C with its
    representation (restriction of lambda_c + 1/2(x dy - y dx), z)."""

    domain: LiouvilleDomain
    manifold: Submanifold
    rep: Representation
    transversality_margin: float


def hypersurface_build(ld: LiouvilleDomain, tolerance=1e-9,
                       binding_seed=0) -> HypersurfaceData:
    """Build the hypersurface V in F x C carrying an open book with page F
    and trivial monodromy; certifies the Liouville-field transversality
    du(X) - u < 0 that makes V contact."""
    mf = ld.manifold.ambient_dim
    m = mf + 2

    def g_fn(x):
        z2 = x[..., mf] ** 2 + x[..., mf + 1] ** 2
        return z2 - ld.u(x[..., :mf])

    def constraints(x):
        return g_fn(x)[..., None]

    def jac(x):
        out = np.empty(np.shape(x)[:-1] + (1, m))
        out[..., 0, :mf] = -ld.du(x[..., :mf])
        out[..., 0, mf] = 2.0 * x[..., mf]
        out[..., 0, mf + 1] = 2.0 * x[..., mf + 1]
        return out

    base_sampler = ld.manifold.sampler

    def sampler(rng, count):
        r1, r2 = rng.spawn(2)
        base = base_sampler(r1, count)
        ang = r2.uniform(0.0, 2 * np.pi, size=count)
        r = np.sqrt(np.maximum(ld.u(base), 0.0))
        z = np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)
        return np.concatenate([base, z], axis=-1)

    manifold = Submanifold(
        ambient_dim=m, constraints=constraints, n_constraints=1,
        name=f"V[{ld.name}]",
        periodic_mask=np.zeros(m, bool),
        orientation="normal_first", sampler=sampler, constraint_jac=jac)

    # transversality of the ambient Liouville field X_L + (x dx + y dy)/2
    probe = sampler(np.random.Generator(
        np.random.Philox(np.random.SeedSequence(binding_seed))), 400)
    margin = ld.u(probe[..., :mf]) - ld.du_along_field(probe[..., :mf])
    if np.min(margin) <= tolerance:
        raise DomainError("ambient Liouville field is not transverse to V: "
                          f"margin {np.min(margin):.3e}")

    # contact form: restriction of lambda_c + 1/2 (x dy - y dx)
    from .bourgeois import extend_form
    dx = coordinate_differential(m, mf)
    dy = coordinate_differential(m, mf + 1)
    half_rot = form_from_components(
        m, 1, {(mf,): lambda x: -0.5 * x[..., mf + 1],
               (mf + 1,): lambda x: 0.5 * x[..., mf]})
    alpha = extend_form(ld.lambda_c) + half_rot

    def f_value(x):
        return x[..., mf] + 1j * x[..., mf + 1]

    def f_gradient(x):
        out = np.zeros(np.shape(x)[:-1] + (2, m))
        out[..., 0, mf] = 1.0
        out[..., 1, mf + 1] = 1.0
        return out

    f = DefiningFunction(m, f_value, f_gradient)

    def binding_sampler(rng, count):
        ang = rng.uniform(0.0, 2 * np.pi, size=count)
        out = np.zeros((count, m))
        out[:, 0] = np.cos(ang)
        out[:, 1] = np.sin(ang)
        return out

    binding = manifold.with_sampler(binding_sampler)
    rep = Representation(ContactForm(alpha, manifold), f, binding,
                         name=f"hypersurface[{ld.name}]")
    return HypersurfaceData(ld, manifold, rep,
                            float(np.min(margin)))


def _collar_blend(t, width):
    # quintic smoothstep weight between the squared collar profile and
    # the identity
    s = np.clip(t / width, 0.0, 1.0)
    return s ** 3 * (10.0 + s * (-15.0 + 6.0 * s))


def radial_collar_reparametrization(r, width=0.2):
    """Radial reparametrization of the unit disk fixing the interior and
    flattening quadratically at the boundary: with t = 1 - r,

        1 - h(r) = t^2 (1 - w) + t w,     w = blend(t / width),

    so that sqrt(u(h(r))) is smooth up to r = 1 for u vanishing linearly
    at the boundary (the obvious embedding through sqrt(u) is not)."""
    t = 1.0 - np.asarray(r, float)
    w = _collar_blend(t, width)
    h_gap = t * t * (1.0 - w) + t * w
    return 1.0 - np.where(t >= width, t, h_gap)


def smooth_page_embedding(ld: LiouvilleDomain, theta: float, width=0.2):
    """Embedding of the radial 2-disk domain onto the closure of the page
    {arg z = theta} of its hypersurface, smooth up to the boundary:

        p -> (phi(p), u_tilde(p) e^{i theta}),  u_tilde = sqrt(u(phi(p)))

    where phi rescales the collar by :func:`radial_collar_reparametrization`.
    Returns the map together with u_tilde."""
    m = ld.manifold.ambient_dim

    def reparametrize(p):
        r = np.linalg.norm(p, axis=-1)
        h = radial_collar_reparametrization(r, width)
        scale = np.where(r > 0, h / np.maximum(r, 1e-300), 1.0)
        return scale[..., None] * p

    def u_tilde(p):
        return np.sqrt(np.maximum(ld.u(reparametrize(p)), 0.0))

    def embed(p):
        base = reparametrize(np.asarray(p, float))
        radius = u_tilde(p)
        z = np.stack([radius * np.cos(theta), radius * np.sin(theta)],
                     axis=-1)
        return np.concatenate([base, z], axis=-1)

    return SmoothMap(m, m + 2, embed), u_tilde, reparametrize


def angle_spinning_field(rep: Representation):
    """2 pi d/d(theta) in the normal-disk coordinates of the hypersurface
    open book: 2 pi (x d/dy - y d/dx) on the last two coordinates; a
    binding form makes this a spinning field with identity monodromy."""
    from .monodromy import SpinningField
    m = rep.manifold.ambient_dim

    def eval(p):
        out = np.zeros_like(p)
        out[..., m - 2] = -2 * np.pi * p[..., m - 1]
        out[..., m - 1] = 2 * np.pi * p[..., m - 2]
        return out

    return SpinningField(rep, eval, source="analytic")


def page_volume_identity(ld: LiouvilleDomain, samples, rel_tol=1e-8,
                         interior_band=0.05, seed=0) -> CheckReport:
    """Two-sided check of the page-volume identity on F:

        r^(n+2) [d(lambda_c / r)]^n = 1/2 (2u - du(X)) (d lambda_c)^n

    with r = sqrt(u) and 2n = dim F; both sides are positive volume forms
    on the interior."""
    t0 = time.perf_counter()
    pts = np.asarray(samples, float)
    pts = pts[ld.u(pts) >= interior_band]
    n = ld.manifold.dim // 2

    def r_fn(p):
        return np.sqrt(np.maximum(ld.u(p), 1e-300))

    lam_over_r = scale_form(lambda p: 1.0 / r_fn(p), ld.lambda_c)
    d_quot = ext_deriv(lam_over_r, step_scale=lambda p: np.maximum(
        ld.u(p), 1e-6))
    lhs_form = wedge_power(d_quot, n)
    rhs_form = wedge_power(ext_deriv(ld.lambda_c), n)
    bases = tangent_bases(ld.manifold, pts)
    args = bases[:, : 2 * n, :]
    lhs = r_fn(pts) ** (n + 2) * lhs_form.at_basis(pts, args)
    rhs = 0.5 * (2.0 * ld.u(pts) - ld.du_along_field(pts)) \
        * rhs_form.at_basis(pts, args)
    scale = np.maximum(np.max(np.abs(lhs)), np.max(np.abs(rhs)))
    return make_report(
        f"page_volume[{ld.name}]", n_samples=len(pts),
        max_residual=float(np.max(np.abs(lhs - rhs)) / scale),
        min_margin=float(np.min(rhs)),
        tolerance=1e-12, residual_tolerance=rel_tol, seed=seed,
        note="r^(n+2) [d(lambda/r)]^n = 1/2 (2u - du(X)) (d lambda)^n, "
             "positive on the interior",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


# ---------------------------------------------------------------------------
# Weinstein structures


@dataclass(frozen=True)
class WeinsteinStructure:
    """Exact symplectic manifold with Liouville field and Lyapunov data."""

    manifold: Submanifold
    omega: KForm
    field: VecField
    lyapunov: Callable
    dlyapunov: Callable
    lam: KForm                     # iota_X omega, the Liouville form
    name: str = ""


def complex_plane_weinstein() -> WeinsteinStructure:
    """(C, dx^dy, (x dx + y dy)/2, x^2 + y^2)."""
    def sampler(rng, count):
        ang = rng.uniform(0.0, 2 * np.pi, size=count)
        r = rng.uniform(0.1, 2.0, size=count)
        return np.stack([r * np.cos(ang), r * np.sin(ang)], axis=-1)

    manifold = _full_ambient(2, "C", sampler)
    omega = form_from_components(2, 2, {(0, 1): 1.0})
    lam = form_from_components(2, 1, {(0,): lambda p: -0.5 * p[..., 1],
                                      (1,): lambda p: 0.5 * p[..., 0]})
    return WeinsteinStructure(
        manifold, omega, VecField(2, lambda p: 0.5 * p),
        lambda p: np.sum(p * p, axis=-1), lambda p: 2.0 * p, lam, name="C")


def torus_cotangent_weinstein() -> WeinsteinStructure:
    """(T* T^2, d lambda_can, p d/dp, p_1^2 + p_2^2), coordinates
    (q_1, q_2, p_1, p_2) with periodic q."""
    def sampler(rng, count):
        q = rng.uniform(0.0, 2 * np.pi, size=(count, 2))
        p = rng.uniform(-2.0, 2.0, size=(count, 2))
        return np.concatenate([q, p], axis=-1)

    manifold = Submanifold(4, None, 0, name="T*T^2",
                           periodic_mask=np.array([True, True, False, False]),
                           orientation="ambient", sampler=sampler)
    omega = form_from_components(4, 2, {(0, 2): 1.0, (1, 3): 1.0})

    def field_eval(x):
        out = np.zeros_like(x)
        out[..., 2:] = x[..., 2:]
        return out

    def dlyap(x):
        out = np.zeros_like(x)
        out[..., 2:] = 2.0 * x[..., 2:]
        return out

    return WeinsteinStructure(
        manifold, omega, VecField(4, field_eval),
        lambda x: np.sum(x[..., 2:] ** 2, axis=-1), dlyap,
        canonical_one_form(2), name="T*T^2")


def weinstein_check(w: WeinsteinStructure, samples, delta,
                    liouville_tol=1e-8, slack=1e-12, seed=0) -> CheckReport:
    """Lyapunov inequality df(X) >= delta (|X|^2 + |df|^2) in the ambient
    Euclidean metric, and closure of the Liouville relation
    iota_X omega = lambda.  The inequality is non-strict, so the margin is
    allowed to touch zero up to the numerical slack."""
    t0 = time.perf_counter()
    pts = np.asarray(samples, float)
    x_vals = w.field(pts)
    df = w.dlyapunov(pts)
    lyap_margin = np.einsum("...m,...m->...", df, x_vals) - delta * (
        np.sum(x_vals ** 2, axis=-1) + np.sum(df ** 2, axis=-1))
    contracted = interior(w.field, w.omega)
    bases = tangent_bases(w.manifold, pts)
    gaps = []
    for j in range(bases.shape[1]):
        v = bases[:, None, j, :]
        gaps.append(contracted.at_basis(pts, v) - w.lam.at_basis(pts, v))
    residual = float(np.max(np.abs(np.stack(gaps, axis=-1))))
    return make_report(
        f"weinstein[{w.name}]", n_samples=len(pts),
        min_margin=float(np.min(lyap_margin)),
        max_residual=residual,
        tolerance=-slack, residual_tolerance=liouville_tol, seed=seed,
        note=f"df(X) >= {delta} (|X|^2 + |df|^2); iota_X omega = lambda",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


def lyapunov_ratio(w: WeinsteinStructure, samples):
    """Pointwise sup of admissible delta: df(X) / (|X|^2 + |df|^2)."""
    pts = np.asarray(samples, float)
    x_vals = w.field(pts)
    df = w.dlyapunov(pts)
    return np.einsum("...m,...m->...", df, x_vals) / (
        np.sum(x_vals ** 2, axis=-1) + np.sum(df ** 2, axis=-1))


# ---------------------------------------------------------------------------
# subcritical coordinate change


def subcritical_coordinates(p):
    """Diffeomorphism W x C x T^2 -> W x T*T^2 used to fill the product of
    a trivial-monodromy contact manifold with the torus:

        (x, y; phi1, phi2) -> (q1, q2; p1, p2)
                            = (-phi1 - y, phi2 + x; x, y)

    keeping the W factor (the leading coordinates) unchanged.  Input
    points carry W first, then (x, y, phi1, phi2)."""
    p = np.asarray(p, float)
    mw = p.shape[-1] - 4
    x, y = p[..., mw], p[..., mw + 1]
    phi1, phi2 = p[..., mw + 2], p[..., mw + 3]
    out = p.copy()
    out[..., mw] = -phi1 - y
    out[..., mw + 1] = phi2 + x
    out[..., mw + 2] = x
    out[..., mw + 3] = y
    return out


def subcritical_map(mw: int) -> SmoothMap:
    m = mw + 4
    block = np.zeros((4, 4))
    block[0, 1] = -1.0
    block[0, 2] = -1.0
    block[1, 0] = 1.0
    block[1, 3] = 1.0
    block[2, 0] = 1.0
    block[3, 1] = 1.0
    mat = np.eye(m)
    mat[mw:, mw:] = block

    def jac(p):
        return np.broadcast_to(mat, np.shape(p)[:-1] + (m, m)).copy()

    return SmoothMap(m, m, subcritical_coordinates, jac=jac)


def subcritical_check(samples, tol=1e-10, seed=0) -> CheckReport:
    """Certify the coordinate change with W = C:

      - the pullback of lambda_W + lambda_can equals
        lambda_W + x dy - y dx + x dphi1 - y dphi2;
      - it pulls f + f_T2 = f + p1^2 + p2^2 back to f + x^2 + y^2 exactly;
      - the Jacobian on the (x, y, phi1, phi2) block has determinant -1
        (the map is measure preserving on those slices);
      - the minus cotangent convention lambda_can = -sum p dq is asserted
        by testing both signs and recording the winner.
    """
    t0 = time.perf_counter()
    pts = np.asarray(samples, float)
    mw = 2
    m = mw + 4
    phi = subcritical_map(mw)
    details = []

    lam_w = form_from_components(m, 1, {(0,): lambda p: -0.5 * p[..., 1],
                                        (1,): lambda p: 0.5 * p[..., 0]})

    def lam_can_target(sign):
        # on the target, coordinates are (w1, w2, q1, q2, p1, p2)
        def coeffs(p):
            out = np.zeros_like(p)
            out[..., 2] = sign * (-p[..., 4])
            out[..., 3] = sign * (-p[..., 5])
            return out
        return KForm(1, m, coeffs)

    expected = form_from_components(
        m, 1,
        {(0,): lambda p: -0.5 * p[..., 1],
         (1,): lambda p: 0.5 * p[..., 0],
         (2,): lambda p: -p[..., 3],
         (3,): lambda p: p[..., 2],
         (4,): lambda p: p[..., 2],
         (5,): lambda p: -p[..., 3]})

    from .forms import pullback
    gaps = {}
    for sign, label in ((1.0, "minus"), (-1.0, "plus")):
        pulled = pullback(phi, lam_w + lam_can_target(sign))
        gaps[label] = float(np.max(np.abs(pulled.coeffs(pts)
                                          - expected.coeffs(pts))))
    winner = "minus" if gaps["minus"] <= gaps["plus"] else "plus"
    details.append(make_report(
        "one_form_pullback", n_samples=len(pts),
        max_residual=gaps[winner], tolerance=tol, seed=seed,
        note=f"pullback of lambda_W + lambda_can matches the product form; "
             f"cotangent convention winner: {winner} "
             f"(gaps minus={gaps['minus']:.2e}, plus={gaps['plus']:.2e})"))

    img = phi(pts)
    f_target = np.sum(pts[..., :2] ** 2, axis=-1) + np.sum(
        img[..., 4:] ** 2, axis=-1)
    f_source = np.sum(pts[..., :2] ** 2, axis=-1) + np.sum(
        pts[..., 2:4] ** 2, axis=-1)
    details.append(make_report(
        "lyapunov_pullback", n_samples=len(pts),
        max_residual=float(np.max(np.abs(f_target - f_source))),
        tolerance=0.0, seed=seed,
        note="f + f_T2 pulls back to f + f_0 exactly"))

    jac = phi.jacobian(pts[:1])[0]
    det_block = float(np.linalg.det(jac[mw:, mw:]))
    details.append(make_report(
        "slice_measure", n_samples=1,
        max_residual=abs(abs(det_block) - 1.0), tolerance=0.0, seed=seed,
        note=f"(x, y, phi) slice Jacobian determinant = {det_block:+.0f}"))

    out = merge_reports("subcritical_coordinates", details, seed=seed,
                        note="explicit filling coordinate change")
    out.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out
