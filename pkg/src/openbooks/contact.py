"""Contact forms, Reeb fields, contact open books and their checks.

Conventions.  A contact manifold V here has dim V = 2n + 1 and the contact
condition is positivity of alpha ^ (d alpha)^n on oriented orthonormal
tangent bases, which makes the recorded margins comparable across points.
An open book is encoded by a representation (alpha, f) with
f = f_x + i f_y = rho e^{i theta}; every expression that divides by |f| is
replaced, before evaluation, by the identities

    rho^2 d(theta)      = f_x df_y - f_y df_x
    rho d(rho)^d(theta) = df_x ^ df_y

both of which are smooth across the binding.  The raw quotient forms are
used only as independent cross-check oracles away from the binding.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import DegenerateSystem, DimensionMismatch, OffManifold
from .forms import (KForm, VecField, ext_deriv, scale_form, wedge,
                    wedge_all, wedge_power)
from .manifolds import (Submanifold, project_to_constraints,
                        tangent_bases, unit_sphere)
from .report import CheckReport, make_report, merge_reports

BINDING_BAND = 1e-3      # |f| below this counts as "near binding"


@dataclass(frozen=True)
class ContactForm:
    """A 1-form on an ambient space together with the odd-dimensional
    submanifold on which its contact property is asserted."""

    alpha: KForm
    manifold: Submanifold

    @property
    def n(self) -> int:
        return (self.manifold.dim - 1) // 2

    def d_alpha(self, h=1e-5) -> KForm:
        return ext_deriv(self.alpha, h)


@dataclass(frozen=True)
class DefiningFunction:
    """Complex-valued function f = f_x + i f_y cutting out an open book.

    value maps (..., m) -> complex (...,); gradient, when supplied, maps
    (..., m) -> (..., 2, m) holding the ambient gradients of (f_x, f_y).
    """

    ambient_dim: int
    value: Callable
    gradient: Callable | None = None
    fd_step: float = 1e-6

    def __call__(self, p):
        return self.value(np.asarray(p, float))

    def parts(self, p):
        v = self.value(np.asarray(p, float))
        return np.real(v), np.imag(v)

    def modulus(self, p):
        return np.abs(self.value(np.asarray(p, float)))

    def theta(self, p):
        return np.angle(self.value(np.asarray(p, float)))

    def grad(self, p):
        p = np.asarray(p, float)
        if self.gradient is not None:
            return self.gradient(p)
        cols = []
        for i in range(self.ambient_dim):
            dp = np.zeros(self.ambient_dim)
            dp[i] = self.fd_step
            cols.append((self.value(p + dp) - self.value(p - dp))
                        / (2 * self.fd_step))
        g = np.stack(cols, axis=-1)
        return np.stack([np.real(g), np.imag(g)], axis=-2)

    def conjugate(self) -> "DefiningFunction":
        val = self.value
        grad = self.gradient

        def conj_grad(p):
            g = grad(p)
            return np.stack([g[..., 0, :], -g[..., 1, :]], axis=-2)

        return DefiningFunction(
            self.ambient_dim,
            lambda p: np.conj(val(p)),
            gradient=None if grad is None else conj_grad,
            fd_step=self.fd_step)

    def dfx_form(self) -> KForm:
        return KForm(1, self.ambient_dim, lambda p: self.grad(p)[..., 0, :])

    def dfy_form(self) -> KForm:
        return KForm(1, self.ambient_dim, lambda p: self.grad(p)[..., 1, :])

    def mu_form(self) -> KForm:
        """The regularized 1-form rho^2 d(theta) = f_x df_y - f_y df_x."""
        def coeffs(p):
            fx, fy = self.parts(p)
            g = self.grad(p)
            return fx[..., None] * g[..., 1, :] - fy[..., None] * g[..., 0, :]
        return KForm(1, self.ambient_dim, coeffs)

    def area_form(self) -> KForm:
        """The regularized 2-form rho d(rho) ^ d(theta) = df_x ^ df_y."""
        return wedge(self.dfx_form(), self.dfy_form())


@dataclass(frozen=True)
class Representation:
    """Pair (contact form, defining function) encoding a contact open book."""

    contact: ContactForm
    f: DefiningFunction
    binding: Submanifold | None = None
    name: str = ""

    @property
    def manifold(self) -> Submanifold:
        return self.contact.manifold

    @property
    def n(self) -> int:
        return self.contact.n

    def quotient_form(self) -> KForm:
        """lambda = alpha / |f|; only valid away from the binding."""
        alpha = self.contact.alpha
        f = self.f
        return scale_form(lambda p: 1.0 / f.modulus(p), alpha)

    def split_samples(self, points, band=BINDING_BAND):
        rho = self.f.modulus(points)
        return points[rho >= band], points[rho < band]


# ---------------------------------------------------------------------------
# Reeb field


def reeb_fields(cf: ContactForm, points, tol=1e-8):
    """Batched Reeb vectors: unique R with alpha(R) = 1, d(alpha)(R, .) = 0.

    Solved as an overdetermined linear system on each tangent space; raises
    DegenerateSystem with the singular values when the system drops rank
    (the form is not contact there).
    """
    pts = np.asarray(points, float)
    single = pts.ndim == 1
    if single:
        pts = pts[None, :]
    bases = tangent_bases(cf.manifold, pts)
    d = bases.shape[1]
    alpha = cf.alpha
    dalpha = cf.d_alpha()
    arow = np.stack([alpha.at_basis(pts, bases[:, None, j, :])
                     for j in range(d)], axis=-1)          # (N, d)
    pair = np.empty((pts.shape[0], d, d))
    for i in range(d):
        for j in range(d):
            if j <= i:
                continue
            val = dalpha.at_basis(
                pts, np.stack([bases[:, j, :], bases[:, i, :]], axis=1))
            pair[:, i, j] = val
            pair[:, j, i] = -val
        pair[:, i, i] = 0.0
    mat = np.concatenate([arow[:, None, :], pair], axis=1)   # (N, d+1, d)
    rhs = np.zeros((pts.shape[0], d + 1))
    rhs[:, 0] = 1.0
    sol = np.linalg.pinv(mat) @ rhs[..., None]
    residual = np.linalg.norm(mat @ sol - rhs[..., None], axis=(-2, -1))
    svals = np.linalg.svd(mat, compute_uv=False)
    bad_rank = svals[:, -1] < 1e-6 * svals[:, 0]
    if np.any(bad_rank) or np.any(residual > tol):
        worst = int(np.argmax(residual + bad_rank))
        raise DegenerateSystem(
            f"Reeb solve degenerate: residual {residual[worst]:.3e}",
            singular_values=svals[worst])
    vectors = np.einsum("nd,ndm->nm", sol[..., 0], bases)
    return (vectors[0], residual[0]) if single else (vectors, residual)


def reeb_field(cf: ContactForm, p, tol=1e-8):
    """Reeb vector at a single point (see :func:`reeb_fields`)."""
    vec, _ = reeb_fields(cf, p, tol)
    return vec


# ---------------------------------------------------------------------------
# checks


def contact_volume_values(cf: ContactForm, points):
    """alpha ^ (d alpha)^n evaluated on oriented orthonormal bases."""
    n = cf.n
    top = wedge(cf.alpha, wedge_power(cf.d_alpha(), n)) if n > 0 else cf.alpha
    bases = tangent_bases(cf.manifold, points)
    return top.at_basis(points, bases)


def verify_contact(cf: ContactForm, samples, tolerance=1e-9,
                   seed=0, name=None) -> CheckReport:
    """Contact condition alpha ^ (d alpha)^n > 0 at the sampled points."""
    t0 = time.perf_counter()
    vals = contact_volume_values(cf, samples)
    return make_report(
        name or f"contact[{cf.manifold.name}]",
        n_samples=len(samples),
        min_margin=float(np.min(vals)),
        tolerance=tolerance,
        seed=seed,
        note="alpha ^ (d alpha)^n positive on oriented orthonormal bases",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


def verify_adapted(cf: ContactForm, h: DefiningFunction, samples,
                   binding_samples, tolerance=1e-9, seed=0,
                   name=None) -> CheckReport:
    """Sufficient conditions for a contact form to be adapted to the open
    book cut out by h:

      (i)  alpha ^ (d alpha)^(n-1) ^ dh_x ^ dh_y > 0 along the binding,
      (ii) h_x dh_y(R) - h_y dh_x(R) > 0 off the binding (R = Reeb field).
    """
    t0 = time.perf_counter()
    if binding_samples is None or len(binding_samples) == 0:
        raise OffManifold("binding sample set is empty; the binding of an "
                          "open book must be non-empty")
    n = cf.n
    form_i = wedge_all(cf.alpha, wedge_power(cf.d_alpha(), n - 1),
                       h.dfx_form(), h.dfy_form())
    bases = tangent_bases(cf.manifold, binding_samples)
    vals_i = form_i.at_basis(binding_samples, bases)

    off = samples[h.modulus(samples) >= BINDING_BAND]
    reeb, _ = reeb_fields(cf, off)
    hx, hy = h.parts(off)
    g = h.grad(off)
    d_on_reeb = np.einsum("ncm,nm->nc", g, reeb)
    vals_ii = hx * d_on_reeb[:, 1] - hy * d_on_reeb[:, 0]
    # the raw value of (ii) is |h|^2 d(theta)(R) and degenerates toward the
    # binding; normalizing by |h|^2 gives a scale-invariant margin while
    # positivity of the raw value is still required
    scaled_ii = vals_ii / (hx * hx + hy * hy)

    passed = (np.min(vals_i) > tolerance and np.all(vals_ii > 0)
              and np.min(scaled_ii) > tolerance)
    return make_report(
        name or f"adapted[{cf.manifold.name}]",
        n_samples=len(binding_samples) + len(off),
        min_margin=float(min(np.min(vals_i), np.min(scaled_ii))),
        tolerance=tolerance,
        seed=seed,
        passed=passed,
        note=("(i) alpha^(d alpha)^(n-1)^dh_x^dh_y > 0 on the binding; "
              "(ii) h_x dh_y(R) - h_y dh_x(R) > 0 off it, margin recorded "
              "as (ii)/|h|^2"),
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


def openbook_volume_form(rep: Representation) -> KForm:
    """Volume form induced by the open book, in the regularized shape

        Omega_V = n * (df_x ^ df_y) ^ alpha ^ (d alpha)^(n-1)
                  + (f_x df_y - f_y df_x) ^ (d alpha)^n

    which is smooth across the binding (the first factor is
    rho d(rho) ^ d(theta), the second rho^2 d(theta))."""
    n = rep.n
    alpha = rep.contact.alpha
    dalpha = rep.contact.d_alpha()
    second = wedge(rep.f.mu_form(), wedge_power(dalpha, n))
    if n == 0:
        raise DimensionMismatch("open books need dim V >= 3")
    first = wedge_all(rep.f.area_form(), alpha, wedge_power(dalpha, n - 1))
    return float(n) * first + second


def quotient_volume_values(rep: Representation, points, h0=1e-5):
    """Independent oracle |f|^(n+2) d(theta) ^ (d(alpha/|f|))^n, evaluated
    with quotient forms and finite differences only; valid off the binding.

    The differentiation step is scaled by |f| so the truncation error stays
    relative to the blowing-up coefficients of the quotient form.
    """
    f = rep.f
    n = rep.n
    m = rep.manifold.ambient_dim
    lam = rep.quotient_form()

    def dtheta_coeffs(p):
        # angle derivative via arg(f(p+h)/f(p-h)) to dodge the branch cut
        h = h0 * np.maximum(f.modulus(p), 1e-12)
        cols = []
        for i in range(m):
            dp = np.zeros(m)
            dp[i] = 1.0
            ratio = f.value(p + h[..., None] * dp) * np.conj(
                f.value(p - h[..., None] * dp))
            cols.append(np.angle(ratio) / (2 * h))
        return np.stack(cols, axis=-1)

    dtheta = KForm(1, m, dtheta_coeffs)
    dlam = ext_deriv(lam, h0, step_scale=lambda p: np.maximum(
        f.modulus(p), 1e-12))
    top = wedge(dtheta, wedge_power(dlam, n))
    bases = tangent_bases(rep.manifold, points)
    vals = top.at_basis(points, bases)
    return f.modulus(points) ** (n + 2) * vals


def binding_orientation(rep: Representation):
    """Orientation callable for the binding K = f^{-1}(0):

    a basis W of T_p K is positive when (u1, u2, W) is positively oriented
    in T_p V, where (u1, u2) spans the normal of K inside T_p V with
    positive (df_x, df_y)-frame determinant."""
    manifold = rep.manifold
    f = rep.f

    def orientation(p, basis):
        frame = tangent_bases(manifold, p[None, :])[0]
        # complement of span(basis) inside the tangent space
        coords = basis @ frame.T                       # (dimK, dimV)
        proj = np.eye(frame.shape[0]) - coords.T @ coords
        eigval, eigvec = np.linalg.eigh(proj)
        comp = (eigvec[:, eigval > 0.5].T @ frame)     # (2, m)
        g = f.grad(p)
        det2 = (g[0] @ comp[0]) * (g[1] @ comp[1]) \
            - (g[0] @ comp[1]) * (g[1] @ comp[0])
        if det2 < 0:
            comp = comp[::-1]
        full = np.vstack([comp, basis])
        from .manifolds import _orientation_sign
        return _orientation_sign(manifold, p, full)

    return orientation


def binding_manifold(rep: Representation) -> Submanifold:
    """The binding K as a submanifold of ambient space, inheriting the
    sampler registered on the representation."""
    base = rep.manifold
    f = rep.f

    def constraints(p):
        inner = np.atleast_1d(base.constraints(p)) if base.constraints else \
            np.zeros(np.shape(p)[:-1] + (0,))
        fx, fy = f.parts(p)
        if inner.ndim == np.ndim(fx):
            inner = inner[..., None]
        return np.concatenate([inner, fx[..., None], fy[..., None]], axis=-1)

    def jac(p):
        rows = [base.jacobian(p)] if base.constraints is not None else []
        rows.append(f.grad(p))
        return np.concatenate(rows, axis=-2)

    sampler = rep.binding.sampler if rep.binding is not None else None
    return Submanifold(
        ambient_dim=base.ambient_dim,
        constraints=constraints,
        n_constraints=base.n_constraints + 2,
        name=f"binding[{rep.name or base.name}]",
        periodic_mask=base.periodic_mask,
        orientation=binding_orientation(rep),
        sampler=sampler,
        constraint_jac=jac if base.constraint_jac is not None else None,
    )


def binding_contact_values(rep: Representation, binding_samples):
    """alpha restricted to the binding, evaluated on oriented bases of K."""
    bind = binding_manifold(rep)
    nk = (bind.dim - 1) // 2
    alpha = rep.contact.alpha
    top = wedge(alpha, wedge_power(ext_deriv(alpha), nk)) if nk > 0 else alpha
    bases = tangent_bases(bind, binding_samples)
    return top.at_basis(binding_samples, bases)


def representation_conditions(rep: Representation, samples, binding_samples,
                              tolerance=1e-9, seed=0):
    """The four conditions making (alpha, f) a representation, each as its
    own report: regular value, non-empty binding, theta submersion, and
    ideal Liouville structure on the pages (volume-form positivity),
    plus positivity of alpha on the binding."""
    reports = []
    manifold = rep.manifold
    f = rep.f

    # (1) 0 is a regular value: (df_x, df_y) restricted to TV has rank 2
    t0 = time.perf_counter()
    if binding_samples is not None and len(binding_samples) > 0:
        bases = tangent_bases(manifold, binding_samples)
        g = f.grad(binding_samples)                    # (N, 2, m)
        restricted = np.einsum("ncm,ndm->ncd", g, bases)
        svals = np.linalg.svd(restricted, compute_uv=False)
        margin = float(np.min(svals[:, -1]))
    else:
        margin = -1.0
    reports.append(make_report(
        "regular_value", n_samples=0 if binding_samples is None else
        len(binding_samples),
        min_margin=margin, tolerance=1e-6, seed=seed,
        note="rank of (df_x, df_y) on TV equals 2 along f = 0",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0))

    # (2) binding non-empty
    t0 = time.perf_counter()
    n_bind = 0 if binding_samples is None else len(binding_samples)
    reports.append(make_report(
        "binding_nonempty", n_samples=n_bind,
        min_margin=float(n_bind), tolerance=0.5, seed=seed,
        note="the zero set of f on V is non-empty",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0))

    # (3) theta submersion: off the binding the restricted
    # rho^2 d(theta) is nonzero; near it, (df_x, df_y) has rank 2.
    t0 = time.perf_counter()
    bases = tangent_bases(manifold, samples)
    mu = rep.f.mu_form()
    mu_restricted = np.stack(
        [mu.at_basis(samples, bases[:, None, j, :])
         for j in range(bases.shape[1])], axis=-1)
    mu_norm = np.linalg.norm(mu_restricted, axis=-1)
    rho = f.modulus(samples)
    g = f.grad(samples)
    restricted = np.einsum("ncm,ndm->ncd", g, bases)
    rank2 = np.linalg.svd(restricted, compute_uv=False)[:, -1]
    off = rho >= BINDING_BAND
    margins = np.where(off, mu_norm / np.maximum(rho, BINDING_BAND) ** 2,
                       rank2)
    reports.append(make_report(
        "theta_submersion", n_samples=len(samples),
        min_margin=float(np.min(margins)), tolerance=1e-6, seed=seed,
        note="d(theta) nonzero off the binding (f/|f| is a submersion)",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0))

    # (4) ideal Liouville structure on pages: positivity of the smooth
    # volume form (the regularized rho^(n+2) d(theta)^(d(alpha/rho))^n).
    t0 = time.perf_counter()
    omega = openbook_volume_form(rep)
    pts = samples if n_bind == 0 else np.vstack([samples, binding_samples])
    vol_vals = omega.at_basis(pts, tangent_bases(manifold, pts))
    reports.append(make_report(
        "page_liouville", n_samples=len(pts),
        min_margin=float(np.min(vol_vals)), tolerance=tolerance, seed=seed,
        note=("n rho drho^dtheta^alpha^(d alpha)^(n-1) + "
              "rho^2 dtheta^(d alpha)^n positive incl. binding"),
        wall_time_ms=(time.perf_counter() - t0) * 1000.0))

    # (5) alpha restricts to a positive contact form on the binding
    t0 = time.perf_counter()
    if n_bind > 0 and reports[0].passed:
        vals = binding_contact_values(rep, binding_samples)
        margin = float(np.min(vals))
    else:
        margin = -1.0
    reports.append(make_report(
        "binding_contact", n_samples=n_bind,
        min_margin=margin, tolerance=tolerance, seed=seed,
        note="alpha positive contact form on the binding",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0))

    return reports


def verify_representation(rep: Representation, samples, binding_samples,
                          tolerance=1e-9, seed=0, name=None) -> CheckReport:
    """Full representation check; failures are reported per condition."""
    reports = representation_conditions(rep, samples, binding_samples,
                                        tolerance=tolerance, seed=seed)
    return merge_reports(
        name or f"representation[{rep.name or rep.manifold.name}]",
        reports, seed=seed,
        note="(alpha, f) represents a contact open book")


def volume_form_cross_check(rep: Representation, samples, rel_tol=1e-8,
                            seed=0, name=None) -> CheckReport:
    """Two-sided check of the volume-form identity: the regularized
    expression against |f|^(n+2) d(theta) ^ (d(alpha/|f|))^n computed from
    raw quotient forms, at points with |f| >= the binding band."""
    t0 = time.perf_counter()
    pts = samples[rep.f.modulus(samples) >= BINDING_BAND]
    omega = openbook_volume_form(rep)
    lhs = omega.at_basis(pts, tangent_bases(rep.manifold, pts))
    rhs = quotient_volume_values(rep, pts)
    rel = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), np.abs(rhs))
    return make_report(
        name or f"volume_identity[{rep.name or rep.manifold.name}]",
        n_samples=len(pts),
        max_residual=float(np.max(rel)),
        min_margin=float(np.min(lhs)),
        tolerance=1e-12, residual_tolerance=rel_tol, seed=seed,
        note=("regularized volume form agrees with "
              "|f|^(n+2) dtheta ^ (d(alpha/|f|))^n off the binding"),
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


# ---------------------------------------------------------------------------
# the standard sphere and its two open books


def standard_contact_form(n: int) -> KForm:
    """alpha_0 = 1/2 sum (x_j dy_j - y_j dx_j) on R^(2n), coordinates
    interleaved as (x_1, y_1, ..., x_n, y_n)."""
    m = 2 * n

    def coeffs(p):
        out = np.empty_like(p)
        out[..., 0::2] = -0.5 * p[..., 1::2]
        out[..., 1::2] = 0.5 * p[..., 0::2]
        return out

    return KForm(1, m, coeffs)


def standard_sphere(n: int) -> Submanifold:
    """Unit sphere S^(2n-1) in C^n = R^(2n)."""
    return unit_sphere(2 * n)


def standard_reeb_field(n: int) -> VecField:
    """Reeb field of alpha_0 on the unit sphere: R(z) = 2 i z.

    The normalization is fixed by alpha_0(R) = 1 on |z| = 1; the complex
    multiplication-by-i field alone pairs with alpha_0 to 1/2."""
    m = 2 * n

    def eval(p):
        out = np.empty_like(p)
        out[..., 0::2] = -2.0 * p[..., 1::2]
        out[..., 1::2] = 2.0 * p[..., 0::2]
        return out

    return VecField(m, eval)


def _complex_view(p, n):
    return p[..., 0::2] + 1j * p[..., 1::2]


def coordinate_defining_function(n: int) -> DefiningFunction:
    """f(z) = z_1; its zero set in the sphere is an equatorial subsphere."""
    m = 2 * n

    def value(p):
        return p[..., 0] + 1j * p[..., 1]

    def gradient(p):
        g = np.zeros(np.shape(p)[:-1] + (2, m))
        g[..., 0, 0] = 1.0
        g[..., 1, 1] = 1.0
        return g

    return DefiningFunction(m, value, gradient)


def quadric_defining_function(n: int) -> DefiningFunction:
    """f(z) = z_1^2 + ... + z_n^2 (the complex quadric)."""
    m = 2 * n

    def value(p):
        # separate real ufuncs (no fused multiply-add) so the exact
        # cancellations along the binding survive in floating point
        x = p[..., 0::2]
        y = p[..., 1::2]
        fx = np.sum(x * x - y * y, axis=-1)
        fy = 2.0 * np.sum(x * y, axis=-1)
        return fx + 1j * fy

    def gradient(p):
        # d f = 2 sum z_j dz_j: f_x gradient (2x, -2y), f_y gradient (2y, 2x)
        g = np.empty(np.shape(p)[:-1] + (2, m))
        g[..., 0, 0::2] = 2.0 * p[..., 0::2]
        g[..., 0, 1::2] = -2.0 * p[..., 1::2]
        g[..., 1, 0::2] = 2.0 * p[..., 1::2]
        g[..., 1, 1::2] = 2.0 * p[..., 0::2]
        return g

    return DefiningFunction(m, value, gradient)


def _coordinate_binding(n: int) -> Submanifold:
    """Binding of the z_1 open book: the subsphere {z_1 = 0}."""
    sphere = standard_sphere(n)

    def sampler(rng, count):
        g = rng.normal(size=(count, 2 * n - 2))
        g /= np.linalg.norm(g, axis=-1, keepdims=True)
        out = np.zeros((count, 2 * n))
        out[:, 2:] = g
        return out

    return sphere.with_sampler(sampler)


def _quadric_binding(n: int) -> Submanifold:
    """Binding of the quadric open book, sampled by projected Newton onto
    the joint constraints {|z| = 1, Re f = 0, Im f = 0} from random sphere
    points (rejection sampling onto a codimension-2 set never terminates)."""
    sphere = standard_sphere(n)
    f = quadric_defining_function(n)

    def constraints(p):
        fx, fy = f.parts(p)
        return np.stack([np.sum(p * p, axis=-1) - 1.0, fx, fy], axis=-1)

    def jac(p):
        return np.concatenate([2.0 * p[..., None, :], f.grad(p)], axis=-2)

    target = Submanifold(2 * n, constraints, 3, name="quadric binding",
                         constraint_jac=jac)

    def sampler(rng, count):
        g = rng.normal(size=(count, 2 * n))
        g /= np.linalg.norm(g, axis=-1, keepdims=True)
        return project_to_constraints(target, g)

    return sphere.with_sampler(sampler)


def coordinate_open_book(n: int) -> Representation:
    """Open book on S^(2n-1) cut out by z_1 (page: a ball, trivial
    monodromy)."""
    sphere = standard_sphere(n)
    return Representation(
        contact=ContactForm(standard_contact_form(n), sphere),
        f=coordinate_defining_function(n),
        binding=_coordinate_binding(n),
        name=f"z1 book on S^{2 * n - 1}")


def quadric_open_book(n: int) -> Representation:
    """Open book on S^(2n-1) cut out by the quadric sum of squares (page:
    disk cotangent bundle of S^(n-1), monodromy a Dehn twist)."""
    sphere = standard_sphere(n)
    return Representation(
        contact=ContactForm(standard_contact_form(n), sphere),
        f=quadric_defining_function(n),
        binding=_quadric_binding(n),
        name=f"quadric book on S^{2 * n - 1}")
