"""Spinning vector fields, monodromy flows, the closed-form flow of the
quadric open book, and the comparison with a Dehn twist.

The spinning field of a representation (alpha, f) is the unique Y with

    d(theta)(Y) = 2 pi      and      iota_Y d(alpha/|f|) |_page = 0 .

Both equations are assembled in regularized form so the linear system has
polynomial coefficients whenever f does:

    (f_x df_y - f_y df_x)(Y) = 2 pi rho^2
    [rho^2 d(alpha) - (f_x df_x + f_y df_y) ^ alpha](Y, e_i) = 0

over a basis {e_i} of the page tangent space (the second line is
rho^3 d(alpha/rho) evaluated on page vectors).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .contact import Representation, openbook_volume_form
from .errors import (BindingPoint, DegenerateSystem, DomainError,
                     FlowAborted, NonConvergence)
from .forms import KForm, VecField, ext_deriv, interior, wedge_power
from .manifolds import Submanifold, project_to_constraints, tangent_bases
from .report import CheckReport, make_report, merge_reports

FLOW_BINDING_BAND = 1e-6
COMPARE_BINDING_BAND = 1e-3


@dataclass(frozen=True)
class SpinningField:
    """Vector field whose time-1 flow realizes the monodromy."""

    rep: Representation
    eval: Callable[[np.ndarray], np.ndarray]
    source: str = "linear_solve"

    def __call__(self, p):
        return self.eval(np.asarray(p, float))


def _spinning_solve_batch(rep: Representation, pts, residual_tol=1e-8):
    """Solve the square regularized system for Y at each point."""
    f = rep.f
    alpha = rep.contact.alpha
    dalpha = rep.contact.d_alpha()
    bases = tangent_bases(rep.manifold, pts)
    d = bases.shape[1]
    fx, fy = f.parts(pts)
    rho2 = fx * fx + fy * fy
    if np.any(rho2 < FLOW_BINDING_BAND ** 2):
        raise BindingPoint("spinning field requested inside the binding band")
    g = f.grad(pts)
    mu = fx[..., None] * g[..., 1, :] - fy[..., None] * g[..., 0, :]
    half_drho2 = fx[..., None] * g[..., 0, :] + fy[..., None] * g[..., 1, :]
    # tangent-space components
    mu_t = np.einsum("nm,njm->nj", mu, bases)
    drho2_t = np.einsum("nm,njm->nj", half_drho2, bases)
    alpha_t = np.stack([alpha.at_basis(pts, bases[:, None, j, :])
                        for j in range(d)], axis=-1)
    da_t = np.empty((len(pts), d, d))
    for i in range(d):
        da_t[:, i, i] = 0.0
        for j in range(i + 1, d):
            v = dalpha.at_basis(pts, np.stack([bases[:, i, :],
                                               bases[:, j, :]], axis=1))
            da_t[:, i, j] = v
            da_t[:, j, i] = -v
    # page basis: orthonormal kernel of mu_t
    norm = np.linalg.norm(mu_t, axis=-1, keepdims=True)
    w = mu_t / norm
    proj = np.eye(d)[None] - w[:, :, None] * w[:, None, :]
    eigval, eigvec = np.linalg.eigh(proj)
    page = np.swapaxes(eigvec[:, :, 1:], -1, -2)       # (N, d-1, d)
    # rows: mu(Y) = 2 pi rho^2 ; for each page vector e:
    #   rho^2 da(e, Y)... careful with slot order: iota_Y dlam(e) = dlam(Y, e)
    rows = [mu_t[:, None, :]]
    rhs = [2 * np.pi * rho2[:, None]]
    # lam_rows[p] applied to Y gives rho^3 d(alpha/rho)(Y, e_p)
    #   = rho^2 d(alpha)(Y, e_p) - alpha(e_p) (rho drho)(Y)
    #     + (rho drho)(e_p) alpha(Y)
    lam_rows = (rho2[:, None, None] * np.einsum("npj,njk->npk", page, -da_t)
                - np.einsum("npj,nj->np", page, alpha_t)[:, :, None]
                * drho2_t[:, None, :]
                + np.einsum("npj,nj->np", page, drho2_t)[:, :, None]
                * alpha_t[:, None, :])
    rows.append(lam_rows)
    rhs.append(np.zeros((len(pts), d - 1)))
    mat = np.concatenate(rows, axis=1)
    b = np.concatenate(rhs, axis=1)
    svals = np.linalg.svd(mat, compute_uv=False)
    bad = svals[:, -1] < 1e-9 * svals[:, 0]
    if np.any(bad):
        worst = int(np.argmax(bad))
        raise DegenerateSystem("spinning-field system is rank deficient",
                               singular_values=svals[worst])
    sol = np.linalg.solve(mat, b[..., None])[..., 0]
    residual = np.linalg.norm(mat @ sol[..., None] - b[..., None],
                              axis=(-2, -1))
    scale = np.linalg.norm(mat, axis=(-2, -1)) * np.linalg.norm(
        sol, axis=-1) + 1.0
    if np.any(residual / scale > residual_tol):
        raise DegenerateSystem(
            f"spinning solve residual {np.max(residual / scale):.3e}",
            singular_values=svals[int(np.argmax(residual / scale))])
    return np.einsum("nj,njm->nm", sol, bases), residual / scale


def spinning_field(rep: Representation, p, residual_tol=1e-8):
    """Spinning vector at one point (or a batch) by the linear solve."""
    pts = np.asarray(p, float)
    single = pts.ndim == 1
    vec, _ = _spinning_solve_batch(rep, pts[None] if single else pts,
                                   residual_tol)
    return vec[0] if single else vec


def solved_spinning_field(rep: Representation) -> SpinningField:
    return SpinningField(rep, lambda p: spinning_field(rep, p),
                         source="linear_solve")


# -- analytic spinning fields for the stock open books ----------------------


def coordinate_spinning_field(rep: Representation) -> SpinningField:
    """Y = 2 pi (x_1 d/dy_1 - y_1 d/dx_1) for the z_1 open book: a
    spinning field by definition (it rotates the z_1 plane, preserving the
    rescaled binding form outright) whose time-1 flow is the identity, so
    the monodromy is trivial.

    Note this is not the kernel-normalized field of the linear solve: it
    satisfies iota_Y d(lambda) = -pi d|f| rather than 0, which still
    preserves d(lambda) because the correction is exact.  The solve's
    field for this book is :func:`coordinate_kernel_field`.
    """
    def eval(p):
        out = np.zeros_like(p)
        out[..., 0] = -2 * np.pi * p[..., 1]
        out[..., 1] = 2 * np.pi * p[..., 0]
        return out

    return SpinningField(rep, eval, source="analytic")


def coordinate_kernel_field(rep: Representation) -> SpinningField:
    """The kernel-normalized spinning field of the z_1 open book
    (iota_Y d(alpha/|f|) = 0 and d(theta)(Y) = 2 pi):

        Y = 2 pi (x_1 d/dy_1 - y_1 d/dx_1)
            + 2 pi |z_1|^2 / (1 + |z_1|^2) *
              sum_{j >= 2} (x_j d/dy_j - y_j d/dx_j) .
    """
    def eval(p):
        rho2 = p[..., 0] ** 2 + p[..., 1] ** 2
        out = np.empty_like(p)
        out[..., 0::2] = -p[..., 1::2]
        out[..., 1::2] = p[..., 0::2]
        factor = 2 * np.pi * rho2 / (1.0 + rho2)
        out[..., 2:] *= factor[..., None]
        out[..., 0] *= 2 * np.pi
        out[..., 1] *= 2 * np.pi
        return out

    return SpinningField(rep, eval, source="analytic")


def quadric_spinning_field(rep: Representation) -> SpinningField:
    """The quadric book's spinning field: with f = sum z_j^2,

        Y = pi i f zbar - pi i conj(f) z      (as complex velocity)

    equivalently pi Re(f) (y d/dx + x d/dy) + pi Im(f) (y d/dy - x d/dx).
    """
    def eval(p):
        z = p[..., 0::2] + 1j * p[..., 1::2]
        fval = np.sum(z * z, axis=-1)
        vel = np.pi * 1j * fval[..., None] * np.conj(z)
        out = np.empty_like(p)
        out[..., 0::2] = np.real(vel)
        out[..., 1::2] = np.imag(vel)
        return out

    return SpinningField(rep, eval, source="analytic")


def contraction_identity_check(rep: Representation, y: SpinningField,
                               samples, rel_tol=1e-7, seed=0) -> CheckReport:
    """Independent certificate for a spinning field: contraction into the
    open-book volume form must satisfy

        iota_Y Omega_V = 2 pi |f|^2 (d alpha)^n
                         - pi n d(|f|^2) ^ alpha ^ (d alpha)^(n-1)

    which is smooth across the binding and pins Y uniquely."""
    t0 = time.perf_counter()
    n = rep.n
    pts = np.asarray(samples, float)
    omega = openbook_volume_form(rep)
    field = VecField(rep.manifold.ambient_dim, y.eval)
    lhs_form = interior(field, omega)
    f = rep.f
    dalpha = rep.contact.d_alpha()

    def drho2_coeffs(p):
        fx, fy = f.parts(p)
        g = f.grad(p)
        return 2 * (fx[..., None] * g[..., 0, :] + fy[..., None] * g[..., 1, :])

    drho2 = KForm(1, rep.manifold.ambient_dim, drho2_coeffs)
    rho2_fn = lambda p: np.abs(f.value(p)) ** 2
    from .forms import scale_form, wedge_all
    rhs_form = (2 * np.pi) * scale_form(rho2_fn, wedge_power(dalpha, n)) \
        - (np.pi * n) * wedge_all(drho2, rep.contact.alpha,
                                  wedge_power(dalpha, n - 1))
    bases = tangent_bases(rep.manifold, pts)
    # evaluate both 2n-forms on the first 2n tangent basis vectors
    args = bases[:, : 2 * n, :]
    lhs = lhs_form.at_basis(pts, args)
    rhs = rhs_form.at_basis(pts, args)
    scale = np.maximum(np.max(np.abs(lhs)), np.max(np.abs(rhs)))
    rel = np.max(np.abs(lhs - rhs)) / scale
    return make_report(
        f"spinning_contraction[{rep.name}]", n_samples=len(pts),
        max_residual=float(rel), tolerance=1e-12, residual_tolerance=rel_tol,
        seed=seed,
        note="iota_Y Omega_V = 2 pi |f|^2 (d alpha)^n - pi n d|f|^2 ^ alpha "
             "^ (d alpha)^(n-1)",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


def kernel_defect_form(rep: Representation, y: SpinningField) -> KForm:
    """The 1-form iota_Y d(alpha/|f|), assembled without differentiating
    the quotient:

        rho^3 iota_Y d(alpha/rho) = rho^2 iota_Y d(alpha)
                                    - (rho drho)(Y) alpha
                                    + alpha(Y) (rho drho)

    with rho drho = f_x df_x + f_y df_y.  Vanishes identically for the
    kernel-normalized spinning field; exact for any spinning field.
    """
    f = rep.f
    alpha = rep.contact.alpha
    dalpha = rep.contact.d_alpha()
    m = rep.manifold.ambient_dim
    field = VecField(m, y.eval)
    contracted = interior(field, dalpha)

    def coeffs(p):
        fx, fy = f.parts(p)
        rho2 = fx * fx + fy * fy
        g = f.grad(p)
        rho_drho = fx[..., None] * g[..., 0, :] + fy[..., None] * g[..., 1, :]
        yv = y.eval(np.asarray(p, float))
        alpha_c = alpha.coeffs(p)
        alpha_of_y = np.einsum("...m,...m->...", alpha_c, yv)
        drho_of_y = np.einsum("...m,...m->...", rho_drho, yv)
        num = (rho2[..., None] * contracted.coeffs(p)
               - drho_of_y[..., None] * alpha_c
               + alpha_of_y[..., None] * rho_drho)
        return num / np.maximum(rho2, 1e-300)[..., None] ** 1.5

    return KForm(1, m, coeffs)


def spinning_definition_check(rep: Representation, y: SpinningField, samples,
                              near_binding_samples=None, tol=1e-8,
                              seed=0) -> CheckReport:
    """Definition-level certificate valid for any spinning field (not just
    the kernel-normalized one):

      - d(theta)(Y) = 2 pi off the binding (via the regularized pairing
        rho^2 d(theta)(Y) = 2 pi rho^2);
      - Y vanishes along the binding: |Y| <= K |f| on binding-approaching
        samples;
      - the flow preserves the page structures: the 2-form
        d(iota_Y d(alpha/|f|)) vanishes on page-tangent pairs.
    """
    t0 = time.perf_counter()
    pts = np.asarray(samples, float)
    f = rep.f
    details = []

    fx, fy = f.parts(pts)
    rho2 = fx * fx + fy * fy
    g = f.grad(pts)
    mu = fx[..., None] * g[..., 1, :] - fy[..., None] * g[..., 0, :]
    vals = np.einsum("nm,nm->n", mu, y(pts))
    details.append(make_report(
        "theta_pairing", n_samples=len(pts),
        max_residual=float(np.max(np.abs(vals / rho2 - 2 * np.pi))),
        tolerance=tol, seed=seed, note="d(theta)(Y) = 2 pi"))

    if near_binding_samples is not None and len(near_binding_samples):
        nb = np.asarray(near_binding_samples, float)
        speed = np.linalg.norm(y(nb), axis=-1)
        rho = f.modulus(nb)
        ratio = speed / np.maximum(rho, 1e-300)
        details.append(make_report(
            "binding_vanishing", n_samples=len(nb),
            max_residual=float(np.max(ratio)), tolerance=1e3, seed=seed,
            note="|Y| <= K |f| approaching the binding (K recorded as the "
                 "residual)"))

    # page-structure preservation: d(iota_Y d(lambda)) restricted to pages,
    # with iota_Y d(lambda) assembled from the regularized contraction
    lie_two_form = ext_deriv(kernel_defect_form(rep, y),
                             step_scale=lambda p: np.maximum(
                                 f.modulus(p), 1e-12))
    far = pts[f.modulus(pts) >= 0.1]
    bases = tangent_bases(rep.manifold, far)
    gfar = f.grad(far)
    fxh, fyh = f.parts(far)
    mu_far = fxh[..., None] * gfar[..., 1, :] - fyh[..., None] * gfar[..., 0, :]
    mu_t = np.einsum("nm,njm->nj", mu_far, bases)
    mu_t /= np.linalg.norm(mu_t, axis=-1, keepdims=True)
    d = bases.shape[1]
    proj = np.eye(d)[None] - mu_t[:, :, None] * mu_t[:, None, :]
    eigval, eigvec = np.linalg.eigh(proj)
    page = np.einsum("nqj,njm->nqm", np.swapaxes(eigvec[:, :, 1:], -1, -2),
                     bases)
    worst = 0.0
    for i in range(page.shape[1]):
        for j in range(i + 1, page.shape[1]):
            pair = np.stack([page[:, i, :], page[:, j, :]], axis=1)
            worst = max(worst, float(np.max(np.abs(
                lie_two_form.at_basis(far, pair)))))
    details.append(make_report(
        "page_structure_preserved", n_samples=len(far),
        max_residual=worst, tolerance=1e-5, seed=seed,
        note="Lie derivative of the page symplectic structure vanishes: "
             "d(iota_Y d(lambda)) = 0 on page pairs"))

    out = merge_reports(f"spinning_definition[{rep.name}]", details,
                        seed=seed, note="definition-level spinning checks")
    out.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out


# ---------------------------------------------------------------------------
# flows


def flow(y: SpinningField, p0, t_end: float, step: float = 1e-3,
         min_abs_f: float = FLOW_BINDING_BAND, check_halving: bool = False,
         halving_tol: float = 1e-5, project_every: int = 1):
    """Classical RK4 flow of a spinning field with per-step projection back
    to the manifold (one Gauss-Newton step).  Trajectories are monitored
    and the flow aborts if |f| drops below the binding band.

    Accepts a single point (m,) or a batch (N, m); time may be negative.
    ``check_halving`` re-runs with half the step and raises NonConvergence
    if the endpoints differ by more than halving_tol.
    """
    def run(step_size):
        pts = np.array(p0, float, copy=True)
        single = pts.ndim == 1
        if single:
            pts = pts[None, :]
        manifold = y.rep.manifold
        f = y.rep.f
        n_steps = int(round(abs(t_end) / step_size))
        h = np.sign(t_end) * abs(step_size)
        for i in range(n_steps):
            if np.any(f.modulus(pts) < min_abs_f):
                raise FlowAborted(
                    f"trajectory entered the binding band at step {i}")
            k1 = y.eval(pts)
            k2 = y.eval(pts + 0.5 * h * k1)
            k3 = y.eval(pts + 0.5 * h * k2)
            k4 = y.eval(pts + h * k3)
            pts = pts + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
            if (i + 1) % project_every == 0:
                pts = _newton_project_once(manifold, pts)
        res = manifold.residual(pts)
        if np.any(res > 1e-10):
            pts = project_to_constraints(manifold, pts, tol=1e-12)
        return pts[0] if single else pts

    end = run(step)
    if check_halving:
        end_half = run(step / 2)
        gap = np.max(np.abs(end - end_half))
        if gap > halving_tol:
            raise NonConvergence(
                f"step halving changed the endpoint by {gap:.3e}")
    return end


def _newton_project_once(manifold: Submanifold, pts):
    if manifold.constraints is None:
        return pts
    c = np.atleast_1d(np.asarray(manifold.constraints(pts)))
    if c.ndim == pts.ndim - 1:
        c = c[..., None]
    jac = manifold.jacobian(pts)
    gram = jac @ np.swapaxes(jac, -1, -2)
    lam = np.linalg.solve(gram, c[..., None])[..., 0]
    return pts - np.einsum("...cm,...c->...m", jac, lam)


# ---------------------------------------------------------------------------
# closed-form flow for the quadric open book


def closed_form_quadric_flow(z0, t, cancellation_band=1e-6):
    """Exact trajectory of the quadric book's spinning field on the unit
    sphere, as complex vectors: with g0 = |f(z0)| and c = sqrt(1 - g0^2),

        z(t) = A_+ e^{i pi (c+1) t} + A_- e^{-i pi (c-1) t}
        A_+- = 1/2 (1 -+ sqrt((1-g0)/(1+g0))) x(0)
               + i/2 (1 -+ sqrt((1+g0)/(1-g0))) y(0)

    displayed for trajectories starting on the zero page; a general start
    is handled by the phase equivariance z -> e^{i delta} z of the field,
    which rotates the start onto that page.  Limit branches: at g0 = 0 the
    point is fixed; as g0 -> 1 the formula degenerates to
    z(1) = -(z0 + 2 pi y(0)) (= -z0 on the sphere, where g0 = 1 forces the
    rotated start to be real).

    Returns (z_t, flagged) where ``flagged`` marks samples whose
    1 - g0 is small enough that the square-root coefficients lose more
    than six digits to cancellation.
    """
    z0 = np.asarray(z0, complex)
    single = z0.ndim == 1
    if single:
        z0 = z0[None, :]
    t = np.broadcast_to(np.asarray(t, float), z0.shape[:-1])
    fval = np.sum(z0 * z0, axis=-1)
    g0 = np.abs(fval)
    if np.any(g0 > 1.0 + 1e-9):
        raise DomainError("|f| exceeds 1; the start is not on the unit "
                          "sphere", point=z0[np.argmax(g0)])
    g0 = np.minimum(g0, 1.0)
    theta0 = np.angle(fval)
    w0 = np.exp(-0.5j * theta0)[..., None] * z0
    x0, y0 = np.real(w0), np.imag(w0)

    one_minus = 1.0 - g0
    flagged = one_minus < cancellation_band
    degenerate = one_minus < 1e-12
    safe = np.where(degenerate, 0.5, one_minus)

    c = np.sqrt(np.maximum(0.0, 1.0 - g0 ** 2))
    a_coef = np.sqrt(np.where(degenerate, 0.0, one_minus) / (1.0 + g0))
    b_coef = np.sqrt((1.0 + g0) / safe)
    s = np.sin(np.pi * c * t)
    co = np.cos(np.pi * c * t)
    u = (w0 * co[..., None]
         + (-1j * a_coef[..., None] * x0 + b_coef[..., None] * y0)
         * s[..., None])
    u_lim = w0 + 2 * np.pi * t[..., None] * y0
    u = np.where(degenerate[..., None], u_lim, u)
    out = np.exp(1j * np.pi * t)[..., None] * u
    out = np.exp(0.5j * theta0)[..., None] * out
    if single:
        return out[0], bool(flagged[0])
    return out, flagged


def complex_to_real(z):
    z = np.asarray(z, complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = np.real(z)
    out[..., 1::2] = np.imag(z)
    return out


def real_to_complex(p):
    p = np.asarray(p, float)
    return p[..., 0::2] + 1j * p[..., 1::2]


# ---------------------------------------------------------------------------
# Dehn twist


@dataclass(frozen=True)
class DehnTwist:
    """Twist on the unit-disk cotangent bundle of a sphere, rotating each
    fiber by the angle rho(r) = r g(r^2) - pi of the fiber radius r = |p|;
    g(1) = pi makes it the identity on the boundary."""

    g: Callable[[np.ndarray], np.ndarray]

    def angle(self, r):
        return r * self.g(r * r) - np.pi

    def sin_over_r(self, r):
        """sin(rho(r)) / r, evaluated through the smooth even extension
        sin(r g(r^2))/r = g(r^2) sinc(r g(r^2) / pi) near the zero section
        and directly elsewhere (the direct path makes rho(1) = 0 exact on
        the boundary)."""
        a = r * self.g(r * r)
        smooth = -self.g(r * r) * np.sinc(a / np.pi)
        with np.errstate(divide="ignore", invalid="ignore"):
            direct = np.where(r > 0.5, np.sin(self.angle(np.maximum(r, 0.5)))
                              / np.maximum(r, 0.5), 0.0)
        return np.where(r > 0.5, direct, smooth)

    def __call__(self, q, p, tol=1e-10, validate=True):
        q = np.asarray(q, float)
        p = np.asarray(p, float)
        r = np.linalg.norm(p, axis=-1)
        if validate and (
                np.any(np.abs(np.linalg.norm(q, axis=-1) - 1.0) > tol)
                or np.any(np.abs(np.sum(q * p, axis=-1)) > tol)
                or np.any(r > 1.0 + tol)):
            raise DomainError("(q, p) violates |q| = 1, q . p = 0, |p| <= 1")
        rho = self.angle(r)
        cos_r = np.cos(rho)[..., None]
        sin_over = self.sin_over_r(r)[..., None]
        q_out = q * cos_r + p * sin_over
        p_out = -(r ** 2)[..., None] * q * sin_over + p * cos_r
        return q_out, p_out


def standard_twist() -> DehnTwist:
    """The twist matching the quadric book's monodromy: g(r) = 2 pi/(1+r),
    so rho(|p|) = 2 pi |p| / (1 + |p|^2) - pi."""
    return DehnTwist(lambda r: 2 * np.pi / (1.0 + r))


def dehn_twist_pullback_check(twist: DehnTwist, n: int, samples_qp,
                              tol=1e-7, seed=0) -> CheckReport:
    """Pullback identity Phi^* lambda_can = lambda_can - |p| d(rho) with
    lambda_can = -sum p_j dq_j, evaluated on tangent vectors of the
    bundle; certifies that the twist is an exact symplectomorphism."""
    t0 = time.perf_counter()
    from .forms import SmoothMap
    from .liouville import canonical_one_form
    from .manifolds import disk_cotangent_bundle

    bundle = disk_cotangent_bundle(n)
    lam = canonical_one_form(n)

    def eval_map(x):
        # the twist formula extends smoothly off the constraint set, which
        # the finite-difference Jacobian needs
        q_out, p_out = twist(x[..., :n], x[..., n:], validate=False)
        return np.concatenate([q_out, p_out], axis=-1)

    phi = SmoothMap(2 * n, 2 * n, eval_map)
    pts = np.asarray(samples_qp, float)
    bases = tangent_bases(bundle, pts)
    jac = phi.jacobian(pts)
    pushed = np.einsum("ntm,njm->njt", jac, bases)
    q_img = phi(pts)
    lhs = np.stack([lam.at_basis(q_img, pushed[:, None, j, :])
                    for j in range(bases.shape[1])], axis=-1)

    r = np.linalg.norm(pts[..., n:], axis=-1)
    h = 1e-6

    def rho_of_point(x):
        return twist.angle(np.linalg.norm(x[..., n:], axis=-1))

    drho = np.stack([(rho_of_point(pts + h * np.eye(2 * n)[i])
                      - rho_of_point(pts - h * np.eye(2 * n)[i])) / (2 * h)
                     for i in range(2 * n)], axis=-1)
    lam_vals = np.stack([lam.at_basis(pts, bases[:, None, j, :])
                         for j in range(bases.shape[1])], axis=-1)
    drho_t = np.einsum("nm,njm->nj", drho, bases)
    rhs = lam_vals - r[:, None] * drho_t
    gap = float(np.max(np.abs(lhs - rhs)))
    return make_report(
        "dehn_twist_pullback", n_samples=len(pts),
        max_residual=gap, tolerance=tol, seed=seed,
        note="Phi^* lambda_can = lambda_can - |p| d(rho)",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


# ---------------------------------------------------------------------------
# page embedding for the quadric book and the monodromy comparison


def page_embedding(n: int, page_angle: float = 0.0):
    """Embedding of the disk cotangent bundle of S^(n-1) onto the closure
    of the page {theta = page_angle} of the quadric book:

        (q, p) -> (q + i p) e^{i page_angle / 2} / sqrt(1 + |p|^2).
    """
    phase = np.exp(0.5j * page_angle)

    def embed(q, p):
        w = (q + 1j * p) * phase
        return w / np.sqrt(1.0 + np.sum(p * p, axis=-1))[..., None]

    return embed


def page_embedding_inverse(n: int, page_angle: float = 0.0):
    """Inverse of :func:`page_embedding` on the open page."""
    phase = np.exp(-0.5j * page_angle)

    def invert(z):
        w = np.asarray(z, complex) * phase
        g0 = np.abs(np.sum(w * w, axis=-1))
        p_norm_sq = (1.0 - g0) / (1.0 + g0)
        gamma = 1.0 / np.sqrt(1.0 + p_norm_sq)
        return np.real(w) / gamma[..., None], np.imag(w) / gamma[..., None]

    return invert


def monodromy_vs_dehn_twist(rep: Representation, samples_qp, step=1e-3,
                            tol=1e-5, seed=0, flow_field=None) -> CheckReport:
    """Conjugate the time-1 spinning flow by the zero-page embedding and
    compare it with the Dehn twist for g(r) = 2 pi/(1 + r).

    The overall sign convention between the embedding and the twist is
    pinned empirically at the zero section (where both sides must send
    (q, 0) to (-q, 0)) before the global comparison, and recorded.
    """
    t0 = time.perf_counter()
    n = rep.manifold.ambient_dim // 2
    qp = np.asarray(samples_qp, float)
    q, p = qp[..., :n], qp[..., n:]
    if np.any(np.linalg.norm(p, axis=-1) > 1.0 - COMPARE_BINDING_BAND):
        raise DomainError("fiber radius too close to 1; the flow would "
                          "approach the binding")
    embed = page_embedding(n)
    invert = page_embedding_inverse(n)
    twist = standard_twist()
    y = flow_field if flow_field is not None else quadric_spinning_field(rep)

    # pin the convention at the zero section
    anchor_q = np.zeros(n)
    anchor_q[0] = 1.0
    z_anchor = complex_to_real(embed(anchor_q[None], np.zeros((1, n))))
    z_end = flow(y, z_anchor, 1.0, step)
    qa, pa = invert(real_to_complex(z_end))
    tq, tp = twist(anchor_q[None], np.zeros((1, n)))
    gap_id = np.max(np.abs(np.concatenate([qa - tq, pa - tp], axis=-1)))
    gap_neg = np.max(np.abs(np.concatenate([qa + tq, pa + tp], axis=-1)))
    sign_convention = 1.0 if gap_id <= gap_neg else -1.0
    anchor_gap = min(gap_id, gap_neg)

    z0 = complex_to_real(embed(q, p))
    z1 = flow(y, z0, 1.0, step)
    q_flow, p_flow = invert(real_to_complex(z1))
    q_tw, p_tw = twist(q, p)
    gap = np.max(np.abs(np.concatenate(
        [q_flow - sign_convention * q_tw, p_flow - sign_convention * p_tw],
        axis=-1)), axis=-1)

    details = [make_report(
        "zero_section_anchor", n_samples=1, max_residual=float(anchor_gap),
        tolerance=tol, seed=seed,
        note=f"(q, 0) -> (-q, 0) on both sides; recorded sign convention "
             f"{sign_convention:+.0f}")]
    details.append(make_report(
        "page_monodromy_vs_twist", n_samples=len(qp),
        max_residual=float(np.max(gap)), tolerance=tol, seed=seed,
        note="embedded time-1 flow equals the Dehn twist with "
             "g(r) = 2 pi/(1+r)",
        rows=[{"sample": int(i),
               "fiber_radius": float(np.linalg.norm(p[i])),
               "endpoint_gap": float(gap[i])} for i in range(len(qp))]))

    # inverse flow: -Y for time 1 undoes the monodromy
    z_back = flow(SpinningField(rep, lambda pt: -y.eval(pt), y.source),
                  z1, 1.0, step)
    inv_gap = float(np.max(np.abs(z_back - z0)))
    details.append(make_report(
        "inverse_flow", n_samples=len(qp), max_residual=inv_gap,
        tolerance=tol, seed=seed,
        note="flowing -Y for time 1 inverts the monodromy"))

    out = merge_reports(f"monodromy_vs_twist[{rep.name}]", details,
                        seed=seed,
                        note="time-1 spinning flow conjugated to the page "
                             "is the standard twist")
    out.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out
