"""The torus construction: contact forms alpha_V + f_x dphi1 - f_y dphi2
on V x T^2, their contact characterization, the inverse-monodromy forms and
isotopy, and the weak-filling polynomial.

Throughout, V has dim 2n+1 and the product V x T^2 is embedded in
R^(m+2) with the two angle coordinates appended last; top-degree checks on
the product use alpha ^ (d alpha)^(n+1).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, replace

import numpy as np

from .contact import (ContactForm, DefiningFunction, Representation,
                      openbook_volume_form, representation_conditions,
                      verify_representation)
from .errors import DegenerateSystem
from .forms import (KForm, SmoothMap, coordinate_differential, ext_deriv,
                    increasing_indices, wedge, wedge_all, wedge_power)
from .manifolds import (Submanifold, product_with_torus, sample,
                        tangent_bases)
from .report import CheckReport, make_report, merge_reports


def extend_form(a: KForm, extra: int = 2) -> KForm:
    """Reinterpret a form on R^m as a form on R^(m+extra) whose
    coefficients do not involve the new trailing coordinates."""
    m = a.ambient_dim
    src = {idx: i for i, idx in enumerate(increasing_indices(m, a.degree))}
    tgt = increasing_indices(m + extra, a.degree)
    scatter = np.zeros((len(src), len(tgt)))
    for j, idx in enumerate(tgt):
        if idx and idx[-1] >= m:
            continue
        scatter[src[idx], j] = 1.0
    fa = a.coeffs

    def coeffs(p):
        return fa(p[..., :m]) @ scatter

    return KForm(a.degree, m + extra, coeffs)


@dataclass(frozen=True)
class BourgeoisForm:
    """Form alpha_V + eps * (f_x dphi1 - f_y dphi2) on V x T^2."""

    rep: Representation
    manifold: Submanifold          # the product V x T^2
    alpha: KForm                   # on R^(m+2)
    beta: KForm                    # f_x dphi1 - f_y dphi2 on R^(m+2)
    eps: float = 1.0

    @property
    def n(self) -> int:
        return self.rep.n

    def slice_f(self, torus_point=None) -> DefiningFunction:
        """Defining function of the V-slice at a torus point (the
        coefficients are torus-independent for these forms)."""
        return self.rep.f


def _beta_form(rep: Representation) -> KForm:
    m = rep.manifold.ambient_dim
    f = rep.f

    def coeffs(p):
        fx, fy = f.parts(p[..., :m])
        out = np.zeros(np.shape(p)[:-1] + (m + 2,))
        out[..., m] = fx
        out[..., m + 1] = -fy
        return out

    return KForm(1, m + 2, coeffs)


def bourgeois_form(rep: Representation, eps: float = 1.0,
                   require_valid=False) -> BourgeoisForm:
    """Assemble the product contact form from a representation.

    With ``require_valid`` the representation is re-verified first and a
    failure propagates.
    """
    if require_valid:
        pts = sample(rep.manifold, 200, 0)
        bind = sample(rep.binding, 50, 1)
        rep_check = verify_representation(rep, pts, bind)
        if not rep_check.passed:
            failed = [d.name for d in rep_check.details if not d.passed]
            raise DegenerateSystem(
                f"representation invalid; failed conditions: {failed}")
    beta = _beta_form(rep)
    alpha_v = extend_form(rep.contact.alpha)
    alpha = alpha_v + eps * beta if eps != 1.0 else alpha_v + beta
    product = product_with_torus(rep.manifold, 2)
    return BourgeoisForm(rep=rep, manifold=product, alpha=alpha, beta=beta,
                         eps=eps)


def _cartesian_expansion(rep: Representation) -> KForm:
    """First line of the product volume expansion:

    (n+1) [ n df_x^df_y^alpha_V^(d alpha_V)^(n-1)
            + (f_x df_y - f_y df_x)^(d alpha_V)^n ] ^ dphi1 ^ dphi2.

    The bracket is exactly the open-book volume form of the slice.
    """
    n = rep.n
    m = rep.manifold.ambient_dim
    bracket = extend_form(openbook_volume_form(rep))
    dphi1 = coordinate_differential(m + 2, m)
    dphi2 = coordinate_differential(m + 2, m + 1)
    return float(n + 1) * wedge_all(bracket, dphi1, dphi2)


def verify_product_contact(bf: BourgeoisForm, samples, rel_tol=1e-8,
                      tolerance=1e-9, seed=0, eps_values=(0.1, 0.5, 1.0),
                      name=None) -> CheckReport:
    """Contact condition on V x T^2, evaluated along two independent
    routes that must agree:

      - direct exterior algebra: alpha ^ (d alpha)^(n+1);
      - the expanded product formula (see :func:`_cartesian_expansion`).

    Additionally certifies the structural conditions (beta kills vectors
    tangent to the V-fibers; its coefficients are torus-independent) and
    the eps-scaling identity alpha_eps ^ (d alpha_eps)^(n+1)
    = eps^2 * alpha ^ (d alpha)^(n+1).
    """
    t0 = time.perf_counter()
    n = bf.n
    pts = np.asarray(samples, float)
    bases = tangent_bases(bf.manifold, pts)
    direct_form = wedge(bf.alpha, wedge_power(ext_deriv(bf.alpha), n + 1))
    direct = direct_form.at_basis(pts, bases)
    expanded = _cartesian_expansion(bf.rep).at_basis(pts, bases)
    rel = np.abs(direct - expanded) / np.maximum(np.abs(direct),
                                                 np.abs(expanded))
    details = [make_report(
        "two_route_agreement", n_samples=len(pts),
        min_margin=float(np.min(np.minimum(direct, expanded))),
        max_residual=float(np.max(rel)), tolerance=tolerance,
        residual_tolerance=rel_tol, seed=seed,
        note="direct alpha^(d alpha)^(n+1) vs expanded product formula")]

    # beta vanishes on fiber-tangent vectors (exactly: the V-tangent
    # vectors of the product have zero angle components)
    m = bf.rep.manifold.ambient_dim
    fiber_vectors = bases[:, : bf.rep.manifold.dim, :]
    beta_vals = np.stack(
        [bf.beta.at_basis(pts, fiber_vectors[:, None, j, :])
         for j in range(fiber_vectors.shape[1])], axis=-1)
    details.append(make_report(
        "beta_fiber_vanishing", n_samples=len(pts),
        max_residual=float(np.max(np.abs(beta_vals))), tolerance=1e-15,
        seed=seed, note="beta = 0 on vectors tangent to V x {pt}"))

    # torus-independence of the coefficients (slice restriction is closed)
    shifted = pts.copy()
    shifted[:, m:] = shifted[:, m:] + np.pi / 3
    coeff_diff = np.abs(bf.alpha.coeffs(pts) - bf.alpha.coeffs(shifted))
    details.append(make_report(
        "torus_invariance", n_samples=len(pts),
        max_residual=float(np.max(coeff_diff)), tolerance=1e-15, seed=seed,
        note="coefficients independent of (phi1, phi2); slice restriction "
             "of beta is closed"))

    # eps-family scaling
    base_vals = direct if bf.eps == 1.0 else None
    if base_vals is None:
        unit = bourgeois_form(bf.rep, 1.0)
        base_form = wedge(unit.alpha, wedge_power(ext_deriv(unit.alpha), n + 1))
        base_vals = base_form.at_basis(pts, bases)
    worst = 0.0
    for eps in eps_values:
        scaled = bourgeois_form(bf.rep, eps)
        form_eps = wedge(scaled.alpha,
                         wedge_power(ext_deriv(scaled.alpha), n + 1))
        vals = form_eps.at_basis(pts, bases)
        rel_eps = np.abs(vals - eps ** 2 * base_vals) / np.maximum(
            np.abs(vals), eps ** 2 * np.abs(base_vals))
        worst = max(worst, float(np.max(rel_eps)))
    details.append(make_report(
        "eps_scaling", n_samples=len(pts) * len(eps_values),
        max_residual=worst, tolerance=1e-12, residual_tolerance=rel_tol,
        seed=seed,
        note="alpha_eps ^ (d alpha_eps)^(n+1) = eps^2 alpha ^ (d alpha)^(n+1)"))

    out = merge_reports(
        name or f"product_contact[{bf.rep.name}]", details, seed=seed,
        note="product form is contact; expansion and scaling identities hold")
    out.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out


def extract_slice_representation(bf: BourgeoisForm, torus_point=None,
                                 samples=None, binding_samples=None,
                                 tolerance=1e-9, seed=0) -> CheckReport:
    """Slice the product form at a torus point and verify that the pair
    (alpha_V, f(. , z)) is a representation of a contact open book; a
    failure reports which of the four conditions broke (regular value,
    non-empty binding, theta submersion, page Liouville structure)."""
    f_slice = bf.slice_f(torus_point)
    rep = replace(bf.rep, f=f_slice)
    if samples is None:
        samples = sample(rep.manifold, 500, seed)
    if binding_samples is None and rep.binding is not None:
        binding_samples = sample(rep.binding, 100, seed + 1)
    reports = representation_conditions(rep, samples, binding_samples,
                                        tolerance=tolerance, seed=seed)
    out = merge_reports(f"slice_representation[{rep.name}]", reports,
                        seed=seed,
                        note="V-slice of the product form represents a "
                             "contact open book")
    if not out.passed:
        failed = [d.name for d in reports if not d.passed]
        out.note += f"; failed conditions: {failed}"
    return out


# ---------------------------------------------------------------------------
# inverse-monodromy construction


def _smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t ** 3 * (10.0 + t * (-15.0 + 6.0 * t))


def _smoothstep_integral(t):
    t = np.clip(t, 0.0, 1.0)
    return t ** 4 * (2.5 + t * (-3.0 + t))


def radial_profile(s, r0=0.2, r1=0.4):
    """Monotone C^2 profile: identity (slope 1) below r0, constant above
    r1, quintic blend between; the plateau value is r0 + (r1 - r0)/2."""
    s = np.asarray(s, float)
    t = (s - r0) / (r1 - r0)
    blended = r0 + (s - r0) - (r1 - r0) * _smoothstep_integral(t)
    out = np.where(s <= r0, s, blended)
    return np.where(s >= r1, r0 + (r1 - r0) / 2.0, out)


def radial_profile_slope(s, r0=0.2, r1=0.4):
    s = np.asarray(s, float)
    t = (s - r0) / (r1 - r0)
    out = np.where(s <= r0, 1.0, 1.0 - _smoothstep(t))
    return np.where(s >= r1, 0.0, out)


def profiled_representation(rep: Representation, r0=0.2, r1=0.4
                            ) -> Representation:
    """Replace f by a version whose modulus increases with slope one near
    the binding and is constant far from it, keeping theta unchanged:
    f_new = w(|f|) f with w = profile(|f|)/|f| (w = 1 near the binding).

    |f| vanishes transversally along the binding, so it serves as the
    radial collar coordinate the construction needs.
    """
    f = rep.f
    m = f.ambient_dim

    def weight(s):
        return np.where(s <= r0, 1.0,
                        radial_profile(s, r0, r1) / np.maximum(s, 1e-300))

    def weight_slope(s):
        safe = np.maximum(s, r0 / 2)
        return np.where(
            s <= r0, 0.0,
            (radial_profile_slope(safe, r0, r1) * safe
             - radial_profile(safe, r0, r1)) / safe ** 2)

    def value(p):
        v = f.value(np.asarray(p, float))
        return weight(np.abs(v)) * v

    def gradient(p):
        g = f.grad(p)
        fx, fy = f.parts(p)
        s = np.hypot(fx, fy)
        w = weight(s)
        dw = weight_slope(s)
        ds = (fx[..., None] * g[..., 0, :] + fy[..., None] * g[..., 1, :]) \
            / np.maximum(s, 1e-300)[..., None]
        gx = dw[..., None] * fx[..., None] * ds + w[..., None] * g[..., 0, :]
        gy = dw[..., None] * fy[..., None] * ds + w[..., None] * g[..., 1, :]
        return np.stack([gx, gy], axis=-2)

    f_new = DefiningFunction(m, value, gradient)
    return replace(rep, f=f_new, name=f"{rep.name} (radial profile)")


def inverse_form(rep: Representation, c: float) -> ContactForm:
    """alpha_minus = alpha - C (f_x df_y - f_y df_x); for C large enough
    this is a contact form inducing the opposite orientation while its
    restriction to pages and binding agrees with alpha."""
    alpha_minus = rep.contact.alpha - c * rep.f.mu_form()
    return ContactForm(alpha_minus, rep.manifold)


def inverse_form_margins(rep: Representation, c: float, samples):
    """Reversed-orientation contact margin of alpha_minus at the samples
    (positive margin = contact with orientation opposite the reference)."""
    cf = inverse_form(rep, c)
    n = cf.n
    top = wedge(cf.alpha, wedge_power(ext_deriv(cf.alpha), n))
    vals = top.at_basis(samples, tangent_bases(rep.manifold, samples))
    return -vals


def find_inverse_constant(rep: Representation, samples, tolerance=1e-3,
                          c_grid=None):
    """Search C in {1, 2, 4, ..., 2^10}, accept the first value whose
    reversed-orientation margin beats the tolerance, then re-verify at 2C
    (the construction guarantees all sufficiently large C work)."""
    cs = c_grid if c_grid is not None else [2.0 ** k for k in range(11)]
    for c in cs:
        margins = inverse_form_margins(rep, c, samples)
        if np.min(margins) > tolerance:
            recheck = inverse_form_margins(rep, 2 * c, samples)
            if np.min(recheck) > tolerance:
                return c, float(np.min(margins)), float(np.min(recheck))
    raise DegenerateSystem(
        "no constant in the search grid produced a reversed-orientation "
        "contact form; try a larger grid")


def verify_inverse_form(rep: Representation, c: float, samples,
                        binding_samples, restriction_tol=1e-10,
                        margin_tol=1e-3, seed=0) -> CheckReport:
    """Certify alpha_minus at a given constant: reversed-orientation
    contact margin, re-verified at 2C, and agreement of the restriction to
    pages and binding with alpha."""
    t0 = time.perf_counter()
    details = []
    margins = inverse_form_margins(rep, c, samples)
    margins2 = inverse_form_margins(rep, 2 * c, samples)
    details.append(make_report(
        "reversed_contact", n_samples=2 * len(samples),
        min_margin=float(min(np.min(margins), np.min(margins2))),
        tolerance=margin_tol, seed=seed,
        note=f"alpha_minus contact with reversed orientation at C={c} "
             f"and 2C"))

    # restriction to pages: the correction is C * rho^2 d(theta), which
    # annihilates page-tangent vectors
    mu = rep.f.mu_form()
    bases = tangent_bases(rep.manifold, samples)
    mu_restricted = np.stack(
        [mu.at_basis(samples, bases[:, None, j, :])
         for j in range(bases.shape[1])], axis=-1)
    rho = rep.f.modulus(samples)
    page_gap = np.empty(len(samples))
    for i in range(len(samples)):
        w = mu_restricted[i]
        norm = np.linalg.norm(w)
        if norm < 1e-14:
            page_gap[i] = 0.0
            continue
        # orthonormal basis of ker(w) inside the tangent space
        proj = np.eye(len(w)) - np.outer(w, w) / norm ** 2
        eigval, eigvec = np.linalg.eigh(proj)
        page = eigvec[:, eigval > 0.5].T @ bases[i]
        page_gap[i] = c * np.max(np.abs(
            [mu.at_basis(samples[i], v[None, :]) for v in page]))
    bind_bases = tangent_bases(rep.manifold, binding_samples)
    bind_gap = c * np.max(np.abs(np.stack(
        [mu.at_basis(binding_samples, bind_bases[:, None, j, :])
         for j in range(bind_bases.shape[1])], axis=-1)))
    details.append(make_report(
        "restriction_agreement", n_samples=len(samples) + len(binding_samples),
        max_residual=float(max(np.max(page_gap), bind_gap)),
        tolerance=restriction_tol, seed=seed,
        note="alpha_minus = alpha on page and binding tangent vectors"))

    out = merge_reports(f"inverse_form[{rep.name}]", details, seed=seed,
                        note=f"inverse-monodromy form at C={c}")
    out.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out


def interpolation_check(rep: Representation, other: Representation, c: float,
                        samples, s_values=(1/6, 2/6, 3/6, 4/6, 5/6),
                        tolerance=1e-3, seed=0) -> CheckReport:
    """Contact property of the convex interpolation between the corrected
    forms built from two admissible defining functions (spot check of the
    convexity of the construction)."""
    t0 = time.perf_counter()
    bases = tangent_bases(rep.manifold, samples)
    n = rep.n
    worst = np.inf
    for s in s_values:
        mu_s = (1 - s) * rep.f.mu_form() + s * other.f.mu_form()
        alpha_s = rep.contact.alpha - c * mu_s
        top = wedge(alpha_s, wedge_power(ext_deriv(alpha_s), n))
        vals = -top.at_basis(samples, bases)
        worst = min(worst, float(np.min(vals)))
    return make_report(
        f"interpolation[{rep.name}]", n_samples=len(samples) * len(s_values),
        min_margin=worst, tolerance=tolerance, seed=seed,
        note="interpolated corrected forms stay contact for s in (0,1)",
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


# ---------------------------------------------------------------------------
# the isotopy on V x T^2


def shear_map(rep: Representation, tau: float, c: float) -> SmoothMap:
    """(p; phi1, phi2) -> (p; phi1 - tau C f_y, phi2 - tau C f_x)."""
    m = rep.manifold.ambient_dim
    f = rep.f

    def eval(p):
        out = np.array(p, float, copy=True)
        fx, fy = f.parts(p[..., :m])
        out[..., m] = p[..., m] - tau * c * fy
        out[..., m + 1] = p[..., m + 1] - tau * c * fx
        return out

    def jac(p):
        shape = np.shape(p)[:-1]
        eye = np.zeros(shape + (m + 2, m + 2))
        idx = np.arange(m + 2)
        eye[..., idx, idx] = 1.0
        g = f.grad(p[..., :m])
        eye[..., m, :m] = -tau * c * g[..., 1, :]
        eye[..., m + 1, :m] = -tau * c * g[..., 0, :]
        return eye

    return SmoothMap(m + 2, m + 2, eval, jac=jac)


def angle_flip_map(m: int) -> SmoothMap:
    """(p; phi1, phi2) -> (p; phi1, -phi2) on R^(m+2)."""
    diag = np.ones(m + 2)
    diag[m + 1] = -1.0
    mat = np.diag(diag)

    def eval(p):
        return p * diag

    def jac(p):
        return np.broadcast_to(mat, np.shape(p)[:-1] + (m + 2, m + 2)).copy()

    return SmoothMap(m + 2, m + 2, eval, jac=jac)


def family_form(rep: Representation, tau: float, c: float) -> KForm:
    """alpha_tau = alpha_V + f_x dphi1 - f_y dphi2 - tau C rho^2 d(theta)."""
    bf = bourgeois_form(rep)
    return bf.alpha - (tau * c) * extend_form(rep.f.mu_form())


def isotopy_check(rep: Representation, c: float, tau_grid, samples,
                  pullback_tol=1e-6, volume_rel_tol=1e-6,
                  endpoint_tol=1e-10, seed=0) -> CheckReport:
    """For each tau: alpha_tau is contact, equals the pullback of alpha_0
    under the shear map, and has the same volume form as alpha_0; at
    tau = 1, composing with the angle flip reproduces the product form of
    (alpha_minus, conj f) for the reversed torus orientation."""
    t0 = time.perf_counter()
    bf = bourgeois_form(rep)
    product = bf.manifold
    pts = np.asarray(samples, float)
    bases = tangent_bases(product, pts)
    n = rep.n
    alpha0 = bf.alpha
    vol0 = wedge(alpha0, wedge_power(ext_deriv(alpha0), n + 1)
                 ).at_basis(pts, bases)
    details = []

    worst_pull = 0.0
    worst_contact = np.inf
    worst_vol = 0.0
    for tau in tau_grid:
        alpha_tau = family_form(rep, tau, c)
        pulled = _pullback_on_bases(shear_map(rep, tau, c), alpha0, pts, bases)
        direct = np.stack([alpha_tau.at_basis(pts, bases[:, None, j, :])
                           for j in range(bases.shape[1])], axis=-1)
        worst_pull = max(worst_pull, float(np.max(np.abs(pulled - direct))))
        vol_tau = wedge(alpha_tau, wedge_power(ext_deriv(alpha_tau), n + 1)
                        ).at_basis(pts, bases)
        worst_contact = min(worst_contact, float(np.min(vol_tau)))
        worst_vol = max(worst_vol, float(np.max(
            np.abs(vol_tau - vol0) / np.abs(vol0))))
    details.append(make_report(
        "shear_pullback", n_samples=len(pts) * len(tau_grid),
        max_residual=worst_pull, tolerance=pullback_tol, seed=seed,
        note="alpha_tau equals the shear-map pullback of alpha_0"))
    details.append(make_report(
        "family_contact", n_samples=len(pts) * len(tau_grid),
        min_margin=worst_contact, tolerance=1e-9, seed=seed,
        note="every alpha_tau is a positive contact form on the product"))
    details.append(make_report(
        "volume_invariance", n_samples=len(pts) * len(tau_grid),
        max_residual=worst_vol, tolerance=1e-12,
        residual_tolerance=volume_rel_tol, seed=seed,
        note="alpha_tau ^ (d alpha_tau)^(n+1) = alpha_0 ^ (d alpha_0)^(n+1)"))

    # tau = 1 endpoint: flip phi2 and compare with the product form of
    # (alpha_minus, conj f)
    alpha1 = family_form(rep, 1.0, c)
    flip = angle_flip_map(rep.manifold.ambient_dim)
    flipped = _pullback_on_bases(flip, alpha1, pts, bases)
    rep_minus = replace(rep, contact=inverse_form(rep, c),
                        f=rep.f.conjugate(),
                        name=f"{rep.name} (inverse)")
    target = bourgeois_form(rep_minus).alpha
    target_vals = np.stack([target.at_basis(pts, bases[:, None, j, :])
                            for j in range(bases.shape[1])], axis=-1)
    details.append(make_report(
        "endpoint_flip", n_samples=len(pts),
        max_residual=float(np.max(np.abs(flipped - target_vals))),
        tolerance=endpoint_tol, seed=seed,
        note="angle flip of alpha_1 is the product form of "
             "(alpha_minus, conj f) with reversed torus orientation"))

    out = merge_reports(f"isotopy[{rep.name}]", details, seed=seed,
                        note=f"isotopy family at C={c} over tau grid "
                             f"{list(tau_grid)}")
    out.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out


def _pullback_on_bases(phi: SmoothMap, form1: KForm, pts, bases):
    """Values of (phi^* form1) on each basis vector (1-forms only)."""
    q = phi(pts)
    jac = phi.jacobian(pts)
    pushed = np.einsum("ntm,njm->njt", jac, bases)
    return np.stack([form1.at_basis(q, pushed[:, None, j, :])
                     for j in range(bases.shape[1])], axis=-1)


# ---------------------------------------------------------------------------
# weak-filling polynomial


@dataclass(frozen=True)
class FillingFamily:
    """Data for the filling positivity sweep: the representation, the
    restriction to V of the filling's symplectic form, and the grids."""

    rep: Representation
    omega: KForm                  # on the V ambient space
    eps_grid: tuple
    t_grid: tuple

    @staticmethod
    def default_t_grid():
        geometric = [10.0 ** k for k in range(-2, 3)]
        linear = list(np.arange(0.0, 10.0 + 0.25, 0.25))
        return tuple(sorted(set([0.0] + geometric + linear)))


def filling_polynomial(family: FillingFamily, samples, tolerance=1e-9,
                       rel_tol=1e-8, seed=0) -> CheckReport:
    """Positivity of P_eps(T) = alpha_eps ^ (T d alpha_eps + omega +
    vol_T2)^(n+1) over the (eps, T) grid, plus the leading-coefficient
    certificates that control T -> infinity:

      - eps = 0: the T^n coefficient (n+1) alpha_V ^ (d alpha_V)^n ^ vol_T2
        is strictly positive (this is the contact condition);
      - eps > 0: the T^(n+1) coefficient alpha_eps ^ (d alpha_eps)^(n+1)
        is strictly positive.

    The polynomial is evaluated through its multinomially expanded
    coefficients, so the grid sweep and the leading terms come from the
    same exact expansion; for eps = 0 the full product expansion is also
    compared against (n+1) alpha_V ^ (T d alpha_V + omega)^n ^ vol_T2.
    """
    t0 = time.perf_counter()
    rep = family.rep
    n = rep.n
    m = rep.manifold.ambient_dim
    pts = np.asarray(samples, float)
    bf1 = bourgeois_form(rep)
    product = bf1.manifold
    bases = tangent_bases(product, pts)
    omega_ext = extend_form(family.omega)
    dphi1 = coordinate_differential(m + 2, m)
    dphi2 = coordinate_differential(m + 2, m + 1)
    vol_t2 = wedge(dphi1, dphi2)

    rows = []
    min_margin = np.inf
    worst_rel = 0.0
    lead_margins = {}
    for eps in family.eps_grid:
        bf = bourgeois_form(rep, eps)
        dalpha = ext_deriv(bf.alpha)
        # coefficient of T^a in the multinomial expansion
        coef_vals = []
        for a in range(n + 2):
            pieces = []
            b0 = n + 1 - a
            if b0 >= 0:
                pieces.append(float(math.comb(n + 1, a))
                              * wedge_power(omega_ext, b0))
            if b0 - 1 >= 0:
                pieces.append(
                    float(math.comb(n + 1, a) * (n + 1 - a))
                    * wedge(wedge_power(omega_ext, b0 - 1), vol_t2))
            tail = pieces[0]
            for extra in pieces[1:]:
                tail = tail + extra
            coef = wedge_all(bf.alpha, wedge_power(dalpha, a), tail)
            coef_vals.append(coef.at_basis(pts, bases))
        coef_vals = np.stack(coef_vals, axis=0)       # (n+2, N)

        if eps == 0.0:
            lead = coef_vals[n]
            lead_margins["T^n[eps=0]"] = float(np.min(lead))
            # independent route for P_0(T)
            dalpha_v = extend_form(ext_deriv(rep.contact.alpha))
            for t_val in family.t_grid:
                two_form = t_val * dalpha_v + omega_ext
                p0 = float(n + 1) * wedge_all(
                    bf.alpha, wedge_power(two_form, n), vol_t2)
                direct = p0.at_basis(pts, bases)
                powers = np.array([t_val ** a for a in range(n + 2)])
                summed = np.einsum("a,an->n", powers, coef_vals)
                scale = np.maximum(np.abs(direct), np.abs(summed))
                worst_rel = max(worst_rel, float(np.max(
                    np.abs(direct - summed) / np.maximum(scale, 1e-300))))
        else:
            lead_margins[f"T^(n+1)[eps={eps}]"] = float(np.min(coef_vals[n + 1]))

        for t_val in family.t_grid:
            powers = np.array([t_val ** a for a in range(n + 2)])
            vals = np.einsum("a,an->n", powers, coef_vals)
            margin = float(np.min(vals))
            rows.append({"eps": float(eps), "T": float(t_val),
                         "min_margin": margin})
            min_margin = min(min_margin, margin)

    lead_min = min(lead_margins.values())
    passed = (min_margin > tolerance and lead_min > tolerance
              and worst_rel <= rel_tol)
    report = make_report(
        f"filling_polynomial[{rep.name}]",
        n_samples=len(pts) * len(family.eps_grid) * len(family.t_grid),
        min_margin=float(min(min_margin, lead_min)),
        max_residual=worst_rel, tolerance=tolerance,
        residual_tolerance=rel_tol, seed=seed, passed=passed,
        note=("P_eps(T) positive on the grid; leading coefficients "
              f"{lead_margins} certify large T"),
        rows=rows,
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)
    return report
