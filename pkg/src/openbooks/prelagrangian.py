"""Pre-Lagrangian submanifolds of the product contact manifolds, the
Legendrian-times-torus and binding-times-torus constructions, and the
straightening of loops with positive contact-form integral.

P inside a (2N+1)-dimensional contact manifold is pre-Lagrangian when
dim P = N + 1 and some contact form for the structure has d(alpha)|TP = 0.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .bourgeois import bourgeois_form
from .contact import Representation, quadric_open_book
from .errors import DomainError, OffManifold
from .forms import KForm, VecField, ext_deriv, scale_form
from .manifolds import Submanifold, tangent_bases
from .report import CheckReport, make_report, merge_reports


@dataclass(frozen=True)
class PreLagrangian:
    """Candidate pre-Lagrangian P with the contact form certifying it."""

    submanifold: Submanifold
    ambient_contact: Submanifold       # the contact manifold containing P
    alpha_hat: KForm
    name: str = ""


@dataclass(frozen=True)
class Loop:
    """Closed curve [0, 2 pi] -> P, sampled on a uniform grid; values are
    stored unwrapped (angle coordinates may wind).  A supplied derivative
    takes precedence over the finite-difference stencil."""

    values: np.ndarray                 # (n_grid + 1, m), endpoint included
    periodic_mask: np.ndarray | None = None
    derivative_values: np.ndarray | None = None    # (n_grid, m), optional

    @property
    def n_grid(self):
        return self.values.shape[0] - 1

    @staticmethod
    def from_function(gamma: Callable, n_grid: int = 2048,
                      periodic_mask=None, derivative: Callable | None = None
                      ) -> "Loop":
        t = np.linspace(0.0, 2 * np.pi, n_grid + 1)
        values = np.stack([np.asarray(gamma(s), float) for s in t])
        deriv = None
        if derivative is not None:
            deriv = np.stack([np.asarray(derivative(s), float)
                              for s in t[:-1]])
        return Loop(values, periodic_mask, deriv)

    def closure_gap(self):
        gap = self.values[-1] - self.values[0]
        if self.periodic_mask is not None:
            wrapped = (gap[self.periodic_mask] + np.pi) % (2 * np.pi) - np.pi
            gap = gap.copy()
            gap[self.periodic_mask] = wrapped
        return float(np.max(np.abs(gap)))

    def derivatives(self):
        """dgamma/dt on the open grid t_0..t_{n-1}: the supplied samples
        when present, else the periodic fourth-order stencil (the stored
        endpoint supplies the winding)."""
        if self.derivative_values is not None:
            return self.derivative_values
        vals = self.values[:-1]
        n = vals.shape[0]
        h = 2 * np.pi / n
        winding = self.values[-1] - self.values[0]

        def shifted(k):
            rolled = np.roll(vals, -k, axis=0)
            if k > 0:
                rolled[n - k:] += winding
            elif k < 0:
                rolled[: -k] -= winding
            return rolled

        return (-shifted(2) + 8 * shifted(1) - 8 * shifted(-1)
                + shifted(-2)) / (12 * h)


# ---------------------------------------------------------------------------
# constructions on the product of the standard 3-sphere with the torus


def _smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t ** 3 * (10.0 + t * (-15.0 + 6.0 * t))


def _bump(d, inner=0.1, outer=0.3):
    """1 within ``inner`` of the set, 0 beyond ``outer``, quintic blend."""
    return 1.0 - _smoothstep((d - inner) / (outer - inner))


def real_circle_distance(p):
    """Ambient Euclidean distance from z in C^2 to the real unit circle
    {(q1, q2, 0, 0)} (interleaved coordinates)."""
    x = p[..., 0::2]
    y = p[..., 1::2]
    x = x[..., :2]
    y = y[..., :2]
    return np.sqrt((np.linalg.norm(x, axis=-1) - 1.0) ** 2
                   + np.sum(y * y, axis=-1))


def real_circle_torus_prelagrangian() -> PreLagrangian:
    """L x T^2 for L the real unit circle in S^3 (the zero section of the
    quadric book's zero page), with the product contact form rescaled by a
    nowhere-vanishing extension of Re f |_L:

        fhat_x = b(d( . , L)) f_x + (1 - b(d( . , L)))

    where b is a bump equal to 1 within distance 0.1 of L and 0 beyond
    0.3.  On L the rescaled form restricts to dphi1 (f_x = 1, f_y = 0 and
    the circle is Legendrian).
    """
    rep = quadric_open_book(2)
    bf = bourgeois_form(rep)
    m = 6

    def fhat_x(p):
        fx = np.real(rep.f.value(p[..., :4]))
        b = _bump(real_circle_distance(p[..., :4]))
        return b * fx + (1.0 - b)

    alpha_hat = scale_form(lambda p: 1.0 / fhat_x(p), bf.alpha)

    def constraints(p):
        return np.stack([np.sum(p[..., :4] ** 2, axis=-1) - 1.0,
                         p[..., 1], p[..., 3]], axis=-1)

    def jac(p):
        out = np.zeros(np.shape(p)[:-1] + (3, m))
        out[..., 0, :4] = 2.0 * p[..., :4]
        out[..., 1, 1] = 1.0
        out[..., 2, 3] = 1.0
        return out

    def sampler(rng, count):
        t = rng.uniform(0.0, 2 * np.pi, size=count)
        ang = rng.uniform(0.0, 2 * np.pi, size=(count, 2))
        out = np.zeros((count, m))
        out[:, 0] = np.cos(t)
        out[:, 2] = np.sin(t)
        out[:, 4:] = ang
        return out

    sub = Submanifold(
        ambient_dim=m, constraints=constraints, n_constraints=3,
        name="L x T^2 (real circle)",
        periodic_mask=np.array([False] * 4 + [True, True]),
        orientation=None, sampler=sampler, constraint_jac=jac)
    return PreLagrangian(sub, bf.manifold, alpha_hat,
                         name="real circle x T^2")


def binding_torus_prelagrangian() -> PreLagrangian:
    """K x T^2 for K the binding of the quadric book on S^3 (both defining
    functions vanish along K x T^2, so the product form itself certifies
    the pre-Lagrangian).  The sampler parametrizes the two binding circles
    z = (e^{ia}, +- i e^{ia})/sqrt(2) exactly."""
    rep = quadric_open_book(2)
    bf = bourgeois_form(rep)
    m = 6

    def constraints(p):
        fx = np.real(rep.f.value(p[..., :4]))
        fy = np.imag(rep.f.value(p[..., :4]))
        return np.stack([np.sum(p[..., :4] ** 2, axis=-1) - 1.0, fx, fy],
                        axis=-1)

    def jac(p):
        out = np.zeros(np.shape(p)[:-1] + (3, m))
        out[..., 0, :4] = 2.0 * p[..., :4]
        out[..., 1:, :4] = rep.f.grad(p[..., :4])
        return out

    def sampler(rng, count):
        a = rng.uniform(0.0, 2 * np.pi, size=count)
        sign = np.where(rng.uniform(size=count) < 0.5, 1.0, -1.0)
        ang = rng.uniform(0.0, 2 * np.pi, size=(count, 2))
        inv = 1.0 / np.sqrt(2.0)
        out = np.zeros((count, m))
        out[:, 0] = np.cos(a) * inv
        out[:, 1] = np.sin(a) * inv
        out[:, 2] = -sign * np.sin(a) * inv
        out[:, 3] = sign * np.cos(a) * inv
        out[:, 4:] = ang
        return out

    sub = Submanifold(
        ambient_dim=m, constraints=constraints, n_constraints=3,
        name="K x T^2 (quadric binding)",
        periodic_mask=np.array([False] * 4 + [True, True]),
        orientation=None, sampler=sampler, constraint_jac=jac)
    return PreLagrangian(sub, bf.manifold, bf.alpha,
                         name="binding x T^2")


# ---------------------------------------------------------------------------
# checks


def verify_prelagrangian(pl: PreLagrangian, samples, tol=1e-7,
                         seed=0) -> CheckReport:
    """Dimension identity and vanishing of d(alpha_hat) on TP."""
    t0 = time.perf_counter()
    pts = np.asarray(samples, float)
    dim_v = pl.ambient_contact.dim
    dim_p = pl.submanifold.dim
    dim_ok = (2 * dim_p == dim_v + 1)
    bases = tangent_bases(pl.submanifold, pts)
    d_alpha = ext_deriv(pl.alpha_hat)
    worst = 0.0
    d = bases.shape[1]
    for i in range(d):
        for j in range(i + 1, d):
            pair = np.stack([bases[:, i, :], bases[:, j, :]], axis=1)
            worst = max(worst, float(np.max(np.abs(
                d_alpha.at_basis(pts, pair)))))
    return make_report(
        f"prelagrangian[{pl.name}]", n_samples=len(pts),
        max_residual=worst, tolerance=tol, seed=seed,
        passed=dim_ok and worst <= tol,
        note=(f"dim P = (dim V + 1)/2 ({'ok' if dim_ok else 'VIOLATED'}); "
              "d(alpha_hat) = 0 on TP"),
        wall_time_ms=(time.perf_counter() - t0) * 1000.0)


def restricted_form_values(pl: PreLagrangian, samples):
    """alpha_hat paired with each tangent basis vector at the samples;
    used to compare the restriction against coordinate forms."""
    pts = np.asarray(samples, float)
    bases = tangent_bases(pl.submanifold, pts)
    vals = np.stack([pl.alpha_hat.at_basis(pts, bases[:, None, j, :])
                     for j in range(bases.shape[1])], axis=-1)
    return bases, vals


def legendrian_check(l_sub: Submanifold, rep: Representation, samples,
                     alpha_tol=1e-9, seed=0) -> CheckReport:
    """L is Legendrian (alpha vanishes on TL) and contained in the
    interior of a single page (theta constant, |f| > 0)."""
    t0 = time.perf_counter()
    pts = np.asarray(samples, float)
    bases = tangent_bases(l_sub, pts)
    alpha = rep.contact.alpha
    vals = np.stack([alpha.at_basis(pts, bases[:, None, j, :])
                     for j in range(bases.shape[1])], axis=-1)
    details = [make_report(
        "alpha_vanishing", n_samples=len(pts),
        max_residual=float(np.max(np.abs(vals))), tolerance=alpha_tol,
        seed=seed, note="alpha = 0 on TL")]
    rho = rep.f.modulus(pts)
    off_binding = float(np.min(rho))
    theta = rep.f.theta(pts)
    spread = 0.0
    if off_binding > 0:
        ref = np.exp(1j * theta)
        spread = float(np.max(np.abs(np.angle(ref / ref[0]))))
    details.append(make_report(
        "page_containment", n_samples=len(pts),
        min_margin=off_binding, max_residual=spread,
        tolerance=1e-6, residual_tolerance=1e-9, seed=seed,
        note="|f| > 0 and theta constant: L sits inside one page"))
    out = merge_reports(f"legendrian[{l_sub.name}]", details, seed=seed,
                        note="closed Legendrian contained in one page")
    out.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out


def real_circle_submanifold() -> Submanifold:
    """The real unit circle inside S^3 (interleaved coordinates)."""
    def constraints(p):
        return np.stack([np.sum(p * p, axis=-1) - 1.0, p[..., 1],
                         p[..., 3]], axis=-1)

    def sampler(rng, count):
        t = rng.uniform(0.0, 2 * np.pi, size=count)
        out = np.zeros((count, 4))
        out[:, 0] = np.cos(t)
        out[:, 2] = np.sin(t)
        return out

    return Submanifold(4, constraints, 3, name="real circle",
                       periodic_mask=np.zeros(4, bool), orientation=None,
                       sampler=sampler)


def hopf_circle_submanifold() -> Submanifold:
    """A Hopf fiber fixture {(e^{ia}, e^{ia})/sqrt 2}: transverse to the
    contact structure, so the Legendrian check must fail."""
    def constraints(p):
        inv = 1.0 / np.sqrt(2.0)
        return np.stack([p[..., 0] - p[..., 2], p[..., 1] - p[..., 3],
                         np.sum(p * p, axis=-1) - 1.0], axis=-1)

    def sampler(rng, count):
        a = rng.uniform(0.0, 2 * np.pi, size=count)
        inv = 1.0 / np.sqrt(2.0)
        out = np.stack([np.cos(a) * inv, np.sin(a) * inv,
                        np.cos(a) * inv, np.sin(a) * inv], axis=-1)
        return out

    return Submanifold(4, constraints, 3, name="Hopf circle",
                       periodic_mask=np.zeros(4, bool), orientation=None,
                       sampler=sampler)


# ---------------------------------------------------------------------------
# loop straightening


def loop_integral(pl: PreLagrangian, loop: Loop):
    """Integral of alpha_hat over the loop by composite Simpson."""
    vals = loop.values[:-1]
    der = loop.derivatives()
    g = np.array([pl.alpha_hat.at_basis(vals[i], der[i][None, :])
                  for i in range(vals.shape[0])])
    g = np.append(g, g[0])
    t = np.linspace(0.0, 2 * np.pi, loop.n_grid + 1)
    return float(simpson(g, x=t)), g, t


def straighten_loop(loop: Loop, pl: PreLagrangian, y_field: VecField,
                    steps: int = 32, transverse_tol=1e-5,
                    closure_tol=1e-10, on_p_tol=1e-8,
                    y_tol=1e-8, seed=0):
    """Flow-reparametrize a loop with positive contact integral into one
    positively transverse to the Legendrian foliation of P:

        g(t) = alpha_hat(gamma'(t)),  C = integral of g,
        f(t) = C t / (2 pi) - int_0^t g,
        straightened(t) = Phi^Y_{f(t)}(gamma(t))

    for any Y on P with alpha_hat(Y) = 1.  The output satisfies
    alpha_hat(gamma'(t)) = C / (2 pi) and closes up since f(0) = f(2 pi)
    = 0.  Returns (straightened Loop, CheckReport).
    """
    t0 = time.perf_counter()
    vals = loop.values[:-1]
    if loop.closure_gap() > closure_tol:
        raise DomainError(f"loop endpoint gap {loop.closure_gap():.2e}")
    res = pl.submanifold.residual(vals)
    if np.max(res) > on_p_tol:
        raise OffManifold(f"loop leaves P: residual {np.max(res):.2e}")

    c_val, g, t = loop_integral(pl, loop)
    if c_val <= 0:
        raise DomainError(f"loop integral C = {c_val:.3e} is not positive")

    # Y must be tangent to P with alpha_hat(Y) = 1 along the loop
    yv = y_field(vals)
    pairing = np.array([pl.alpha_hat.at_basis(vals[i], yv[i][None, :])
                        for i in range(vals.shape[0])])
    if np.max(np.abs(pairing - 1.0)) > y_tol:
        raise DomainError("alpha_hat(Y) != 1 along the loop: gap "
                          f"{np.max(np.abs(pairing - 1.0)):.2e}")

    f_t = c_val * t / (2 * np.pi) - cumulative_simpson(g, x=t, initial=0.0)

    # flow each sample for its own time f(t_i): scale the field per point
    # and integrate unit time
    factors = f_t[:-1]

    new_vals = vals.copy()
    h = 1.0 / steps
    for _ in range(steps):
        def scaled(p):
            return factors[:, None] * y_field(p)
        k1 = scaled(new_vals)
        k2 = scaled(new_vals + 0.5 * h * k1)
        k3 = scaled(new_vals + 0.5 * h * k2)
        k4 = scaled(new_vals + h * k3)
        new_vals = new_vals + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    drift = float(np.max(pl.submanifold.residual(new_vals)))
    if drift > on_p_tol:
        raise OffManifold(f"the Y flow left P: drift {drift:.2e}")

    closing = new_vals[0] + (loop.values[-1] - loop.values[0])
    out = Loop(np.vstack([new_vals, closing[None, :]]), loop.periodic_mask)

    c_out, g_out, _ = loop_integral(pl, out)
    uniform_gap = float(np.max(np.abs(g_out - c_val / (2 * np.pi))))
    report = merge_reports(
        f"straighten[{pl.name}]",
        [make_report("transverse_speed", n_samples=loop.n_grid,
                     max_residual=uniform_gap, tolerance=transverse_tol,
                     seed=seed,
                     note="alpha_hat(gamma') = C / (2 pi) uniformly"),
         make_report("integral_conserved", n_samples=loop.n_grid,
                     max_residual=abs(c_out - c_val), tolerance=1e-6,
                     seed=seed,
                     note="loop integral of alpha_hat is flow invariant")],
        seed=seed, note=f"straightening with C = {c_val:.6f}")
    report.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    return out, report
