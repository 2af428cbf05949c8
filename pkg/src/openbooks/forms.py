"""Exterior calculus over ambient Euclidean coordinates.

Differential forms are stored as coefficient functions over the ambient
coordinates and evaluated pointwise on tangent vectors; restriction to a
submanifold happens at evaluation time by feeding in tangent bases.  All
coefficient functions, vector fields and maps are batched: they accept
arrays of shape ``(..., m)`` and return arrays with matching leading axes.

A k-form with coefficients ``c_I`` relative to the increasing multi-indices
``I = (i_1 < ... < i_k)`` evaluates on vectors ``v_1, ..., v_k`` as

    sum_I  c_I * det( [v_b[i_a]]_{a,b} ) .

Evaluation sorts the argument vectors lexicographically first and applies
the permutation sign, which makes the alternation property exact: swapping
two arguments flips the sign bit-for-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Callable

import numpy as np

from .errors import DimensionMismatch

# Points are plain float arrays of shape (..., m).  Coordinates flagged as
# periodic by a manifold are ordinary reals during evaluation and
# differentiation; periodicity only matters when comparing points, see
# :func:`points_close`.
Point = np.ndarray

DEFAULT_FD_STEP = 1e-5


def points_close(a, b, periodic_mask=None, tol=1e-10):
    """Compare points, reducing periodic coordinates mod 2*pi."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    d = a - b
    if periodic_mask is not None:
        mask = np.asarray(periodic_mask, bool)
        wrapped = (d[..., mask] + np.pi) % (2 * np.pi) - np.pi
        d = d.copy()
        d[..., mask] = wrapped
    return np.all(np.abs(d) <= tol, axis=-1)


# ---------------------------------------------------------------------------
# multi-index combinatorics


@lru_cache(maxsize=None)
def increasing_indices(m: int, k: int) -> tuple[tuple[int, ...], ...]:
    """All strictly increasing multi-indices of length k in range(m)."""
    return tuple(combinations(range(m), k))


@lru_cache(maxsize=None)
def _index_positions(m: int, k: int) -> dict:
    return {idx: i for i, idx in enumerate(increasing_indices(m, k))}


def _merge_sign(left: tuple, right: tuple) -> int:
    # left and right are individually increasing and disjoint; the sign of
    # the merge permutation is (-1)^(number of cross inversions).
    inv = sum(1 for i in left for j in right if i > j)
    return -1 if inv % 2 else 1


@lru_cache(maxsize=None)
def _wedge_table(m: int, ka: int, kb: int):
    pos_out = _index_positions(m, ka + kb)
    ia, ib, sg = [], [], []
    n_out = len(pos_out)
    scatter = np.zeros((0, n_out))
    rows = []
    for a_i, left in enumerate(increasing_indices(m, ka)):
        left_set = set(left)
        for b_i, right in enumerate(increasing_indices(m, kb)):
            if left_set & set(right):
                continue
            merged = tuple(sorted(left + right))
            ia.append(a_i)
            ib.append(b_i)
            sg.append(_merge_sign(left, right))
            rows.append(pos_out[merged])
    scatter = np.zeros((len(rows), n_out))
    scatter[np.arange(len(rows)), rows] = np.asarray(sg, float)
    return np.asarray(ia), np.asarray(ib), scatter


@lru_cache(maxsize=None)
def _ext_deriv_table(m: int, k: int):
    pos_src = _index_positions(m, k)
    out = increasing_indices(m, k + 1)
    axes = np.empty((len(out), k + 1), int)
    pos = np.empty((len(out), k + 1), int)
    sign = np.empty((len(out), k + 1))
    for r, idx in enumerate(out):
        for a, j in enumerate(idx):
            axes[r, a] = j
            pos[r, a] = pos_src[idx[:a] + idx[a + 1:]]
            sign[r, a] = (-1.0) ** a
    return axes, pos, sign


@lru_cache(maxsize=None)
def _interior_table(m: int, k: int):
    pos_src = _index_positions(m, k)
    out = increasing_indices(m, k - 1)
    width = m - (k - 1)
    comp = np.empty((len(out), width), int)
    pos = np.empty((len(out), width), int)
    sign = np.empty((len(out), width))
    for r, idx in enumerate(out):
        c = 0
        for j in range(m):
            if j in idx:
                continue
            merged = tuple(sorted((j,) + idx))
            comp[r, c] = j
            pos[r, c] = pos_src[merged]
            sign[r, c] = (-1.0) ** merged.index(j)
            c += 1
    return comp, pos, sign


def _lex_order_sign(vectors):
    """Lexicographic ordering of argument vectors and its permutation sign.

    vectors : (..., k, m).  Returns (order, sign) with order (..., k) and
    sign (...,).  Sorting canonicalises evaluation so that permuting the
    arguments flips the result sign exactly.
    """
    v = np.asarray(vectors, float)
    k, m = v.shape[-2], v.shape[-1]
    keys = tuple(v[..., :, i] for i in range(m - 1, -1, -1))
    order = np.lexsort(keys, axis=-1)
    gt = order[..., :, None] > order[..., None, :]
    upper = np.triu(np.ones((k, k), bool), 1)
    inversions = np.count_nonzero(gt & upper, axis=(-2, -1))
    sign = 1.0 - 2.0 * (inversions % 2)
    return order, sign


# ---------------------------------------------------------------------------
# forms, vector fields, maps


@dataclass(frozen=True)
class KForm:
    """Degree-k differential form on an ambient Euclidean space.

    coeffs maps points (..., m) to the coefficient vector (..., n_idx) in
    the order of :func:`increasing_indices`.
    """

    degree: int
    ambient_dim: int
    coeffs: Callable[[np.ndarray], np.ndarray]

    @property
    def n_indices(self) -> int:
        return math.comb(self.ambient_dim, self.degree)

    def coeff(self, p, index):
        """Single coefficient c_index(p) for a strictly increasing index."""
        index = tuple(index)
        pos = _index_positions(self.ambient_dim, self.degree)[index]
        return np.asarray(self.coeffs(np.asarray(p, float)))[..., pos]

    def __call__(self, p, *vectors):
        if len(vectors) != self.degree:
            raise DimensionMismatch(
                f"{self.degree}-form applied to {len(vectors)} vectors")
        if self.degree == 0:
            return self.coeffs(np.asarray(p, float))[..., 0]
        basis = np.stack([np.asarray(v, float) for v in vectors], axis=-2)
        return self.at_basis(p, basis)

    def at_basis(self, p, vectors):
        """Evaluate on a stack of vectors: p (..., m), vectors (..., k, m)."""
        p = np.asarray(p, float)
        v = np.asarray(vectors, float)
        if v.shape[-1] != self.ambient_dim:
            raise DimensionMismatch("vector dimension does not match form")
        if self.degree == 0:
            return self.coeffs(p)[..., 0]
        c = self.coeffs(p)
        order, sign = _lex_order_sign(v)
        vs = np.take_along_axis(v, order[..., None], axis=-2)
        idx = np.asarray(increasing_indices(self.ambient_dim, self.degree))
        sub = vs[..., :, idx]                      # (..., k, n_idx, k)
        sub = np.moveaxis(sub, -2, -3)             # (..., n_idx, k, k)
        dets = np.linalg.det(sub)
        return sign * np.einsum("...i,...i->...", c, dets)

    def __add__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        if (other.degree, other.ambient_dim) != (self.degree, self.ambient_dim):
            raise DimensionMismatch("cannot add forms of different type")
        f, g = self.coeffs, other.coeffs
        return KForm(self.degree, self.ambient_dim, lambda p: f(p) + g(p))

    def __sub__(self, other):
        return self + (-1.0) * other

    def __neg__(self):
        return (-1.0) * self

    def __rmul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        f = self.coeffs
        return KForm(self.degree, self.ambient_dim, lambda p: scalar * f(p))


def scale_form(fn: Callable, form: KForm) -> KForm:
    """Multiply a form by a scalar function of the point."""
    return KForm(form.degree, form.ambient_dim,
                 lambda p: fn(p)[..., None] * form.coeffs(p))


def zero_form(m: int, k: int) -> KForm:
    n = math.comb(m, k)
    return KForm(k, m, lambda p: np.zeros(np.shape(p)[:-1] + (n,)))


def constant_form(m: int, k: int, values) -> KForm:
    values = np.asarray(values, float)
    return KForm(k, m, lambda p: np.broadcast_to(
        values, np.shape(p)[:-1] + values.shape).copy())


def coordinate_differential(m: int, i: int) -> KForm:
    """The 1-form dx_i on R^m."""
    e = np.zeros(m)
    e[i] = 1.0
    return constant_form(m, 1, e)


def form_from_components(m: int, k: int, components: dict) -> KForm:
    """Build a k-form from a dict {increasing index: coefficient}.

    Coefficients may be numbers or functions of the point batch.
    """
    pos = _index_positions(m, k)
    items = []
    for idx, c in components.items():
        idx = tuple(idx)
        if tuple(sorted(idx)) != idx or len(set(idx)) != len(idx):
            raise DimensionMismatch(f"index {idx} is not strictly increasing")
        items.append((pos[idx], c))
    n = math.comb(m, k)

    def coeffs(p):
        p = np.asarray(p, float)
        out = np.zeros(p.shape[:-1] + (n,))
        for position, c in items:
            out[..., position] = c(p) if callable(c) else c
        return out

    return KForm(k, m, coeffs)


def function_form(m: int, fn: Callable) -> KForm:
    """A 0-form wrapping a scalar function."""
    return KForm(0, m, lambda p: np.asarray(fn(p))[..., None])


@dataclass(frozen=True)
class VecField:
    """Vector field on ambient space: eval maps (..., m) to (..., m)."""

    ambient_dim: int
    eval: Callable[[np.ndarray], np.ndarray]

    def __call__(self, p):
        return self.eval(np.asarray(p, float))


def constant_field(m: int, components) -> VecField:
    components = np.asarray(components, float)
    return VecField(m, lambda p: np.broadcast_to(
        components, np.shape(p)[:-1] + (m,)).copy())


@dataclass(frozen=True)
class SmoothMap:
    """Map between ambient spaces with an optional analytic Jacobian."""

    source_dim: int
    target_dim: int
    eval: Callable[[np.ndarray], np.ndarray]
    jac: Callable[[np.ndarray], np.ndarray] | None = None
    fd_step: float = DEFAULT_FD_STEP

    def __call__(self, p):
        return self.eval(np.asarray(p, float))

    def jacobian(self, p, step=None):
        """Jacobian (..., target_dim, source_dim), by central differences
        unless an analytic one was supplied."""
        p = np.asarray(p, float)
        if self.jac is not None:
            return self.jac(p)
        h = self.fd_step if step is None else step
        cols = []
        for i in range(self.source_dim):
            dp = np.zeros(self.source_dim)
            dp[i] = h
            cols.append((self.eval(p + dp) - self.eval(p - dp)) / (2 * h))
        return np.stack(cols, axis=-1)


def identity_map(m: int) -> SmoothMap:
    eye = np.eye(m)
    return SmoothMap(m, m, lambda p: p.copy(),
                     jac=lambda p: np.broadcast_to(eye, np.shape(p)[:-1] + (m, m)).copy())


def compose(outer: SmoothMap, inner: SmoothMap) -> SmoothMap:
    if inner.target_dim != outer.source_dim:
        raise DimensionMismatch("map composition dimension mismatch")

    def jac(p):
        return outer.jacobian(inner(p)) @ inner.jacobian(p)

    return SmoothMap(inner.source_dim, outer.target_dim,
                     lambda p: outer(inner(p)), jac=jac)


# ---------------------------------------------------------------------------
# operations


def wedge(a: KForm, b: KForm) -> KForm:
    """Wedge product; the coefficient formula is the shuffle sum with signs."""
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch("wedge of forms on different ambient spaces")
    m = a.ambient_dim
    k = a.degree + b.degree
    if k > m:
        raise DimensionMismatch(
            f"wedge degree {k} exceeds ambient dimension {m}")
    ia, ib, scatter = _wedge_table(m, a.degree, b.degree)
    fa, fb = a.coeffs, b.coeffs

    def coeffs(p):
        ca = fa(p)
        cb = fb(p)
        return (ca[..., ia] * cb[..., ib]) @ scatter

    return KForm(k, m, coeffs)


def wedge_all(*forms: KForm) -> KForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def wedge_power(a: KForm, n: int) -> KForm:
    if n == 0:
        return constant_form(a.ambient_dim, 0, [1.0])
    out = a
    for _ in range(n - 1):
        out = wedge(out, a)
    return out


def ext_deriv(a: KForm, h: float = DEFAULT_FD_STEP,
              step_scale: Callable | None = None,
              richardson: bool = False) -> KForm:
    """Exterior derivative via central differences of the coefficients.

    d(sum c_I dx_I) = sum_i d_i c_I dx_i ^ dx_I.  ``step_scale`` gives a
    per-point multiplier for the step, used to differentiate quotient forms
    whose derivatives blow up near a singular locus.  ``richardson``
    combines steps h and h/2 for an O(h^4) truncation error.
    """
    if h <= 0:
        raise ValueError("finite-difference step must be positive")
    m = a.ambient_dim
    axes, pos, sign = _ext_deriv_table(m, a.degree)
    fa = a.coeffs

    def derivative_stack(p, step):
        cols = []
        for i in range(m):
            dp = np.zeros(m)
            dp[i] = 1.0
            hp = step[..., None] * dp
            cols.append((fa(p + hp) - fa(p - hp)) / (2 * step[..., None]))
        return np.stack(cols, axis=-2)        # (..., m, n_src)

    def coeffs(p):
        p = np.asarray(p, float)
        step = np.full(p.shape[:-1], h)
        if step_scale is not None:
            step = step * np.asarray(step_scale(p), float)
        d = derivative_stack(p, step)
        if richardson:
            d2 = derivative_stack(p, step / 2)
            d = (4.0 * d2 - d) / 3.0
        terms = d[..., axes, pos]              # (..., n_out, k+1)
        return np.einsum("...oa,oa->...o", terms, sign)

    return KForm(a.degree + 1, m, coeffs)


def interior(x: VecField, a: KForm) -> KForm:
    """Interior product (contraction in the first slot)."""
    if a.degree < 1:
        raise DimensionMismatch("interior product needs degree >= 1")
    if x.ambient_dim != a.ambient_dim:
        raise DimensionMismatch("field and form on different ambient spaces")
    m = a.ambient_dim
    comp, pos, sign = _interior_table(m, a.degree)
    fa = a.coeffs

    def coeffs(p):
        c = fa(p)
        v = x(p)
        terms = v[..., comp] * c[..., pos]      # (..., n_out, width)
        return np.einsum("...ow,ow->...o", terms, sign)

    return KForm(a.degree - 1, m, coeffs)


def pullback(phi: SmoothMap, a: KForm) -> KForm:
    """Pullback phi^* a, with (phi^*a)(v_1..v_k) = a(Dphi v_1, ..)."""
    if a.ambient_dim != phi.target_dim:
        raise DimensionMismatch("form not defined on the map target")
    k = a.degree
    if k > phi.source_dim:
        raise DimensionMismatch("pullback degree exceeds source dimension")
    if k == 0:
        return KForm(0, phi.source_dim, lambda p: a.coeffs(phi(p)))
    rows = np.asarray(increasing_indices(phi.target_dim, k))
    cols = np.asarray(increasing_indices(phi.source_dim, k))
    fa = a.coeffs

    def coeffs(p):
        q = phi(p)
        c = fa(q)
        jac = phi.jacobian(p)
        sub = jac[..., rows[:, None, :, None], cols[None, :, None, :]]
        minors = np.linalg.det(sub)             # (..., n_tgt, n_src)
        return np.einsum("...t,...ts->...s", c, minors)

    return KForm(k, phi.source_dim, coeffs)


def lie_derivative_field(x: VecField, fn: Callable) -> Callable:
    """Directional derivative of a scalar function along a field (FD)."""
    h = DEFAULT_FD_STEP

    def out(p):
        v = x(p)
        return (fn(p + h * v) - fn(p - h * v)) / (2 * h)

    return out
