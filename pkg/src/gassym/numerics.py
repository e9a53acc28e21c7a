"""Floating-point support: trajectory integration and figure data.

Classical fixed-step RK4 for particle paths dx/dt = u(t, x), comparison
against the closed-form flow maps, numeric Jacobian rank, and the
unit-sphere transport behind the ellipsoid figure.  All sampling uses a
seeded PRNG and every routine is deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from .submodel import FlowMap, Solution, jacobian_det, t, u0, x, x0, y, y0, z, z0

__all__ = [
    "SphereTransportReport",
    "Trajectory",
    "compare_to_closed_form",
    "convergence_order",
    "integrate",
    "numeric_rank",
    "sphere_transport",
    "velocity_function",
    "write_csv",
]


class IntegrationError(RuntimeError):
    """The right-hand side failed to evaluate along the path."""


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled particle path."""

    ts: np.ndarray
    points: np.ndarray  # shape (len(ts), 3)
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.diff(self.ts) > 0):
            raise ValueError("time samples must be strictly increasing")
        if not (np.all(np.isfinite(self.ts)) and np.all(np.isfinite(self.points))):
            raise ValueError("trajectory contains non-finite values")


def velocity_function(s: Solution, binding: dict):
    """Numeric (t, x, y, z) -> velocity 3-vector for a solution family."""
    vel = [sp.sympify(g).subs(binding) for g in (s.u, s.v, s.w)]
    extra = set().union(*(g.free_symbols for g in vel)) - {t, x, y, z}
    if extra:
        raise ValueError(f"velocity has unbound constants: {sorted(map(str, extra))}")
    fn = sp.lambdify((t, x, y, z), vel, modules="numpy")

    def rhs(tv, p):
        return np.asarray(fn(tv, p[0], p[1], p[2]), dtype=float)

    return rhs


def integrate(velocity, p0, t0: float, t1: float, h: float, metadata: dict | None = None) -> Trajectory:
    """Classical 4th-order Runge-Kutta at fixed step h on [t0, t1].

    ``velocity`` is a callable (t, point) -> 3-vector.  The final step
    is shortened to land exactly on t1.
    """
    if h <= 0:
        raise ValueError("step size must be positive")
    if t1 <= t0:
        raise ValueError("empty time range")
    ts = [t0]
    pts = [np.asarray(p0, dtype=float)]
    tv, p = t0, pts[0]
    while tv < t1 - 1e-15 * max(1.0, abs(t1)):
        step = min(h, t1 - tv)
        try:
            k1 = velocity(tv, p)
            k2 = velocity(tv + step / 2, p + step / 2 * k1)
            k3 = velocity(tv + step / 2, p + step / 2 * k2)
            k4 = velocity(tv + step, p + step * k3)
        except (FloatingPointError, ZeroDivisionError, ValueError) as exc:
            raise IntegrationError(f"velocity evaluation failed at t={tv}: {exc}")
        p = p + step / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(p)):
            raise IntegrationError(f"non-finite state at t={tv + step}")
        tv = tv + step
        ts.append(tv)
        pts.append(p)
    return Trajectory(np.array(ts), np.array(pts), dict(metadata or {}))


def _map_function(fm: FlowMap, binding: dict):
    comps = [sp.sympify(c).subs(binding) for c in fm.components()]
    extra = set().union(*(c.free_symbols for c in comps)) - {t}
    if extra:
        raise ValueError(f"flow map has unbound symbols: {sorted(map(str, extra))}")
    return sp.lambdify(t, comps, modules="numpy")


def compare_to_closed_form(tr: Trajectory, fm: FlowMap, binding: dict) -> float:
    """Max Euclidean distance between samples and the closed-form flow.

    ``binding`` must fix the map's constants and Lagrangian labels.
    """
    fn = _map_function(fm, binding)
    err = 0.0
    for tv, p in zip(tr.ts, tr.points):
        q = np.asarray(fn(tv), dtype=float)
        err = max(err, float(np.linalg.norm(p - q)))
    return err


def convergence_order(velocity, p0, t0: float, t1: float, closed_form, hs=(1e-2, 5e-3, 2.5e-3)) -> float:
    """Observed RK4 order: slope of log endpoint error against log h.

    ``closed_form`` is a callable t -> exact 3-vector.
    """
    errs = []
    exact = np.asarray(closed_form(t1), dtype=float)
    for h in hs:
        tr = integrate(velocity, p0, t0, t1, h)
        errs.append(float(np.linalg.norm(tr.points[-1] - exact)))
    slope, _ = np.polyfit(np.log(hs), np.log(errs), 1)
    return float(slope)


def numeric_rank(J, tol: float = 1e-12) -> int:
    """Count of singular values above tol * sigma_max (LAPACK SVD)."""
    J = np.asarray(J, dtype=float)
    if J.size == 0:
        return 0
    sv = np.linalg.svd(J, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


# --------------------------------------------------------------------------
# unit-sphere transport (figure 1 data)


@dataclass(frozen=True)
class SphereTransportReport:
    """Images of seeded unit-sphere points under the isochoric flow."""

    t: float
    n: int
    seed: int
    quadric: dict  # monomial (as string) -> float coefficient
    max_residual: float
    jacobian: float
    volume: float


def sphere_transport(fm: FlowMap, n: int, t_value, binding: dict, *, seed: int = 0) -> SphereTransportReport:
    """Transport n sphere points to time t and test the image quadric.

    The quadric is obtained exactly: the flow map is inverted
    symbolically and substituted into x0^2 + y0^2 + z0^2 - 1.  Each
    transported point must satisfy it to floating-point accuracy; the
    enclosed volume is (4/3)*pi*|J| with J the map's Jacobian
    determinant.
    """
    binding = {sp.sympify(k): sp.nsimplify(v) for k, v in binding.items()}
    comps = [sp.sympify(c).subs(binding) for c in fm.components()]
    t_exact = sp.nsimplify(t_value)
    at_t = [c.subs(t, t_exact) for c in comps]
    sol = sp.solve(
        [sp.Eq(x, at_t[0]), sp.Eq(y, at_t[1]), sp.Eq(z, at_t[2])],
        [x0, y0, z0],
        dict=True,
    )
    if len(sol) != 1:
        raise ValueError("flow map is not invertible at the requested time")
    inverse = sol[0]
    quadric = sp.expand(
        inverse[x0] ** 2 + inverse[y0] ** 2 + inverse[z0] ** 2 - 1
    )
    coeffs = {
        str(mon): float(c)
        for mon, c in quadric.as_coefficients_dict().items()
    }

    forward = sp.lambdify((x0, y0, z0), [c.subs(t, t_exact) for c in comps], modules="numpy")
    qfn = sp.lambdify((x, y, z), quadric, modules="numpy")
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, 3))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    images = np.array([forward(*p) for p in pts], dtype=float)
    residuals = np.abs(qfn(images[:, 0], images[:, 1], images[:, 2]))

    jac = jacobian_det(fm).subs(binding).subs(t, t_exact)
    volume = float(sp.Rational(4, 3) * sp.pi * abs(jac))
    return SphereTransportReport(
        t=float(t_exact),
        n=n,
        seed=seed,
        quadric=coeffs,
        max_residual=float(np.max(residuals)),
        jacobian=float(jac),
        volume=volume,
    )


def write_csv(tr: Trajectory, path) -> None:
    """Trajectory CSV: header t,x,y,z, 17 significant digits per value."""
    with open(path, "w") as fh:
        fh.write("t,x,y,z\n")
        for tv, p in zip(tr.ts, tr.points):
            fh.write(f"{tv:.17g},{p[0]:.17g},{p[1]:.17g},{p[2]:.17g}\n")
