"""The rank-1/defect-1 submodel of entry 4.77 and its exact solutions.

The subalgebra {X1, X2, X3, Y + X4} has invariants (t, v, w, P1 = P - u,
rho); keeping u as a defective unknown of all variables reduces the gas
dynamics system to five equations in t.  Two explicit solution families
solve the reduced system: an isochoric one (constant density) and a
non-isochoric one (rho = rho0/t, taken on t > 0).  This module encodes
the reduced system, the full system with state equation P = f(rho) + S,
both families (general and constant-reduced forms), their particle flow
maps, and the trajectory geometry statements.

The state function f stays opaque in every symbolic check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import sympy as sp

from .exprs import canonicalize, opaque

__all__ = [
    "CONSTANTS",
    "FlowMap",
    "GasSystem",
    "Solution",
    "flow_consistency",
    "flow_map",
    "full_residuals",
    "galilean_shift",
    "geometry_checks",
    "jacobian_det",
    "lagrangian_fields",
    "pressure_shift",
    "reduce_general",
    "reduced_residuals",
    "solution_family",
    "vorticity",
]

t, x, y, z = sp.symbols("t x y z")
_SPACE = (x, y, z)
x0, y0, z0, u0 = sp.symbols("x0 y0 z0 u0")

k0, m0, n0, v0, w0, P0 = sp.symbols("k0 m0 n0 v0 w0 P0")
rho0 = sp.Symbol("rho0", positive=True)
CONSTANTS = (k0, m0, n0, v0, w0, P0, rho0)

_f = opaque("f")
_fp = opaque("f", 1)


def _D(g, u, v, w):
    return sp.diff(g, t) + u * sp.diff(g, x) + v * sp.diff(g, y) + w * sp.diff(g, z)


@dataclass(frozen=True)
class GasSystem:
    """Residual forms of the gas dynamics system with P = f(rho) + S."""

    def residuals(self, u, v, w, rho, P) -> list[sp.Expr]:
        div = sp.diff(u, x) + sp.diff(v, y) + sp.diff(w, z)
        return [
            canonicalize(_D(u, u, v, w) + sp.diff(P, x) / rho),
            canonicalize(_D(v, u, v, w) + sp.diff(P, y) / rho),
            canonicalize(_D(w, u, v, w) + sp.diff(P, z) / rho),
            canonicalize(_D(rho, u, v, w) + rho * div),
            canonicalize(_D(P, u, v, w) + rho * _fp(rho) * div),
        ]


def reduced_residuals(u, v, w, rho, P1) -> list[sp.Expr]:
    """The five equations of the rank-1/defect-1 submodel, canonicalized.

    Here v, w, rho, P1 are functions of t alone and u may depend on all
    of (t, x, y, z).
    """
    Du = sp.diff(u, t) + u * sp.diff(u, x) + v * sp.diff(u, y) + w * sp.diff(u, z)
    return [
        canonicalize(Du + sp.diff(u, x) / rho),
        canonicalize(sp.diff(v, t) + sp.diff(u, y) / rho),
        canonicalize(sp.diff(w, t) + sp.diff(u, z) / rho),
        canonicalize(sp.diff(rho, t) + rho * sp.diff(u, x)),
        canonicalize(sp.diff(P1, t) + Du + rho * _fp(rho) * sp.diff(u, x)),
    ]


@dataclass(frozen=True)
class Solution:
    """One exact solution family of the full system."""

    kind: str
    u: sp.Expr
    v: sp.Expr
    w: sp.Expr
    rho: sp.Expr
    P: sp.Expr

    @property
    def P1(self) -> sp.Expr:
        return canonicalize(self.P - self.u)

    @property
    def S(self) -> sp.Expr:
        return canonicalize(self.P - _f(self.rho))

    def subs(self, binding: dict) -> "Solution":
        return Solution(
            self.kind,
            *(sp.sympify(g).subs(binding) for g in (self.u, self.v, self.w, self.rho, self.P)),
        )


_KINDS = (
    "isochoric-general",
    "isochoric-reduced",
    "nonisochoric-general",
    "nonisochoric-reduced",
)


def solution_family(kind: str) -> Solution:
    """The four families, with fully symbolic constants."""
    if kind == "isochoric-general":
        u = (
            k0 * y + m0 * z
            + (k0**2 + m0**2) / (2 * rho0) * t**2
            - (k0 * v0 + m0 * w0) * t
            + n0
        )
        return Solution(kind, u, -k0 / rho0 * t + v0, -m0 / rho0 * t + w0, rho0, P0 + u)
    if kind == "isochoric-reduced":
        u = k0 * y + m0 * z + (k0**2 + m0**2) / (2 * rho0) * t**2
        return Solution(kind, u, -k0 / rho0 * t, -m0 / rho0 * t, rho0, u)
    if kind == "nonisochoric-general":
        u = (
            x / t + k0 * y / t + m0 * z / t + n0 / t
            + (k0**2 + m0**2 - 1) / (2 * rho0) * t
            - k0 * v0 - m0 * w0
        )
        P1 = _f(rho0 / t) + t / rho0 + P0
        return Solution(
            kind, u, -k0 / rho0 * t + v0, -m0 / rho0 * t + w0, rho0 / t, P1 + u
        )
    if kind == "nonisochoric-reduced":
        u = x / t + k0 * y / t + m0 * z / t + (k0**2 + m0**2 - 1) / (2 * rho0) * t
        P1 = _f(rho0 / t) + t / rho0
        return Solution(kind, u, -k0 / rho0 * t, -m0 / rho0 * t, rho0 / t, P1 + u)
    raise ValueError(f"unknown solution kind {kind!r}; expected one of {_KINDS}")


def full_residuals(s: Solution) -> list[sp.Expr]:
    """Residuals of the full system at the solution; expected all zero."""
    return GasSystem().residuals(s.u, s.v, s.w, s.rho, s.P)


def vorticity(s: Solution) -> tuple[sp.Expr, sp.Expr, sp.Expr]:
    """rot u = (w_y - v_z, u_z - w_x, v_x - u_y)."""
    return (
        canonicalize(sp.diff(s.w, y) - sp.diff(s.v, z)),
        canonicalize(sp.diff(s.u, z) - sp.diff(s.w, x)),
        canonicalize(sp.diff(s.v, x) - sp.diff(s.u, y)),
    )


# --------------------------------------------------------------------------
# particle flow


@dataclass(frozen=True)
class FlowMap:
    """Closed-form particle flow (x(t), y(t), z(t)) in the initial data.

    For the non-isochoric family the initial data (x0, y0, z0, u0) are
    labels tied to the stated form of the world lines (the map is
    singular at t = 0, where J = t vanishes); consistency with the
    velocity field is differential, via :func:`flow_consistency`.
    """

    kind: str
    x: sp.Expr
    y: sp.Expr
    z: sp.Expr
    # Lagrangian labels: (x0, y0, z0) for the isochoric flow; the
    # non-isochoric world lines carry (u0, y0, z0) instead, x0 being
    # absent from their stated form.
    labels: tuple = (x0, y0, z0)

    def components(self) -> tuple[sp.Expr, sp.Expr, sp.Expr]:
        return (self.x, self.y, self.z)


def flow_map(s: Solution) -> FlowMap:
    """Flow map of a reduced family; verified against dx/dt = u o map."""
    if s.kind == "isochoric-reduced":
        fm = FlowMap(
            s.kind,
            (k0 * y0 + m0 * z0) * t + x0,
            -k0 / (2 * rho0) * t**2 + y0,
            -m0 / (2 * rho0) * t**2 + z0,
        )
    elif s.kind == "nonisochoric-reduced":
        fm = FlowMap(
            s.kind,
            -(k0 * y0 + m0 * z0) - t**2 / (2 * rho0) + u0 * t,
            -k0 / (2 * rho0) * t**2 + y0,
            -m0 / (2 * rho0) * t**2 + z0,
            labels=(u0, y0, z0),
        )
    else:
        raise ValueError(f"no closed-form flow for kind {s.kind!r}")
    bad = [r for r in flow_consistency(s, fm) if r != 0]
    if bad:
        raise ValueError(f"flow map inconsistent with velocity field: {bad}")
    return fm


def flow_consistency(s: Solution, fm: FlowMap) -> list[sp.Expr]:
    """Residuals d(map)/dt - velocity o map, canonicalized."""
    along = {x: fm.x, y: fm.y, z: fm.z}
    out = []
    for comp, vel in zip(fm.components(), (s.u, s.v, s.w)):
        out.append(canonicalize(sp.diff(comp, t) - vel.subs(along)))
    return out


def jacobian_det(fm: FlowMap) -> sp.Expr:
    """det d(x,y,z)/d(labels), canonicalized."""
    J = sp.Matrix([[sp.diff(c, s0) for s0 in fm.labels] for c in fm.components()])
    return canonicalize(J.det())


@dataclass(frozen=True)
class LagrangianFields:
    """Gas-dynamic fields along particle world lines."""

    velocity: tuple
    acceleration: tuple
    rho: sp.Expr
    P: sp.Expr
    S: sp.Expr


def lagrangian_fields(s: Solution) -> LagrangianFields:
    """Substitute the flow map into the Eulerian fields.

    Velocity and acceleration come from time derivatives of the map.
    """
    fm = flow_map(s)
    along = {x: fm.x, y: fm.y, z: fm.z}
    vel = tuple(canonicalize(sp.diff(c, t)) for c in fm.components())
    acc = tuple(canonicalize(sp.diff(c, t, 2)) for c in fm.components())
    return LagrangianFields(
        velocity=vel,
        acceleration=acc,
        rho=canonicalize(s.rho.subs(along)),
        P=canonicalize(s.P.subs(along)),
        S=canonicalize(s.S.subs(along)),
    )


# --------------------------------------------------------------------------
# symmetry reduction of the general families


def galilean_shift(s: Solution, b1, b2, b3) -> Solution:
    """Act on the solution by the Galilean translation with vector b."""
    comp = {x: x - b1 * t, y: y - b2 * t, z: z - b3 * t}
    return Solution(
        s.kind,
        s.u.subs(comp, simultaneous=True) + b1,
        s.v.subs(comp, simultaneous=True) + b2,
        s.w.subs(comp, simultaneous=True) + b3,
        s.rho.subs(comp, simultaneous=True),
        s.P.subs(comp, simultaneous=True),
    )


def space_shift(s: Solution, a1, a2, a3) -> Solution:
    """Act on the solution by the space translation with vector a."""
    comp = {x: x - a1, y: y - a2, z: z - a3}
    return Solution(
        s.kind,
        *(g.subs(comp, simultaneous=True) for g in (s.u, s.v, s.w, s.rho, s.P)),
    )


def pressure_shift(s: Solution, s0) -> Solution:
    """Act on the solution by the pressure translation P -> P + s0."""
    return Solution(s.kind, s.u, s.v, s.w, s.rho, s.P + s0)


def reduce_general(kind: str) -> tuple[Solution, dict]:
    """Remove the translational constants from a general family.

    Returns the transformed solution (expected to equal the reduced
    family) and the symmetry parameters used.
    """
    if kind == "isochoric-general":
        s = solution_family(kind)
        params = {"b": (-n0, -v0, -w0), "pressure": -P0 - n0}
        out = pressure_shift(galilean_shift(s, *params["b"]), params["pressure"])
        return Solution("isochoric-reduced", out.u, out.v, out.w, out.rho, out.P), params
    if kind == "nonisochoric-general":
        s = solution_family(kind)
        params = {"b": (0, -v0, -w0), "a": (n0, 0, 0), "pressure": -P0}
        out = pressure_shift(
            space_shift(galilean_shift(s, *params["b"]), *params["a"]),
            params["pressure"],
        )
        return (
            Solution("nonisochoric-reduced", out.u, out.v, out.w, out.rho, out.P),
            params,
        )
    raise ValueError(f"no reduction defined for kind {kind!r}")


# --------------------------------------------------------------------------
# trajectory geometry


def geometry_checks(s: Solution, binding: dict | None = None) -> dict:
    """The paper's trajectory case analysis, as named residual checks.

    ``binding`` supplies numeric constants (defaults: the figure values
    rho0 = k0 = m0 = 1).  Each report item carries the canonicalized
    residual; ``ok`` means it is identically zero (or the stated
    property holds).
    """
    if binding is None:
        binding = {k0: 1, m0: 1, rho0: 1}
    binding = {sp.sympify(k): sp.nsimplify(v) for k, v in binding.items()}
    fm = flow_map(s)
    X, Yc, Zc = (c.subs(binding) for c in fm.components())
    kv, mv, rv = (sp.nsimplify(binding.get(c, c)) for c in (k0, m0, rho0))
    report = {}

    def record(name, residual):
        residual = canonicalize(residual)
        report[name] = {"ok": residual == 0, "residual": str(residual)}

    if s.kind == "isochoric-reduced":
        # on k0*y0 + m0*z0 = 0 the trajectory is a line in the plane x = x0
        on_plane = {y0: mv, z0: -kv}
        record("line_in_plane_x", X.subs(on_plane) - x0)
        record(
            "line_equation",
            (mv * (Yc - y0) - kv * (Zc - z0)).subs(on_plane),
        )
        denom = 2 * rv * (kv * y0 + mv * z0) ** 2
        record(
            "parabola_xy",
            Yc - (y0 - kv * (X - x0) ** 2 / denom),
        )
        record(
            "parabola_xz",
            Zc - (z0 - mv * (X - x0) ** 2 / denom),
        )
        if kv != 0:
            record("line_yz_slope", Zc - (mv / kv) * (Yc - y0) - z0)
        record("vertex_xy", (X.subs(t, 0) - x0) + (Yc.subs(t, 0) - y0))
        vertex_slope = canonicalize(
            sp.diff(Yc, t).subs(t, 0) / sp.diff(X, t).subs(t, 0)
        )
        report["vertex_slope_zero"] = {
            "ok": vertex_slope == 0,
            "residual": str(vertex_slope),
        }
    elif s.kind == "nonisochoric-reduced":
        record("plane_at_t0", X.subs(t, 0) + kv * Yc.subs(t, 0) + mv * Zc.subs(t, 0))
        record("line_yz", mv * (Yc - y0) - kv * (Zc - z0))
        # particles sharing a start differ affinely in x at fixed t
        record("x_affine_in_u0", sp.diff(X, u0) - t)
        record("yz_free_of_u0", sp.diff(Yc, u0) + sp.diff(Zc, u0))
        # t -> -t, u0 -> -u0 preserves the world lines
        flip = {t: -t, u0: -u0}
        record(
            "time_reversal",
            sum(
                (c.subs(flip, simultaneous=True) - c)
                for c in (X, Yc, Zc)
            ),
        )
    else:
        raise ValueError(f"no geometry checks for kind {s.kind!r}")
    return report
