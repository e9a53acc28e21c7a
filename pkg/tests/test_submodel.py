"""Submodel tests: residuals, flow maps, reductions, trajectory geometry."""

import dataclasses

import pytest
import sympy as sp

from gassym.exprs import opaque
from gassym.submodel import (
    FlowMap,
    flow_consistency,
    flow_map,
    full_residuals,
    galilean_shift,
    geometry_checks,
    jacobian_det,
    k0,
    lagrangian_fields,
    m0,
    pressure_shift,
    reduce_general,
    reduced_residuals,
    rho0,
    solution_family,
    t,
    u0,
    vorticity,
    x0,
    y0,
    z0,
)

KINDS = (
    "isochoric-general",
    "isochoric-reduced",
    "nonisochoric-general",
    "nonisochoric-reduced",
)
REDUCED = ("isochoric-reduced", "nonisochoric-reduced")


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        solution_family("barotropic")


# --------------------------------------------------------------------------
# residuals


@pytest.mark.parametrize("kind", KINDS)
def test_reduced_residuals_vanish(kind):
    s = solution_family(kind)
    assert reduced_residuals(s.u, s.v, s.w, s.rho, s.P1) == [0] * 5


@pytest.mark.parametrize("kind", KINDS)
def test_full_residuals_vanish(kind):
    assert full_residuals(solution_family(kind)) == [0] * 5


def test_p1_is_pressure_minus_u():
    s = solution_family("isochoric-reduced")
    assert s.P1 == sp.expand(s.P - s.u)


def test_state_function_splits_pressure():
    f = opaque("f")
    for kind in KINDS:
        s = solution_family(kind)
        assert sp.expand(s.P - f(s.rho) - s.S) == 0


@pytest.mark.parametrize(
    "tamper",
    [
        {"u": lambda s: s.u + t},
        {"rho": lambda s: s.rho * t},
        {"v": lambda s: -s.v},
    ],
    ids=["u-drift", "rho-drift", "v-sign"],
)
def test_tampered_solution_leaves_residual(tamper):
    s = solution_family("isochoric-reduced")
    bad = dataclasses.replace(s, **{k: fn(s) for k, fn in tamper.items()})
    assert any(r != 0 for r in full_residuals(bad))


# --------------------------------------------------------------------------
# vorticity


def test_vorticity_isochoric():
    s = solution_family("isochoric-reduced")
    assert vorticity(s) == (0, m0, -k0)


def test_vorticity_nonisochoric():
    s = solution_family("nonisochoric-reduced")
    assert vorticity(s) == (0, m0 / t, -k0 / t)


# --------------------------------------------------------------------------
# flow maps


def test_flow_map_isochoric():
    fm = flow_map(solution_family("isochoric-reduced"))
    assert fm.labels == (x0, y0, z0)
    assert jacobian_det(fm) == 1


def test_flow_map_nonisochoric():
    fm = flow_map(solution_family("nonisochoric-reduced"))
    assert fm.labels == (u0, y0, z0)
    assert jacobian_det(fm) == t


def test_flow_consistency_residuals_vanish():
    for kind in REDUCED:
        s = solution_family(kind)
        assert flow_consistency(s, flow_map(s)) == [0, 0, 0]


def test_flow_map_rejects_general_kinds():
    with pytest.raises(ValueError):
        flow_map(solution_family("isochoric-general"))


def test_flow_map_rejects_inconsistent_velocity():
    s = solution_family("isochoric-reduced")
    bad = dataclasses.replace(s, u=s.u + 1)
    with pytest.raises(ValueError):
        flow_map(bad)


def test_wrong_flow_map_has_residual():
    s = solution_family("isochoric-reduced")
    fm = flow_map(s)
    wrong = FlowMap(fm.kind, fm.x + t, fm.y, fm.z)
    assert any(r != 0 for r in flow_consistency(s, wrong))


# --------------------------------------------------------------------------
# Lagrangian fields


def test_lagrangian_fields_isochoric():
    lf = lagrangian_fields(solution_family("isochoric-reduced"))
    assert lf.acceleration == (0, -k0 / rho0, -m0 / rho0)
    assert lf.rho == rho0
    assert sp.diff(lf.S, t) == 0  # entropy constant along world lines


def test_lagrangian_fields_nonisochoric():
    lf = lagrangian_fields(solution_family("nonisochoric-reduced"))
    assert lf.acceleration == (-1 / rho0, -k0 / rho0, -m0 / rho0)
    assert lf.S == u0  # the label itself is the entropy invariant


# --------------------------------------------------------------------------
# symmetry reductions


@pytest.mark.parametrize("kind", ["isochoric-general", "nonisochoric-general"])
def test_reduce_general_is_exact(kind):
    red, params = reduce_general(kind)
    target = solution_family(kind.replace("general", "reduced"))
    for a, b in zip(
        (red.u, red.v, red.w, red.rho, red.P),
        (target.u, target.v, target.w, target.rho, target.P),
    ):
        assert sp.expand(a - b) == 0
    assert "b" in params and "pressure" in params


def test_reduce_general_unknown_kind():
    with pytest.raises(ValueError):
        reduce_general("isochoric-reduced")


def test_shifts_preserve_solutions():
    s = solution_family("isochoric-reduced")
    moved = pressure_shift(galilean_shift(s, 1, sp.Rational(1, 2), -1), 3)
    assert full_residuals(moved) == [0] * 5


# --------------------------------------------------------------------------
# trajectory geometry


@pytest.mark.parametrize("kind", REDUCED)
def test_geometry_checks_default_binding(kind):
    report = geometry_checks(solution_family(kind))
    assert report  # non-empty
    assert all(item["ok"] for item in report.values()), report


def test_geometry_checks_custom_binding():
    report = geometry_checks(
        solution_family("isochoric-reduced"), {k0: 1, m0: 2, rho0: 3}
    )
    assert all(item["ok"] for item in report.values()), report


def test_geometry_checks_reject_general():
    with pytest.raises(ValueError):
        geometry_checks(solution_family("isochoric-general"))
