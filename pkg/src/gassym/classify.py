"""Verification of the isomorphism-class assignments.

Each catalog entry carries, in ``data/classes.yaml``, a class label from
the Patera-Winternitz list of real Lie algebras of dimension at most
four, a change of basis e1..e4 expressed in the catalog basis E1..E4,
and the nonzero commutators the new basis must satisfy.  Verification
recomputes the induced structure constants of the e-basis inside L12 and
compares them with the stated table, exactly.

Coefficients involving ``|a|``-style absolute values are handled by
case-splitting on the parameter sign: the parameter is replaced by a
signed positive symbol, so the check stays symbolic in the parameter on
each sign branch.  Fingerprints corroborate the labels: entries assigned
the same class must have identical fingerprints.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from importlib import resources

import sympy as sp
import yaml

from .catalog import (
    UNIT_CIRCLE,
    UnknownEntryError,
    entry_basis,
    entry_schema,
    parameter_samples,
)
from .exprs import canonicalize
from .liealg import Fingerprint, Subalgebra, fingerprint, l12

__all__ = [
    "ClassAssignment",
    "ClassReport",
    "ConsistencyReport",
    "NonInvertibleError",
    "class_ids",
    "entry_fingerprint",
    "fingerprint_consistency",
    "get_assignment",
    "verify_class",
]


class NonInvertibleError(ValueError):
    """The stated change of basis is singular at admissible parameters."""


_E_SYMS = [sp.Symbol(f"E{i}") for i in range(1, 5)]
_e_SYMS = [sp.Symbol(f"e{i}") for i in range(1, 5)]
_PARAM_SYMS = {n: sp.Symbol(n) for n in ("a", "b", "c", "d", "eps")}


@dataclass(frozen=True)
class ClassAssignment:
    """One row of the isomorphism-class table."""

    entry_id: str
    label: str
    basis_change: tuple  # four expressions in E1..E4
    relations: dict  # (i, j) with i < j -> coefficient 4-vector over e1..e4


_RAW = None


def _assignments() -> dict[str, ClassAssignment]:
    global _RAW
    if _RAW is None:
        text = resources.files("gassym").joinpath("data/classes.yaml").read_text()
        data = yaml.safe_load(text)
        _RAW = {}
        for raw in data["entries"]:
            _RAW[raw["id"]] = ClassAssignment(
                entry_id=raw["id"],
                label=raw["label"],
                basis_change=tuple(
                    sp.sympify(s, locals=_locals()) for s in raw["basis_change"]
                ),
                relations=_parse_relations(raw.get("relations", {})),
            )
    return _RAW


def _locals() -> dict:
    loc = {s.name: s for s in _E_SYMS + _e_SYMS}
    loc.update(_PARAM_SYMS)
    return loc


def _linear_coeffs(expr: sp.Expr, gens: list) -> list[sp.Expr]:
    expr = sp.expand(expr)
    coeffs = []
    rest = expr
    for g in gens:
        c = expr.coeff(g, 1)
        coeffs.append(c)
        rest = rest - c * g
    if sp.expand(rest) != 0:
        raise ValueError(f"{expr} is not linear in {gens}")
    return coeffs


def _parse_relations(raw: dict) -> dict:
    rel = {}
    for key, text in raw.items():
        i_s, j_s = key.split(",")
        i = int(i_s.strip().lstrip("e")) - 1
        j = int(j_s.strip().lstrip("e")) - 1
        vec = _linear_coeffs(sp.sympify(text, locals=_locals()), _e_SYMS)
        if i > j:
            i, j = j, i
            vec = [-c for c in vec]
        if (i, j) in rel:
            raise ValueError(f"relation {key} duplicates its reverse")
        rel[(i, j)] = tuple(vec)
    return rel


def class_ids() -> list[str]:
    return list(_assignments().keys())


def get_assignment(entry_id: str) -> ClassAssignment:
    asg = _assignments().get(entry_id)
    if asg is None:
        raise UnknownEntryError(f"no class assignment for entry {entry_id!r}")
    return asg


# --------------------------------------------------------------------------
# verification


@dataclass
class ClassReport:
    """Verdicts for one class assignment across parameter cases."""

    entry_id: str
    label: str
    cases: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.cases) and all(
            c["invertible"] and c["match"] for c in self.cases
        )


def _abs_params(asg: ClassAssignment) -> set[str]:
    syms = set()
    exprs = list(asg.basis_change)
    for vec in asg.relations.values():
        exprs += list(vec)
    for e in exprs:
        for node in sp.sympify(e).atoms(sp.Abs):
            syms |= {s.name for s in node.free_symbols}
    return syms


def _constraint_allows(constraints: list[str], binding: dict) -> bool:
    subs = {_PARAM_SYMS[k]: v for k, v in binding.items()}
    for cond in constraints:
        val = sp.sympify(cond, locals=_PARAM_SYMS).subs(subs)
        if val == sp.false or val is False:
            return False
    return True


def _parameter_cases(entry_id: str, asg: ClassAssignment) -> list[dict]:
    """Case list: unit-circle samples x choice values x sign branches.

    Grid parameters stay symbolic; those under an absolute value become
    signed positive symbols, one case per sign.
    """
    schema = entry_schema(entry_id)
    split = _abs_params(asg)
    axes: list[list[tuple[str, object]]] = []
    if schema["unit_circle"]:
        p, q = schema["unit_circle"]
        axes.append([((p, cp), (q, cq)) for cp, cq in UNIT_CIRCLE])
    for name, values in schema["choices"].items():
        axes.append([((name, sp.nsimplify(v)),) for v in values])
    for name in schema["grid"]:
        if name in split:
            pos = sp.Symbol(name, positive=True)
            axes.append([((name, pos),), ((name, -pos),)])
        else:
            axes.append([((name, sp.Symbol(name)),)])
    cases = []
    for combo in itertools.product(*axes) if axes else [()]:
        binding = {}
        for group in combo:
            binding.update(dict(group))
        if _constraint_allows(schema["constraints"], binding):
            cases.append(binding)
    return cases


def verify_class(entry_id: str) -> ClassReport:
    """Check one row: change of basis reproduces the stated commutators.

    Raises :class:`NonInvertibleError` when the change-of-basis matrix is
    singular in some admissible case.
    """
    asg = get_assignment(entry_id)
    report = ClassReport(entry_id=entry_id, label=asg.label)
    for binding in _parameter_cases(entry_id, asg):
        subs = {_PARAM_SYMS[k]: v for k, v in binding.items()}
        M = sp.Matrix(
            [_linear_coeffs(e.subs(subs), _E_SYMS) for e in asg.basis_change]
        )
        det = canonicalize(M.det())
        if det == 0:
            raise NonInvertibleError(
                f"entry {entry_id}: singular change of basis at {binding}"
            )
        B = sp.Matrix([list(v) for v in entry_basis(entry_id, binding)])
        induced = Subalgebra(l12(), M * B).induced()
        match = True
        for i in range(4):
            for j in range(i + 1, 4):
                target = asg.relations.get((i, j), (0, 0, 0, 0))
                for k in range(4):
                    want = sp.sympify(target[k]).subs(subs)
                    if canonicalize(induced[i][j][k] - want) != 0:
                        match = False
        report.cases.append({
            "params": {k: str(v) for k, v in binding.items()},
            "invertible": True,
            "match": match,
        })
    return report


# --------------------------------------------------------------------------
# fingerprint corroboration


def entry_fingerprint(entry_id: str) -> Fingerprint:
    """Fingerprint of the entry's subalgebra at a representative sample."""
    binding = parameter_samples(entry_id)[0]
    B = sp.Matrix([list(v) for v in entry_basis(entry_id, binding)])
    return fingerprint(Subalgebra(l12(), B).induced())


@dataclass
class ConsistencyReport:
    """Same-label fingerprint agreement plus cross-label collisions."""

    fingerprints: dict  # entry id -> Fingerprint
    label_ok: dict  # label -> bool
    collisions: list  # INFO: (label, label) pairs sharing a fingerprint

    @property
    def passed(self) -> bool:
        return all(self.label_ok.values())


def fingerprint_consistency(entry_ids: list[str] | None = None) -> ConsistencyReport:
    """Entries with the same class label must share a fingerprint.

    Distinct labels sharing a fingerprint are reported as collisions,
    not failures: the fingerprint is necessary, not sufficient.
    """
    ids = list(entry_ids) if entry_ids is not None else class_ids()
    prints = {eid: entry_fingerprint(eid) for eid in ids}
    by_label: dict[str, set] = {}
    for eid in ids:
        by_label.setdefault(get_assignment(eid).label, set()).add(prints[eid])
    label_ok = {label: len(fps) == 1 for label, fps in by_label.items()}
    labels = sorted(by_label)
    collisions = []
    for la, lb in itertools.combinations(labels, 2):
        if by_label[la] & by_label[lb]:
            collisions.append((la, lb))
    return ConsistencyReport(
        fingerprints=prints, label_ok=label_ok, collisions=collisions
    )
