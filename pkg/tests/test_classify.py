"""Isomorphism-class tests: assignments, case splitting, fingerprints."""

import pytest
import sympy as sp

from gassym.catalog import UnknownEntryError, catalog_ids
from gassym.classify import (
    _parameter_cases,
    _parse_relations,
    class_ids,
    entry_fingerprint,
    fingerprint_consistency,
    get_assignment,
    verify_class,
)


def test_every_catalog_entry_has_a_class():
    assert class_ids() == catalog_ids()


def test_unknown_assignment_raises():
    with pytest.raises(UnknownEntryError):
        get_assignment("4.99")


@pytest.mark.parametrize("entry_id", class_ids())
def test_class_row_verifies(entry_id):
    rep = verify_class(entry_id)
    assert rep.passed, rep.cases
    assert all(c["invertible"] for c in rep.cases)


# --------------------------------------------------------------------------
# case splitting


@pytest.mark.parametrize(
    "entry_id, count",
    [
        ("4.1", 1),       # no parameters
        ("4.56.i", 2),    # |b| splits the sign of b; a stays symbolic
        ("4.64.i", 2),    # |a| sign split
        ("4.74.i", 2),    # |c| sign split; a stays symbolic
        ("4.42", 6),      # 3 unit-circle points times eps in {0, 1}
        ("4.71.i", 2),    # unit-circle points with d != 0
    ],
)
def test_parameter_case_counts(entry_id, count):
    asg = get_assignment(entry_id)
    assert len(_parameter_cases(entry_id, asg)) == count


def test_sign_split_uses_signed_positive_symbols():
    asg = get_assignment("4.64.i")
    cases = _parameter_cases("4.64.i", asg)
    vals = [c["a"] for c in cases]
    assert any(v.is_positive for v in vals)
    assert any((-v).is_positive for v in vals)


# --------------------------------------------------------------------------
# relation parsing


def test_parse_relations_normalizes_reversed_keys():
    rel = _parse_relations({"e3,e1": "e2"})
    assert rel == {(0, 2): (0, -1, 0, 0)}


def test_parse_relations_rejects_duplicates():
    with pytest.raises(ValueError):
        _parse_relations({"e1,e2": "e3", "e2,e1": "-e3"})


def test_parse_relations_parametric_coefficient():
    rel = _parse_relations({"e1,e4": "e1/Abs(b)"})
    vec = rel[(0, 3)]
    assert vec[0] == 1 / sp.Abs(sp.Symbol("b"))
    assert vec[1:] == (0, 0, 0)


# --------------------------------------------------------------------------
# fingerprints


def test_same_label_shares_fingerprint():
    assert entry_fingerprint("4.1") == entry_fingerprint("4.2")
    assert entry_fingerprint("4.44.ii") == entry_fingerprint("4.77")


def test_abelian_entries_have_full_center():
    assert entry_fingerprint("4.77").center_dim == 4
    assert entry_fingerprint("4.21").center_dim == 2


def test_fingerprint_consistency_passes():
    cons = fingerprint_consistency()
    assert cons.passed
    assert all(cons.label_ok.values())
    assert set(cons.fingerprints) == set(class_ids())


def test_known_collision_is_informational():
    cons = fingerprint_consistency()
    assert ("A_{3,6}+A_1", "A_{3,7}^{1/|a|}+A_1") in cons.collisions
