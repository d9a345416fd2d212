import json
from fractions import Fraction

import pytest

from gradedgroups.algebra import (AntisymmetryViolation, GradingViolation,
                                  GroupValidationError, JacobiViolation,
                                  spec_from_dict, spec_from_json,
                                  validate_algebra)


def make_spec(layers, brackets):
    return spec_from_dict({"layers": list(layers), "brackets": brackets})


HEIS = {"layers": [2, 1], "brackets": [{"i": 1, "j": 2, "k": 3, "c": "1"}]}


def test_parse_rational_coefficients():
    spec = spec_from_dict({"layers": [2, 1],
                           "brackets": [{"i": 1, "j": 2, "k": 3, "c": "-3/7"}]})
    assert spec.brackets == ((1, 2, 3, Fraction(-3, 7)),)
    assert spec.n == 3


def test_parse_rejects_unknown_keys():
    with pytest.raises(GroupValidationError, match="unknown keys"):
        spec_from_dict({"layers": [2, 1], "brackets": [], "extra": True})


def test_parse_rejects_bad_layers():
    for layers in ([], [0], [2, -1], "21", [1.5]):
        with pytest.raises(GroupValidationError):
            spec_from_dict({"layers": layers, "brackets": []})


def test_parse_rejects_malformed_bracket_entries():
    with pytest.raises(GroupValidationError, match="bad bracket entry"):
        spec_from_dict({"layers": [2, 1], "brackets": [{"i": 1, "j": 2, "k": 3}]})
    with pytest.raises(GroupValidationError, match="rational"):
        spec_from_dict({"layers": [2, 1],
                        "brackets": [{"i": 1, "j": 2, "k": 3, "c": "0.5x"}]})


def test_spec_from_json_roundtrip():
    spec = spec_from_json(json.dumps(HEIS))
    alg = validate_algebra(spec)
    assert alg.n == 3
    assert alg.degrees == (1, 1, 2)
    assert alg.layer_slice(2) == slice(2, 3)


def test_validate_accepts_abelian():
    alg = validate_algebra(make_spec([1, 1], []))
    assert alg.step == 2
    assert alg.bracket((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))) \
        == (Fraction(0), Fraction(0))


def test_bracket_values():
    alg = validate_algebra(spec_from_dict(HEIS))
    e1 = (Fraction(1), Fraction(0), Fraction(0))
    e2 = (Fraction(0), Fraction(1), Fraction(0))
    assert alg.bracket(e1, e2) == (0, 0, Fraction(1))
    assert alg.bracket(e2, e1) == (0, 0, Fraction(-1))


def test_self_bracket_rejected():
    with pytest.raises(AntisymmetryViolation):
        validate_algebra(make_spec([2, 1], [{"i": 1, "j": 1, "k": 3, "c": "1"}]))


def test_conflicting_mirror_entries_rejected():
    # both orientations given, but not antisymmetric
    with pytest.raises(AntisymmetryViolation):
        validate_algebra(make_spec([2, 1], [
            {"i": 1, "j": 2, "k": 3, "c": "1"},
            {"i": 2, "j": 1, "k": 3, "c": "1"},
        ]))


def test_consistent_mirror_entries_accepted():
    alg = validate_algebra(make_spec([2, 1], [
        {"i": 1, "j": 2, "k": 3, "c": "1"},
        {"i": 2, "j": 1, "k": 3, "c": "-1"},
    ]))
    assert alg.bracket_coeffs(0, 1) == {2: Fraction(1)}


def test_duplicate_conflicting_entries_rejected():
    with pytest.raises(GroupValidationError, match="conflict"):
        validate_algebra(make_spec([2, 1], [
            {"i": 1, "j": 2, "k": 3, "c": "1"},
            {"i": 1, "j": 2, "k": 3, "c": "2"},
        ]))


def test_grading_violation():
    # target lives in layer 1, sources in layer 1: degree 1 != 1 + 1
    with pytest.raises(GradingViolation):
        validate_algebra(make_spec([2, 1], [{"i": 1, "j": 2, "k": 2, "c": "1"}]))


def test_grading_violation_skipping_a_layer():
    with pytest.raises(GradingViolation):
        validate_algebra(make_spec([2, 1, 1], [{"i": 1, "j": 2, "k": 4, "c": "1"}]))


def test_jacobi_violation():
    # [e3, [e1, e2]] = e5 while the two other cyclic terms vanish
    with pytest.raises(JacobiViolation):
        validate_algebra(make_spec([3, 1, 1], [
            {"i": 1, "j": 2, "k": 4, "c": "1"},
            {"i": 3, "j": 4, "k": 5, "c": "1"},
        ]))


def test_jacobi_holds_for_step3_chain():
    alg = validate_algebra(make_spec([2, 1, 1], [
        {"i": 1, "j": 2, "k": 3, "c": "1"},
        {"i": 1, "j": 3, "k": 4, "c": "1"},
    ]))
    assert alg.step == 3
    assert alg.degrees == (1, 1, 2, 3)


def test_out_of_range_indices_rejected():
    with pytest.raises(GroupValidationError):
        validate_algebra(make_spec([2, 1], [{"i": 1, "j": 4, "k": 3, "c": "1"}]))
