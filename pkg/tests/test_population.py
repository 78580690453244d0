"""Model construction, validation reporting, presets, and the file format."""

import json

import pytest

from fairfrontier import (CELLS, PRESETS, GroupConditionalModel, InputError,
                          Normal, Triangular, ValidationError,
                          read_scenario_file, scenario, validate,
                          write_scenario_file)


def test_example1_joint_and_conditionals():
    m = scenario("example1")
    assert m.joint[(1, 1)] == 0.5
    assert m.joint[(1, 0)] == 0.25
    assert m.joint[(0, 1)] == 0.125
    assert m.joint[(0, 0)] == 0.125
    assert m.conditional[(1, 1)] == Normal(10, 2)
    assert m.conditional[(1, 0)] == Normal(3, 2)
    assert m.conditional[(0, 1)] == Normal(6, 2)
    assert m.conditional[(0, 0)] == Normal(-1, 2)


def test_example3_conditionals():
    m = scenario("example3")
    assert m.conditional[(0, 0)] == Normal(-1, 3)
    assert m.conditional[(1, 1)] == Normal(10, 3)


def test_example4_identical_joints_are_quarter():
    m = scenario("example4_identical")
    assert all(m.joint[cell] == 0.25 for cell in CELLS)
    assert m.conditional[(1, 1)] == Triangular(4, 12, 8)


def test_derived_probabilities_example1():
    m = scenario("example1")
    assert m.p_label(1) == pytest.approx(0.625, abs=1e-15)
    assert m.p_group(1) == pytest.approx(0.75, abs=1e-15)
    assert m.p_group(0) == pytest.approx(0.25, abs=1e-15)
    assert m.label_given_group(1, 1) == pytest.approx(2 / 3, abs=1e-15)


def test_pooled_quantile_range_example4():
    m = scenario("example4_identical")
    lo, hi = m.quantile_range(0.99999)
    assert lo == pytest.approx(0.02529822128125926, abs=1e-6)
    assert hi == pytest.approx(11.974701778718241, abs=1e-6)
    assert m.pooled_cdf(lo) == pytest.approx(5e-6, abs=1e-9)
    assert 1.0 - m.pooled_cdf(hi) == pytest.approx(5e-6, abs=1e-9)


def test_validate_example1_all_pass():
    report = validate(scenario("example1"))
    assert report.ok
    assert report.problems == ()
    assert report.joint_residual <= 1e-12


def test_constructor_rejects_bad_joint_mass():
    with pytest.raises(ValidationError):
        GroupConditionalModel(
            joint={(0, 0): 0.5, (0, 1): 0.2, (1, 0): 0.1, (1, 1): 0.1},
            conditional={cell: Normal(0, 1) for cell in CELLS})


def test_validate_payload_reports_joint_mass_failure():
    payload = {
        "joint": {"a0y0": 0.5, "a0y1": 0.2, "a1y0": 0.1, "a1y1": 0.1},
        "dist": {k: {"kind": "normal", "mean": 0, "stddev": 1}
                 for k in ("a0y0", "a0y1", "a1y0", "a1y1")},
    }
    report = validate(payload)
    assert not report.ok
    failing = {key: msg for key, passed, msg in report.entries if not passed}
    assert "joint_sum" in failing
    assert "!= 1" in failing["joint_sum"]


def test_validate_payload_names_bad_distribution_field():
    payload = {
        "joint": {"a0y0": 0.25, "a0y1": 0.25, "a1y0": 0.25, "a1y1": 0.25},
        "dist": {
            "a0y0": {"kind": "triangular", "lower": 0, "upper": 4, "mode": 9},
            "a0y1": {"kind": "normal", "mean": 0, "stddev": 1},
            "a1y0": {"kind": "normal", "mean": 0, "stddev": 1},
            "a1y1": {"kind": "normal", "mean": 0, "stddev": 1},
        },
    }
    report = validate(payload)
    assert not report.ok
    failing = {key for key, passed, _ in report.entries if not passed}
    assert failing == {"dist.a0y0"}


def test_presets_listing():
    assert set(PRESETS) == {"example1", "example3", "example4_identical",
                            "example4_nonidentical"}


def test_scenario_unknown_name_lists_presets():
    with pytest.raises(InputError) as exc:
        scenario("example2")
    for name in PRESETS:
        assert name in str(exc.value)


def test_scenario_file_roundtrip_bit_identical(tmp_path):
    first = tmp_path / "one.json"
    second = tmp_path / "two.json"
    model = scenario("example1")
    write_scenario_file(model, str(first))
    loaded = read_scenario_file(str(first))
    assert loaded.joint == model.joint
    assert loaded.conditional == model.conditional
    assert loaded.label == model.label
    write_scenario_file(loaded, str(second))
    assert first.read_bytes() == second.read_bytes()


def test_scenario_accepts_a_file_path(tmp_path):
    path = tmp_path / "custom.json"
    write_scenario_file(scenario("example3"), str(path))
    loaded = scenario(str(path))
    assert loaded.conditional == scenario("example3").conditional


def test_read_scenario_file_reports_parse_position(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"joint": {\n  "a0y0": 0.25,,\n}}\n')
    with pytest.raises(ValidationError) as exc:
        read_scenario_file(str(path))
    assert "line 2" in str(exc.value)


def test_read_scenario_file_missing_path():
    with pytest.raises(InputError):
        read_scenario_file("/nonexistent/scenario.json")


def test_mixture_roundtrips_through_files(tmp_path):
    from fairfrontier import Mixture
    model = GroupConditionalModel(
        joint={cell: 0.25 for cell in CELLS},
        conditional={
            (0, 0): Mixture(((0.5, Normal(-2, 1)), (0.5, Triangular(0, 4, 2)))),
            (0, 1): Normal(1, 1),
            (1, 0): Normal(-1, 2),
            (1, 1): Triangular(2, 8, 5),
        },
        label="mixed")
    path = tmp_path / "mixed.json"
    write_scenario_file(model, str(path))
    loaded = read_scenario_file(str(path))
    assert loaded.conditional == model.conditional
    assert json.loads(path.read_text())["label"] == "mixed"
