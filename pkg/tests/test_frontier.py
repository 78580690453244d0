"""Sweeps, Pareto filtering, and frontier shape classification."""

import pytest

from fairfrontier import (FamilySpec, Frontier, FrontierPoint, InputError,
                          ResourceError, ValidationError, build_frontier,
                          classify_shape, pareto_filter, scenario, sweep)


def pt(fairness, accuracy, tag):
    return FrontierPoint(fairness, accuracy, ("grid", tag, (), ()))


def test_family_spec_validation():
    with pytest.raises(ValidationError):
        FamilySpec("threshold")
    with pytest.raises(ValidationError):
        FamilySpec("shared_threshold",
                   orientations=("positive_above", "positive_below"))
    with pytest.raises(ValidationError):
        FamilySpec("shared_threshold", resolution=2)
    with pytest.raises(ValidationError):
        FamilySpec("per_group_intervals", k=0)
    with pytest.raises(ValidationError):
        FamilySpec("shared_threshold", sweep_range=(4, 4))
    with pytest.raises(ValidationError):
        FamilySpec("shared_threshold", orientations="up")


def test_family_spec_orientation_expansion():
    one = FamilySpec("per_group_threshold", orientations="positive_below")
    assert one.combos() == (("positive_below", "positive_below"),)
    both = FamilySpec("per_group_threshold", orientations="both")
    assert len(both.combos()) == 4
    mixed = FamilySpec("per_group_threshold",
                       orientations=("positive_above", "both"))
    assert mixed.combos() == (("positive_above", "positive_above"),
                              ("positive_above", "positive_below"))


def test_sweep_candidate_counts():
    model = scenario("example1")
    shared = sweep(model, FamilySpec("shared_threshold", resolution=801,
                                     sweep_range=(-8, 12)))
    assert len(shared) == 803
    per_group = sweep(model, FamilySpec("per_group_threshold", resolution=101,
                                        orientations="both",
                                        sweep_range=(-8, 12)))
    assert len(per_group) == 101 * 101 * 4 + 2


def test_sweep_appends_both_optima_last():
    model = scenario("example3")
    pts = sweep(model, FamilySpec("shared_threshold", resolution=11))
    assert pts[-2].params[:2] == ("optimum", "fairness")
    assert pts[-1].params[:2] == ("optimum", "accuracy")
    assert pts[-1].accuracy == max(p.accuracy for p in pts)


def test_per_group_sweep_appends_groupwise_fair_optimum():
    # example1's groups differ by a pure shift, so the family holds exactly
    # fair pairs; the appended optimum must find the best of them instead of
    # falling back to the shared everything-positive rule at accuracy 0.625
    model = scenario("example1")
    pts = sweep(model, FamilySpec("per_group_threshold", resolution=11))
    fair = pts[-2]
    assert fair.params[:2] == ("optimum", "fairness")
    assert fair.fairness == pytest.approx(1.0, abs=1e-9)
    assert fair.accuracy == pytest.approx(0.9615036014, abs=1e-6)
    assert not fair.clf.shared


def test_sweep_resource_cap():
    model = scenario("example1")
    family = FamilySpec("per_group_intervals", resolution=801, k=4,
                        orientations="both")
    with pytest.raises(ResourceError):
        sweep(model, family)


def test_sweep_contains_known_threshold_point():
    model = scenario("example1")
    pts = sweep(model, FamilySpec("shared_threshold", resolution=801,
                                  sweep_range=(-8, 12)))
    hit = [p for p in pts
           if abs(p.fairness - 0.7763524108581863) < 1e-9
           and abs(p.accuracy - 0.9131523908367654) < 1e-9]
    assert hit


def test_pareto_filter_five_point_example():
    cloud = [pt(0.9, 0.8, "0"), pt(0.8, 0.85, "1"), pt(0.85, 0.84, "2"),
             pt(0.9, 0.79, "3"), pt(0.7, 0.85, "4")]
    got = pareto_filter(cloud)
    assert [(p.fairness, p.accuracy) for p in got.points] == [
        (0.8, 0.85), (0.85, 0.84), (0.9, 0.8)]


def test_pareto_filter_single_candidate():
    only = pt(0.4, 0.6, "0")
    assert pareto_filter([only]).points == (only,)


def test_pareto_filter_rejects_empty():
    with pytest.raises(InputError):
        pareto_filter([])


def test_pareto_filter_collapses_equal_fairness():
    cloud = [pt(0.5, 0.7, "b"), pt(0.5, 0.9, "a"), pt(0.5, 0.9, "c")]
    got = pareto_filter(cloud)
    assert len(got.points) == 1
    assert got.points[0].accuracy == 0.9
    assert got.points[0].params[1] == "a"


def test_pareto_filter_stamps_family_metadata():
    family = FamilySpec("shared_threshold", resolution=41, sweep_range=(0, 4))
    got = pareto_filter([pt(0.1, 0.2, "0"), pt(0.2, 0.1, "1")], family)
    assert got.resolution == 41
    assert got.sweep_range == (0.0, 4.0)


def test_classify_shape_continuous():
    f = Frontier(points=(pt(0.0, 0.9, "0"), pt(0.5, 0.89, "1"),
                         pt(1.0, 0.88, "2")))
    got = classify_shape(f, fairness_gap=0.005)
    assert got.shape == "continuous"
    assert got.jumps == ()


def test_classify_shape_accuracy_jump():
    f = Frontier(points=(pt(0.6, 0.9, "0"), pt(0.6001, 0.55, "1")))
    got = classify_shape(f, fairness_gap=0.01)
    assert got.shape == "sharp_decline_accuracy"
    (jump,) = got.jumps
    assert jump.kind == "accuracy"
    assert jump.index == 0
    assert jump.fairness_at == pytest.approx(0.6001)
    assert jump.accuracy_drop == pytest.approx(0.35, abs=1e-12)


def test_classify_shape_fairness_jump_flagged_as_artifact():
    f = Frontier(points=(pt(0.1, 0.9, "0"), pt(0.8, 0.8999, "1")))
    got = classify_shape(f, fairness_gap=0.01)
    assert got.shape == "sharp_decline_fairness"
    assert any("sweep artifact" in note for note in got.diagnostics)


def test_classify_shape_singleton_is_continuous():
    got = classify_shape(Frontier(points=(pt(0.2, 0.8, "0"),)),
                         fairness_gap=0.1)
    assert got.shape == "continuous"


def test_classify_shape_needs_gap_or_resolution():
    f = Frontier(points=(pt(0.0, 1.0, "0"), pt(1.0, 0.5, "1")))
    with pytest.raises(InputError):
        classify_shape(f)
    stamped = Frontier(points=f.points, resolution=100)
    assert classify_shape(stamped).shape == "continuous"


def test_example1_shared_frontier_has_the_known_jump():
    model = scenario("example1")
    family = FamilySpec("shared_threshold", orientations="both",
                        resolution=801, sweep_range=(-8, 12))
    frontier = build_frontier(model, family)
    assert len(frontier.points) == 303
    assert frontier.shape == "sharp_decline_accuracy"
    (jump,) = frontier.jumps
    assert jump.index == 27
    assert jump.fairness_at == pytest.approx(0.7765587587308078, abs=1e-9)
    assert jump.accuracy_drop == pytest.approx(0.2254257626080155, abs=1e-9)


def test_example1_per_group_frontier_is_continuous():
    model = scenario("example1")
    family = FamilySpec("per_group_threshold", resolution=201,
                        sweep_range=(-8, 12))
    frontier = build_frontier(model, family)
    assert frontier.shape == "continuous"
    assert frontier.jumps == ()


def test_frontier_sorted_and_starts_at_max_accuracy():
    model = scenario("example3")
    family = FamilySpec("shared_threshold", orientations="both",
                        resolution=201)
    candidates = sweep(model, family)
    frontier = classify_shape(pareto_filter(candidates, family))
    fs = [p.fairness for p in frontier.points]
    accs = [p.accuracy for p in frontier.points]
    assert fs == sorted(fs)
    assert accs == sorted(accs, reverse=True)
    assert accs[0] == max(p.accuracy for p in candidates)


def test_refining_resolution_never_lowers_the_frontier():
    model = scenario("example1")
    coarse = build_frontier(model, FamilySpec(
        "shared_threshold", orientations="both", resolution=201,
        sweep_range=(-8, 12)))
    fine = build_frontier(model, FamilySpec(
        "shared_threshold", orientations="both", resolution=401,
        sweep_range=(-8, 12)))
    for p in coarse.points:
        covered = [q.accuracy for q in fine.points
                   if q.fairness >= p.fairness - 1e-9]
        assert covered and max(covered) >= p.accuracy - 1e-9


def test_build_frontier_stamps_default_sweep_range():
    model = scenario("example3")
    frontier = build_frontier(model, FamilySpec("shared_threshold",
                                                resolution=51))
    lo, hi = frontier.sweep_range
    assert lo == pytest.approx(model.quantile_range(0.9999)[0])
    assert hi == pytest.approx(model.quantile_range(0.9999)[1])


def test_frontier_point_rebuilds_classifier():
    model = scenario("example1")
    pts = sweep(model, FamilySpec("shared_threshold", resolution=11,
                                  sweep_range=(0, 10)))
    sample = pts[3]
    clf = sample.clf
    assert clf.positive_region(0).intervals == sample.params[2]
    assert clf.positive_region(1).intervals == sample.params[3]
