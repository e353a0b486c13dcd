"""Dominance certificates, two-point comparison, martingale audit, tails.

Independent routes used below:

* the max-flow dominance verdict is cross-checked against exhaustive
  upper-set enumeration (a different algorithm with different failure
  modes), and coupling entries are re-checked for pointwise order;
* member probabilities entering the martingale audit are recomputed by
  a plain exp-sum average over the full two-point sign enumeration;
* audit levels are validated through the tower property (children's
  mass-weighted means reproduce the parent mean) rather than by
  re-running the grouping.

Hand oracle for the audit: on the path (0,), (1,), (2,) pinned only at
{(0,): 0} there are four equally likely members under the zero
potential - (0,1,2), (0,1,0), (0,-1,0), (0,-1,-2).  Revealing h(1)
moves the conditional mean of h(2) from 0 to +-1, and revealing h(2)
moves it by at most 1 again, so max_diff = 1 and the level-2 groups
are {(0,1): mean 1, (0,-1): mean -1}.
"""

import math

import numpy as np
import pytest

from randomsurfaces.analysis import (
    ExperimentConfig,
    ReportRow,
    azuma_bound,
    boundary_to_interior_walks,
    box_boundary_data,
    concentration_bound,
    concentration_experiment,
    deviation_tail_exact,
    dominance_certificate,
    dominance_sweep,
    dominates_by_upper_sets,
    martingale_audit,
    two_point_comparison,
)
from randomsurfaces.gibbs import (
    annealed_member_probabilities,
    quenched_measure,
    required_window,
)
from randomsurfaces.heights import (
    HeightFunction,
    enumerate_extensions,
    extremal_boundary,
    parity_height,
)
from randomsurfaces.lattice import boundary, make_box
from randomsurfaces.potential import (
    Potential,
    PotentialModel,
    enumerate_potentials,
    sample_potential,
)

BOX3 = make_box((0, 0), (2, 2))
BOX4 = make_box((0, 0), (3, 3))
PATH3 = make_box((0,), (2,))
RING3 = parity_height(BOX3).restrict(boundary(BOX3))
SADDLE3 = extremal_boundary(BOX3, 1, 0)


def shared_measures(region, pin_low, pin_high, seed=0, draw=0):
    """Two quenched measures under one potential realization."""
    lo1, hi1 = required_window(region, pin_low)
    lo2, hi2 = required_window(region, pin_high)
    window = (min(lo1, lo2), max(hi1, hi2))
    p = sample_potential(PotentialModel("uniform", 1.0, seed), window, draw)
    return (
        quenched_measure(region, pin_low, p),
        quenched_measure(region, pin_high, p),
    )


def exp_route_annealed_probs(support, model):
    """Independent annealed member probabilities: plain exp sums."""
    region = support.region
    lo, hi = required_window(region, support.pinned)
    ea, eb = region.edge_arrays()
    total = np.zeros(len(support))
    pots = enumerate_potentials(model, (lo, hi))
    for p, w in pots:
        weights = [
            math.exp(sum(p.value(min(m.heights[a], m.heights[b]))
                         for a, b in zip(ea, eb)))
            for m in support.members
        ]
        z = sum(weights)
        total += w * np.asarray([x / z for x in weights])
    return total


class TestDominanceCertificate:
    def test_identical_measures_dominate(self):
        mu, nu = shared_measures(BOX3, RING3, RING3)
        cert = dominance_certificate(mu, nu)
        assert cert.dominated
        assert cert.max_marginal_error <= 1e-12
        assert cert.witness is None

    def test_shifted_pair_dominates_with_ordered_coupling(self):
        mu, nu = shared_measures(BOX3, RING3, RING3.shift(2), seed=1)
        cert = dominance_certificate(mu, nu)
        assert cert.dominated
        assert cert.max_marginal_error <= 1e-9
        total = 0.0
        for i, j, mass in cert.coupling:
            assert mass > 0
            low = mu.support.members[i]
            high = nu.support.members[j]
            assert low.le(high)  # coupling only joins ordered pairs
            total += mass
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_reversed_pair_is_refuted(self):
        nu, mu = shared_measures(BOX3, RING3, RING3.shift(2), seed=2)
        cert = dominance_certificate(mu, nu)  # lower data above upper
        assert not cert.dominated
        assert cert.flow_value < 1.0
        w = cert.witness
        assert w is not None
        assert w["lower_mass"] > w["upper_mass"]

    def test_cross_boundary_pair(self):
        # parity ring <= saddle ring pointwise, different shapes
        mu, nu = shared_measures(BOX3, RING3, SADDLE3, seed=3)
        cert = dominance_certificate(mu, nu)
        assert cert.dominated
        assert cert.max_marginal_error <= 1e-9

    def test_mismatched_regions_rejected(self):
        mu, _ = shared_measures(BOX3, RING3, RING3)
        nu, _ = shared_measures(
            BOX4,
            parity_height(BOX4).restrict(boundary(BOX4)),
            parity_height(BOX4).restrict(boundary(BOX4)),
        )
        with pytest.raises(ValueError):
            dominance_certificate(mu, nu)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3, 4])
    def test_flow_verdict_matches_upper_set_oracle(self, seed):
        cases = [
            (RING3, RING3.shift(2)),
            (RING3, SADDLE3),
            (SADDLE3, RING3),  # unordered data: verdict may be either,
            (RING3.shift(2), RING3),  # but the two routes must agree
        ]
        for pin_a, pin_b in cases:
            mu, nu = shared_measures(BOX3, pin_a, pin_b, seed=seed)
            cert = dominance_certificate(mu, nu)
            verdict, worst = dominates_by_upper_sets(mu, nu)
            assert cert.dominated == verdict
            if not verdict:
                assert worst["gap"] > 0


class TestDominanceSweep:
    def test_small_sweep_passes(self):
        pairs = [(RING3, RING3.shift(2)), (RING3, RING3.shift(4))]
        sweep = dominance_sweep(
            BOX3, pairs, PotentialModel("uniform", 1.0, 5), draws=5
        )
        assert sweep.checks == 10
        assert sweep.failures == ()
        assert sweep.max_marginal_error <= 1e-9

    def test_unordered_pair_rejected(self):
        with pytest.raises(ValueError):
            dominance_sweep(
                BOX3, [(RING3.shift(2), RING3)],
                PotentialModel("uniform", 1.0), draws=1,
            )

    def test_mismatched_pinned_sets_rejected(self):
        with pytest.raises(ValueError):
            dominance_sweep(
                BOX3, [(RING3, RING3.shift(2).restrict([(0, 0)]))],
                PotentialModel("uniform", 1.0), draws=1,
            )


class TestTwoPointComparison:
    def test_path_means_are_zero_and_two(self):
        model = PotentialModel("twopoint", 1.0)
        lhs, rhs = two_point_comparison(
            PATH3, {(0,): 0, (2,): 0}, {(0,): 2, (2,): 2}, (1,), model
        )
        assert lhs.value == pytest.approx(0.0, abs=1e-15)
        assert rhs.value == pytest.approx(2.0, abs=1e-15)
        assert lhs.value <= rhs.value + 2

    def test_raised_lhs_hits_equality(self):
        # lhs data = rhs data + 2, so the means differ by exactly 2
        model = PotentialModel("twopoint", 0.7)
        lhs, rhs = two_point_comparison(
            PATH3, {(0,): 2, (2,): 2}, {(0,): 0, (2,): 0}, (1,), model
        )
        assert lhs.value == pytest.approx(rhs.value + 2, rel=1e-14)

    def test_cross_data_on_the_box(self):
        model = PotentialModel("twopoint", 1.0)
        lhs, rhs = two_point_comparison(
            BOX3, SADDLE3, RING3, (1, 1), model
        )  # saddle <= parity + 2 pointwise
        assert lhs.value <= rhs.value + 2 + 1e-12

    def test_premise_violation_rejected(self):
        model = PotentialModel("twopoint", 1.0)
        with pytest.raises(ValueError):
            two_point_comparison(
                PATH3, {(0,): 4, (2,): 4}, {(0,): 0, (2,): 0}, (1,), model
            )

    def test_mc_mode_brackets_exact(self):
        model = PotentialModel("twopoint", 1.0, 9)
        exact_l, exact_r = two_point_comparison(
            BOX3, RING3, RING3.shift(2), (1, 1), model
        )
        mc_l, mc_r = two_point_comparison(
            BOX3, RING3, RING3.shift(2), (1, 1), model,
            mode="mc", samples=2000,
        )
        assert abs(mc_l.value - exact_l.value) <= 4 * mc_l.stderr
        assert abs(mc_r.value - exact_r.value) <= 4 * mc_r.stderr


class TestMartingaleAudit:
    def test_hand_oracle_on_the_path(self):
        pin = {(0,): 0}
        audit = martingale_audit(
            PATH3, pin, [(0,), (1,), (2,)], PotentialModel("zero")
        )
        assert audit.target_mean == pytest.approx(0.0, abs=1e-15)
        assert audit.max_diff == pytest.approx(1.0, abs=1e-15)
        level2 = audit.levels[2]
        assert level2[(0, 1)][0] == pytest.approx(0.5, abs=1e-15)
        assert level2[(0, 1)][1] == pytest.approx(1.0, abs=1e-15)
        assert level2[(0, -1)][1] == pytest.approx(-1.0, abs=1e-15)

    def test_probabilities_match_exp_route(self):
        support = enumerate_extensions(BOX3, RING3)
        model = PotentialModel("twopoint", 1.0)
        lib = annealed_member_probabilities(support, model)
        ref = exp_route_annealed_probs(support, model)
        np.testing.assert_allclose(lib, ref, rtol=1e-12)

    def test_tower_property_and_mass_conservation(self):
        model = PotentialModel("twopoint", 1.0)
        walk = [(0, 1), (1, 1)]
        audit = martingale_audit(BOX3, RING3, walk, model)
        for k, level in enumerate(audit.levels):
            mass = sum(m for m, _ in level.values())
            assert mass == pytest.approx(1.0, rel=1e-12)
            if k == 0:
                continue
            parents = audit.levels[k - 1]
            for key, (m, mean) in parents.items():
                wsum = sum(
                    cm * cmean
                    for ckey, (cm, cmean) in level.items()
                    if ckey[: k - 1] == key
                )
                assert wsum == pytest.approx(m * mean, rel=1e-12)

    def test_max_diff_at_most_two_on_all_3x3_walks(self):
        model = PotentialModel("twopoint", 1.0)
        support = enumerate_extensions(BOX3, RING3)
        walks = boundary_to_interior_walks(BOX3, RING3.domain, [(1, 1)])
        assert len(walks) == 8
        for walk in walks:
            audit = martingale_audit(BOX3, RING3, walk, model,
                                     support=support)
            assert audit.max_diff <= 2.0

    def test_walk_must_start_pinned(self):
        with pytest.raises(ValueError):
            martingale_audit(
                BOX3, RING3, [(1, 1), (0, 1)], PotentialModel("zero")
            )

    def test_walk_steps_must_be_edges(self):
        with pytest.raises(ValueError):
            martingale_audit(
                BOX3, RING3, [(0, 0), (1, 1)], PotentialModel("zero")
            )

    def test_empty_walk_rejected(self):
        with pytest.raises(ValueError):
            martingale_audit(BOX3, RING3, [], PotentialModel("zero"))


class TestWalks:
    def test_3x3_walks(self):
        walks = boundary_to_interior_walks(BOX3, RING3.domain, [(1, 1)])
        assert len(walks) == 8  # one start per ring vertex
        for walk in walks:
            assert walk[0] in RING3.domain
            assert walk[-1] == (1, 1)
            for a, b in zip(walk, walk[1:]):
                assert sum(abs(x - y) for x, y in zip(a, b)) == 1

    def test_4x4_walks(self):
        ring = parity_height(BOX4).restrict(boundary(BOX4))
        interior = sorted(set(BOX4.vertex_list) - set(ring.domain))
        walks = boundary_to_interior_walks(BOX4, ring.domain, interior)
        assert len(walks) == 48  # 12 ring starts x 4 interior targets

    def test_walks_are_shortest(self):
        from randomsurfaces.lattice import graph_distance

        walks = boundary_to_interior_walks(BOX3, RING3.domain, [(1, 1)])
        for walk in walks:
            assert len(walk) == graph_distance(BOX3, walk[0], walk[-1]) + 1


class TestTailBounds:
    def test_azuma_bound_values(self):
        assert azuma_bound(4, 1.0) == pytest.approx(2 * math.exp(-2.0))
        assert azuma_bound(1, 2.0) == pytest.approx(2 * math.exp(-2.0))

    def test_azuma_bound_rejects_bad_input(self):
        with pytest.raises(ValueError):
            azuma_bound(0, 1.0)
        with pytest.raises(ValueError):
            azuma_bound(3, 0.0)

    def test_concentration_bound_values(self):
        assert concentration_bound(81, 9, 1.0, 2.0) == pytest.approx(
            162 * math.exp(-4.5)
        )

    def test_concentration_bound_rejects_bad_input(self):
        with pytest.raises(ValueError):
            concentration_bound(0, 9, 1.0, 2.0)
        with pytest.raises(ValueError):
            concentration_bound(81, 9, 1.0, -1.0)

    def test_bounds_decrease_in_c(self):
        cs = [0.25, 0.5, 1.0, 2.0, 4.0]
        azuma = [azuma_bound(5, c) for c in cs]
        conc = [concentration_bound(81, 9, c, 2.0) for c in cs]
        assert azuma == sorted(azuma, reverse=True)
        assert conc == sorted(conc, reverse=True)

    def test_deviation_tail_by_hand(self):
        support = enumerate_extensions(PATH3, {(0,): 0, (2,): 0})
        probs = np.array([0.5, 0.5])  # center -1 / +1, mean 0
        assert deviation_tail_exact(support, probs, (1,), 1.0) == 1.0
        assert deviation_tail_exact(support, probs, (1,), 1.5) == 0.0

    def test_deviation_tail_skewed(self):
        support = enumerate_extensions(PATH3, {(0,): 0, (2,): 0})
        probs = np.array([0.25, 0.75])  # mean 0.5; devs 1.5 and 0.5
        assert deviation_tail_exact(support, probs, (1,), 1.0) == 0.25
        assert deviation_tail_exact(support, probs, (1,), 0.5) == 1.0


class TestBoundaryDataAndConfig:
    def test_parity_boundary(self):
        f = box_boundary_data(BOX3, "parity")
        assert f == RING3

    def test_extremal_boundary_matches_saddle(self):
        f = box_boundary_data(BOX3, "extremal")
        assert f == SADDLE3
        down = box_boundary_data(BOX3, "extremal", direction=-1)
        assert down.heights == tuple(-z for z in SADDLE3.heights)

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError):
            box_boundary_data(BOX3, "steep")

    def test_experiment_defaults(self):
        cfg = ExperimentConfig()
        assert cfg.ns == (9, 15, 25)
        assert cfg.c_values == (0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0)
        assert cfg.model == PotentialModel("twopoint", 1.0, 0)
        assert cfg.boundary == "extremal"
        assert cfg.A == 2.0
        assert cfg.mode == "mc"
        assert cfg.tail_samples == 400
        assert cfg.mean_draws == 200
        assert cfg.start == "mid"

    def test_report_row_slack(self):
        assert ReportRow(3, 1.0, 0, 0.0, 0.5, 0.0).slack() == 0.0
        # zero-count floor: 3 * sqrt((1/400)/400) = 3/400
        assert ReportRow(3, 1.0, 400, 0.0, 0.5, 0.0).slack() == pytest.approx(
            0.0075
        )
        assert ReportRow(3, 1.0, 400, 0.5, 0.5, 0.0).slack() == pytest.approx(
            3 * math.sqrt(0.25 / 400)
        )


class TestConcentrationExperiment:
    def test_exact_mode_small_box(self):
        cfg = ExperimentConfig(
            ns=(3,),
            c_values=(0.5, 1.0, 2.0),
            model=PotentialModel("twopoint", 0.5, 0),
            mode="exact",
        )
        report = concentration_experiment(cfg)
        assert len(report.rows) == 3
        rows = {r.c: r for r in report.rows}
        # the two extensions sit at center height 0 and 2; by the +-
        # symmetry of the two-point law the annealed mean is 1, so the
        # max deviation is exactly 1 for every member
        assert rows[0.5].tail_freq == pytest.approx(1.0, rel=1e-12)
        assert rows[1.0].tail_freq == 0.0
        assert rows[2.0].tail_freq == 0.0
        for r in report.rows:
            assert r.samples == 0
            assert r.bound == pytest.approx(
                concentration_bound(9, 3, r.c, 2.0)
            )
        assert report.violations() == []
        s = report.summaries[0]
        assert s.region_size == 9
        assert s.diam_l1 == 4
        assert s.max_walk_length == 2
        assert s.dev_quantiles[-1] == (1.0, pytest.approx(1.0))

    def test_mc_mode_small_box(self):
        cfg = ExperimentConfig(
            ns=(3,),
            c_values=(1.0, 2.0),
            model=PotentialModel("twopoint", 0.5, 1),
            mode="mc",
            tail_samples=60,
            mean_draws=20,
            mean_samples_per_draw=5,
            burn_factor=1.0,
            thin_factor=0.25,
        )
        report = concentration_experiment(cfg)
        for r in report.rows:
            assert r.samples == 60
            assert 0.0 <= r.tail_freq <= 1.0
            assert math.isfinite(r.mean_stderr_max)
        assert report.summaries[0].samples == 60

    def test_to_csv_round_trip(self):
        cfg = ExperimentConfig(
            ns=(3,), c_values=(1.0,), model=PotentialModel("zero"),
            mode="exact",
        )
        report = concentration_experiment(cfg)
        text = report.to_csv()
        lines = text.strip().splitlines()
        assert lines[0] == "n,c,samples,tail_freq,bound,mean_stderr_max"
        n, c, samples, tail, bound, stderr = lines[1].split(",")
        assert (int(n), float(c), int(samples)) == (3, 1.0, 0)
        assert float(bound) == pytest.approx(
            concentration_bound(9, 3, 1.0, 2.0)
        )

    def test_violations_thresholding(self):
        # craft rows directly: one unbounded, one passing, one failing
        from randomsurfaces.analysis import ConcentrationReport

        rows = (
            ReportRow(9, 0.1, 100, 0.9, 5.0, 0.0),  # bound >= 1: skipped
            ReportRow(9, 1.0, 100, 0.05, 0.04, 0.0),  # within slack
            ReportRow(9, 2.0, 100, 0.5, 0.01, 0.0),  # clear violation
        )
        report = ConcentrationReport(rows, (), ExperimentConfig())
        bad = report.violations()
        assert len(bad) == 1
        assert bad[0].c == 2.0

    def test_hypotheses_guard(self):
        cfg = ExperimentConfig(
            ns=(9,), model=PotentialModel("zero"), mode="exact", A=0.5
        )
        with pytest.raises(ValueError):
            concentration_experiment(cfg)
