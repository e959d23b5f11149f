import numpy as np
import pytest

from l0landscape import (
    Instance,
    PointKind,
    StabilityProbeConfig,
    StabilityVerdict,
    ValidationError,
    default_probe_epsilon,
    enumerate_stationary,
    perturb_instance,
    probe_strong_stability,
)
from l0landscape.util import spawn_seed

from _oracles import random_instance


def data_distance(a: Instance, b: Instance) -> float:
    return float(np.sqrt(np.sum((a.A - b.A) ** 2) + np.sum((a.b - b.b) ** 2)))


class TestPerturbInstance:
    @pytest.mark.parametrize("seed", range(6))
    def test_exact_radius(self, saddle_instance, seed):
        perturbed = perturb_instance(saddle_instance, 0.37, seed)
        assert data_distance(saddle_instance, perturbed) == pytest.approx(0.37, abs=1e-12)

    def test_seed_determinism(self, saddle_instance):
        a = perturb_instance(saddle_instance, 1e-2, 123)
        b = perturb_instance(saddle_instance, 1e-2, 123)
        np.testing.assert_array_equal(a.A, b.A)
        np.testing.assert_array_equal(a.b, b.b)

    def test_paper_mode_shifts_measurements_uniformly(self, instability_original):
        eps = 0.1
        perturbed = perturb_instance(
            instability_original, eps * np.sqrt(2.0), 0, paper_mode=True)
        np.testing.assert_array_equal(perturbed.A, instability_original.A)
        np.testing.assert_allclose(perturbed.b, [eps, eps], atol=1e-15)

    def test_zero_delta_is_identity(self, saddle_instance):
        perturbed = perturb_instance(saddle_instance, 0.0, 5)
        np.testing.assert_array_equal(perturbed.A, saddle_instance.A)
        np.testing.assert_array_equal(perturbed.b, saddle_instance.b)


class TestProbeStrongStability:
    CFG = dict(epsilon=0.02, delta=1e-3, trials=50, seed=11)

    def test_degenerate_origin_is_unstable(self, instability_original):
        rep = enumerate_stationary(instability_original)
        probe = probe_strong_stability(
            instability_original, rep.points[0], StabilityProbeConfig(**self.CFG))
        assert probe.verdict is StabilityVerdict.UNSTABLE
        assert not probe.nondegenerate_expected
        assert probe.agreement

    def test_degenerate_origin_unstable_in_paper_mode(self, instability_original):
        rep = enumerate_stationary(instability_original)
        cfg = StabilityProbeConfig(epsilon=0.02, delta=1e-3, trials=5, seed=1,
                                   paper_mode=True)
        probe = probe_strong_stability(instability_original, rep.points[0], cfg)
        assert probe.verdict is StabilityVerdict.UNSTABLE
        assert probe.exists_count == 5  # the bifurcated points stay nearby
        assert probe.unique_count == 0

    def test_perturbed_points_all_stable(self, instability_perturbed):
        rep = enumerate_stationary(instability_perturbed)
        assert len(rep.points) == 3
        for p in rep.points:
            probe = probe_strong_stability(
                instability_perturbed, p, StabilityProbeConfig(**self.CFG))
            assert probe.verdict is StabilityVerdict.STABLE
            assert probe.exists_count == probe.trials
            assert probe.unique_count == probe.trials
            assert probe.agreement

    def test_zero_delta_counts_everything(self, saddle_instance):
        rep = enumerate_stationary(saddle_instance)
        minimizer = [p for p in rep.points if p.kind is PointKind.LOCAL_MINIMIZER][0]
        cfg = StabilityProbeConfig(epsilon=0.02, delta=0.0, trials=7, seed=2)
        probe = probe_strong_stability(saddle_instance, minimizer, cfg)
        assert probe.exists_count == 7
        assert probe.unique_count == 7
        assert probe.verdict is StabilityVerdict.STABLE

    def test_unique_count_never_exceeds_exists_count(self, complementarity_instance):
        rep = enumerate_stationary(complementarity_instance)
        for p in rep.points:
            probe = probe_strong_stability(
                complementarity_instance, p, StabilityProbeConfig(**self.CFG))
            assert probe.unique_count <= probe.exists_count <= probe.trials

    def test_determinism(self, instability_perturbed):
        rep = enumerate_stationary(instability_perturbed)
        cfg = StabilityProbeConfig(**self.CFG)
        a = probe_strong_stability(instability_perturbed, rep.points[0], cfg)
        b = probe_strong_stability(instability_perturbed, rep.points[0], cfg)
        assert a.to_dict() == b.to_dict()

    def test_sample_capped_at_ten_trials(self, instability_perturbed):
        rep = enumerate_stationary(instability_perturbed)
        probe = probe_strong_stability(
            instability_perturbed, rep.points[0], StabilityProbeConfig(**self.CFG))
        assert len(probe.perturbed_points_sample) == 10

    def test_config_validation(self):
        with pytest.raises(ValidationError):
            StabilityProbeConfig(epsilon=0.0, delta=1e-3, trials=5, seed=1).validate()
        with pytest.raises(ValidationError):
            StabilityProbeConfig(epsilon=0.1, delta=-1.0, trials=5, seed=1).validate()
        with pytest.raises(ValidationError):
            StabilityProbeConfig(epsilon=0.1, delta=1e-3, trials=0, seed=1).validate()


class TestAgreementProperty:
    def test_nondegenerate_points_probe_stable_on_random_instances(self):
        rng = np.random.default_rng(2718)
        shapes = [(3, 4, 1), (4, 5, 2), (2, 3, 1)]
        instances_checked = 0
        attempt = 0
        while instances_checked < 200:
            m, n, s = shapes[attempt % len(shapes)]
            attempt += 1
            inst = random_instance(rng, m, n, s)
            rep = enumerate_stationary(inst)
            if rep.degenerate or rep.continuum_detected:
                continue
            min_entry = min(
                (abs(v) for p in rep.points for v in p.point.x[list(p.point.support)]),
                default=1.0,
            )
            min_nd1 = min(
                (p.cert.nd1_min_abs for p in rep.points if np.isfinite(p.cert.nd1_min_abs)),
                default=1.0,
            )
            epsilon = default_probe_epsilon(rep)
            # a delta-perturbation moves a stationary point by up to about
            # ||pinv(A_S)|| * (1 + ||x||) * delta, so shrink delta accordingly
            sigma_min = min(
                (float(np.linalg.svd(inst.A[:, list(p.point.support)],
                                     compute_uv=False)[-1])
                 for p in rep.points if p.point.support),
                default=1.0,
            )
            x_max = max(float(np.linalg.norm(p.point.x)) for p in rep.points)
            delta = min(
                1e-3 * min(min_entry, min_nd1),
                0.1 * epsilon * sigma_min / (1.0 + x_max),
            )
            for p in rep.points:
                cfg = StabilityProbeConfig(
                    epsilon=epsilon, delta=delta, trials=5, seed=instances_checked)
                probe = probe_strong_stability(inst, p, cfg)
                assert probe.verdict is StabilityVerdict.STABLE
                assert probe.agreement
            instances_checked += 1

    def test_unique_nearby_point_keeps_the_support(self):
        rng = np.random.default_rng(31415)
        inst = random_instance(rng, 3, 4, 1)
        rep = enumerate_stationary(inst)
        assert rep.degenerate == 0
        epsilon = default_probe_epsilon(rep)
        for p in rep.points:
            for trial in range(10):
                perturbed = perturb_instance(inst, 1e-5, spawn_seed(9, trial))
                nearby = [
                    q for q in enumerate_stationary(perturbed).points
                    if np.linalg.norm(q.point.x - p.point.x) <= epsilon
                ]
                assert len(nearby) == 1
                assert nearby[0].point.support == p.point.support


class TestDefaultEpsilon:
    def test_quarter_of_min_gap(self, instability_perturbed):
        rep = enumerate_stationary(instability_perturbed)
        # closest pair: (0.1, 0) and (0, 0) at distance 0.1
        assert default_probe_epsilon(rep) == pytest.approx(0.025)

    def test_single_point_fallback(self, instability_original):
        rep = enumerate_stationary(instability_original)
        assert default_probe_epsilon(rep) == pytest.approx(1e-2)
