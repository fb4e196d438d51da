import json
from types import SimpleNamespace

import numpy as np
from django.test import tag

from riccati_evans.exceptions import (
    BadProfileFile,
    NoConvergence,
    OutOfDomain,
    SingularLimit,
)
from riccati_evans.model import ModelParams, canard_point
from riccati_evans.waves import (
    SolverSettings,
    WaveProfile,
    WaveType,
    _pinned_at_canard,
    _resampled_grid,
    bracket_type_three,
    build_singular_composite,
    classify_wave,
    compute_wave,
    continue_in_c,
    estimate_critical_speed,
    export_profile_csv,
    load_profile,
    profile_document,
    refine_wave,
    save_profile,
)

from .cases import EvansTestCase, OutputDirMixin, tanh_wave


def lienard_wave(w, z, epsilon=0.01, c=1.0, w_prime=None):
    """Profile whose y satisfies the Lienard relation for the given w."""
    if w_prime is None:
        w_prime = np.gradient(w, z, edge_order=2)
    u = 1.0 - w
    v = -w_prime
    y = epsilon * w_prime - v * w + c * w
    return WaveProfile(z, np.array([u, y, v, w]), ModelParams(epsilon, c), WaveType.I)


class WaveProfileTests(EvansTestCase):
    def setUp(self):
        self.wave = tanh_wave()

    def test_accessors(self):
        self.assertArrayClose(self.wave.u, self.wave.states[0])
        self.assertArrayClose(self.wave.w, self.wave.states[3])
        self.assertArrayClose(self.wave.u_prime(), self.wave.v)

    def test_interpolant_hits_the_nodes(self):
        spline = self.wave.interpolant()
        index = 700
        self.assertArrayClose(
            spline(self.wave.grid[index]), self.wave.states[:, index], atol=1e-14
        )

    def test_state_at_outside_the_grid(self):
        with self.assertRaises(OutOfDomain):
            self.wave.state_at(self.wave.grid[0] - 1.0)

    def test_rejects_bad_grids(self):
        with self.assertRaises(ValueError):
            WaveProfile(
                np.array([0.0, 0.0, 1.0]),
                np.zeros((4, 3)),
                self.wave.params,
                WaveType.I,
            )
        with self.assertRaises(ValueError):
            WaveProfile(
                np.array([0.0, 1.0]), np.zeros((3, 2)), self.wave.params, WaveType.I
            )

    def test_boundary_residual_decays_with_the_domain(self):
        self.assertLess(tanh_wave(length=15).boundary_residual(), 1e-6)
        self.assertLess(tanh_wave(length=30).boundary_residual(), 1e-12)

    def test_shifted(self):
        moved = self.wave.shifted(2.5)
        self.assertArrayClose(moved.grid, self.wave.grid + 2.5)
        self.assertArrayClose(moved.states, self.wave.states)

    def test_rows(self):
        rows = self.wave.rows()
        self.assertEqual(rows.shape, (self.wave.grid.size, 5))
        self.assertArrayClose(rows[:, 0], self.wave.grid)

    def test_lienard_residual(self):
        z = np.linspace(-10, 10, 2001)
        slope = -(1 - np.tanh(z) ** 2) / 2
        wave = lienard_wave((1 - np.tanh(z)) / 2, z, w_prime=slope)
        self.assertLess(wave.lienard_residual(), 1e-8)

    def test_lienard_residual_in_a_steep_layer(self):
        # max |w'| = 5, the scale of a shock layer at eps = 0.01
        z = np.linspace(-5, 5, 2001)
        layer = np.tanh(z / 0.1)
        wave = lienard_wave((1 - layer) / 2, z, w_prime=-(1 - layer**2) / 0.2)
        self.assertLess(wave.lienard_residual(), 1e-7)

    def test_lienard_residual_sees_a_bad_y(self):
        z = np.linspace(-10, 10, 2001)
        slope = -(1 - np.tanh(z) ** 2) / 2
        wave = lienard_wave((1 - np.tanh(z)) / 2, z, w_prime=slope)
        states = wave.states.copy()
        states[1] += 1e-4 * np.exp(-(z**2))
        bad = WaveProfile(z, states, wave.params, WaveType.I)
        self.assertAlmostEqual(bad.lienard_residual(), 1e-4, delta=1e-6)


class ClassifyWaveTests(EvansTestCase):
    def setUp(self):
        self.z = np.linspace(-10, 10, 4001)

    def test_smooth_front(self):
        wave = lienard_wave((1 - np.tanh(self.z / 2)) / 2, self.z)
        self.assertIs(classify_wave(wave), WaveType.I)

    def test_shock_layer(self):
        # max |w'| = 25 exceeds kappa / sqrt(eps) = 1
        wave = lienard_wave((1 - np.tanh(self.z / 0.02)) / 2, self.z)
        self.assertIs(classify_wave(wave), WaveType.II)
        self.assertIs(classify_wave(wave, kappa=100.0), WaveType.I)

    def test_type_two_layer_width(self):
        # max |w'| of about 3.3, as measured on the c = 0.70 wave
        wave = lienard_wave((1 - np.tanh(self.z / 0.15)) / 2, self.z)
        self.assertIs(classify_wave(wave), WaveType.II)

    def test_type_one_front_width(self):
        # max |w'| of about 0.33, as measured on the c = 1 wave
        wave = lienard_wave((1 - np.tanh(self.z / 1.5)) / 2, self.z)
        self.assertIs(classify_wave(wave), WaveType.I)

    def test_negative_w(self):
        w = (1 - np.tanh(self.z / 0.02)) / 2 - 0.01 * np.exp(-((self.z - 8) ** 2))
        self.assertIs(classify_wave(lienard_wave(w, self.z)), WaveType.IV)

    def test_synthetic_wave_is_type_one(self):
        self.assertIs(classify_wave(tanh_wave()), WaveType.I)


class GuessHandlingTests(EvansTestCase):
    def pinned_wave(self, w_zero, c):
        z = np.linspace(-10, 10, 2001)
        offset = -np.arctanh(1 - 2 * w_zero)
        return lienard_wave((1 - np.tanh(z - offset)) / 2, z, c=c)

    def test_canard_phase_is_recognised(self):
        w_fold = canard_point(0.70)[1]
        self.assertTrue(_pinned_at_canard(self.pinned_wave(w_fold, 0.70)))
        self.assertFalse(_pinned_at_canard(self.pinned_wave(0.5, 0.70)))

    def test_resampled_grid_is_bounded(self):
        z = np.linspace(-50, 50, 200001)
        wave = lienard_wave((1 - np.tanh(z / 0.05)) / 2, z)
        grid = _resampled_grid(wave, 50.0, 50.0, 2001)
        self.assertLessEqual(grid.size, 2001)
        self.assertEqual(grid[0], -50.0)
        self.assertEqual(grid[-1], 50.0)
        self.assertTrue(np.all(np.diff(grid) > 0))
        # the layer keeps most of the equidistributed half
        self.assertGreater(np.count_nonzero(np.abs(grid) < 0.2), 500)

    def test_resampled_grid_of_a_flat_profile(self):
        z = np.linspace(-5, 5, 101)
        wave = lienard_wave(np.full_like(z, 0.5), z)
        grid = _resampled_grid(wave, 5.0, 5.0, 21)
        self.assertArrayClose(grid, np.linspace(-5, 5, 10))


class BracketTypeThreeTests(EvansTestCase):
    def profile(self, c, wave_type):
        return SimpleNamespace(params=SimpleNamespace(c=c), wave_type=wave_type)

    def test_bracket(self):
        profiles = [
            self.profile(0.70, WaveType.II),
            self.profile(0.68, WaveType.II),
            self.profile(0.66, WaveType.IV),
            self.profile(0.65, WaveType.IV),
        ]
        self.assertEqual(bracket_type_three(profiles), (0.68, 0.66))
        self.assertEqual(bracket_type_three(profiles[::-1]), (0.68, 0.66))

    def test_no_transition(self):
        profiles = [self.profile(0.70, WaveType.II), self.profile(0.69, WaveType.II)]
        self.assertIsNone(bracket_type_three(profiles))


class ProfileFileTests(OutputDirMixin, EvansTestCase):
    def setUp(self):
        super().setUp()
        self.wave = tanh_wave(n=101)

    def test_round_trip(self):
        path = save_profile(self.wave, self.out_dir / "wave.json")
        loaded = load_profile(path)
        self.assertEqual(loaded.params, self.wave.params)
        self.assertIs(loaded.wave_type, WaveType.I)
        np.testing.assert_array_equal(loaded.grid, self.wave.grid)
        np.testing.assert_array_equal(loaded.states, self.wave.states)

    def test_document_is_deterministic(self):
        self.assertEqual(profile_document(self.wave), profile_document(self.wave))
        payload = json.loads(profile_document(self.wave))
        self.assertEqual(payload["columns"], ["z", "u", "y", "v", "w"])
        self.assertEqual(payload["n_nodes"], 101)

    def write(self, payload):
        path = self.out_dir / "bad.json"
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    def test_bad_files(self):
        good = json.loads(profile_document(self.wave))
        bad_payloads = {
            "schema": dict(good, schema="something-else"),
            "version": dict(good, version=99),
            "n_nodes": dict(good, n_nodes=5),
            "columns": dict(good, rows=[[0.0, 1.0]] * 101),
            "type": dict(good, wave_type="V"),
            "params": dict(good, epsilon=-1.0),
        }
        for name, payload in bad_payloads.items():
            with self.subTest(name), self.assertRaises(BadProfileFile):
                load_profile(self.write(payload))

    def test_unreadable_files(self):
        with self.assertRaises(BadProfileFile):
            load_profile(self.out_dir / "missing.json")
        path = self.out_dir / "garbage.json"
        path.write_text("{not json", encoding="utf-8")
        with self.assertRaises(BadProfileFile):
            load_profile(path)

    def test_csv_export(self):
        export_profile_csv(self.wave, self.out_dir / "wave.csv", digest="abc")
        lines = self.read_text("wave.csv").splitlines()
        self.assertTrue(lines[0].startswith("#"))
        self.assertIn("abc", lines[0])
        self.assertEqual(lines[1], "z,u,y,v,w")
        self.assertEqual(len(lines), 103)


class SingularCompositeTests(EvansTestCase):
    def test_type_one_at_unit_speed(self):
        composite = build_singular_composite(1.0, ModelParams(0.0, 1.0))
        self.assertIsNone(composite.jump)
        self.assertIs(composite.composite_type, WaveType.I)
        self.assertAlmostEqual(composite.u_inf, 1.0, places=8)
        (segment,) = composite.reduced_segments
        self.assertGreater(segment.w[0], 0.99)
        self.assertLess(segment.w[-1], 0.01)

    def test_seed_is_lifted(self):
        composite = build_singular_composite(1.0, ModelParams(0.0, 1.0))
        grid, states = composite.seed(0.01, 50.0, 50.0, 501)
        self.assertEqual(grid.size, 501)
        self.assertEqual(states.shape, (4, 501))
        self.assertEqual(grid[0], -50.0)

    def test_bad_speed(self):
        with self.assertRaises(ValueError):
            build_singular_composite(0.0, ModelParams(0.0, 1.0))

    def test_refinement_needs_positive_epsilon(self):
        with self.assertRaises(SingularLimit):
            refine_wave(tanh_wave(), ModelParams(0.0, 1.0))

    def test_critical_speed_needs_a_bracket(self):
        with self.assertRaises(NoConvergence):
            estimate_critical_speed(ModelParams(0.0, 1.0), 1.0, 1.0)

    def test_continuation_to_the_same_speed(self):
        wave = tanh_wave()
        self.assertEqual(continue_in_c(wave, 1.0, 5), [wave])
        with self.assertRaises(ValueError):
            continue_in_c(wave, 0.9, 0)


@tag("slow")
class ComputeWaveTests(EvansTestCase):
    def test_type_two_and_four_composites(self):
        settings = SolverSettings()
        p = ModelParams(0.0, 1.0)
        two = build_singular_composite(0.70, p.replace(c=0.70), settings)
        self.assertIs(two.composite_type, WaveType.II)
        self.assertGreater(two.jump.w_plus, 0)
        four = build_singular_composite(0.65, p.replace(c=0.65), settings)
        self.assertIs(four.composite_type, WaveType.IV)
        self.assertLess(four.min_w(), 0)
        for composite, c in ((two, 0.70), (four, 0.65)):
            jump = composite.jump
            self.assertAlmostEqual(
                jump.w_plus + jump.w_minus, c**2 / jump.u**2, places=10
            )

    def test_critical_speed_lies_between_types(self):
        lo, hi = estimate_critical_speed(ModelParams(0.0, 1.0), 0.70, 1.0, tol=1e-3)
        self.assertLess(0.70, lo)
        self.assertLess(hi, 1.0)
        self.assertLessEqual(hi - lo, 1e-3)

    def test_smooth_wave(self):
        wave = compute_wave(ModelParams(0.01, 1.0))
        self.assertIs(wave.wave_type, WaveType.I)
        self.assertAlmostEqual(wave.params.u_inf, 1.0, places=6)
        self.assertLess(wave.boundary_residual(), SolverSettings().tol_bc)
        self.assertLess(abs(wave.state_at(0.0)[3] - 0.5), 1e-8)

    def test_shock_wave_is_type_two(self):
        wave = compute_wave(ModelParams(0.01, 0.70))
        self.assertIs(wave.wave_type, WaveType.II)
        w_fold = canard_point(0.70)[1]
        self.assertLess(abs(wave.state_at(0.0)[3] - w_fold), 1e-8)

    def test_non_monotone_wave(self):
        wave = compute_wave(ModelParams(0.01, 0.65))
        self.assertIs(wave.wave_type, WaveType.IV)
        self.assertLess(wave.w.min(), 0)

    def test_lienard_residual_of_shock_waves(self):
        for c in (0.70, 0.65):
            with self.subTest(c=c):
                wave = compute_wave(ModelParams(0.01, c))
                self.assertLess(wave.lienard_residual(), 1e-6)

    def test_refinement_is_idempotent(self):
        wave = compute_wave(ModelParams(0.01, 1.0))
        again = refine_wave(wave, wave.params)
        self.assertEqual(again.grid.shape, wave.grid.shape)
        self.assertArrayClose(again.states, wave.states, atol=1e-10)
        self.assertAlmostEqual(again.params.u_inf, wave.params.u_inf, places=10)

    def test_continuation_keeps_phase_and_mesh(self):
        start = compute_wave(ModelParams(0.01, 0.70))
        profiles = continue_in_c(start, 0.68, 4)
        for wave in profiles:
            w_fold = canard_point(wave.params.c)[1]
            self.assertLess(abs(wave.state_at(0.0)[3] - w_fold), 1e-8)
        sizes = [wave.grid.size for wave in profiles[1:]]
        self.assertLessEqual(max(sizes), 2 * min(sizes))

    def test_continuation_brackets_type_three(self):
        start = compute_wave(ModelParams(0.01, 0.70))
        self.assertIs(start.wave_type, WaveType.II)
        profiles = continue_in_c(start, 0.65, 10)
        self.assertAlmostEqual(profiles[-1].params.c, 0.65)
        c_two, c_four = bracket_type_three(profiles)
        self.assertLessEqual(c_four, 0.6701 + 0.02)
        self.assertGreaterEqual(c_two, 0.6701 - 0.02)
