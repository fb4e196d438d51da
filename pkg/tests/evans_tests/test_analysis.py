import threading
from types import SimpleNamespace

import numpy as np

from riccati_evans.analysis import (
    Contour,
    ContourKind,
    RootRecord,
    _map,
    argument_field,
    chart_corrected_winding,
    conjugate_closed,
    find_brackets,
    locate_roots,
    mirror_region,
    newton_polish,
    real_root_refine,
    sweep_real,
    track_root_in_c,
    winding_number,
    winding_report,
)
from riccati_evans.exceptions import (
    ChartSingularity,
    ChartSingularityWarning,
    ClusterUnresolved,
    NonConvergentRefinement,
    OnPath,
    RootLost,
)

from .cases import EvansTestCase


def polynomial(*roots):
    return lambda lam: np.prod([lam - root for root in roots])


class ContourTests(EvansTestCase):
    def test_quarter_circle_is_closed(self):
        contour = Contour.quarter_circle(10.0)
        self.assertTrue(contour.closed)
        self.assertEqual(contour.length, 4)
        self.assertComplexClose(contour.point(0), 1e-6)
        self.assertComplexClose(contour.point(1), 10.0)
        self.assertComplexClose(contour.point(2), 10j)
        self.assertComplexClose(contour.point(4), contour.point(0))

    def test_axis_legs_crowd_the_origin(self):
        contour = Contour.quarter_circle(1e4)
        self.assertLess(abs(contour.point(0.5)), 1.0)

    def test_rectangle(self):
        contour = Contour.rectangle(0, 2 + 1j)
        self.assertEqual(contour.kind, ContourKind.RECTANGLE)
        self.assertComplexClose(contour.point(1), 2 + 0j)
        self.assertComplexClose(contour.point(2), 2 + 1j)
        with self.assertRaises(ValueError):
            Contour.rectangle(2 + 1j, 0)

    def test_segment_is_open(self):
        contour = Contour.segment(0, 1)
        self.assertFalse(contour.closed)
        with self.assertRaises(ValueError):
            winding_number(lambda lam: lam, contour, workers=1)

    def test_describe(self):
        description = Contour.quarter_circle(10.0, n_min=16).describe()
        self.assertEqual(description["kind"], "quarter_circle")
        self.assertEqual(description["n_min"], 16)


class WindingNumberTests(EvansTestCase):
    def test_double_zero(self):
        result = winding_number(lambda lam: lam**2, Contour.circle(0, 1), workers=1)
        self.assertEqual(result.winding, 2)
        self.assertLess(result.residual, 1e-10)

    def test_quarter_circle_excludes_the_left_half_plane(self):
        contour = Contour.quarter_circle(10.0)
        self.assertEqual(winding_number(polynomial(-1), contour, workers=1).winding, 0)
        self.assertEqual(
            winding_number(polynomial(1 + 1j), contour, workers=1).winding, 1
        )

    def test_large_radius(self):
        contour = Contour.quarter_circle(1e4)
        result = winding_number(polynomial(3 + 2j, 50 + 7000j, -4), contour)
        self.assertEqual(result.winding, 2)

    def test_pole_counts_negatively(self):
        result = winding_number(
            lambda lam: 1 / (lam - 0.5j), Contour.circle(0, 1), workers=1
        )
        self.assertEqual(result.winding, -1)

    def test_fast_rotation_is_refined(self):
        contour = Contour.circle(0, 1, n_min=8)
        result = winding_number(lambda lam: lam**5, contour, workers=1)
        self.assertEqual(result.winding, 5)
        self.assertGreater(result.samples_used, 30)
        steps = np.angle(np.asarray(result.values[1:]) / result.values[:-1])
        self.assertLess(np.abs(steps).max(), np.pi / 2)

    def test_zero_on_the_contour(self):
        with self.assertRaises(OnPath) as caught:
            winding_number(lambda lam: lam, Contour.rectangle(0, 1 + 1j), workers=1)
        self.assertEqual(caught.exception.lam, 0)

    def test_failed_samples_are_on_the_path(self):
        with self.assertRaises(OnPath):
            winding_number(
                lambda lam: np.nan if lam.real > 0.9 else lam,
                Contour.circle(0, 1),
                workers=1,
            )

    def test_refinement_budget(self):
        with self.assertRaises(NonConvergentRefinement):
            winding_number(
                lambda lam: lam**40, Contour.circle(0, 1), workers=1, max_samples=70
            )

    def test_workers_do_not_change_the_result(self):
        func = polynomial(1 + 1j, 2 + 3j)
        contour = Contour.quarter_circle(10.0)
        serial = winding_number(func, contour, workers=1)
        threaded = winding_number(func, contour, workers=4)
        self.assertEqual(serial.lams, threaded.lams)
        self.assertEqual(serial.total_turns, threaded.total_turns)

    def test_winding_is_additive_over_a_partition(self):
        func = polynomial(1 + 1j, 3 + 1j, 1 + 3j, 2.5 + 2.5j, -1 + 0.5j)
        whole = winding_number(func, Contour.rectangle(0, 4 + 4j), workers=1)
        parts = [
            winding_number(func, Contour.rectangle(lo, hi), workers=1).winding
            for lo, hi in (
                (0, 2.2 + 2.2j),
                (2.2, 4 + 2.2j),
                (2.2j, 2.2 + 4j),
                (2.2 + 2.2j, 4 + 4j),
            )
        ]
        self.assertEqual(whole.winding, 4)
        self.assertEqual(parts, [1, 1, 1, 1])
        self.assertEqual(sum(parts), whole.winding)

    def test_report(self):
        contour = Contour.quarter_circle(10.0)
        result = winding_number(polynomial(1 + 1j), contour, workers=1)
        report = winding_report(result, contour)
        self.assertEqual(report["status"], "ok")
        self.assertEqual(report["winding"], 1)
        self.assertEqual(report["samples_used"], len(result.lams))


class ChartedFunction:
    """Zeros over chart poles, carrying the poles as its chart factor."""

    def __init__(self, zeros, poles):
        self.zeros = polynomial(*zeros)
        self.poles = polynomial(*poles)

    def __call__(self, lam):
        return self.zeros(lam) / self.poles(lam)

    def chart_factor(self, lam):
        return self.poles(lam)


class ChartCorrectionTests(EvansTestCase):
    def test_pole_cancels_a_zero(self):
        evans = ChartedFunction([1 + 1j], [2 + 2j])
        contour = Contour.rectangle(0, 3 + 3j)
        result, correction = chart_corrected_winding(evans, contour, workers=1)
        self.assertEqual(result.winding, 0)
        self.assertEqual(correction, 1)
        report = winding_report(result, contour, correction)
        self.assertEqual(report["chart_factor_winding"], 1)
        self.assertEqual(report["evans_zeros"], 1)

    def test_plain_callables_are_not_corrected(self):
        contour = Contour.rectangle(0, 3 + 3j)
        result, correction = chart_corrected_winding(
            polynomial(1 + 1j), contour, workers=1
        )
        self.assertEqual((result.winding, correction), (1, 0))
        self.assertNotIn("evans_zeros", winding_report(result, contour))


class MapTests(EvansTestCase):
    def test_single_item_runs_inline(self):
        here = threading.get_ident()
        self.assertEqual(_map(lambda _: threading.get_ident(), [0]), [here])
        self.assertEqual(_map(lambda _: threading.get_ident(), [0], workers=4), [here])

    def test_order_is_kept(self):
        squares = _map(lambda x: x * x, range(6), workers=3)
        self.assertEqual(squares, [0, 1, 4, 9, 16, 25])
        self.assertEqual(_map(str, []), [])


class NewtonTests(EvansTestCase):
    def test_cube_root_of_unity(self):
        root = newton_polish(lambda lam: lam**3 - 1, 0.9 + 0.1j)
        self.assertComplexClose(root, 1.0, atol=1e-10)

    def test_leaving_the_disc(self):
        with self.assertRaises(NonConvergentRefinement):
            newton_polish(polynomial(5 + 5j), 0.0, radius=1.0)

    def test_zero_derivative(self):
        with self.assertRaises(NonConvergentRefinement):
            newton_polish(lambda lam: 1.0 + 0 * lam, 0.3)


class LocateRootsTests(EvansTestCase):
    def test_simple_zeros(self):
        # 1 + 1j sits on the first midline split, forcing an offset split
        func = polynomial(1 + 1j, 2.2 + 0.5j, -3)
        search = locate_roots(func, 0, 3 + 2j, workers=1)
        self.assertEqual(len(search.roots), 2)
        self.assertEqual(search.poles, ())
        self.assertComplexClose(search.roots[0].lam, 1 + 1j, atol=1e-9)
        self.assertComplexClose(search.roots[1].lam, 2.2 + 0.5j, atol=1e-9)
        for record in search.roots:
            self.assertLess(record.residual, 1e-8)
            self.assertEqual(record.multiplicity, 1)

    def test_speed_is_recorded(self):
        search = locate_roots(polynomial(0.4 + 0.3j), 0, 1 + 1j, c=0.7, workers=1)
        self.assertEqual(search.roots[0].c, 0.7)
        self.assertEqual(search.roots[0].row()[0], 0.7)

    def test_pole(self):
        def evans(lam):
            return np.reciprocal(np.complex128(lam) - (0.6 + 0.3j))

        with np.errstate(divide="ignore", invalid="ignore"):
            search = locate_roots(evans, 0, 1 + 1j, workers=1)
        self.assertEqual(search.roots, ())
        self.assertEqual(len(search.poles), 1)
        self.assertComplexClose(search.poles[0].lam, 0.6 + 0.3j, atol=1e-9)

    def test_empty_region(self):
        search = locate_roots(polynomial(5 + 5j), 0, 1 + 1j, workers=1)
        self.assertEqual(search.roots, ())

    def test_double_zero_is_unresolved(self):
        with self.assertRaises(ClusterUnresolved) as caught:
            locate_roots(
                polynomial(0.1 + 0.05j, 0.1 + 0.05j),
                0,
                1 + 1j,
                min_cell=1e-3,
                workers=1,
            )
        self.assertEqual(caught.exception.winding, 2)

    def test_mirror_region(self):
        lo, hi = mirror_region(0 + 1j, 2 + 3j)
        self.assertEqual(lo, 0 - 3j)
        self.assertEqual(hi, 2 - 1j)

    def test_conjugate_closed(self):
        func = polynomial(1 + 0.5j, 1 - 0.5j, 0.5)
        upper = locate_roots(func, 0.1 - 0.1j, 2 + 1j, workers=1).roots
        lower = locate_roots(func, *mirror_region(0.1 - 0.1j, 2 + 1j), workers=1)
        self.assertTrue(conjugate_closed(upper, lower.roots))
        self.assertFalse(conjugate_closed(upper, ()))


class SweepTests(EvansTestCase):
    def test_sign_change_bracket(self):
        lams = np.linspace(-1, 1, 21)
        values = (lams - 0.33) * (1 + 1j)
        (bracket,) = find_brackets(lams, values)
        self.assertAlmostEqual(bracket[0], 0.3)
        self.assertAlmostEqual(bracket[1], 0.4)

    def test_real_values(self):
        lams = np.linspace(-1, 1, 21)
        (bracket,) = find_brackets(lams, (lams + 0.55).astype(complex))
        self.assertAlmostEqual(bracket[0], -0.6)

    def test_real_flip_without_imaginary_flip(self):
        lams = np.linspace(-1, 1, 21)
        values = (lams - 0.33) + 1j
        self.assertEqual(find_brackets(lams, values), ())

    def test_local_minimum_bracket(self):
        lams = np.linspace(-1, 1, 21)
        values = ((lams - 0.301) ** 2).astype(complex)
        (bracket,) = find_brackets(lams, values)
        self.assertAlmostEqual(bracket[0], 0.2)
        self.assertAlmostEqual(bracket[1], 0.4)

    def test_sweep_records_failures(self):
        def evans(lam):
            if lam.real > 0.8:
                raise ChartSingularity(0.0, 1e9, "paper")
            return lam - 0.33

        with self.assertWarns(ChartSingularityWarning):
            sweep = sweep_real(evans, -1, 1, 21, chart_label="paper", workers=1)
        statuses = [s.status for s in sweep.samples]
        self.assertEqual(statuses.count("ChartSingularity"), 2)
        self.assertEqual(sweep.samples[0].chart_label, "paper")
        self.assertTrue(np.isnan(sweep.values[-1]))
        self.assertEqual(len(sweep.brackets), 1)

    def test_sweep_needs_two_samples(self):
        with self.assertRaises(ValueError):
            sweep_real(polynomial(0), -1, 1, 1, workers=1)

    def test_refine(self):
        func = polynomial(0.33)
        record = real_root_refine(lambda lam: func(lam) * (1 + 1j), (0.3, 0.4))
        self.assertAlmostEqual(record.lam.real, 0.33, places=11)
        self.assertEqual(record.lam.imag, 0.0)
        self.assertIsNone(record.c)

    def test_refine_rejects_poles(self):
        with self.assertRaises(NonConvergentRefinement):
            real_root_refine(lambda lam: np.reciprocal(lam - 0.3317), (0.3, 0.4))

    def test_refine_needs_a_sign_change(self):
        with self.assertRaises(NonConvergentRefinement):
            real_root_refine(lambda lam: (lam - 0.32) ** 2 + 1, (0.3, 0.4))


class ArgumentFieldTests(EvansTestCase):
    def test_zero_and_pole(self):
        def func(lam):
            return (lam - (0.5 + 0.5j)) / (lam - (1.5 + 0.5j))

        field = argument_field(func, 0, 2 + 1j, 7, 4, workers=1)
        self.assertEqual(field.phase.shape, (7, 4))
        found = field.singularities()
        self.assertEqual(len(found), 2)
        (zero,) = [item for item in found if item[2] == 1]
        (pole,) = [item for item in found if item[2] == -1]
        self.assertAlmostEqual(zero[1], 0.5)
        self.assertLess(abs(zero[0] - 0.5), 0.2)
        self.assertLess(abs(pole[0] - 1.5), 0.2)

    def test_rows(self):
        field = argument_field(polynomial(5), 0, 1 + 1j, 3, 2, workers=1)
        rows = list(field.rows())
        self.assertEqual(len(rows), 6)
        self.assertEqual(rows[0][:2], (0.0, 0.0))
        self.assertEqual(rows[0][3], "ok")

    def test_single_point_grid(self):
        field = argument_field(polynomial(5), 1 + 1j, 2 + 2j, 1, 1, workers=1)
        self.assertEqual(field.phase.shape, (1, 1))
        self.assertEqual(field.singularities(), [])


def linear_family(offset, shift=0.2j):
    """Evans stand-in whose single root is c - offset + shift."""
    return lambda wave: (lambda lam: lam - (wave.params.c - offset) - shift)


def fake_waves(speeds):
    return [SimpleNamespace(params=SimpleNamespace(c=c)) for c in speeds]


class TrackRootTests(EvansTestCase):
    def test_crossing(self):
        waves = fake_waves(np.linspace(0.70, 0.65, 11))
        seed = RootRecord(0.0275 + 0.2j, 0.70, 0.0)
        track = track_root_in_c(waves, seed, linear_family(0.6725))
        self.assertEqual(len(track.records), 11)
        for wave, record in zip(waves, track.records):
            self.assertComplexClose(
                record.lam, wave.params.c - 0.6725 + 0.2j, atol=1e-9
            )
        self.assertAlmostEqual(track.crossing[0], 0.675)
        self.assertAlmostEqual(track.crossing[1], 0.67)

    def test_no_crossing(self):
        waves = fake_waves([0.70, 0.69, 0.68])
        seed = RootRecord(0.0275 + 0.2j, 0.70, 0.0)
        track = track_root_in_c(waves, seed, linear_family(0.6725))
        self.assertIsNone(track.crossing)

    def test_local_search_after_a_long_step(self):
        # the root moves 0.15 between speeds: beyond Newton's step limit
        # but inside the relocation window
        waves = fake_waves([0.70, 0.55])
        seed = RootRecord(0.0275 + 0.2j, 0.70, 0.0)
        track = track_root_in_c(
            waves, seed, linear_family(0.6725), step_limit=0.1, relocate_width=0.2
        )
        self.assertComplexClose(track.records[1].lam, -0.1225 + 0.2j, atol=1e-9)

    def test_lost_root(self):
        waves = fake_waves([0.70, 0.69])

        def factory(wave):
            if wave.params.c == 0.70:
                return polynomial(0.0275 + 0.2j)
            return polynomial(5 + 5j)

        seed = RootRecord(0.0275 + 0.2j, 0.70, 0.0)
        with self.assertRaises(RootLost) as caught:
            track_root_in_c(waves, seed, factory)
        self.assertEqual(caught.exception.c, 0.69)
