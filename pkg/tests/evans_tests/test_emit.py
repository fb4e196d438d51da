import json
import math

import numpy as np

from riccati_evans import __version__, emit
from riccati_evans.linearization import dispersion_curves
from riccati_evans.model import ModelParams

from .cases import EvansTestCase, OutputDirMixin, tanh_wave


class FormatValueTests(EvansTestCase):
    def test_values(self):
        self.assertEqual(emit.format_value(0.1), "0.10000000000000001")
        self.assertEqual(emit.format_value(np.int64(3)), "3")
        self.assertEqual(emit.format_value(True), "1")
        self.assertEqual(emit.format_value("ok"), "ok")
        self.assertEqual(emit.format_value(math.nan), "nan")

    def test_comment_line(self):
        self.assertEqual(
            emit.comment_line("abc"), f"# riccati-evans {__version__} config-sha256=abc"
        )
        self.assertTrue(emit.comment_line().endswith("config-sha256=none"))


class WriterTests(OutputDirMixin, EvansTestCase):
    def test_csv(self):
        emit.write_csv(
            self.out_dir / "table.csv", ("a", "b"), [(1, 0.5), (2, "x")], "d1"
        )
        self.assertEqual(
            self.read_text("table.csv"),
            emit.comment_line("d1") + "\na,b\n1,0.5\n2,x\n",
        )

    def test_json(self):
        emit.write_json(
            self.out_dir / "report.json",
            {"lam": 1 + 2j, "values": np.array([1.0, math.inf]), "n": np.int32(4)},
            "d2",
        )
        document = json.loads(self.read_text("report.json"))
        self.assertEqual(document["config_sha256"], "d2")
        self.assertEqual(document["lam"], {"re": 1.0, "im": 2.0})
        self.assertEqual(document["values"], [1.0, "inf"])
        self.assertEqual(document["n"], 4)

    def test_svg_is_reproducible(self):
        wave = tanh_wave(n=201)
        first = emit.plot_profile(wave, self.out_dir / "first.svg").read_bytes()
        second = emit.plot_profile(wave, self.out_dir / "second.svg").read_bytes()
        self.assertEqual(first, second)
        self.assertNotIn(b"<dc:date>", first)

    def test_figures(self):
        p = ModelParams(0.01, 1.0)
        curves = dispersion_curves(p, np.linspace(-5, 5, 21))
        lams = np.linspace(-1, 1, 11)
        phase = np.arange(6.0).reshape(3, 2)
        written = [
            emit.plot_dispersion(curves, -24.0, self.out_dir / "dispersion.svg"),
            emit.plot_sweep(lams, lams + 0j, self.out_dir / "sweep.svg", [(0, 0.2)]),
            emit.plot_argument_field(
                np.arange(3.0), np.arange(2.0), phase, self.out_dir / "field.svg"
            ),
            emit.plot_argument_field(
                [0.0], [0.0], np.zeros((1, 1)), self.out_dir / "point.svg"
            ),
            emit.plot_winding(lams + 1j, lams**2, self.out_dir / "winding.svg"),
            emit.plot_root_path([0.7, 0.68], [0.1, -0.1], self.out_dir / "path.svg"),
        ]
        for path in written:
            self.assertTrue(path.read_text(encoding="utf-8").startswith("<?xml"))
