import numpy as np

from riccati_evans import emit
from riccati_evans.exceptions import NoStabilisingWeight
from riccati_evans.linearization import (
    absolute_spectrum_edge,
    dispersion_curves,
    weight_interval,
)
from riccati_evans.management.base import EvansCommand

CURVE_COLUMNS = ("label", "k", "re_lambda", "im_lambda")


def _intercepts(params, type_three):
    curves = dispersion_curves(params, [0.0], type_three=type_three)
    values = {
        float(curve.lam[0].real)
        for curve in curves
        if curve.label not in ("Omega1_boundary", "absolute_edge")
    }
    return sorted(values)


class Command(EvansCommand):
    help = "Write the dispersion curves and absolute spectrum edge."
    default_stem = "spectrum"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--k-min", type=float, dest="k_min")
        parser.add_argument("--k-max", type=float, dest="k_max")
        parser.add_argument("--k-samples", type=int, dest="k_samples")
        parser.add_argument(
            "--type-three",
            action="store_true",
            help="Use B_+ on the right, as for type III waves.",
        )

    def handle(self, *args, **options):
        self.type_three = options["type_three"]
        return super().handle(*args, **options)

    def run(self):
        params = self.config.model_params()
        k = np.linspace(self.config.k_min, self.config.k_max, self.config.k_samples)
        curves = dispersion_curves(params, k, type_three=self.type_three)
        rows = [
            (curve.label, kk, lam.real, lam.imag)
            for curve in curves
            for kk, lam in zip(curve.k, curve.lam)
        ]
        emit.write_csv(self.path(".csv"), CURVE_COLUMNS, rows, self.digest)
        edge = absolute_spectrum_edge(params)
        emit.plot_dispersion(curves, edge, self.path(".svg"))
        try:
            weights = list(weight_interval(params))
        except NoStabilisingWeight as exc:
            self.log(str(exc), level=1)
            weights = None
        emit.write_json(
            self.path(".json"),
            {
                "status": "ok",
                "epsilon": params.epsilon,
                "c": params.c,
                "absolute_spectrum_edge": edge,
                "k_zero_intercepts": _intercepts(params, self.type_three),
                "weight_interval": weights,
            },
            self.digest,
        )
        return f"absolute spectrum edge {edge:.17g}"
