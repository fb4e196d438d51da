from riccati_evans import emit
from riccati_evans.analysis import Contour, chart_corrected_winding, winding_report
from riccati_evans.exceptions import RiccatiEvansError
from riccati_evans.management.base import EvansCommand


class Command(EvansCommand):
    help = (
        "Count zeros minus poles of the Riccati-Evans function in a region, "
        "and the zeros of the Evans function after the chart correction."
    )
    default_stem = "winding"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--radius",
            type=float,
            help="Radius of the first-quadrant sector (the default contour).",
        )
        parser.add_argument(
            "--region",
            type=float,
            nargs=4,
            metavar=("RE_LO", "RE_HI", "IM_LO", "IM_HI"),
            help="Use this rectangle instead of the quarter circle.",
        )
        parser.add_argument("--n-min", type=int, dest="n_min")

    def handle(self, *args, **options):
        self.rectangle = options["region"] is not None
        if self.rectangle:
            options["region"] = tuple(options["region"])
        return super().handle(*args, **options)

    def run(self):
        config = self.config
        if self.rectangle:
            lo, hi = config.region_corners
            contour = Contour.rectangle(lo, hi, config.n_min)
        else:
            contour = Contour.quarter_circle(config.radius, config.n_min)
        evans = self.evans_factory()(self.wave())
        try:
            result, correction = chart_corrected_winding(
                evans, contour, workers=config.workers
            )
        except RiccatiEvansError as exc:
            emit.write_json(
                self.path(".json"),
                {
                    "status": type(exc).__name__,
                    "message": str(exc),
                    "contour": contour.describe(),
                },
                self.digest,
            )
            raise
        emit.write_json(
            self.path(".json"),
            winding_report(result, contour, correction),
            self.digest,
        )
        emit.plot_winding(result.lams, result.values, self.path(".svg"))
        return (
            f"winding {result.winding} (residual {result.residual:.3e}, "
            f"{result.samples_used} samples), chart factor winding {correction}, "
            f"{result.winding + correction} Evans zeros"
        )
