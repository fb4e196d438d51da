from riccati_evans import emit
from riccati_evans.analysis import FIELD_COLUMNS, argument_field
from riccati_evans.management.base import EvansCommand


class Command(EvansCommand):
    help = "Sample the argument of the Riccati-Evans function on a grid."
    default_stem = "argument"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--region",
            type=float,
            nargs=4,
            metavar=("RE_LO", "RE_HI", "IM_LO", "IM_HI"),
        )
        parser.add_argument("--nx", type=int, dest="grid_nx")
        parser.add_argument("--ny", type=int, dest="grid_ny")

    def handle(self, *args, **options):
        if options["region"] is not None:
            options["region"] = tuple(options["region"])
        return super().handle(*args, **options)

    def run(self):
        config = self.config
        evans = self.evans_factory()(self.wave())
        lo, hi = config.region_corners
        field = argument_field(
            evans, lo, hi, config.grid_nx, config.grid_ny, workers=config.workers
        )
        emit.write_csv(self.path(".csv"), FIELD_COLUMNS, field.rows(), self.digest)
        emit.plot_argument_field(
            field.re_axis, field.im_axis, field.phase, self.path(".svg")
        )
        singular = field.singularities()
        emit.write_json(
            self.path(".json"),
            {
                "status": "ok",
                "region": list(config.region),
                "grid": [config.grid_nx, config.grid_ny],
                "failed_samples": int((field.status != "ok").sum()),
                "coalescence_points": [list(point) for point in singular],
            },
            self.digest,
        )
        return f"{len(singular)} coalescence point(s)"
