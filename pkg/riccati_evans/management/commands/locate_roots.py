from riccati_evans import emit
from riccati_evans.analysis import ROOT_COLUMNS, locate_roots
from riccati_evans.exceptions import RiccatiEvansError
from riccati_evans.management.base import EvansCommand


class Command(EvansCommand):
    help = "Locate zeros and poles of the Riccati-Evans function in a rectangle."
    default_stem = "roots"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument(
            "--region",
            type=float,
            nargs=4,
            metavar=("RE_LO", "RE_HI", "IM_LO", "IM_HI"),
        )
        parser.add_argument("--root-tol", type=float, dest="root_tol")

    def handle(self, *args, **options):
        if options["region"] is not None:
            options["region"] = tuple(options["region"])
        return super().handle(*args, **options)

    def run(self):
        config = self.config
        wave = self.wave()
        evans = self.evans_factory()(wave)
        lo, hi = config.region_corners
        try:
            search = locate_roots(
                evans,
                lo,
                hi,
                tol=config.root_tol,
                c=wave.params.c,
                workers=config.workers,
            )
        except RiccatiEvansError as exc:
            emit.write_json(
                self.path(".json"),
                {"status": type(exc).__name__, "message": str(exc)},
                self.digest,
            )
            raise
        emit.write_csv(
            self.path(".csv"),
            ROOT_COLUMNS,
            [r.row() for r in search.roots],
            self.digest,
        )
        emit.write_csv(
            self.path(".poles.csv"),
            ROOT_COLUMNS,
            [r.row() for r in search.poles],
            self.digest,
        )
        emit.write_json(
            self.path(".json"),
            {
                "status": "ok",
                "region": list(config.region),
                "roots": [r.lam for r in search.roots],
                "poles": [r.lam for r in search.poles],
            },
            self.digest,
        )
        return f"{len(search.roots)} zero(s), {len(search.poles)} pole(s)"
