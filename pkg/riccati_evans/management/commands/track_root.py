from django.core.management.base import CommandError

from riccati_evans import emit
from riccati_evans.analysis import (
    ROOT_COLUMNS,
    RootRecord,
    newton_polish,
    real_root_refine,
    sweep_real,
    track_root_in_c,
)
from riccati_evans.exceptions import NonConvergentRefinement
from riccati_evans.management.base import NUMERICAL_ERROR, EvansCommand
from riccati_evans.waves import continue_in_c

# real roots closer than this to 0 are taken for the translation eigenvalue
TRANSLATION_TOL = 1e-4


class Command(EvansCommand):
    help = "Follow an eigenvalue of the wave while continuing it in c."
    default_stem = "track"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--c-end", type=float, dest="c_end")
        parser.add_argument("--steps", type=int)
        parser.add_argument(
            "--seed-root",
            type=float,
            help="Starting guess for the root; by default the largest real root "
            "found by a sweep of the start wave.",
        )
        parser.add_argument("--lo", type=float, dest="sweep_lo")
        parser.add_argument("--hi", type=float, dest="sweep_hi")
        parser.add_argument("--n", type=int, dest="sweep_n")

    def handle(self, *args, **options):
        self.seed_guess = options["seed_root"]
        return super().handle(*args, **options)

    def seed_root(self, evans):
        config = self.config
        if self.seed_guess is not None:
            lam = newton_polish(evans, self.seed_guess, config.root_tol)
            return RootRecord(lam, None, abs(evans(lam)))
        sweep = sweep_real(
            evans,
            config.sweep_lo,
            config.sweep_hi,
            config.sweep_n,
            workers=config.workers,
            bracket_ratio=config.bracket_ratio,
        )
        roots = []
        for bracket in sweep.brackets:
            try:
                root = real_root_refine(evans, bracket)
            except NonConvergentRefinement as exc:
                self.log(f"Bracket {bracket}: {exc}", level=2)
                continue
            if abs(root.lam) > TRANSLATION_TOL:
                roots.append(root)
        if not roots:
            raise CommandError(
                "no real root to track in the sweep interval",
                returncode=NUMERICAL_ERROR,
            )
        return max(roots, key=lambda record: record.lam.real)

    def run(self):
        config = self.config
        factory = self.evans_factory()
        start = self.wave()
        seed = self.seed_root(factory(start))
        self.log(f"Tracking the root at lambda = {seed.lam:.10g}", level=1)
        waves = continue_in_c(
            start, config.c_end, config.steps, config.solver_settings()
        )
        track = track_root_in_c(waves, seed, factory, tol=config.root_tol)

        emit.write_csv(
            self.path(".csv"),
            ROOT_COLUMNS,
            [record.row() for record in track.records],
            self.digest,
        )
        emit.plot_root_path(
            [record.c for record in track.records],
            [record.lam for record in track.records],
            self.path(".svg"),
        )
        emit.write_json(
            self.path(".json"),
            {
                "status": "ok",
                "c_start": track.records[0].c,
                "c_end": track.records[-1].c,
                "max_imag": max(abs(r.lam.imag) for r in track.records),
                "crossing_bracket": list(track.crossing) if track.crossing else None,
            },
            self.digest,
        )
        if track.crossing:
            lo, hi = sorted(track.crossing)
            return f"Re lambda* changes sign for c in [{lo:.10g}, {hi:.10g}]"
        return "no crossing of the imaginary axis"
