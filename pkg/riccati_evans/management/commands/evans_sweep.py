from riccati_evans import emit
from riccati_evans.analysis import SAMPLE_COLUMNS, real_root_refine, sweep_real
from riccati_evans.exceptions import NonConvergentRefinement
from riccati_evans.management.base import EvansCommand


class Command(EvansCommand):
    help = "Sample the Riccati-Evans function on a real interval."
    default_stem = "sweep"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--lo", type=float, dest="sweep_lo")
        parser.add_argument("--hi", type=float, dest="sweep_hi")
        parser.add_argument("--n", type=int, dest="sweep_n")

    def run(self):
        config = self.config
        evans = self.evans_factory()(self.wave())
        sweep = sweep_real(
            evans,
            config.sweep_lo,
            config.sweep_hi,
            config.sweep_n,
            chart_label=config.chart,
            workers=config.workers,
            bracket_ratio=config.bracket_ratio,
        )
        emit.write_csv(
            self.path(".csv"),
            SAMPLE_COLUMNS,
            [s.row() for s in sweep.samples],
            self.digest,
        )
        emit.plot_sweep(sweep.lams, sweep.values, self.path(".svg"), sweep.brackets)

        roots, rejected = [], []
        for bracket in sweep.brackets:
            try:
                root = real_root_refine(evans, bracket)
            except NonConvergentRefinement as exc:
                self.log(f"Bracket {bracket}: {exc}", level=1)
                rejected.append(list(bracket))
                continue
            self.log(f"Root at lambda = {root.lam.real:.12g}", level=2)
            roots.append(root.lam.real)
        emit.write_json(
            self.path(".json"),
            {
                "status": "ok",
                "chart": config.chart,
                "interval": [config.sweep_lo, config.sweep_hi],
                "samples": len(sweep.samples),
                "failed_samples": sum(not s.ok for s in sweep.samples),
                "brackets": [list(b) for b in sweep.brackets],
                "roots": roots,
                "rejected_brackets": rejected,
            },
            self.digest,
        )
        return f"{len(sweep.brackets)} bracket(s), {len(roots)} real root(s)"
