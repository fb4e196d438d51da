from riccati_evans import emit
from riccati_evans.management.base import EvansCommand
from riccati_evans.waves import bracket_type_three, continue_in_c, save_profile

SUMMARY_COLUMNS = ("c", "wave_type", "u_inf", "min_w", "residual")


class Command(EvansCommand):
    help = "Continue a travelling wave in c, writing one profile per step."
    default_stem = "continuation"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--c-end", type=float, dest="c_end")
        parser.add_argument("--steps", type=int)

    def run(self):
        profiles = continue_in_c(
            self.wave(),
            self.config.c_end,
            self.config.steps,
            self.config.solver_settings(),
        )
        rows = []
        for index, wave in enumerate(profiles):
            save_profile(wave, self.path(f"-{index:03d}.profile.json"))
            rows.append(
                (
                    wave.params.c,
                    wave.wave_type.value,
                    wave.params.u_inf,
                    wave.w.min(),
                    wave.bvp_residual,
                )
            )
            self.log(
                f"c={wave.params.c:.10g}: type {wave.wave_type.value}", level=2
            )
        emit.write_csv(self.path(".csv"), SUMMARY_COLUMNS, rows, self.digest)
        bracket = bracket_type_three(profiles)
        emit.write_json(
            self.path(".json"),
            {
                "status": "ok",
                "c_start": profiles[0].params.c,
                "c_end": profiles[-1].params.c,
                "profiles": len(profiles),
                "type_three_bracket": list(bracket) if bracket else None,
            },
            self.digest,
        )
        if bracket:
            return f"type III bracket: c in [{bracket[1]:.10g}, {bracket[0]:.10g}]"
        return f"{len(profiles)} profiles, no type II/IV transition"
