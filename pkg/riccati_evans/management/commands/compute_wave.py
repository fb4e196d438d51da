from riccati_evans import emit
from riccati_evans.management.base import EvansCommand
from riccati_evans.waves import export_profile_csv, save_profile


class Command(EvansCommand):
    help = "Compute a travelling wave and write its profile."
    default_stem = "wave"

    def run(self):
        wave = self.wave()
        profile = save_profile(wave, self.path(".profile.json"))
        export_profile_csv(wave, self.path(".csv"), self.digest)
        emit.plot_profile(wave, self.path(".svg"))
        self.log(f"Wrote {profile}", level=2)
        return (
            f"type {wave.wave_type.value} wave at c={wave.params.c:.10g}: "
            f"u_inf={wave.params.u_inf:.10g}, residual={wave.bvp_residual:.3e}"
        )
