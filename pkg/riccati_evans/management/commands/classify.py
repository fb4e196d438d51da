from django.core.management.base import CommandError

from riccati_evans.management.base import USAGE_ERROR, EvansCommand
from riccati_evans.waves import classify_wave


class Command(EvansCommand):
    help = "Classify a stored wave profile as type I, II or IV."
    default_stem = "classify"

    def run(self):
        if not self.profile_path:
            raise CommandError("classify needs --profile", returncode=USAGE_ERROR)
        wave = self.wave()
        wave_type = classify_wave(wave, self.config.tol_w, self.config.kappa)
        if wave_type is not wave.wave_type:
            self.log(
                f"Stored type {wave.wave_type.value} differs from the recomputed "
                f"type {wave_type.value}",
                level=1,
            )
        return f"type {wave_type.value} (min w = {wave.w.min():.3e})"
