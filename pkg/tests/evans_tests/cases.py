import shutil
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from riccati_evans.model import ModelParams, critical_manifold_lift
from riccati_evans.waves import WaveProfile, WaveType


def tanh_wave(epsilon=0.01, c=1.0, u_inf=1.0, length=15.0, n=1501):
    """
    A smooth front lying on the attracting sheet of the critical manifold:
    u rises from 0 to u_inf while w falls from 1 to 0, with (v, y) lifted
    onto the manifold. It is not a solution of the wave equation, only a
    realistic coefficient field for the linearised problem.
    """
    z = np.linspace(-length, length, n)
    front = np.tanh(z / 2)
    u = u_inf * (1 + front) / 2
    w = (1 - front) / 2
    v, y = critical_manifold_lift(u, w, c)
    return WaveProfile(
        z, np.array([u, y, v, w]), ModelParams(epsilon, c, u_inf), WaveType.I
    )


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class EvansTestCase(SimpleTestCase):
    """
    Test case with a couple utility assertions.
    """

    def assertComplexClose(self, first, second, rtol=1e-10, atol=0.0):
        first, second = complex(first), complex(second)
        limit = atol + rtol * max(abs(first), abs(second))
        self.assertLessEqual(
            abs(first - second),
            limit,
            "%r != %r within %.1e" % (first, second, limit),
        )

    def assertArrayClose(self, first, second, rtol=1e-10, atol=0.0):
        np.testing.assert_allclose(first, second, rtol=rtol, atol=atol)


class OutputDirMixin:
    """
    A temporary output directory, removed after each test.
    """

    def setUp(self):
        super().setUp()
        self.out_dir = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.out_dir, ignore_errors=True)

    def read_text(self, name):
        return (self.out_dir / name).read_text(encoding="utf-8")
