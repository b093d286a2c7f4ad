import numpy as np
import pytest

import shapewave as sw

TAU_GRID = 2.0 * np.pi * np.arange(1024) / 1024


@pytest.fixture(scope="session")
def example1():
    """Clean first benchmark: (signal, exact theta, exact shape, phase)."""
    signal, theta, shape = sw.gen_example1(4096)
    phase = sw.exact_phase_from_samples(signal, theta)
    return signal, theta, shape, phase


@pytest.fixture(scope="session")
def example1_result(example1):
    signal, _, _, phase = example1
    return sw.extract_shape(signal, phase, band_limit=15)


def make_tone(freq: int, n_samples: int = 2048, endpoint: bool = True):
    """Pure cosine at an integer number of cycles over [0, 1]."""
    if endpoint:
        t = np.linspace(0.0, 1.0, n_samples)
    else:
        t = np.arange(n_samples) / n_samples
    signal = sw.validate_signal(t, np.cos(2.0 * np.pi * freq * t))
    phase = sw.exact_phase_from_samples(signal, 2.0 * np.pi * freq * t)
    return signal, phase
