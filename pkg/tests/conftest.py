import subprocess
import sys

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def random_density(rng: np.random.Generator, n: int = 2) -> np.ndarray:
    """Random full-rank density matrix (Gaussian Wishart, normalized)."""
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return m / np.trace(m)


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return g + g.conj().T


def run_cli(args, stdin_text: str | None = None, env=None) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "chanforms", *args],
        input=stdin_text,
        capture_output=True,
        text=True,
        env=env,
        timeout=60,
    )
