import numpy as np
import pytest

import biunitary as b


def rng_unitary(rng, n: int) -> np.ndarray:
    """Haar-ish random unitary from a QR decomposition."""
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def twisted_fourier(n: int, seed: int) -> np.ndarray:
    """Fourier matrix with random row/column phases and permutations
    applied, staying in its equivalence class."""
    rng = np.random.default_rng(seed)
    f = b.fourier(n).matrix
    c = np.exp(2j * np.pi * rng.random(n))
    d = np.exp(2j * np.pi * rng.random(n))
    rp = rng.permutation(n)
    cp = rng.permutation(n)
    return c[:, None] * d[None, :] * f[np.ix_(rp, cp)]


@pytest.fixture(scope="session")
def reference_ueb():
    return b.build_reference_ueb()


@pytest.fixture(scope="session")
def reference_fixture():
    return b.load_reference_fixture()
