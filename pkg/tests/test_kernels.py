import numpy as np
import pytest
from scipy import optimize

from qnoiseradar import kernels


def brute_glr(A, B, n):
    """Maximise the profile log-likelihood gain on (-1, 1) numerically."""
    def neg(r):
        return -(-n * np.log1p(-r * r) + (2 * r * B - r * r * A) / (1 - r * r))

    res = optimize.minimize_scalar(neg, bounds=(-1 + 1e-12, 1 - 1e-12), method="bounded",
                                   options={"xatol": 1e-13})
    grid = np.linspace(-0.999999, 0.999999, 20001)
    best = max(-neg(res.x), -min(neg(grid)), 0.0)
    return best


@pytest.fixture(scope="module")
def stats_inputs():
    rng = np.random.default_rng(2)
    z = rng.standard_normal((40, 300, 4))
    T = np.eye(4) + 0.2 * rng.standard_normal((4, 4))
    return z, T


def test_trial_stats_agree(stats_inputs):
    z, T = stats_inputs
    A1, B1 = kernels.trial_stats_numba(z, T)
    A2, B2 = kernels.trial_stats_numpy(z, T)
    assert np.allclose(A1, A2, rtol=1e-12)
    assert np.allclose(B1, B2, rtol=1e-10, atol=1e-10)
    y = z @ T.T
    assert np.allclose(A2, np.sum(y**2, axis=(1, 2)))
    assert np.allclose(B2, np.sum(y[..., 0] * y[..., 2] + y[..., 1] * y[..., 3], axis=1))


def test_glr_flavours_agree(stats_inputs):
    z, T = stats_inputs
    A, B = kernels.trial_stats_numpy(z, T)
    n = 2.0 * z.shape[1]
    assert np.allclose(kernels.glr_numba(A, B, n), kernels.glr_numpy(A, B, n), rtol=1e-9, atol=1e-10)


@pytest.mark.parametrize(
    "A, B, n",
    [(2000.0, 0.0, 1000.0), (2000.0, 150.0, 1000.0), (2000.0, -400.0, 1000.0),
     (500.0, 10.0, 1000.0), (4000.0, 1900.0, 1000.0), (40.0, 19.5, 20.0)],
)
def test_glr_against_brute_force(A, B, n):
    ref = brute_glr(A, B, n)
    for f in (kernels.glr_numba, kernels.glr_numpy):
        val = f(np.array([A]), np.array([B]), n)[0]
        assert val == pytest.approx(ref, rel=1e-7, abs=1e-9)
        assert val >= 0.0


def test_glr_zero_correlation():
    # B = 0 with A = n: rho_hat = 0
    for f in (kernels.glr_numba, kernels.glr_numpy):
        assert f(np.array([1000.0]), np.array([0.0]), 1000.0)[0] == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("x, lam", [(0.01, 0.0), (1.0, 1.0), (3.84, 12.0), (50.0, 40.0), (5.0, 400.0), (700.0, 500.0)])
def test_ncx2_flavours_agree(x, lam):
    a, b = kernels.ncx2_sf_numba(x, lam), kernels.ncx2_sf_numpy(x, lam)
    assert a == pytest.approx(b, rel=1e-10, abs=1e-15)


@pytest.mark.parametrize("flag, expected", [("1", "numpy"), ("", "numba")])
def test_env_flag_selects_flavour(flag, expected):
    import subprocess
    import sys

    code = "from qnoiseradar import kernels; print(kernels.glr.__name__.rsplit('_', 1)[1])"
    env = {"QNOISERADAR_DISABLE_NUMBA": flag, "PATH": ""}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == expected
