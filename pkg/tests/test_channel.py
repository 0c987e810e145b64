"""Channel generation: statistics, determinism, stream layout."""

import math

import numpy as np
import pytest

from relaysim.channel import (
    NetworkConfig,
    block_stream,
    draw_block,
    draw_channels,
    gauss_pair,
    make_rng,
)


def _cfg(**kw):
    base = dict(K=3, nu=2, P=10.0)
    base.update(kw)
    return NetworkConfig(**base)


def test_network_config_rejects_bad_values():
    with pytest.raises(ValueError):
        NetworkConfig(K=0, nu=2, P=1.0)
    with pytest.raises(ValueError):
        NetworkConfig(K=2, nu=0, P=1.0)
    with pytest.raises(ValueError):
        NetworkConfig(K=2, nu=2, P=0.0)
    with pytest.raises(ValueError):
        NetworkConfig(K=2, nu=2, P=1.0, sigma2=-1.0)
    with pytest.raises(ValueError):
        NetworkConfig(K=2, nu=2, P=1.0, var_rr=-0.5)
    with pytest.raises(ValueError):
        NetworkConfig(K=2, nu=2, P=math.inf)


def test_snr_linear():
    assert _cfg(P=20.0, sigma2=4.0).snr_linear == 5.0


def test_shapes_and_dtype():
    cfg = _cfg()
    hS, hRR, hRD = draw_block(cfg, make_rng(1), 17)
    assert hS.shape == (17, 3, 2)
    assert hRR.shape == (17, 3, 3)
    assert hRD.shape == (17, 3)
    assert hS.dtype == np.complex128
    ch = draw_channels(cfg, make_rng(1))
    assert ch.hS.shape == (3, 2)
    assert ch.hRR.shape == (3, 3)
    assert ch.hRD.shape == (3,)


def test_moments_match_declared_variances():
    cfg = _cfg(var_sr=1.0, var_rr=0.5, var_rd=2.0)
    hS, hRR, hRD = draw_block(cfg, make_rng(7), 40000)
    assert abs(hS.mean()) < 0.01
    assert abs((np.abs(hS) ** 2).mean() - 1.0) < 0.03
    assert abs((np.abs(hRR) ** 2).mean() - 0.5) < 0.02
    assert abs((np.abs(hRD) ** 2).mean() - 2.0) < 0.06
    # real and imaginary parts each carry half the variance
    assert abs((hS.real**2).mean() - 0.5) < 0.02


def test_mrt_gain_mean_grows_with_antennas():
    # ||hS row||^2 is a sum of nu unit-mean exponentials
    for nu in (1, 2, 4):
        cfg = _cfg(K=1, nu=nu)
        hS, _, _ = draw_block(cfg, make_rng(11), 30000)
        gain = (np.abs(hS[:, 0, :]) ** 2).sum(axis=1)
        assert abs(gain.mean() - nu) < 0.05 * nu
        assert abs(gain.var() - nu) < 0.1 * nu


def test_slots_are_uncorrelated():
    cfg = _cfg(K=1, nu=1)
    hS, _, _ = draw_block(cfg, make_rng(13), 50000)
    g = np.abs(hS[:, 0, 0]) ** 2
    r = np.corrcoef(g[:-1], g[1:])[0, 1]
    assert abs(r) < 0.02


def test_same_seed_reproduces():
    cfg = _cfg()
    a = draw_block(cfg, make_rng(5), 64)
    b = draw_block(cfg, make_rng(5), 64)
    for x, y in zip(a, b):
        assert np.array_equal(x, y)


def test_streams_are_distinct():
    cfg = _cfg()
    a = draw_block(cfg, make_rng(5, stream=0), 8)
    b = draw_block(cfg, make_rng(5, stream=1), 8)
    assert not np.array_equal(a[0], b[0])


def test_chunking_does_not_change_coefficients():
    cfg = _cfg()
    whole = draw_block(cfg, make_rng(9), 100)
    parts = list(block_stream(cfg, make_rng(9), 100, 7))
    for axis in range(3):
        glued = np.concatenate([p[axis] for p in parts], axis=0)
        assert np.array_equal(whole[axis], glued)


def test_block_stream_covers_total():
    cfg = _cfg()
    sizes = [h.shape[0] for h, _, _ in block_stream(cfg, make_rng(1), 10, 4)]
    assert sizes == [4, 4, 2]


def test_zero_variance_yields_zeros_without_moving_the_stream():
    cfg0 = _cfg(var_rr=0.0)
    cfg1 = _cfg(var_rr=1.0)
    hS0, hRR0, hRD0 = draw_block(cfg0, make_rng(3), 50)
    hS1, _, hRD1 = draw_block(cfg1, make_rng(3), 50)
    assert np.all(hRR0 == 0)
    assert np.array_equal(hS0, hS1)
    assert np.array_equal(hRD0, hRD1)


def test_documented_stream_layout():
    # source matrix row-major first, then relay-relay, then relay-destination,
    # real/imag innermost, all scaled by sqrt(var/2)
    cfg = _cfg(K=2, nu=2, var_sr=1.0, var_rr=0.5, var_rd=2.0)
    n = 5
    width = 2 * (2 * 2 + 2 * 2 + 2)
    z = make_rng(21).standard_normal((n, width))

    def seg(lo, count, shape, var):
        block = z[:, lo : lo + 2 * count].reshape((n,) + shape + (2,))
        return (block[..., 0] + 1j * block[..., 1]) * math.sqrt(var / 2.0)

    hS, hRR, hRD = draw_block(cfg, make_rng(21), n)
    assert np.array_equal(hS, seg(0, 4, (2, 2), 1.0))
    assert np.array_equal(hRR, seg(8, 4, (2, 2), 0.5))
    assert np.array_equal(hRD, seg(16, 2, (2,), 2.0))


def test_gauss_pair():
    x, y = gauss_pair(make_rng(2))
    assert isinstance(x, float) and isinstance(y, float)
    ref = make_rng(2).standard_normal(2)
    assert x == ref[0] and y == ref[1]
