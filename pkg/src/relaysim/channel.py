"""Rayleigh block-fading channel generation and the simulation random stream.

Every coefficient is a circular-symmetric complex Gaussian, independent across
slots and across links.  One seeded generator drives a run, and draws happen in
a fixed, documented order so that runs configured with the same seed see
identical channels no matter which selection policy consumes them.

Stream layout
-------------
A slot consumes a flat block of ``2 * (K*nu + K*K + K)`` standard normals:
first the source->relay matrix row-major with real/imag pairs innermost, then
the relay->relay matrix row-major, then the relay->destination vector.  Blocks
of ``n`` slots are drawn as an ``(n, L)`` matrix in C order, so the coefficient
sequence is identical for any chunking of the same total draw count.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Iterator

import numpy as np

__all__ = [
    "NetworkConfig",
    "ChannelRealization",
    "make_rng",
    "gauss_pair",
    "draw_channels",
    "draw_block",
    "block_stream",
]


@dataclasses.dataclass(frozen=True)
class NetworkConfig:
    """Static network parameters, all in linear units.

    K is the relay count, nu the source antenna count, P the common transmit
    power, and the var_* fields are the per-link-class channel variances.
    """

    K: int
    nu: int
    P: float
    sigma2: float = 1.0
    var_sr: float = 1.0
    var_rr: float = 1.0
    var_rd: float = 1.0

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError(f"K must be a positive integer, got {self.K}")
        if self.nu < 1:
            raise ValueError(f"nu must be a positive integer, got {self.nu}")
        if not (self.P > 0.0 and math.isfinite(self.P)):
            raise ValueError(f"P must be positive and finite, got {self.P}")
        if not (self.sigma2 > 0.0 and math.isfinite(self.sigma2)):
            raise ValueError(f"sigma2 must be positive and finite, got {self.sigma2}")
        for name in ("var_sr", "var_rr", "var_rd"):
            value = getattr(self, name)
            if not (value >= 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be finite and non-negative, got {value}")

    @property
    def snr_linear(self) -> float:
        return self.P / self.sigma2


@dataclasses.dataclass
class ChannelRealization:
    """One block-fading slot.

    hS[k] holds the channels from the nu source antennas to relay k.
    hRR[t, r] is the coefficient from transmitting relay t to receiving
    relay r; the diagonal is never read.  hRD[k] is relay k's channel to the
    destination.
    """

    hS: np.ndarray
    hRR: np.ndarray
    hRD: np.ndarray


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Seeded generator for one run.

    Separate stream ids give independent streams from the same run seed; the
    channel stream is 0 and policy-internal randomness uses 1, so paired
    comparisons across policies see identical channel draws.
    """
    return np.random.default_rng([int(seed), int(stream)])


def gauss_pair(rng: np.random.Generator) -> tuple[float, float]:
    """Two independent standard normal variates from the stream."""
    x, y = rng.standard_normal(2)
    return float(x), float(y)


def _slot_width(cfg: NetworkConfig) -> int:
    return 2 * (cfg.K * cfg.nu + cfg.K * cfg.K + cfg.K)


def draw_block(
    cfg: NetworkConfig, rng: np.random.Generator, n: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw n consecutive slots.

    Returns (hS, hRR, hRD) with leading slot axis: shapes (n, K, nu),
    (n, K, K) and (n, K).  Zero variance yields exactly-zero coefficients;
    the normals are still consumed so the stream position does not depend on
    the variance settings.
    """
    K, nu = cfg.K, cfg.nu
    z = rng.standard_normal((n, _slot_width(cfg)))
    offset = 0

    def take(count: int, shape: tuple[int, ...], var: float) -> np.ndarray:
        nonlocal offset
        seg = z[:, offset : offset + 2 * count].reshape((n,) + shape + (2,))
        offset += 2 * count
        if var == 0.0:
            return np.zeros((n,) + shape, dtype=np.complex128)
        out = seg[..., 0] + 1j * seg[..., 1]
        out *= math.sqrt(var / 2.0)
        return out

    hS = take(K * nu, (K, nu), cfg.var_sr)
    hRR = take(K * K, (K, K), cfg.var_rr)
    hRD = take(K, (K,), cfg.var_rd)
    return hS, hRR, hRD


def draw_channels(cfg: NetworkConfig, rng: np.random.Generator) -> ChannelRealization:
    """Draw a single slot's realization."""
    hS, hRR, hRD = draw_block(cfg, rng, 1)
    return ChannelRealization(hS=hS[0], hRR=hRR[0], hRD=hRD[0])


def block_stream(
    cfg: NetworkConfig, rng: np.random.Generator, total: int, chunk: int
) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Yield draw_block results covering `total` slots in chunks.

    The chunk pattern does not change the per-slot coefficients (see module
    docstring), but iterating with the same chunk size as another consumer
    reproduces its draws call-for-call.
    """
    remaining = total
    while remaining > 0:
        size = min(chunk, remaining)
        yield draw_block(cfg, rng, size)
        remaining -= size
