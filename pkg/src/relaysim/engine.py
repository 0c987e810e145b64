"""Slot-by-slot Monte Carlo simulation loop and parameter sweeps.

Every run is deterministic given its configuration: channel coefficients come
from stream 0 of the seeded generator and policy-internal randomness (only the
random single-link fallback uses any) from stream 1, so schemes can be compared
on identical channel trajectories.  Channels are drawn in fixed-size chunks
with per-slot link gains and rate tables precomputed in numpy; the per-slot
decision logic itself mirrors the reference implementations in `policies`
exactly (same candidate order, same strict-improvement tie-breaks).

The first `warmup` slots evolve the queues but are excluded from every
reported metric.
"""

from __future__ import annotations

import dataclasses
import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import buffers as _buffers
from . import phase_align as _phase
from . import precoding as _precoding
from .channel import NetworkConfig, block_stream, make_rng
from .policies import PolicyConfig

__all__ = [
    "CHUNK",
    "ADAPTIVE_POLICIES",
    "FIXED_POLICIES",
    "SimConfig",
    "SimResult",
    "PolicyEntry",
    "run",
    "run_adaptive",
    "run_fixed",
    "sweep",
]

CHUNK = 4096

BA_SPRS = "ba_sprs"
UPPER_BOUND = "upper_bound"
SFD_MMRS_IDEAL = "sfd_mmrs_ideal"
SFD_MMRS_NONIDEAL = "sfd_mmrs_nonideal"
HD_BRS = "hd_brs"
HD_HRS = "hd_hrs"
HD_MLRS = "hd_mlrs"
BA_SOR = "ba_sor"
BA_PARS = "ba_pars"

ADAPTIVE_POLICIES = frozenset(
    {BA_SPRS, UPPER_BOUND, SFD_MMRS_IDEAL, SFD_MMRS_NONIDEAL, HD_BRS, HD_HRS, HD_MLRS}
)
FIXED_POLICIES = frozenset(
    {BA_PARS, BA_SOR, SFD_MMRS_IDEAL, SFD_MMRS_NONIDEAL, HD_BRS, HD_HRS, HD_MLRS}
)
ALL_POLICIES = ADAPTIVE_POLICIES | FIXED_POLICIES

# Fixed-rate bit accounting: successive schemes deliver c0 bits per delivered
# packet. The half-duplex relaying/scheduling schemes run each hop at twice the
# end-to-end rate (their capture ratio is 2^(2*c0)-1), so a delivered packet
# carries 2*c0 bits; the bufferless scheme's compound slot nets plain c0.


@dataclasses.dataclass(frozen=True)
class SimConfig:
    """One simulation run: network, scheme, and Monte Carlo bookkeeping."""

    net: NetworkConfig
    policy: str
    pol_cfg: PolicyConfig = PolicyConfig()
    mode: str = _buffers.ADAPTIVE
    slots: int = 10**6
    warmup: int = 10**4
    seed: int = 1
    q_max: float = math.inf
    paired_channels: bool = True

    def __post_init__(self) -> None:
        if self.mode not in (_buffers.ADAPTIVE, _buffers.FIXED):
            raise ValueError(f"unknown mode: {self.mode!r}")
        if self.policy not in ALL_POLICIES:
            raise ValueError(f"unknown policy: {self.policy!r}")
        if not self.slots > self.warmup >= 0:
            raise ValueError(
                f"need slots > warmup >= 0, got slots={self.slots} warmup={self.warmup}"
            )
        if not self.q_max > 0:
            raise ValueError(f"q_max must be positive, got {self.q_max}")


@dataclasses.dataclass
class SimResult:
    """Post-warmup averages and counters for one run."""

    cfg: SimConfig
    avg_rate_bpcu: float
    outage_prob: float | None
    attempts_sr: int
    attempts_td: int
    successes_sr: int
    successes_td: int
    delivered_bpcu: float
    label: str = ""

    @property
    def attempts(self) -> int:
        return self.attempts_sr + self.attempts_td

    @property
    def successes(self) -> int:
        return self.successes_sr + self.successes_td


def _link_gains(hS, hRR, hRD):
    """Chunk link statistics: MRT gains (n,K), squared inter-relay gains
    (n,K,K) indexed [slot, transmitter, receiver], squared delivery gains (n,K)."""
    aS = (hS.real**2 + hS.imag**2).sum(axis=2)
    rr2 = hRR.real**2 + hRR.imag**2
    d = hRD.real**2 + hRD.imag**2
    return aS, rr2, d


def _counted_start(base: int, n: int, warmup: int) -> int:
    """First in-chunk index that counts toward metrics (may equal n)."""
    return min(max(warmup - base, 0), n)


def _settle_full(val: float, q_max: float, idx: int) -> float:
    """Round a just-filled queue back onto its cap; anything beyond float
    round-off is a scheduling bug and aborts the run."""
    if val > q_max + 1e-9:
        raise RuntimeError(f"buffer {idx} overfilled: {val} > {q_max}")
    return q_max


def _settle_empty(val: float, idx: int) -> float:
    if val < -1e-9:
        raise RuntimeError(f"buffer {idx} overdrawn: {val}")
    return 0.0


# --- adaptive runners -------------------------------------------------------


def _adaptive_weighted(cfg: SimConfig):
    """BA-SPRS and its interference-free upper bound: argmax of the
    delta-weighted sum of capped link rates over ordered feasible pairs."""
    net, pol = cfg.net, cfg.pol_cfg
    K, P, s2 = net.K, net.P, net.sigma2
    delta = pol.delta
    om_delta = 1.0 - delta
    qmax = cfg.q_max
    rng = make_rng(cfg.seed, stream=0)
    q = [0.0] * K
    delivered = 0.0
    a_cnt = s_cnt = 0
    base = 0
    upper = cfg.policy == UPPER_BOUND
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, rr2, d = _link_gains(hS, hRR, hRD)
        if upper:
            g_sr = np.broadcast_to((aS * P / s2)[:, None, :], (n, K, K))
        else:
            a_mat = np.broadcast_to(aS[:, None, :], (n, K, K))
            g_sr = _precoding.sinr_from_ab(a_mat, rr2, P, s2, pol.residual_model)
        ls = np.log2(1.0 + g_sr).tolist()
        lt = np.log2(1.0 + d * P / s2).tolist()
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            ls_i = ls[i]
            lt_i = lt[i]
            best = -1.0
            br = -1
            for r in range(K):
                if q[r] >= qmax:
                    continue
                room = qmax - q[r]
                for t in range(K):
                    if t == r:
                        continue
                    c_sr = ls_i[t][r]
                    if c_sr > room:
                        c_sr = room
                    c_td = lt_i[t]
                    qt = q[t]
                    if c_td > qt:
                        c_td = qt
                    score = delta * c_sr + om_delta * c_td
                    if score > best:
                        best = score
                        br, bt, bcs, bct = r, t, c_sr, c_td
            if br >= 0:
                q[br] += bcs
                if q[br] > qmax:
                    q[br] = _settle_full(q[br], qmax, br)
                q[bt] -= bct
                if q[bt] < 0.0:
                    q[bt] = _settle_empty(q[bt], bt)
                if i >= start:
                    delivered += bct
                    a_cnt += 1
                    s_cnt += 1
        base += n
    return delivered, a_cnt, s_cnt, a_cnt, s_cnt


def _adaptive_mmrs(cfg: SimConfig):
    net, pol = cfg.net, cfg.pol_cfg
    K, P, s2 = net.K, net.P, net.sigma2
    delta = pol.delta
    om_delta = 1.0 - delta
    ideal = cfg.policy == SFD_MMRS_IDEAL
    qmax = cfg.q_max
    rng = make_rng(cfg.seed, stream=0)
    q = [0.0] * K
    delivered = 0.0
    a_sr = s_sr = a_td = s_td = 0
    base = 0
    log2 = math.log2
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, rr2, d = _link_gains(hS, hRR, hRD)
        aL = aS.tolist()
        dL = d.tolist()
        la = np.log2(1.0 + aS * P / s2).tolist()
        lt = np.log2(1.0 + d * P / s2).tolist()
        rrL = rr2.tolist()
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            a_i = aL[i]
            d_i = dL[i]
            la_i = la[i]
            lt_i = lt[i]
            rx1 = rx2 = tx1 = tx2 = -1
            for k in range(K):
                if q[k] < qmax:
                    if rx1 < 0 or a_i[k] > a_i[rx1]:
                        rx2 = rx1
                        rx1 = k
                    elif rx2 < 0 or a_i[k] > a_i[rx2]:
                        rx2 = k
                if q[k] > 0.0:
                    if tx1 < 0 or d_i[k] > d_i[tx1]:
                        tx2 = tx1
                        tx1 = k
                    elif tx2 < 0 or d_i[k] > d_i[tx2]:
                        tx2 = k
            counted = i >= start

            def pair_csr(r, t):
                if ideal:
                    c = la_i[r]
                else:
                    c = log2(1.0 + a_i[r] * P / (rrL[i][t][r] * P + s2))
                room = qmax - q[r]
                return c if c <= room else room

            if rx1 < 0 and tx1 < 0:
                continue
            if rx1 >= 0 and tx1 >= 0 and rx1 != tx1:
                r, t = rx1, tx1
            elif tx1 < 0:
                # receive only; nobody interferes
                r = rx1
                c_sr = la_i[r]
                room = qmax - q[r]
                if c_sr > room:
                    c_sr = room
                q[r] += c_sr
                if q[r] > qmax:
                    q[r] = _settle_full(q[r], qmax, r)
                if counted:
                    a_sr += 1
                    s_sr += 1
                continue
            elif rx1 < 0:
                t = tx1
                c_td = lt_i[t]
                if c_td > q[t]:
                    c_td = q[t]
                q[t] -= c_td
                if counted:
                    a_td += 1
                    s_td += 1
                    delivered += c_td
                continue
            else:
                # best receiver and best transmitter collide
                r = t = -1
                best = -1.0
                if rx2 >= 0:
                    c_sr = pair_csr(rx2, tx1)
                    c_td = lt_i[tx1]
                    if c_td > q[tx1]:
                        c_td = q[tx1]
                    score = delta * c_sr + om_delta * c_td
                    if score > best:
                        best = score
                        r, t = rx2, tx1
                if tx2 >= 0:
                    c_sr = pair_csr(rx1, tx2)
                    c_td = lt_i[tx2]
                    if c_td > q[tx2]:
                        c_td = q[tx2]
                    score = delta * c_sr + om_delta * c_td
                    if score > best:
                        best = score
                        r, t = rx1, tx2
                if r < 0:
                    # lone eligible relay: use its better weighted side
                    k = rx1
                    c_sr = la_i[k]
                    room = qmax - q[k]
                    if c_sr > room:
                        c_sr = room
                    c_td = lt_i[k]
                    if c_td > q[k]:
                        c_td = q[k]
                    if delta * c_sr >= om_delta * c_td:
                        q[k] += c_sr
                        if q[k] > qmax:
                            q[k] = _settle_full(q[k], qmax, k)
                        if counted:
                            a_sr += 1
                            s_sr += 1
                    else:
                        q[k] -= c_td
                        if counted:
                            a_td += 1
                            s_td += 1
                            delivered += c_td
                    continue
            c_sr = pair_csr(r, t)
            c_td = lt_i[t]
            if c_td > q[t]:
                c_td = q[t]
            q[r] += c_sr
            if q[r] > qmax:
                q[r] = _settle_full(q[r], qmax, r)
            q[t] -= c_td
            if q[t] < 0.0:
                q[t] = _settle_empty(q[t], t)
            if counted:
                a_sr += 1
                s_sr += 1
                a_td += 1
                s_td += 1
                delivered += c_td
        base += n
    return delivered, a_sr, s_sr, a_td, s_td


def _adaptive_brs(cfg: SimConfig):
    """Bufferless best-relay: stateless, so whole chunks vectorize."""
    net = cfg.net
    P, s2 = net.P, net.sigma2
    rng = make_rng(cfg.seed, stream=0)
    delivered = 0.0
    counted = 0
    base = 0
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, _, d = _link_gains(hS, hRR, hRD)
        m = np.minimum(aS, d).max(axis=1)
        c = 0.5 * np.log2(1.0 + m * P / s2)
        start = _counted_start(base, n, cfg.warmup)
        delivered += float(c[start:].sum())
        counted += n - start
        base += n
    return delivered, 0, 0, counted, counted


def _adaptive_mlrs(cfg: SimConfig):
    net = cfg.net
    K, P, s2 = net.K, net.P, net.sigma2
    qmax = cfg.q_max
    rng = make_rng(cfg.seed, stream=0)
    q = [0.0] * K
    delivered = 0.0
    a_sr = a_td = 0
    base = 0
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, _, d = _link_gains(hS, hRR, hRD)
        aL = aS.tolist()
        dL = d.tolist()
        la = np.log2(1.0 + aS * P / s2).tolist()
        lt = np.log2(1.0 + d * P / s2).tolist()
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            a_i = aL[i]
            d_i = dL[i]
            best = -1.0
            bk = -1
            is_rx = True
            for k in range(K):
                if q[k] < qmax and a_i[k] > best:
                    best = a_i[k]
                    bk = k
            for k in range(K):
                if q[k] > 0.0 and d_i[k] > best:
                    best = d_i[k]
                    bk = k
                    is_rx = False
            if bk < 0:
                continue
            if is_rx:
                c = la[i][bk]
                room = qmax - q[bk]
                if c > room:
                    c = room
                q[bk] += c
                if q[bk] > qmax:
                    q[bk] = _settle_full(q[bk], qmax, bk)
                if i >= start:
                    a_sr += 1
            else:
                c = lt[i][bk]
                if c > q[bk]:
                    c = q[bk]
                q[bk] -= c
                if i >= start:
                    a_td += 1
                    delivered += c
        base += n
    return delivered, a_sr, a_sr, a_td, a_td


def _adaptive_hrs(cfg: SimConfig):
    """Alternating receive/deliver schedule with directional fallback."""
    net = cfg.net
    K, P, s2 = net.K, net.P, net.sigma2
    qmax = cfg.q_max
    rng = make_rng(cfg.seed, stream=0)
    q = [0.0] * K
    delivered = 0.0
    a_sr = a_td = 0
    base = 0
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, _, d = _link_gains(hS, hRR, hRD)
        aL = aS.tolist()
        dL = d.tolist()
        la = np.log2(1.0 + aS * P / s2).tolist()
        lt = np.log2(1.0 + d * P / s2).tolist()
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            a_i = aL[i]
            d_i = dL[i]

            def try_rx():
                best = -1.0
                bk = -1
                for k in range(K):
                    if q[k] < qmax and a_i[k] > best:
                        best = a_i[k]
                        bk = k
                return bk

            def try_tx():
                best = -1.0
                bk = -1
                for k in range(K):
                    if q[k] > 0.0 and d_i[k] > best:
                        best = d_i[k]
                        bk = k
                return bk

            rx_slot = (base + i) % 2 == 0
            k = try_rx() if rx_slot else try_tx()
            if k < 0:
                rx_slot = not rx_slot
                k = try_rx() if rx_slot else try_tx()
            if k < 0:
                continue  # no eligible link in either direction (needs K = 0)
            if rx_slot:
                c = la[i][k]
                room = qmax - q[k]
                if c > room:
                    c = room
                q[k] += c
                if q[k] > qmax:
                    q[k] = _settle_full(q[k], qmax, k)
                if i >= start:
                    a_sr += 1
            else:
                c = lt[i][k]
                if c > q[k]:
                    c = q[k]
                q[k] -= c
                if i >= start:
                    a_td += 1
                    delivered += c
        base += n
    return delivered, a_sr, a_sr, a_td, a_td


# --- fixed-rate runners -----------------------------------------------------


def _fixed_mmrs(cfg: SimConfig):
    net, pol = cfg.net, cfg.pol_cfg
    K, P, s2 = net.K, net.P, net.sigma2
    delta = pol.delta
    om_delta = 1.0 - delta
    gamma0 = pol.gamma0
    ideal = cfg.policy == SFD_MMRS_IDEAL
    qmax = cfg.q_max
    rng = make_rng(cfg.seed, stream=0)
    q = _buffers.initial_state(K, qmax, _buffers.FIXED).q
    s_sr = a_sr = s_td = a_td = 0
    base = 0
    log2 = math.log2
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, rr2, d = _link_gains(hS, hRR, hRD)
        aL = aS.tolist()
        dL = d.tolist()
        ga = (aS * P / s2).tolist()
        gt = (d * P / s2).tolist()
        rrL = rr2.tolist()
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            a_i = aL[i]
            d_i = dL[i]
            rx1 = rx2 = tx1 = tx2 = -1
            for k in range(K):
                if q[k] < qmax:
                    if rx1 < 0 or a_i[k] > a_i[rx1]:
                        rx2 = rx1
                        rx1 = k
                    elif rx2 < 0 or a_i[k] > a_i[rx2]:
                        rx2 = k
                if q[k] > 0:
                    if tx1 < 0 or d_i[k] > d_i[tx1]:
                        tx2 = tx1
                        tx1 = k
                    elif tx2 < 0 or d_i[k] > d_i[tx2]:
                        tx2 = k
            counted = i >= start

            def pair_gsr(r, t):
                if ideal:
                    return ga[i][r]
                return a_i[r] * P / (rrL[i][t][r] * P + s2)

            if rx1 < 0 and tx1 < 0:
                continue
            if tx1 < 0:
                ok = ga[i][rx1] >= gamma0
                if ok and q[rx1] < qmax:
                    q[rx1] += 1
                if counted:
                    a_sr += 1
                    s_sr += ok
                continue
            if rx1 < 0:
                ok = gt[i][tx1] >= gamma0
                if ok:
                    q[tx1] -= 1
                if counted:
                    a_td += 1
                    s_td += ok
                continue
            if rx1 != tx1:
                r, t = rx1, tx1
            else:
                r = t = -1
                best = -1.0
                if rx2 >= 0:
                    score = delta * log2(1.0 + pair_gsr(rx2, tx1)) + om_delta * log2(
                        1.0 + gt[i][tx1]
                    )
                    if score > best:
                        best = score
                        r, t = rx2, tx1
                if tx2 >= 0:
                    score = delta * log2(1.0 + pair_gsr(rx1, tx2)) + om_delta * log2(
                        1.0 + gt[i][tx2]
                    )
                    if score > best:
                        best = score
                        r, t = rx1, tx2
                if r < 0:
                    k = rx1
                    if delta * log2(1.0 + ga[i][k]) >= om_delta * log2(1.0 + gt[i][k]):
                        ok = ga[i][k] >= gamma0
                        if ok and q[k] < qmax:
                            q[k] += 1
                        if counted:
                            a_sr += 1
                            s_sr += ok
                    else:
                        ok = gt[i][k] >= gamma0
                        if ok:
                            q[k] -= 1
                        if counted:
                            a_td += 1
                            s_td += ok
                    continue
            ok_sr = pair_gsr(r, t) >= gamma0
            ok_td = gt[i][t] >= gamma0
            if ok_sr and q[r] < qmax:
                q[r] += 1
            if ok_td:
                q[t] -= 1
            if counted:
                a_sr += 1
                a_td += 1
                s_sr += ok_sr
                s_td += ok_td
        base += n
    return pol.c0 * s_td, a_sr, s_sr, a_td, s_td


def _fixed_sor(cfg: SimConfig):
    """Max-min pair selection with decode-and-subtract interference handling
    when the inter-relay link is itself decodable."""
    net, pol = cfg.net, cfg.pol_cfg
    K, P, s2 = net.K, net.P, net.sigma2
    gamma0 = pol.gamma0
    qmax = cfg.q_max
    rng = make_rng(cfg.seed, stream=0)
    rng_pol = make_rng(cfg.seed, stream=1)
    q = _buffers.initial_state(K, qmax, _buffers.FIXED).q
    s_sr = a_sr = s_td = a_td = 0
    base = 0
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, rr2, d = _link_gains(hS, hRR, hRD)
        a_mat = np.broadcast_to(aS[:, None, :], (n, K, K))
        g_eff = np.where(
            rr2 * P / (a_mat * P + s2) >= gamma0,
            a_mat * P / s2,
            a_mat * P / (rr2 * P + s2),
        )
        geL = g_eff.tolist()
        gaL = (aS * P / s2).tolist()
        gtL = (d * P / s2).tolist()
        u = rng_pol.random(n)
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            ge_i = geL[i]
            gt_i = gtL[i]
            best = -1.0
            br = -1
            for r in range(K):
                if q[r] >= qmax:
                    continue
                for t in range(K):
                    if t == r or q[t] < 1:
                        continue
                    g_sr = ge_i[t][r]
                    g_td = gt_i[t]
                    score = g_sr if g_sr < g_td else g_td
                    if score > best:
                        best = score
                        br, bt, bgs, bgt = r, t, g_sr, g_td
            counted = i >= start
            if br >= 0:
                ok_sr = bgs >= gamma0
                ok_td = bgt >= gamma0
                if ok_sr and q[br] < qmax:
                    q[br] += 1
                if ok_td:
                    q[bt] -= 1
                if counted:
                    a_sr += 1
                    a_td += 1
                    s_sr += ok_sr
                    s_td += ok_td
                continue
            # all queues empty or all full: spend the slot on one random
            # feasible single link
            links = [(True, k) for k in range(K) if q[k] < qmax]
            links += [(False, k) for k in range(K) if q[k] >= 1]
            pick = int(u[i] * len(links))
            is_rx, k = links[min(pick, len(links) - 1)]
            if is_rx:
                ok = gaL[i][k] >= gamma0
                if ok and q[k] < qmax:
                    q[k] += 1
                if counted:
                    a_sr += 1
                    s_sr += ok
            else:
                ok = gt_i[k] >= gamma0
                if ok:
                    q[k] -= 1
                if counted:
                    a_td += 1
                    s_td += ok
        base += n
    return pol.c0 * s_td, a_sr, s_sr, a_td, s_td


def _fixed_pars(cfg: SimConfig):
    """Max-min pair selection with two-antenna phase alignment at the source.

    The default configuration (ideal phase, decode-test on the combined
    signal) vectorizes through amplitude identities; quantized or alternative
    decode-test configurations fall back to the scalar reference rule per slot.
    """
    net, pol = cfg.net, cfg.pol_cfg
    if net.nu < 2:
        raise ValueError("phase-aligned selection needs at least two source antennas")
    K, P, s2 = net.K, net.P, net.sigma2
    gamma0 = pol.gamma0
    f = pol.source_power_factor
    qmax = cfg.q_max
    fast = pol.quantizer_bits is None and pol.ic_formula == "signal"
    root_f = math.sqrt(f)
    rng = make_rng(cfg.seed, stream=0)
    q = _buffers.initial_state(K, qmax, _buffers.FIXED).q
    s_sr = a_sr = s_td = a_td = 0
    base = 0
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        d = hRD.real**2 + hRD.imag**2
        gtL = (d * P / s2).tolist()
        amp1 = np.abs(hS[:, :, 0])
        amp2 = np.abs(hS[:, :, 1])
        a1 = amp1 * amp1
        egc_amp = amp1 + amp2
        egcL = ((f * P / 2.0) * egc_amp * egc_amp / s2).tolist()
        if fast:
            habs_rr = np.abs(hRR)  # [slot, transmitter, receiver]
            # squaring absorbs the sign of the mitigated residual amplitude
            lo = habs_rr - math.sqrt(f / 2.0) * amp2[:, None, :]
            hi = habs_rr + math.sqrt(f / 2.0) * amp2[:, None, :]
            a1_m = a1[:, None, :]
            post = a1_m * (f * P / 2.0) / s2
            g_im = a1_m * (f * P / 2.0) / (P * lo * lo + s2)
            feasible = P * hi * hi / ((f * P / 2.0) * a1_m + s2) >= gamma0
            g_pair = np.where(
                habs_rr == 0.0, post, np.where(feasible & (post >= g_im), post, g_im)
            )
            gpL = g_pair.tolist()
        else:
            hSL = hS
            hRRL = hRR
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            gt_i = gtL[i]
            best = -1.0
            br = -1
            if fast:
                gp_i = gpL[i]
                for r in range(K):
                    if q[r] >= qmax:
                        continue
                    for t in range(K):
                        if t == r or q[t] < 1:
                            continue
                        g_r = gp_i[t][r]
                        g_td = gt_i[t]
                        score = g_r if g_r < g_td else g_td
                        if score > best:
                            best = score
                            br, bt, bgr, bgt = r, t, g_r, g_td
            else:
                for r in range(K):
                    if q[r] >= qmax:
                        continue
                    for t in range(K):
                        if t == r or q[t] < 1:
                            continue
                        dec = _phase.decide_phase(
                            root_f * complex(hSL[i, r, 0]),
                            root_f * complex(hSL[i, r, 1]),
                            complex(hRRL[i, t, r]),
                            P,
                            s2,
                            gamma0,
                            pol.ic_formula,
                            pol.quantizer,
                        )
                        g_td = gt_i[t]
                        score = dec.gamma_r if dec.gamma_r < g_td else g_td
                        if score > best:
                            best = score
                            br, bt, bgr, bgt = r, t, dec.gamma_r, g_td
            counted = i >= start
            if br >= 0:
                ok_sr = bgr >= gamma0
                ok_td = bgt >= gamma0
                if ok_sr and q[br] < qmax:
                    q[br] += 1
                if ok_td:
                    q[bt] -= 1
                if counted:
                    a_sr += 1
                    a_td += 1
                    s_sr += ok_sr
                    s_td += ok_td
                continue
            tx_cands = [k for k in range(K) if q[k] >= 1]
            if tx_cands:
                bk = tx_cands[0]
                for k in tx_cands[1:]:
                    if gt_i[k] > gt_i[bk]:
                        bk = k
                ok = gt_i[bk] >= gamma0
                if ok:
                    q[bk] -= 1
                if counted:
                    a_td += 1
                    s_td += ok
            else:
                # cold buffers: co-phase both antennas onto the data symbol
                egc_i = egcL[i]
                bk = 0
                for k in range(1, K):
                    if egc_i[k] > egc_i[bk]:
                        bk = k
                ok = egc_i[bk] >= gamma0
                if ok and q[bk] < qmax:
                    q[bk] += 1
                if counted:
                    a_sr += 1
                    s_sr += ok
        base += n
    return pol.c0 * s_td, a_sr, s_sr, a_td, s_td


def _fixed_brs(cfg: SimConfig):
    """Bufferless best relay, one compound receive-forward attempt per slot."""
    net, pol = cfg.net, cfg.pol_cfg
    P, s2 = net.P, net.sigma2
    gamma0_hd = pol.gamma0_hd
    rng = make_rng(cfg.seed, stream=0)
    succ = 0
    counted = 0
    base = 0
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, _, d = _link_gains(hS, hRR, hRD)
        m = np.minimum(aS, d).max(axis=1)
        ok = m * P / s2 >= gamma0_hd
        start = _counted_start(base, n, cfg.warmup)
        succ += int(ok[start:].sum())
        counted += n - start
        base += n
    return pol.c0 * succ, 0, 0, counted, succ


def _fixed_mlrs(cfg: SimConfig):
    net, pol = cfg.net, cfg.pol_cfg
    K, P, s2 = net.K, net.P, net.sigma2
    gamma0_hd = pol.gamma0_hd
    bits = 2.0 * pol.c0
    qmax = cfg.q_max
    rng = make_rng(cfg.seed, stream=0)
    q = _buffers.initial_state(K, qmax, _buffers.FIXED).q
    s_sr = a_sr = s_td = a_td = 0
    base = 0
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, _, d = _link_gains(hS, hRR, hRD)
        aL = aS.tolist()
        dL = d.tolist()
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            a_i = aL[i]
            d_i = dL[i]
            best = -1.0
            bk = -1
            is_rx = True
            for k in range(K):
                if q[k] < qmax and a_i[k] > best:
                    best = a_i[k]
                    bk = k
            for k in range(K):
                if q[k] > 0 and d_i[k] > best:
                    best = d_i[k]
                    bk = k
                    is_rx = False
            if bk < 0:
                continue
            ok = best * P / s2 >= gamma0_hd
            counted = i >= start
            if is_rx:
                if ok and q[bk] < qmax:
                    q[bk] += 1
                if counted:
                    a_sr += 1
                    s_sr += ok
            else:
                if ok:
                    q[bk] -= 1
                if counted:
                    a_td += 1
                    s_td += ok
        base += n
    return bits * s_td, a_sr, s_sr, a_td, s_td


def _fixed_hrs(cfg: SimConfig):
    net, pol = cfg.net, cfg.pol_cfg
    K, P, s2 = net.K, net.P, net.sigma2
    gamma0_hd = pol.gamma0_hd
    qmax = cfg.q_max
    rng = make_rng(cfg.seed, stream=0)
    q = _buffers.initial_state(K, qmax, _buffers.FIXED).q
    s_sr = a_sr = s_td = a_td = 0
    delivered = 0.0
    base = 0
    for hS, hRR, hRD in block_stream(net, rng, cfg.slots, CHUNK):
        n = hS.shape[0]
        aS, _, d = _link_gains(hS, hRR, hRD)
        aL = aS.tolist()
        dL = d.tolist()
        start = _counted_start(base, n, cfg.warmup)
        for i in range(n):
            a_i = aL[i]
            d_i = dL[i]

            def best_rx():
                bk = -1
                bg = -1.0
                for k in range(K):
                    if q[k] < qmax and a_i[k] > bg:
                        bg = a_i[k]
                        bk = k
                return bk, bg

            def best_tx():
                bk = -1
                bg = -1.0
                for k in range(K):
                    if q[k] > 0 and d_i[k] > bg:
                        bg = d_i[k]
                        bk = k
                return bk, bg

            rx_slot = (base + i) % 2 == 0
            bk, bg = best_rx() if rx_slot else best_tx()
            if bk < 0:
                rx_slot = not rx_slot
                bk, bg = best_rx() if rx_slot else best_tx()
            counted = i >= start
            if bk < 0:
                # no link in either direction: compound best-relay slot
                bg = -1.0
                bk = 0
                for k in range(K):
                    m = a_i[k] if a_i[k] < d_i[k] else d_i[k]
                    if m > bg:
                        bg = m
                        bk = k
                ok = bg * P / s2 >= gamma0_hd
                if counted:
                    a_td += 1
                    s_td += ok
                    delivered += pol.c0 * ok
                continue
            ok = bg * P / s2 >= gamma0_hd
            if rx_slot:
                if ok and q[bk] < qmax:
                    q[bk] += 1
                if counted:
                    a_sr += 1
                    s_sr += ok
            else:
                if ok:
                    q[bk] -= 1
                if counted:
                    a_td += 1
                    s_td += ok
                    delivered += 2.0 * pol.c0 * ok
        base += n
    return delivered, a_sr, s_sr, a_td, s_td


_ADAPTIVE_RUNNERS = {
    BA_SPRS: _adaptive_weighted,
    UPPER_BOUND: _adaptive_weighted,
    SFD_MMRS_IDEAL: _adaptive_mmrs,
    SFD_MMRS_NONIDEAL: _adaptive_mmrs,
    HD_BRS: _adaptive_brs,
    HD_MLRS: _adaptive_mlrs,
    HD_HRS: _adaptive_hrs,
}

_FIXED_RUNNERS = {
    SFD_MMRS_IDEAL: _fixed_mmrs,
    SFD_MMRS_NONIDEAL: _fixed_mmrs,
    BA_SOR: _fixed_sor,
    BA_PARS: _fixed_pars,
    HD_BRS: _fixed_brs,
    HD_MLRS: _fixed_mlrs,
    HD_HRS: _fixed_hrs,
}


def run(cfg: SimConfig) -> SimResult:
    """Execute one run and aggregate its post-warmup metrics."""
    if cfg.mode == _buffers.ADAPTIVE:
        return run_adaptive(cfg)
    return run_fixed(cfg)


def run_adaptive(cfg: SimConfig) -> SimResult:
    if cfg.mode != _buffers.ADAPTIVE:
        raise ValueError(f"run_adaptive needs adaptive mode, got {cfg.mode!r}")
    if cfg.policy not in ADAPTIVE_POLICIES:
        raise ValueError(f"policy {cfg.policy!r} has no adaptive variant")
    delivered, a_sr, s_sr, a_td, s_td = _ADAPTIVE_RUNNERS[cfg.policy](cfg)
    span = cfg.slots - cfg.warmup
    return SimResult(
        cfg=cfg,
        avg_rate_bpcu=delivered / span,
        outage_prob=None,
        attempts_sr=a_sr,
        attempts_td=a_td,
        successes_sr=s_sr,
        successes_td=s_td,
        delivered_bpcu=delivered,
        label=cfg.policy,
    )


def run_fixed(cfg: SimConfig) -> SimResult:
    if cfg.mode != _buffers.FIXED:
        raise ValueError(f"run_fixed needs fixed mode, got {cfg.mode!r}")
    if cfg.policy not in FIXED_POLICIES:
        raise ValueError(f"policy {cfg.policy!r} has no fixed-rate variant")
    delivered, a_sr, s_sr, a_td, s_td = _FIXED_RUNNERS[cfg.policy](cfg)
    span = cfg.slots - cfg.warmup
    attempts = a_sr + a_td
    outage = 1.0 - (s_sr + s_td) / attempts if attempts else 0.0
    return SimResult(
        cfg=cfg,
        avg_rate_bpcu=delivered / span,
        outage_prob=outage,
        attempts_sr=a_sr,
        attempts_td=a_td,
        successes_sr=s_sr,
        successes_td=s_td,
        delivered_bpcu=delivered,
        label=cfg.policy,
    )


# --- sweeps -----------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class PolicyEntry:
    """One scheme entry in a sweep: policy id, CSV label, setting overrides
    (delta, c0, source_power_factor, sigma_*_db, ic_formula, residual_model,
    quantizer_bits)."""

    policy: str
    label: str | None = None
    overrides: dict = dataclasses.field(default_factory=dict)

    @property
    def effective_label(self) -> str:
        return self.label if self.label is not None else self.policy


_AXES = ("snr_db", "K", "q_max", "c0")

_POL_KEYS = {
    "delta",
    "c0",
    "source_power_factor",
    "ic_formula",
    "residual_model",
    "quantizer_bits",
}
_VAR_KEYS = {"sigma_sr_db": "var_sr", "sigma_rr_db": "var_rr", "sigma_rd_db": "var_rd"}


def _db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def _apply_setting(net: NetworkConfig, pol: PolicyConfig, key: str, value):
    if key in _POL_KEYS:
        return net, dataclasses.replace(pol, **{key: value})
    if key in _VAR_KEYS:
        return dataclasses.replace(net, **{_VAR_KEYS[key]: _db_to_linear(value)}), pol
    raise ValueError(f"unknown override key: {key!r}")


def _derive_cfg(
    base: SimConfig, entry: PolicyEntry, axis_name: str, value, seed: int
) -> SimConfig:
    net, pol = base.net, base.pol_cfg
    q_max = base.q_max
    for key, ov in entry.overrides.items():
        net, pol = _apply_setting(net, pol, key, ov)
    if axis_name == "snr_db":
        net = dataclasses.replace(net, P=_db_to_linear(value))
    elif axis_name == "K":
        net = dataclasses.replace(net, K=int(value))
    elif axis_name == "q_max":
        q_max = float(value)
    elif axis_name == "c0":
        pol = dataclasses.replace(pol, c0=float(value))
    return dataclasses.replace(
        base, net=net, pol_cfg=pol, policy=entry.policy, q_max=q_max, seed=seed
    )


def sweep(
    base: SimConfig,
    axis_name: str,
    axis_values,
    policies,
    jobs: int | None = None,
) -> list[SimResult]:
    """Run every policy entry across the axis; row order is policy-major.

    With paired_channels every run reuses the base seed, so all entries see
    identical channel trajectories; otherwise each row gets seed + row index.
    """
    if axis_name not in _AXES:
        raise ValueError(f"unknown sweep axis: {axis_name!r}")
    entries = [
        e if isinstance(e, PolicyEntry) else PolicyEntry(policy=e) for e in policies
    ]
    cfgs = []
    labels = []
    idx = 0
    for entry in entries:
        for value in axis_values:
            seed = base.seed if base.paired_channels else base.seed + idx
            cfgs.append(_derive_cfg(base, entry, axis_name, value, seed))
            labels.append(entry.effective_label)
            idx += 1
    if jobs is None:
        jobs_env = os.environ.get("RELAYSIM_JOBS")
        jobs = int(jobs_env) if jobs_env else 1
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(run, cfgs))
    else:
        results = [run(c) for c in cfgs]
    for res, label in zip(results, labels):
        res.label = label
    return results
