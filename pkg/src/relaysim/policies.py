"""Per-slot relay pair (or single link) selection for every scheme.

Each ``select_*`` function is a direct, scalar implementation of one scheme's
decision rule over a single channel realization and buffer state.  The
simulation engine carries vectorized equivalents of these rules in its hot
loops; these functions are the readable reference and are what the tests and
the exhaustive oracle are checked against.

Conventions shared by every scheme: ordered candidate enumeration is
lexicographic and replacement requires a strictly greater score, which
implements the lexicographic tie-break; scores are SINR ratios, so scaling all
gains and the noise variance together never changes a decision.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Callable

from . import buffers as _buffers
from . import phase_align as _phase
from . import precoding as _precoding
from .channel import ChannelRealization

__all__ = [
    "PolicyConfig",
    "PairDecision",
    "PRECODED",
    "PHASE_IC",
    "PHASE_IM",
    "MRT_ONLY",
    "HD_RX",
    "HD_TX",
    "IDLE",
    "select_ba_sprs",
    "select_upper_bound",
    "select_sfd_mmrs",
    "select_hd_brs",
    "select_hd_mlrs",
    "select_hd_hrs",
    "select_ba_sor",
    "select_ba_pars",
    "oracle_exhaustive",
]

PRECODED = "precoded"
PHASE_IC = "phase_ic"
PHASE_IM = "phase_im"
MRT_ONLY = "mrt_only"
HD_RX = "hd_rx"
HD_TX = "hd_tx"
IDLE = "idle"


@dataclasses.dataclass(frozen=True)
class PolicyConfig:
    """Knobs shared by the selection schemes.

    delta weighs receive rate against delivery rate in the weighted-sum
    schemes.  c0 is the fixed transmission rate in BPCU; the capture ratios
    derived from it differ between successive schemes (one slot per packet)
    and half-duplex schemes (two-slot pipeline, each link carrying twice the
    end-to-end rate).  source_power_factor scales only the source's transmit
    power (2 models the double-power variant).
    """

    delta: float = 0.5
    c0: float = 1.0
    source_power_factor: float = 1.0
    ic_formula: str = "signal"
    residual_model: str = "amplitude"
    quantizer_bits: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must be in [0, 1], got {self.delta}")
        if not self.c0 > 0.0:
            raise ValueError(f"c0 must be positive, got {self.c0}")
        if not self.source_power_factor > 0.0:
            raise ValueError("source_power_factor must be positive")

    @property
    def gamma0(self) -> float:
        """Capture ratio for successive (one-slot-per-packet) schemes."""
        return 2.0**self.c0 - 1.0

    @property
    def gamma0_hd(self) -> float:
        """Capture ratio for half-duplex schemes; each link carries 2*c0 bits."""
        return 2.0 ** (2.0 * self.c0) - 1.0

    @property
    def quantizer(self) -> _phase.QuantizerConfig | None:
        if self.quantizer_bits is None:
            return None
        return _phase.QuantizerConfig(bits=self.quantizer_bits)


@dataclasses.dataclass
class PairDecision:
    """One slot's scheduling outcome.

    rx/tx are relay indices (either may be absent for single-link or idle
    slots).  gamma_sr covers whichever S->R statistic the scheme realizes;
    c_sr/c_td are the capped adaptive rates and stay zero in fixed mode.
    """

    rx: int | None
    tx: int | None
    mode: str
    gamma_sr: float = 0.0
    gamma_td: float = 0.0
    c_sr: float = 0.0
    c_td: float = 0.0


_IDLE_DECISION = dict(rx=None, tx=None, mode=IDLE)


def _mrt_gain(ch: ChannelRealization, r: int) -> float:
    row = ch.hS[r]
    return float((row.real**2 + row.imag**2).sum())


def _require_pairable(cfg) -> None:
    if cfg.net.K < 2:
        raise ValueError("pair selection requires at least two relays")


def _weighted_pair_argmax(ch, buf, cfg, gamma_sr_of) -> PairDecision | None:
    """Shared body of the weighted-sum pair schemes; returns None when no pair
    is feasible (all buffers full, which the dynamics never reach for K >= 2)."""
    net, pol = cfg.net, cfg.pol_cfg
    delta = pol.delta
    best_score = -1.0
    best = None
    for r, t in _buffers.feasible_pairs(buf):
        g_sr = gamma_sr_of(r, t)
        g_td = _phase.snr_rd(ch.hRD[t], net.P, net.sigma2)
        c_sr, c_td = _buffers.cap_rates(g_sr, g_td, buf.q[r], buf.q[t], buf.q_max)
        score = delta * c_sr + (1.0 - delta) * c_td
        if score > best_score:
            best_score = score
            best = PairDecision(r, t, PRECODED, g_sr, g_td, c_sr, c_td)
    return best


def select_ba_sprs(ch: ChannelRealization, buf, cfg) -> PairDecision:
    """Weighted-sum pair selection with the closed-form precoder handling the
    inter-relay interference at the receiving relay."""
    _require_pairable(cfg)
    net, pol = cfg.net, cfg.pol_cfg

    def gamma_sr(r: int, t: int) -> float:
        return _precoding.effective_sinr_sr(
            ch.hS[r], ch.hRR[t, r], net.P, net.sigma2, pol.residual_model
        )

    best = _weighted_pair_argmax(ch, buf, cfg, gamma_sr)
    return best if best is not None else PairDecision(**_IDLE_DECISION)


def select_upper_bound(ch: ChannelRealization, buf, cfg) -> PairDecision:
    """Weighted-sum pair selection with interference assumed absent; the MRT
    beam then maximizes the receive SNR outright."""
    _require_pairable(cfg)
    net = cfg.net

    def gamma_sr(r: int, t: int) -> float:
        return _mrt_gain(ch, r) * net.P / net.sigma2

    best = _weighted_pair_argmax(ch, buf, cfg, gamma_sr)
    if best is None:
        return PairDecision(**_IDLE_DECISION)
    best.mode = MRT_ONLY
    return best


def _top2(values, candidates) -> tuple[int | None, int | None]:
    """Indices of the largest and second largest value among candidates;
    strict comparison keeps the lower index on ties."""
    first = second = None
    for k in candidates:
        v = values[k]
        if first is None or v > values[first]:
            second = first
            first = k
        elif second is None or v > values[second]:
            second = k
    return first, second


def select_sfd_mmrs(ch: ChannelRealization, buf, cfg, ideal: bool) -> PairDecision:
    """Max-max selection: best receive relay and best transmit relay chosen
    independently, with a second-best substitution when they collide.

    The ideal variant scores the pair as if the concurrent transmission caused
    no interference; the non-ideal variant takes the interference as noise.
    Degrades to a single-link slot when one side has no candidate.
    """
    _require_pairable(cfg)
    net, pol = cfg.net, cfg.pol_cfg
    P, s2 = net.P, net.sigma2
    K = net.K
    q = buf.q
    adaptive = buf.mode == _buffers.ADAPTIVE

    a = [_mrt_gain(ch, k) for k in range(K)]
    d = [float(ch.hRD[k].real**2 + ch.hRD[k].imag**2) for k in range(K)]
    rx_cands = [k for k in range(K) if math.isinf(buf.q_max) or q[k] < buf.q_max]
    tx_cands = [k for k in range(K) if q[k] > 0]
    rx1, rx2 = _top2(a, rx_cands)
    tx1, tx2 = _top2(d, tx_cands)

    def pair_gamma_sr(r: int, t: int) -> float:
        if ideal:
            return a[r] * P / s2
        irr = ch.hRR[t, r]
        return a[r] * P / (float(irr.real**2 + irr.imag**2) * P + s2)

    def finish_pair(r: int, t: int) -> PairDecision:
        g_sr = pair_gamma_sr(r, t)
        g_td = d[t] * P / s2
        c_sr = c_td = 0.0
        if adaptive:
            c_sr, c_td = _buffers.cap_rates(g_sr, g_td, q[r], q[t], buf.q_max)
        return PairDecision(r, t, MRT_ONLY, g_sr, g_td, c_sr, c_td)

    def rx_only(r: int) -> PairDecision:
        # Nobody transmits alongside, so the receive side is interference free.
        g_sr = a[r] * P / s2
        c_sr = 0.0
        if adaptive:
            c_sr, _ = _buffers.cap_rates(g_sr, 0.0, q[r], 0.0, buf.q_max)
        return PairDecision(r, None, HD_RX, gamma_sr=g_sr, c_sr=c_sr)

    def tx_only(t: int) -> PairDecision:
        g_td = d[t] * P / s2
        c_td = 0.0
        if adaptive:
            _, c_td = _buffers.cap_rates(0.0, g_td, 0.0, q[t], buf.q_max)
        return PairDecision(None, t, HD_TX, gamma_td=g_td, c_td=c_td)

    if rx1 is None and tx1 is None:
        return PairDecision(**_IDLE_DECISION)
    if tx1 is None:
        return rx_only(rx1)
    if rx1 is None:
        return tx_only(tx1)
    if rx1 != tx1:
        return finish_pair(rx1, tx1)

    # Collision: try both second-best substitutions, keep the larger
    # delta-weighted sum (capped rates in adaptive mode, raw link rates in
    # fixed mode where no pre-threshold rate exists).
    def weighted(r: int, t: int) -> float:
        g_sr = pair_gamma_sr(r, t)
        g_td = d[t] * P / s2
        if adaptive:
            c_sr, c_td = _buffers.cap_rates(g_sr, g_td, q[r], q[t], buf.q_max)
        else:
            c_sr = math.log2(1.0 + g_sr)
            c_td = math.log2(1.0 + g_td)
        return pol.delta * c_sr + (1.0 - pol.delta) * c_td

    options = []
    if rx2 is not None:
        options.append((rx2, tx1))
    if tx2 is not None:
        options.append((rx1, tx2))
    if options:
        best = None
        best_score = -1.0
        for r, t in options:
            score = weighted(r, t)
            if score > best_score:
                best_score = score
                best = (r, t)
        return finish_pair(*best)

    # Single relay feasible on both sides (unreachable for K >= 2; kept for
    # robustness): use it on whichever side carries more weighted rate.
    k = rx1
    rx_dec, tx_dec = rx_only(k), tx_only(k)
    if adaptive:
        rx_score = pol.delta * rx_dec.c_sr
        tx_score = (1.0 - pol.delta) * tx_dec.c_td
    else:
        rx_score = pol.delta * math.log2(1.0 + rx_dec.gamma_sr)
        tx_score = (1.0 - pol.delta) * math.log2(1.0 + tx_dec.gamma_td)
    return rx_dec if rx_score >= tx_score else tx_dec


def select_hd_brs(ch: ChannelRealization, cfg) -> PairDecision:
    """Bufferless two-phase relaying through the single best relay.

    The slot stands for a full receive-then-forward cycle, so the adaptive
    contribution is half the bottleneck link rate and the decision carries the
    bottleneck SNR on the transmit side.
    """
    net = cfg.net
    K = net.K
    best_k = 0
    best_m = -1.0
    for k in range(K):
        a = _mrt_gain(ch, k)
        dk = float(ch.hRD[k].real**2 + ch.hRD[k].imag**2)
        m = a if a < dk else dk
        if m > best_m:
            best_m = m
            best_k = k
    gamma = best_m * net.P / net.sigma2
    return PairDecision(
        None, best_k, HD_TX, gamma_td=gamma, c_td=0.5 * math.log2(1.0 + gamma)
    )


def select_hd_mlrs(ch: ChannelRealization, buf, cfg) -> PairDecision:
    """Activate the single strongest eligible link, either direction.

    Candidates are enumerated source links first (relay order), then delivery
    links, with strict comparisons, which pins the tie behavior.
    """
    net = cfg.net
    P, s2 = net.P, net.sigma2
    K = net.K
    q = buf.q
    inf_cap = math.isinf(buf.q_max)
    best_gain = -1.0
    best_k = None
    best_is_rx = True
    for k in range(K):
        if not inf_cap and q[k] >= buf.q_max:
            continue
        g = _mrt_gain(ch, k)
        if g > best_gain:
            best_gain = g
            best_k = k
            best_is_rx = True
    for k in range(K):
        if q[k] <= 0:
            continue
        g = float(ch.hRD[k].real**2 + ch.hRD[k].imag**2)
        if g > best_gain:
            best_gain = g
            best_k = k
            best_is_rx = False
    if best_k is None:
        return PairDecision(**_IDLE_DECISION)
    gamma = best_gain * P / s2
    if best_is_rx:
        c_sr = 0.0
        if buf.mode == _buffers.ADAPTIVE:
            c_sr, _ = _buffers.cap_rates(gamma, 0.0, q[best_k], 0.0, buf.q_max)
        return PairDecision(best_k, None, HD_RX, gamma_sr=gamma, c_sr=c_sr)
    c_td = 0.0
    if buf.mode == _buffers.ADAPTIVE:
        _, c_td = _buffers.cap_rates(0.0, gamma, 0.0, q[best_k], buf.q_max)
    return PairDecision(None, best_k, HD_TX, gamma_td=gamma, c_td=c_td)


def select_hd_hrs(ch: ChannelRealization, buf, cfg, slot_parity: int) -> PairDecision:
    """Alternating schedule: receive on even slots, deliver on odd slots.

    An infeasible scheduled direction falls back to the other; with neither
    available the slot degrades to the bufferless best-relay rule.
    """
    net = cfg.net
    P, s2 = net.P, net.sigma2
    K = net.K
    q = buf.q
    inf_cap = math.isinf(buf.q_max)
    adaptive = buf.mode == _buffers.ADAPTIVE

    def best_rx() -> PairDecision | None:
        cands = [k for k in range(K) if inf_cap or q[k] < buf.q_max]
        if not cands:
            return None
        gains = {k: _mrt_gain(ch, k) for k in cands}
        k = max(cands, key=lambda i: (gains[i], -i))
        gamma = gains[k] * P / s2
        c_sr = 0.0
        if adaptive:
            c_sr, _ = _buffers.cap_rates(gamma, 0.0, q[k], 0.0, buf.q_max)
        return PairDecision(k, None, HD_RX, gamma_sr=gamma, c_sr=c_sr)

    def best_tx() -> PairDecision | None:
        cands = [k for k in range(K) if q[k] > 0]
        if not cands:
            return None
        gains = {k: float(ch.hRD[k].real**2 + ch.hRD[k].imag**2) for k in cands}
        k = max(cands, key=lambda i: (gains[i], -i))
        gamma = gains[k] * P / s2
        c_td = 0.0
        if adaptive:
            _, c_td = _buffers.cap_rates(0.0, gamma, 0.0, q[k], buf.q_max)
        return PairDecision(None, k, HD_TX, gamma_td=gamma, c_td=c_td)

    order = (best_rx, best_tx) if slot_parity % 2 == 0 else (best_tx, best_rx)
    for attempt in order:
        decision = attempt()
        if decision is not None:
            return decision
    return select_hd_brs(ch, cfg)


def select_ba_sor(
    ch: ChannelRealization, buf, cfg, u: float | None = None
) -> PairDecision:
    """Max-min pair selection with opportunistic interference cancellation.

    The receive SINR is interference free when the inter-relay signal is strong
    enough to decode (and subtract) first, and treats it as noise otherwise.
    With no feasible pair the slot spends itself on one link drawn uniformly
    among the feasible single links; `u` in [0, 1) supplies that draw.
    """
    _require_pairable(cfg)
    net, pol = cfg.net, cfg.pol_cfg
    P, s2 = net.P, net.sigma2
    gamma0 = pol.gamma0
    q = buf.q
    best_score = -1.0
    best = None
    for r, t in _buffers.feasible_pairs(buf):
        a = _mrt_gain(ch, r)
        irr = ch.hRR[t, r]
        b = float(irr.real**2 + irr.imag**2)
        if b * P / (a * P + s2) >= gamma0:
            g_sr = a * P / s2
        else:
            g_sr = a * P / (b * P + s2)
        hd = ch.hRD[t]
        g_td = float(hd.real**2 + hd.imag**2) * P / s2
        score = g_sr if g_sr < g_td else g_td
        if score > best_score:
            best_score = score
            best = PairDecision(r, t, MRT_ONLY, g_sr, g_td)
    if best is not None:
        return best

    links: list[tuple[bool, int]] = []
    for k in range(net.K):
        if math.isinf(buf.q_max) or q[k] < buf.q_max:
            links.append((True, k))
    for k in range(net.K):
        if q[k] >= 1:
            links.append((False, k))
    pick = int((u or 0.0) * len(links))
    is_rx, k = links[min(pick, len(links) - 1)]
    if is_rx:
        gamma = _mrt_gain(ch, k) * P / s2
        return PairDecision(k, None, HD_RX, gamma_sr=gamma)
    hd = ch.hRD[k]
    gamma = float(hd.real**2 + hd.imag**2) * P / s2
    return PairDecision(None, k, HD_TX, gamma_td=gamma)


def select_ba_pars(ch: ChannelRealization, buf, cfg) -> PairDecision:
    """Max-min pair selection with receiver-side phase alignment.

    Each candidate pair decides between decoding the interferer first and
    mitigating it; the pair metric is the bottleneck of the resulting receive
    SINR and the delivery SNR.  Source antennas beyond the second are unused.
    """
    _require_pairable(cfg)
    net, pol = cfg.net, cfg.pol_cfg
    if net.nu < 2:
        raise ValueError("phase-aligned selection needs at least two source antennas")
    P, s2 = net.P, net.sigma2
    f = pol.source_power_factor
    root_f = math.sqrt(f)
    gamma0 = pol.gamma0
    q = buf.q
    best_score = -1.0
    best = None
    for r, t in _buffers.feasible_pairs(buf):
        decision = _phase.decide_phase(
            root_f * complex(ch.hS[r, 0]),
            root_f * complex(ch.hS[r, 1]),
            complex(ch.hRR[t, r]),
            P,
            s2,
            gamma0,
            pol.ic_formula,
            pol.quantizer,
        )
        hd = ch.hRD[t]
        g_td = float(hd.real**2 + hd.imag**2) * P / s2
        score = decision.gamma_r if decision.gamma_r < g_td else g_td
        if score > best_score:
            best_score = score
            mode = PHASE_IC if decision.mode == _phase.MODE_CANCEL else PHASE_IM
            best = PairDecision(r, t, mode, decision.gamma_r, g_td)
    if best is not None:
        return best

    # No feasible pair: all buffers empty (fill one, co-phasing both antennas
    # onto the data symbol) or all full (drain the best delivery link).
    tx_cands = [k for k in range(net.K) if q[k] >= 1]
    if tx_cands:
        d = {k: float(ch.hRD[k].real**2 + ch.hRD[k].imag**2) for k in tx_cands}
        k = max(tx_cands, key=lambda i: (d[i], -i))
        return PairDecision(None, k, HD_TX, gamma_td=d[k] * P / s2)
    best_k = 0
    best_g = -1.0
    for k in range(net.K):
        amp = abs(ch.hS[k, 0]) + abs(ch.hS[k, 1])
        g = (f * P / 2.0) * amp * amp / s2
        if g > best_g:
            best_g = g
            best_k = k
    return PairDecision(best_k, None, HD_RX, gamma_sr=best_g)


def oracle_exhaustive(
    ch: ChannelRealization,
    buf,
    cfg,
    metric: Callable[[int, int], float | None],
) -> PairDecision:
    """Literal enumeration of all K(K-1) ordered pairs under a scoring closure.

    Used by the test suite to re-derive policy decisions independently; shares
    nothing with the policies beyond whatever primitives the closure calls.
    Returns an idle decision when the closure rejects every pair.
    """
    K = cfg.net.K
    best_score = None
    best_pair = None
    for r in range(K):
        for t in range(K):
            if r == t:
                continue
            score = metric(r, t)
            if score is None:
                continue
            if best_score is None or score > best_score:
                best_score = score
                best_pair = (r, t)
    if best_pair is None:
        return PairDecision(**_IDLE_DECISION)
    return PairDecision(best_pair[0], best_pair[1], PRECODED)
