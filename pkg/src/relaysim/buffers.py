"""Relay buffer state, rate caps, and queue updates for both rate modes.

Adaptive mode stores real-valued occupancies in BPCU and caps each link's rate
by the available room (receiver) or backlog (transmitter).  Fixed mode stores
integer packet counts; a failed delivery retains the packet for a later retry.
"""

from __future__ import annotations

import dataclasses
import math

__all__ = [
    "ADAPTIVE",
    "FIXED",
    "BufferState",
    "initial_state",
    "cap_rates",
    "update_adaptive",
    "update_fixed",
    "feasible_pairs",
]

ADAPTIVE = "adaptive"
FIXED = "fixed"

# Packets per relay when a fixed-rate run starts with unbounded buffers; finite
# capacities start half full instead.
FIXED_INFINITE_INITIAL_STOCK = 25

# Slack for float round-off when adaptive updates land exactly on a bound.
_EPS = 1e-9


@dataclasses.dataclass
class BufferState:
    """Per-relay occupancy plus the shared capacity.

    q is in BPCU for adaptive mode and whole packets for fixed mode; q_max may
    be math.inf, in which case receive caps never bind.
    """

    q: list
    q_max: float
    mode: str

    @property
    def K(self) -> int:
        return len(self.q)


def initial_state(K: int, q_max: float, mode: str) -> BufferState:
    """Start-of-run buffers: empty in adaptive mode, half full in fixed mode."""
    if mode == ADAPTIVE:
        return BufferState(q=[0.0] * K, q_max=q_max, mode=mode)
    if mode == FIXED:
        if math.isinf(q_max):
            fill = FIXED_INFINITE_INITIAL_STOCK
        else:
            fill = int(q_max) // 2
        return BufferState(q=[fill] * K, q_max=q_max, mode=mode)
    raise ValueError(f"unknown mode: {mode!r}")


def cap_rates(
    gamma_sr: float, gamma_td: float, qR, qT, q_max: float
) -> tuple[float, float]:
    """Adaptive per-link rates capped by receiver room and transmitter backlog."""
    c_sr = math.log2(1.0 + gamma_sr)
    c_td = math.log2(1.0 + gamma_td)
    if not math.isinf(q_max):
        room = q_max - qR
        if c_sr > room:
            c_sr = room
    if c_td > qT:
        c_td = qT
    return max(c_sr, 0.0), max(c_td, 0.0)


def update_adaptive(
    buf: BufferState, r: int, t: int, c_sr: float, c_td: float
) -> BufferState:
    """Apply one slot's capped flows in place; bounds violations are caller bugs."""
    if r == t:
        raise ValueError("receiving and transmitting relay must differ")
    q = buf.q
    q[r] += c_sr
    if q[r] > buf.q_max:
        if q[r] > buf.q_max + _EPS:
            raise RuntimeError(f"buffer {r} overfilled: {q[r]} > {buf.q_max}")
        q[r] = buf.q_max
    q[t] -= c_td
    if q[t] < 0.0:
        if q[t] < -_EPS:
            raise RuntimeError(f"buffer {t} overdrawn: {q[t]}")
        q[t] = 0.0
    return buf


def update_fixed(
    buf: BufferState,
    r: int | None,
    t: int | None,
    s_sr: bool,
    s_td: bool,
) -> BufferState:
    """Apply one fixed-rate slot's outcomes in place.

    Only successes move packets; a failed delivery keeps the packet queued for
    retransmission.
    """
    if r is not None and t is not None and r == t:
        raise ValueError("receiving and transmitting relay must differ")
    q = buf.q
    if r is not None and s_sr:
        q[r] = min(q[r] + 1, buf.q_max)
    if t is not None and s_td:
        q[t] = max(q[t] - 1, 0)
    return buf


def feasible_pairs(buf: BufferState) -> list[tuple[int, int]]:
    """Ordered (receiver, transmitter) pairs eligible this slot, lexicographic.

    The receiver must have room in both modes.  Fixed mode needs a whole queued
    packet to transmit; adaptive mode keeps empty transmitters selectable (the
    rate cap already makes their contribution zero), which lets the source fill
    buffers from a cold start.
    """
    K = buf.K
    q = buf.q
    q_max = buf.q_max
    inf_cap = math.isinf(q_max)
    need_packet = buf.mode == FIXED
    out = []
    for r in range(K):
        if not inf_cap and q[r] >= q_max:
            continue
        for t in range(K):
            if t == r:
                continue
            if need_packet and q[t] < 1:
                continue
            out.append((r, t))
    return out
