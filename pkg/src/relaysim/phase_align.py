"""Receiver-side phase alignment, phase quantization, and fixed-rate SINR tests.

With channel knowledge only at the receivers, the source transmits the data
symbol on antenna 1 and a phase-rotated copy of the interfering relay's symbol
on antenna 2, each at half the source power.  The fed-back rotation either
mitigates the interference (anti-phase, residual ||h_tr| - |h_s2r|/sqrt(2)|)
or amplifies it so the receiving relay can decode and cancel it first
(co-phase, combined |h_tr| + |h_s2r|/sqrt(2)|).
"""

from __future__ import annotations

import cmath
import dataclasses
import math

__all__ = [
    "PhaseDecision",
    "QuantizerConfig",
    "MODE_MITIGATE",
    "MODE_CANCEL",
    "phase_min",
    "phase_max",
    "quantize_phase",
    "sinr_im",
    "ic_check",
    "snr_rd",
    "decide_phase",
]

MODE_MITIGATE = "mitigate"
MODE_CANCEL = "cancel_via_decode"

_SQRT_HALF = math.sqrt(0.5)
_TWO_PI = 2.0 * math.pi


@dataclasses.dataclass(frozen=True)
class QuantizerConfig:
    """Uniform phase codebook {2 pi k / 2^bits}."""

    bits: int

    def __post_init__(self) -> None:
        if self.bits < 1:
            raise ValueError(f"bits must be >= 1, got {self.bits}")


@dataclasses.dataclass
class PhaseDecision:
    """Outcome of the per-pair receiver-side interference handling choice.

    gamma_r is the S->R SINR the slot actually realizes: the post-cancellation
    SNR when the interferer is decoded first, the residual-interference SINR
    otherwise.
    """

    phi: float
    mode: str
    gamma_r: float
    ic_feasible: bool


def phase_min(h_s2r: complex, h_tr: complex) -> complex:
    """Unit rotation minimizing |h_s2r e^{j phi}/sqrt(2) + h_tr|.

    Anti-phases the two arrivals; the achieved minimum magnitude is
    ||h_tr| - |h_s2r|/sqrt(2)|.  Either channel zero makes the phase
    irrelevant and returns 1.
    """
    z = h_s2r.conjugate() * h_tr
    m = abs(z)
    if m == 0.0:
        return complex(1.0, 0.0)
    return -z / m


def phase_max(h_s2r: complex, h_tr: complex) -> complex:
    """Unit rotation maximizing the same magnitude; the phase_min rotation
    negated, reaching |h_tr| + |h_s2r|/sqrt(2)."""
    z = h_s2r.conjugate() * h_tr
    m = abs(z)
    if m == 0.0:
        return complex(1.0, 0.0)
    return z / m


def quantize_phase(e_jphi: complex, q: QuantizerConfig) -> complex:
    """Snap a unit phasor to the nearest codebook phase.

    Exact ties go to the smaller phase value in [0, 2 pi), so the halfway
    point between the last codeword and the wrapped origin resolves to 0.
    """
    mag = abs(e_jphi)
    if abs(mag - 1.0) > 1e-9:
        raise ValueError(f"input must be a unit phasor, |.| = {mag}")
    n = 1 << q.bits
    phi = cmath.phase(e_jphi) % _TWO_PI
    x = phi * n / _TWO_PI  # codeword coordinate in [0, n)
    lo = int(math.floor(x))
    if lo >= n:  # phi rounded up to 2 pi by the modulo
        lo = 0
        x = 0.0
    frac = x - lo
    hi = (lo + 1) % n
    if frac > 0.5:
        k = hi
    elif frac < 0.5:
        k = lo
    else:
        # Tie: pick the candidate whose phase value is smaller.
        k = hi if hi == 0 else lo
    angle = _TWO_PI * k / n
    return complex(math.cos(angle), math.sin(angle))


def sinr_im(
    h_s1r: complex,
    h_s2r: complex,
    h_tr: complex,
    P: float,
    sigma2: float,
    e_jphi: complex,
) -> float:
    """S->R SINR with the interference mitigated rather than decoded."""
    residual = h_s2r * e_jphi * _SQRT_HALF + h_tr
    num = abs(h_s1r) ** 2 * (P / 2.0)
    den = abs(residual) ** 2 * P + sigma2
    return num / den


def ic_check(
    h_s1r: complex,
    h_s2r: complex,
    h_tr: complex,
    P: float,
    sigma2: float,
    gamma0: float,
    ic_formula: str = "signal",
) -> tuple[bool, float]:
    """Feasibility of decoding the interferer first, and the SNR after removal.

    The default formula scores the amplified interferer against the
    not-yet-decoded data signal; the "printed" variant is an alternative
    bookkeeping kept selectable for comparison.
    """
    if not gamma0 > 0.0:
        raise ValueError(f"gamma0 must be positive, got {gamma0}")
    ej = phase_max(h_s2r, h_tr)
    if ic_formula == "signal":
        num = abs(math.sqrt(P) * h_tr + math.sqrt(P / 2.0) * h_s2r * ej) ** 2
        den = (P / 2.0) * abs(h_s1r) ** 2 + sigma2
        gamma_ic = num / den
    elif ic_formula == "printed":
        num = abs(h_tr) ** 2 * P
        den = abs(h_s1r + h_s2r * ej) ** 2 * (P / 2.0) + sigma2
        gamma_ic = num / den
    else:
        raise ValueError(f"unknown ic_formula: {ic_formula!r}")
    post_ic_snr = abs(h_s1r) ** 2 * (P / 2.0) / sigma2
    return gamma_ic >= gamma0, post_ic_snr


def snr_rd(h_td: complex, P: float, sigma2: float) -> float:
    """Destination-side SNR of the transmitting relay's link."""
    return abs(h_td) ** 2 * P / sigma2


def decide_phase(
    h_s1r: complex,
    h_s2r: complex,
    h_tr: complex,
    P: float,
    sigma2: float,
    gamma0: float,
    ic_formula: str = "signal",
    quantizer: QuantizerConfig | None = None,
) -> PhaseDecision:
    """Receiver-side choice between decoding the interferer and mitigating it.

    Cancellation is chosen when it is feasible and its post-cancellation SNR is
    at least the mitigated SINR; the choice is made from ideal phases and any
    quantization applies only to the SINR actually realized.
    """
    if h_tr == 0:
        # No interferer exists; antenna 2 stays silent and no phase is fed back.
        gamma = abs(h_s1r) ** 2 * P / (2.0 * sigma2)
        return PhaseDecision(phi=0.0, mode=MODE_MITIGATE, gamma_r=gamma, ic_feasible=False)
    ej_min = phase_min(h_s2r, h_tr)
    feasible, post_ic = ic_check(h_s1r, h_s2r, h_tr, P, sigma2, gamma0, ic_formula)
    gamma_im_ideal = sinr_im(h_s1r, h_s2r, h_tr, P, sigma2, ej_min)
    if feasible and post_ic >= gamma_im_ideal:
        ej = phase_max(h_s2r, h_tr)
        phi = cmath.phase(ej) % _TWO_PI
        return PhaseDecision(phi=phi, mode=MODE_CANCEL, gamma_r=post_ic, ic_feasible=True)
    ej = ej_min if quantizer is None else quantize_phase(ej_min, quantizer)
    gamma = sinr_im(h_s1r, h_s2r, h_tr, P, sigma2, ej)
    phi = cmath.phase(ej) % _TWO_PI
    return PhaseDecision(phi=phi, mode=MODE_MITIGATE, gamma_r=gamma, ic_feasible=feasible)
