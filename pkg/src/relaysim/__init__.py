"""Link-level Monte Carlo simulator for buffer-aided successive relaying.

A multi-antenna source feeds K half-duplex decode-and-forward relays that
forward to a destination over Rayleigh block fading.  Different relays can
receive and transmit in the same slot; the resulting inter-relay interference
is handled by closed-form transmit precoding, by phase alignment across two
source antennas, or by opportunistic decoding, depending on the selection
scheme.  Both adaptive-rate and fixed-rate (outage) operation are covered,
together with half-duplex baselines and parameter sweep plumbing.
"""

from .buffers import BufferState, cap_rates, feasible_pairs, initial_state
from .channel import ChannelRealization, NetworkConfig, draw_channels, make_rng
from .engine import (
    ADAPTIVE_POLICIES,
    FIXED_POLICIES,
    PolicyEntry,
    SimConfig,
    SimResult,
    run,
    run_adaptive,
    run_fixed,
    sweep,
)
from .phase_align import PhaseDecision, QuantizerConfig, decide_phase
from .policies import PairDecision, PolicyConfig
from .precoding import (
    JointPowerSolution,
    PrecoderSolution,
    effective_sinr_sr,
    joint_power_omega,
    optimal_omega,
    precoding_matrix,
)

__version__ = "0.1.0"

__all__ = [
    "ADAPTIVE_POLICIES",
    "FIXED_POLICIES",
    "BufferState",
    "ChannelRealization",
    "JointPowerSolution",
    "NetworkConfig",
    "PairDecision",
    "PhaseDecision",
    "PolicyConfig",
    "PolicyEntry",
    "PrecoderSolution",
    "QuantizerConfig",
    "SimConfig",
    "SimResult",
    "cap_rates",
    "decide_phase",
    "draw_channels",
    "effective_sinr_sr",
    "feasible_pairs",
    "initial_state",
    "joint_power_omega",
    "make_rng",
    "optimal_omega",
    "precoding_matrix",
    "run",
    "run_adaptive",
    "run_fixed",
    "sweep",
]
