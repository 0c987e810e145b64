"""Closed-form SINR-maximizing source precoder and its grid-search oracle.

The source splits unit power between a data beam m1 and an interference
shaping beam m2 that partially cancels the co-channel signal seen by the
receiving relay.  With a = ||h_S||^2, b = |h_TR|^2 and rho = sigma2/P, the
cancellation fraction omega that maximizes the effective SINR

    f(omega) = (a - b omega^2) / (b (1 - omega)^2 + rho)

is the smaller root of  b w^2 - (a+b+rho) w + a = 0.  All root evaluations use
the cancellation-free form  w = 2a / (s + sqrt(disc))  with
s = a + b + rho and disc = (a-b)^2 + rho^2 + 2 rho (a+b), which stays accurate
for any b, including b -> 0.

Functions accept scalars or broadcastable numpy arrays for the gain arguments;
scalar inputs return Python floats.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

__all__ = [
    "PrecoderSolution",
    "JointPowerSolution",
    "optimal_omega",
    "omega_values",
    "sinr_from_ab",
    "precoding_matrix",
    "effective_sinr_sr",
    "joint_power_omega",
    "oracle_grid_omega",
]

# Below this fraction of a, the interferer gain is treated as absent and the
# analytic b->0 limit of the root is returned.
_NEGLIGIBLE_B = 1e-12
# omega lives in (0, 1]; the open end is honored with a tiny positive floor.
_OMEGA_FLOOR = 1e-15


@dataclasses.dataclass
class PrecoderSolution:
    """Unit-power precoder pair and the resulting effective SINR.

    beta is the effective data amplitude h_S^H m1; interference_free marks the
    negligible-interferer branch where m2 is (numerically) zero and omega's
    value is immaterial.
    """

    m1: np.ndarray
    m2: np.ndarray
    omega: float
    beta: float
    gamma_sr: float
    interference_free: bool = False


@dataclasses.dataclass
class JointPowerSolution:
    """Optimal source power and cancellation fraction under separate budgets."""

    p_s: float
    omega: float
    gamma_sr: float
    interference_free: bool = False


def omega_values(a, b, rho):
    """Vectorized optimal cancellation fraction; see module docstring.

    Clamped into [1e-15, min(1, sqrt(a/b))].
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    rho = np.asarray(rho, dtype=np.float64)
    s = a + b + rho
    disc = (a - b) ** 2 + rho * (rho + 2.0 * (a + b))
    w = 2.0 * a / (s + np.sqrt(disc))
    w = np.where(b < _NEGLIGIBLE_B * a, a / s, w)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.sqrt(a / b)
    upper = np.where(b > 0.0, ratio, np.inf)
    return np.clip(w, _OMEGA_FLOOR, np.minimum(1.0, upper))


def optimal_omega(a: float, b: float, rho: float) -> float:
    """Scalar omega maximizing f; a > 0 and rho > 0 required, b >= 0."""
    if not a > 0.0:
        raise ValueError(f"a must be positive, got {a}")
    if not rho > 0.0:
        raise ValueError(f"rho must be positive, got {rho}")
    if b < 0.0:
        raise ValueError(f"b must be non-negative, got {b}")
    return float(omega_values(a, b, rho))


def sinr_from_ab(a, b, P, sigma2, residual_model: str = "amplitude"):
    """Effective S->R SINR at the optimal omega, from the squared gains.

    residual_model "amplitude" uses the (1-omega)^2 residual term that the
    closed-form omega optimizes; "power" is the (1-omega^2) variant kept for
    sensitivity studies.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    w = omega_values(a, b, sigma2 / P)
    if residual_model == "amplitude":
        resid = (1.0 - w) ** 2
    elif residual_model == "power":
        resid = 1.0 - w * w
    else:
        raise ValueError(f"unknown residual_model: {residual_model!r}")
    gamma = (a - w * w * b) * P / (resid * b * P + sigma2)
    return np.maximum(gamma, 0.0)


def _squared_norm(h: np.ndarray) -> float:
    h = np.asarray(h)
    return float(np.real(np.vdot(h, h)))


def effective_sinr_sr(
    hS: np.ndarray,
    hTR: complex,
    P: float,
    sigma2: float,
    residual_model: str = "amplitude",
) -> float:
    """Effective S->R SINR for one candidate pair's channels."""
    a = _squared_norm(hS)
    if a <= 0.0:
        raise ValueError("dead source link")
    b = abs(hTR) ** 2
    return float(sinr_from_ab(a, b, P, sigma2, residual_model))


def precoding_matrix(
    hS: np.ndarray,
    hTR: complex,
    P: float,
    sigma2: float,
    residual_model: str = "amplitude",
) -> PrecoderSolution:
    """Build the optimal (m1, m2) for the given channels.

    m1 = (sqrt(a - w^2 b)/a) hS and m2 = -(w hTR / a) hS, which meet the unit
    power budget with equality and steer h_S^H m2 = -w hTR.
    """
    hS = np.asarray(hS, dtype=np.complex128)
    a = _squared_norm(hS)
    if a <= 0.0:
        raise ValueError("dead source link")
    b = abs(hTR) ** 2
    w = optimal_omega(a, b, sigma2 / P)
    beta_sq = max(a - w * w * b, 0.0)
    beta = math.sqrt(beta_sq)
    m1 = (beta / a) * hS
    m2 = (-(w * hTR) / a) * hS
    gamma = float(sinr_from_ab(a, b, P, sigma2, residual_model))
    return PrecoderSolution(
        m1=m1,
        m2=m2,
        omega=w,
        beta=beta,
        gamma_sr=gamma,
        interference_free=bool(b < _NEGLIGIBLE_B * a),
    )


def joint_power_omega(
    hS: np.ndarray,
    hTR: complex,
    P_T: float,
    P_max: float,
    sigma2: float,
) -> JointPowerSolution:
    """Jointly optimal source power and omega under separate power budgets.

    The source budget is always exhausted (p_s = P_max); omega is the minimum
    of 1, sqrt(a/b), the boundary candidate w1 and the stationary candidate w2.
    """
    if not (P_T > 0.0 and P_max > 0.0 and sigma2 > 0.0):
        raise ValueError("P_T, P_max and sigma2 must all be positive")
    a = _squared_norm(hS)
    if a <= 0.0:
        raise ValueError("dead source link")
    b = abs(hTR) ** 2
    if b < _NEGLIGIBLE_B * a:
        # No interferer to cancel: full cancellation is free and m2 vanishes.
        return JointPowerSolution(
            p_s=P_max,
            omega=1.0,
            gamma_sr=a * P_max / sigma2,
            interference_free=True,
        )
    w1 = (P_T * b + sigma2) / (math.sqrt(P_T * P_max) * b)
    s = P_max * a + P_T * b + sigma2
    disc = (P_max * a - P_T * b) ** 2 + sigma2 * (sigma2 + 2.0 * (P_max * a + P_T * b))
    w2 = 2.0 * a * math.sqrt(P_T * P_max) / (s + math.sqrt(disc))
    w = min(1.0, math.sqrt(a / b), w1, w2)
    w = max(w, _OMEGA_FLOOR)
    residual = b * (math.sqrt(P_T) - w * math.sqrt(P_max)) ** 2 + sigma2
    gamma = max((a - b * w * w) * P_max / residual, 0.0)
    return JointPowerSolution(p_s=P_max, omega=w, gamma_sr=gamma)


def oracle_grid_omega(a: float, b: float, rho: float, resolution: float) -> float:
    """Grid-search argmax of f(omega) over {res, 2 res, ..., min(1, sqrt(a/b))}.

    Verification oracle only; resolution must be <= 1e-4 except that the exact
    grid the acceptance suite mandates (1e-4) is of course allowed.
    """
    if resolution > 1e-4:
        raise ValueError(f"resolution must be <= 1e-4, got {resolution}")
    upper = min(1.0, math.sqrt(a / b)) if b > 0.0 else 1.0
    n = int(round(upper / resolution))
    n = max(n, 1)
    grid = resolution * np.arange(1, n + 1)
    grid[-1] = min(grid[-1], upper)
    f = (a - b * grid**2) / (b * (1.0 - grid) ** 2 + rho)
    return float(grid[int(np.argmax(f))])
