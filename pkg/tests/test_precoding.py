"""Closed-form precoder against the independent grid oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from relaysim import precoding

import gridref

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def test_spot_value_omega_and_sinr():
    # a = b = rho = 1; verified against the grid oracle in the acceptance
    # suite before freezing these constants
    w = precoding.optimal_omega(1.0, 1.0, 1.0)
    assert abs(w - (3.0 - math.sqrt(5.0)) / 2.0) < 1e-12
    gamma = float(precoding.sinr_from_ab(1.0, 1.0, 1.0, 1.0))
    assert abs(gamma - (math.sqrt(5.0) - 1.0) / 2.0) < 1e-12
    # the optimum sits at 1/golden^2 and achieves 1/golden
    assert abs(w - 1.0 / GOLDEN**2) < 1e-12
    assert abs(gamma - 1.0 / GOLDEN) < 1e-12


def test_optimal_omega_validates_inputs():
    with pytest.raises(ValueError):
        precoding.optimal_omega(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        precoding.optimal_omega(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        precoding.optimal_omega(1.0, 1.0, 0.0)


def test_omega_matches_grid_on_samples():
    rng = np.random.default_rng(42)
    for _ in range(50):
        a = float(rng.gamma(2.0))
        b = float(rng.exponential())
        P = float(rng.uniform(0.5, 100.0))
        w = precoding.optimal_omega(a, b, 1.0 / P)
        wg, fg = gridref.grid_omega(a, b, P, 1.0)
        assert abs(w - wg) <= 5e-4
        achieved = float(precoding.sinr_from_ab(a, b, P, 1.0))
        assert achieved >= fg - 1e-8


def test_negligible_interferer_limit():
    # b below 1e-12 a switches to the analytic b -> 0 root a/(a + b + rho)
    a, rho = 2.0, 0.5
    w = precoding.optimal_omega(a, 1e-15, rho)
    assert abs(w - a / (a + 1e-15 + rho)) < 1e-12
    w0 = precoding.optimal_omega(a, 0.0, rho)
    assert abs(w0 - a / (a + rho)) < 1e-12


def test_omega_respects_bounds():
    # dominant interferer pushes the cap sqrt(a/b) below one
    w = precoding.optimal_omega(1.0, 25.0, 0.1)
    assert 0.0 < w <= math.sqrt(1.0 / 25.0)
    w = precoding.optimal_omega(100.0, 1e-3, 1e-3)
    assert w <= 1.0


@given(
    a=st.floats(1e-3, 1e3),
    b=st.floats(1e-6, 1e3),
    rho=st.floats(1e-4, 1e2),
)
def test_omega_is_a_local_maximum(a, b, rho):
    w = precoding.optimal_omega(a, b, rho)
    upper = min(1.0, math.sqrt(a / b))
    assert 0.0 < w <= upper

    def f(x):
        return (a - b * x * x) / (b * (1.0 - x) ** 2 + rho)

    h = 1e-6 * max(w, 1e-3)
    best = f(w)
    if w - h > 0.0:
        assert best >= f(w - h) - 1e-12 * abs(best)
    if w + h <= upper:
        assert best >= f(w + h) - 1e-12 * abs(best)


def test_omega_values_vectorizes():
    a = np.array([1.0, 2.0, 3.0])
    b = np.array([1.0, 0.5, 0.0])
    out = precoding.omega_values(a, b, 0.25)
    assert out.shape == (3,)
    for i in range(3):
        expect = (
            precoding.optimal_omega(float(a[i]), float(b[i]), 0.25)
        )
        assert abs(float(out[i]) - expect) < 1e-15


def test_residual_model_variants():
    a, b, P, s2 = 2.0, 1.0, 10.0, 1.0
    w = precoding.optimal_omega(a, b, s2 / P)
    amp = float(precoding.sinr_from_ab(a, b, P, s2, "amplitude"))
    pwr = float(precoding.sinr_from_ab(a, b, P, s2, "power"))
    assert abs(amp - (a - w * w * b) * P / ((1 - w) ** 2 * b * P + s2)) < 1e-12
    assert abs(pwr - (a - w * w * b) * P / ((1 - w * w) * b * P + s2)) < 1e-12
    # the power-residual variant keeps more interference, so less SINR
    assert pwr < amp
    with pytest.raises(ValueError):
        precoding.sinr_from_ab(a, b, P, s2, "bogus")


def _draw(rng, nu=2):
    h = rng.standard_normal(nu) + 1j * rng.standard_normal(nu)
    htr = complex(rng.standard_normal() + 1j * rng.standard_normal())
    return h, htr


def test_precoder_constraints_on_random_draws():
    rng = np.random.default_rng(3)
    for _ in range(100):
        h, htr = _draw(rng)
        sol = precoding.precoding_matrix(h, htr, P=10.0, sigma2=1.0)
        power = np.vdot(sol.m1, sol.m1).real + np.vdot(sol.m2, sol.m2).real
        assert abs(power - 1.0) < 1e-10
        cross = np.vdot(h, sol.m2)
        assert abs(cross - (-sol.omega * htr)) <= 1e-9 * max(1.0, abs(htr))
        a = float(np.vdot(h, h).real)
        assert abs(np.vdot(h, sol.m1).real - sol.beta) < 1e-9
        assert abs(sol.beta**2 - (a - sol.omega**2 * abs(htr) ** 2)) < 1e-9
        assert not sol.interference_free


def test_precoder_interference_free_branch():
    rng = np.random.default_rng(4)
    h, _ = _draw(rng)
    sol = precoding.precoding_matrix(h, 0.0, P=10.0, sigma2=1.0)
    assert sol.interference_free
    assert np.allclose(sol.m2, 0.0)
    a = float(np.vdot(h, h).real)
    assert abs(np.vdot(sol.m1, sol.m1).real - 1.0) < 1e-10
    # nothing to cancel: plain beamforming SNR a P / sigma2
    assert abs(sol.gamma_sr - a * 10.0) < 1e-9 * a * 10.0
    # the dead-source guard still applies
    with pytest.raises(ValueError):
        precoding.precoding_matrix(np.zeros(2, dtype=complex), 1.0, 10.0, 1.0)


def test_effective_sinr_matches_matrix_solution():
    rng = np.random.default_rng(5)
    for _ in range(20):
        h, htr = _draw(rng)
        g1 = precoding.effective_sinr_sr(h, htr, 10.0, 1.0)
        g2 = precoding.precoding_matrix(h, htr, 10.0, 1.0).gamma_sr
        assert g1 == g2


def test_joint_power_exhausts_source_budget():
    rng = np.random.default_rng(6)
    for P_max in (0.5, 1.0, 2.0):
        for _ in range(25):
            h, htr = _draw(rng)
            sol = precoding.joint_power_omega(h, htr, P_T=1.0, P_max=P_max, sigma2=1.0)
            assert sol.p_s == P_max
            assert 0.0 < sol.omega <= 1.0
            assert sol.gamma_sr >= 0.0


def test_joint_power_equal_budgets_reduce_to_fixed_power():
    rng = np.random.default_rng(7)
    for _ in range(50):
        h, htr = _draw(rng)
        a = float(np.vdot(h, h).real)
        b = abs(htr) ** 2
        joint = precoding.joint_power_omega(h, htr, P_T=4.0, P_max=4.0, sigma2=1.0)
        w = precoding.optimal_omega(a, b, 1.0 / 4.0)
        assert abs(joint.omega - w) < 1e-9


def test_joint_power_full_cancellation_branch():
    # strong source, weak relay budget: cancelling everything is optimal
    h = np.array([20.0 + 0j, 20.0j])
    htr = 1.0 + 0j
    a, b = 800.0, 1.0
    sol = precoding.joint_power_omega(h, htr, P_T=100.0, P_max=0.01, sigma2=0.01)
    assert sol.omega == 1.0
    expect = (a - b) * 0.01 / (b * (10.0 - 0.1) ** 2 + 0.01)
    assert abs(sol.gamma_sr - expect) < 1e-12 * expect


def test_joint_power_no_interferer():
    h = np.array([1.0 + 0j, 1.0j])
    sol = precoding.joint_power_omega(h, 0.0, P_T=1.0, P_max=2.0, sigma2=0.5)
    assert sol.interference_free
    assert sol.p_s == 2.0 and sol.omega == 1.0
    assert abs(sol.gamma_sr - 2.0 * 2.0 / 0.5) < 1e-12


def test_joint_power_validates_inputs():
    h = np.array([1.0 + 0j, 1.0j])
    with pytest.raises(ValueError):
        precoding.joint_power_omega(h, 1.0, P_T=0.0, P_max=1.0, sigma2=1.0)
    with pytest.raises(ValueError):
        precoding.joint_power_omega(np.zeros(2, dtype=complex), 1.0, 1.0, 1.0, 1.0)


def test_oracle_grid_omega_guards_resolution():
    with pytest.raises(ValueError):
        precoding.oracle_grid_omega(1.0, 1.0, 1.0, 1e-3)
    w = precoding.oracle_grid_omega(1.0, 1.0, 1.0, 1e-4)
    assert abs(w - (3.0 - math.sqrt(5.0)) / 2.0) < 5e-4
