"""Vectorized engine vs the slot-by-slot reference runner, plus sweep plumbing."""

import dataclasses
import math

import pytest

import refengine
from relaysim import engine
from relaysim.channel import NetworkConfig
from relaysim.policies import PolicyConfig


def _cfg(policy, mode, K=3, nu=2, snr_db=10.0, q_max=6.0, slots=600, warmup=64,
         seed=1, **pol_kw):
    return engine.SimConfig(
        net=NetworkConfig(K=K, nu=nu, P=10.0 ** (snr_db / 10.0)),
        policy=policy,
        pol_cfg=PolicyConfig(**pol_kw),
        mode=mode,
        slots=slots,
        warmup=warmup,
        seed=seed,
        q_max=q_max,
    )


def _assert_matches_reference(cfg):
    res = engine.run(cfg)
    ref = refengine.reference_run(cfg)
    assert res.attempts_sr == ref.attempts_sr
    assert res.successes_sr == ref.successes_sr
    assert res.attempts_td == ref.attempts_td
    assert res.successes_td == ref.successes_td
    assert abs(res.delivered_bpcu - ref.delivered) <= 1e-9
    span = cfg.slots - cfg.warmup
    assert res.avg_rate_bpcu == pytest.approx(res.delivered_bpcu / span, abs=1e-15)
    if cfg.mode == "fixed":
        expect = 1.0 - res.successes / res.attempts if res.attempts else 0.0
        assert res.outage_prob == expect
    else:
        assert res.outage_prob is None
    return res


@pytest.mark.parametrize("policy", sorted(engine.ADAPTIVE_POLICIES))
def test_adaptive_runners_match_reference(policy):
    _assert_matches_reference(_cfg(policy, "adaptive", seed=1000))


@pytest.mark.parametrize("policy", sorted(engine.FIXED_POLICIES))
def test_fixed_runners_match_reference(policy):
    _assert_matches_reference(_cfg(policy, "fixed", seed=2000))


@pytest.mark.parametrize(
    "policy,mode",
    [
        ("ba_sprs", "adaptive"),
        ("sfd_mmrs_nonideal", "fixed"),
        ("ba_sor", "fixed"),
    ],
)
def test_single_antenna_two_relays_match_reference(policy, mode):
    _assert_matches_reference(_cfg(policy, mode, K=2, nu=1, seed=3000))


@pytest.mark.parametrize(
    "policy,mode",
    [("upper_bound", "adaptive"), ("hd_mlrs", "fixed")],
)
def test_wide_network_matches_reference(policy, mode):
    _assert_matches_reference(_cfg(policy, mode, K=4, nu=3, snr_db=5.0, seed=4000))


@pytest.mark.parametrize(
    "policy,mode",
    [("ba_sprs", "adaptive"), ("ba_sor", "fixed"), ("ba_pars", "fixed")],
)
def test_multi_chunk_runs_match_reference(policy, mode):
    # 9000 slots spans three channel chunks
    _assert_matches_reference(
        _cfg(policy, mode, slots=9000, warmup=128, seed=5000)
    )


def test_quantized_alignment_matches_reference():
    # quantizer forces the engine off its vectorized fast path
    _assert_matches_reference(
        _cfg("ba_pars", "fixed", seed=6000, quantizer_bits=2)
    )


def test_printed_ic_formula_matches_reference():
    _assert_matches_reference(
        _cfg("ba_pars", "fixed", seed=6100, ic_formula="printed")
    )


def test_runs_are_deterministic():
    cfg = _cfg("ba_sprs", "adaptive", seed=9)
    first = engine.run(cfg)
    second = engine.run(cfg)
    assert first == second


def test_infinite_and_huge_caps_agree():
    a = engine.run(_cfg("ba_sprs", "adaptive", q_max=math.inf, seed=11))
    b = engine.run(_cfg("ba_sprs", "adaptive", q_max=1e9, seed=11))
    assert a.delivered_bpcu == b.delivered_bpcu
    assert a.attempts == b.attempts


def test_config_validation():
    net = NetworkConfig(K=2, nu=2, P=1.0)
    with pytest.raises(ValueError):
        engine.SimConfig(net=net, policy="nope")
    with pytest.raises(ValueError):
        engine.SimConfig(net=net, policy="ba_sprs", mode="sometimes")
    with pytest.raises(ValueError):
        engine.SimConfig(net=net, policy="ba_sprs", slots=10, warmup=10)
    with pytest.raises(ValueError):
        engine.SimConfig(net=net, policy="ba_sprs", q_max=0.0)


def test_family_mismatch_is_rejected():
    with pytest.raises(ValueError):
        engine.run(_cfg("ba_pars", "adaptive"))
    with pytest.raises(ValueError):
        engine.run(_cfg("upper_bound", "fixed"))
    with pytest.raises(ValueError):
        engine.run_adaptive(_cfg("ba_sprs", "fixed"))
    with pytest.raises(ValueError):
        engine.run_fixed(_cfg("sfd_mmrs_ideal", "adaptive"))


def test_dead_source_links_stall_the_adaptive_queues():
    cfg = dataclasses.replace(
        _cfg("upper_bound", "adaptive", slots=300, warmup=0),
        net=NetworkConfig(K=3, nu=2, P=10.0, var_sr=0.0),
    )
    res = engine.run(cfg)
    assert res.avg_rate_bpcu == 0.0
    assert res.delivered_bpcu == 0.0


def test_dead_links_give_certain_outage():
    cfg = dataclasses.replace(
        _cfg("sfd_mmrs_nonideal", "fixed", slots=300, warmup=0),
        net=NetworkConfig(K=3, nu=2, P=10.0, var_sr=0.0, var_rd=0.0),
    )
    res = engine.run(cfg)
    assert res.outage_prob == 1.0
    assert res.delivered_bpcu == 0.0
    assert res.attempts > 0


def test_impossible_rate_target_gives_certain_outage():
    res = engine.run(_cfg("ba_sor", "fixed", c0=60.0, slots=400, warmup=0))
    assert res.outage_prob == 1.0
    assert res.successes == 0


def test_tiny_rate_target_rarely_fails():
    res = engine.run(_cfg("ba_sor", "fixed", c0=1e-6, slots=400, warmup=0))
    assert res.outage_prob < 0.01


# --- sweeps -----------------------------------------------------------------


def _base(mode="adaptive", **kw):
    return _cfg(
        "ba_sprs" if mode == "adaptive" else "sfd_mmrs_ideal",
        mode,
        slots=kw.pop("slots", 120),
        warmup=kw.pop("warmup", 16),
        **kw,
    )


def test_sweep_rows_are_policy_major():
    base = _base(seed=5)
    out = engine.sweep(
        base, "snr_db", [0.0, 10.0], ["ba_sprs", "sfd_mmrs_ideal"]
    )
    assert [r.label for r in out] == [
        "ba_sprs", "ba_sprs", "sfd_mmrs_ideal", "sfd_mmrs_ideal"
    ]
    assert [r.cfg.net.P for r in out] == [1.0, 10.0, 1.0, 10.0]


def test_sweep_seed_pairing():
    base = _base(seed=5)
    paired = engine.sweep(base, "snr_db", [0.0, 10.0], ["ba_sprs", "upper_bound"])
    assert [r.cfg.seed for r in paired] == [5, 5, 5, 5]
    unpaired = engine.sweep(
        dataclasses.replace(base, paired_channels=False),
        "snr_db",
        [0.0, 10.0],
        ["ba_sprs", "upper_bound"],
    )
    assert [r.cfg.seed for r in unpaired] == [5, 6, 7, 8]


def test_sweep_parallel_matches_serial():
    base = _base(seed=5)
    serial = engine.sweep(base, "snr_db", [0.0, 10.0], ["ba_sprs", "hd_brs"], jobs=1)
    parallel = engine.sweep(base, "snr_db", [0.0, 10.0], ["ba_sprs", "hd_brs"], jobs=2)
    for a, b in zip(serial, parallel):
        assert a.delivered_bpcu == b.delivered_bpcu
        assert a.attempts == b.attempts
        assert a.label == b.label


def test_sweep_label_and_overrides():
    base = _base(mode="fixed", seed=5)
    entry = engine.PolicyEntry(
        "ba_pars", label="ba_pars_2p", overrides={"source_power_factor": 2.0}
    )
    out = engine.sweep(base, "snr_db", [10.0], [entry])
    assert out[0].label == "ba_pars_2p"
    assert out[0].cfg.pol_cfg.source_power_factor == 2.0
    assert entry.effective_label == "ba_pars_2p"
    assert engine.PolicyEntry("hd_brs").effective_label == "hd_brs"


def test_derive_cfg_axes():
    base = _base(seed=5)
    entry = engine.PolicyEntry("ba_sprs")
    got = engine._derive_cfg(base, entry, "snr_db", 20.0, 5)
    assert got.net.P == pytest.approx(100.0)
    got = engine._derive_cfg(base, entry, "K", 5, 5)
    assert got.net.K == 5
    got = engine._derive_cfg(base, entry, "q_max", 25, 5)
    assert got.q_max == 25.0
    got = engine._derive_cfg(base, entry, "c0", 2.5, 5)
    assert got.pol_cfg.c0 == 2.5
    noisy = engine.PolicyEntry("ba_sprs", overrides={"sigma_rr_db": -3.0})
    got = engine._derive_cfg(base, noisy, "snr_db", 0.0, 5)
    assert got.net.var_rr == pytest.approx(10.0 ** -0.3)
    with pytest.raises(ValueError):
        engine._derive_cfg(
            base, engine.PolicyEntry("ba_sprs", overrides={"bogus": 1}), "K", 2, 5
        )


def test_sweep_rejects_unknown_axis():
    with pytest.raises(ValueError):
        engine.sweep(_base(), "power", [1.0], ["ba_sprs"])
