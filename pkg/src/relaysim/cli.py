"""Command-line entry point: JSON run configs, figure presets, CSV output.

Config files are plain JSON objects.  Required keys: policy (name or list),
mode, K, nu, snr_db.  Optional keys with defaults: delta 0.5, c0 1, slots 1e6,
warmup 1e4, seed 1, q_max "inf", sigma_sr_db/sigma_rr_db/sigma_rd_db 0,
source_power_factor 1, paired_channels true, out.  Exactly one of snr_db, K,
q_max, c0 may be a list and becomes the sweep axis; dB-valued keys are
converted to linear on load.  The policy name "ba_pars_2p" is an alias for
ba_pars with source_power_factor 2.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys

import numpy as np

from . import buffers as _buffers
from . import engine as _engine
from . import phase_align as _phase
from . import precoding as _precoding
from .channel import NetworkConfig, make_rng
from .engine import PolicyEntry, SimConfig, SimResult
from .policies import PolicyConfig

__all__ = [
    "ConfigError",
    "RunSpec",
    "parse_config",
    "runspec_to_config",
    "figure_preset",
    "write_csv",
    "main",
    "CSV_HEADER",
]

CSV_HEADER = (
    "policy,mode,K,nu,snr_db,sigma_rr_db,q_max,c0,slots,seed,"
    "avg_rate_bpcu,outage_prob,attempts,successes"
)


class ConfigError(ValueError):
    """Invalid run configuration; the message names the offending key."""


@dataclasses.dataclass
class RunSpec:
    """A parsed config: base run, sweep axis, policy entries, output path."""

    base: SimConfig
    axis_name: str
    axis_values: list
    entries: list[PolicyEntry]
    out: str | None = None

    @property
    def n_rows(self) -> int:
        return len(self.entries) * len(self.axis_values)


_AXIS_KEYS = ("snr_db", "K", "q_max", "c0")

_KNOWN_KEYS = {
    "policy",
    "mode",
    "K",
    "nu",
    "snr_db",
    "sigma_sr_db",
    "sigma_rr_db",
    "sigma_rd_db",
    "q_max",
    "c0",
    "delta",
    "source_power_factor",
    "slots",
    "warmup",
    "seed",
    "paired_channels",
    "out",
}

_ALIASES = {"ba_pars_2p": ("ba_pars", {"source_power_factor": 2.0})}


def _db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def _linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x) if x > 0.0 else -math.inf


def _db_round_trip(x: float) -> float:
    """dB value whose re-conversion reproduces the linear value; rounding to
    nanodecibels removes the log/exp round-off for human-scale inputs."""
    db = _linear_to_db(x)
    return round(db, 9) if math.isfinite(db) else db


def _num(raw: dict, key: str, default=None):
    value = raw.get(key, default)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"key {key!r} must be a number, got {value!r}")
    return value


def _int(raw: dict, key: str, default=None) -> int:
    value = _num(raw, key, default)
    if value != int(value):
        raise ConfigError(f"key {key!r} must be an integer, got {value!r}")
    return int(value)


def _q_max_value(value, key: str = "q_max") -> float:
    if value == "inf":
        return math.inf
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        if value <= 0:
            raise ConfigError(f"key {key!r} must be positive, got {value!r}")
        return float(value)
    raise ConfigError(f'key {key!r} must be a positive number or "inf", got {value!r}')


def _entry_for(name: str, mode: str) -> PolicyEntry:
    if name in _ALIASES:
        target, overrides = _ALIASES[name]
        entry = PolicyEntry(policy=target, label=name, overrides=dict(overrides))
    elif name in _engine.ALL_POLICIES:
        entry = PolicyEntry(policy=name)
    else:
        raise ConfigError(f"key 'policy': unknown policy {name!r}")
    family = (
        _engine.ADAPTIVE_POLICIES
        if mode == _buffers.ADAPTIVE
        else _engine.FIXED_POLICIES
    )
    if entry.policy not in family:
        raise ConfigError(f"key 'policy': {name!r} has no {mode} variant")
    return entry


def _parse_config_dict(raw: dict) -> RunSpec:
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    for key in raw:
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
    for key in ("policy", "mode", "K", "nu", "snr_db"):
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")

    mode = raw["mode"]
    if mode not in (_buffers.ADAPTIVE, _buffers.FIXED):
        raise ConfigError(f"key 'mode' must be 'adaptive' or 'fixed', got {mode!r}")

    policy = raw["policy"]
    names = policy if isinstance(policy, list) else [policy]
    if not names or not all(isinstance(p, str) for p in names):
        raise ConfigError("key 'policy' must be a policy name or list of names")
    entries = [_entry_for(p, mode) for p in names]

    list_axes = [k for k in _AXIS_KEYS if isinstance(raw.get(k), list)]
    if len(list_axes) > 1:
        raise ConfigError(f"only one sweep axis allowed, got lists for {list_axes}")
    axis_name = list_axes[0] if list_axes else "snr_db"
    if list_axes and not raw[axis_name]:
        raise ConfigError(f"key {axis_name!r}: axis list is empty")

    def axis_list(key: str, check) -> list:
        values = raw[key]
        if not values:
            raise ConfigError(f"key {key!r}: axis list is empty")
        return [check(v, key) for v in values]

    def chk_num(v, key):
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise ConfigError(f"key {key!r} must hold numbers, got {v!r}")
        return float(v)

    def chk_int(v, key):
        v = chk_num(v, key)
        if v != int(v) or v < 1:
            raise ConfigError(f"key {key!r} must hold positive integers, got {v!r}")
        return int(v)

    def chk_c0(v, key):
        v = chk_num(v, key)
        if v <= 0:
            raise ConfigError(f"key {key!r} must be positive, got {v!r}")
        return v

    K = _int(raw, "K") if axis_name != "K" else chk_int(raw["K"][0], "K")
    nu = _int(raw, "nu")
    if axis_name != "K" and K < 1:
        raise ConfigError(f"key 'K' must be >= 1, got {K}")
    if nu < 1:
        raise ConfigError(f"key 'nu' must be >= 1, got {nu}")

    if axis_name == "snr_db":
        if isinstance(raw["snr_db"], list):
            axis_values = axis_list("snr_db", chk_num)
        else:
            axis_values = [chk_num(raw["snr_db"], "snr_db")]
        snr_db = axis_values[0]
    else:
        snr_db = float(_num(raw, "snr_db"))
        if axis_name == "K":
            axis_values = axis_list("K", chk_int)
        elif axis_name == "q_max":
            axis_values = [_q_max_value(v) for v in raw["q_max"]]
        else:
            axis_values = axis_list("c0", chk_c0)

    q_max = math.inf
    if "q_max" in raw and axis_name != "q_max":
        q_max = _q_max_value(raw["q_max"])

    c0 = 1.0
    if "c0" in raw and axis_name != "c0":
        c0 = chk_c0(raw["c0"], "c0")

    delta = float(_num(raw, "delta", 0.5))
    if not 0.0 <= delta <= 1.0:
        raise ConfigError(f"key 'delta' must be in [0, 1], got {delta}")
    spf = float(_num(raw, "source_power_factor", 1.0))
    if spf <= 0:
        raise ConfigError(f"key 'source_power_factor' must be positive, got {spf}")
    slots = _int(raw, "slots", 10**6)
    warmup = _int(raw, "warmup", 10**4)
    if not slots > warmup >= 0:
        raise ConfigError(
            f"keys 'slots'/'warmup': need slots > warmup >= 0, got {slots}/{warmup}"
        )
    seed = _int(raw, "seed", 1)
    if seed < 0:
        raise ConfigError(f"key 'seed' must be non-negative, got {seed}")
    paired = raw.get("paired_channels", True)
    if not isinstance(paired, bool):
        raise ConfigError(f"key 'paired_channels' must be a boolean, got {paired!r}")
    out = raw.get("out")
    if out is not None and not isinstance(out, str):
        raise ConfigError(f"key 'out' must be a string path, got {out!r}")

    net = NetworkConfig(
        K=K,
        nu=nu,
        P=_db_to_linear(snr_db),
        sigma2=1.0,
        var_sr=_db_to_linear(float(_num(raw, "sigma_sr_db", 0.0))),
        var_rr=_db_to_linear(float(_num(raw, "sigma_rr_db", 0.0))),
        var_rd=_db_to_linear(float(_num(raw, "sigma_rd_db", 0.0))),
    )
    pol = PolicyConfig(delta=delta, c0=c0, source_power_factor=spf)
    base = SimConfig(
        net=net,
        policy=entries[0].policy,
        pol_cfg=pol,
        mode=mode,
        slots=slots,
        warmup=warmup,
        seed=seed,
        q_max=q_max,
        paired_channels=paired,
    )
    return RunSpec(
        base=base,
        axis_name=axis_name,
        axis_values=list(axis_values),
        entries=entries,
        out=out,
    )


def parse_config(path: str) -> RunSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}")
    return _parse_config_dict(raw)


def runspec_to_config(spec: RunSpec) -> dict:
    """Serialize back to the JSON-config shape; parse(serialize(s)) == s."""
    base = spec.base
    net, pol = base.net, base.pol_cfg

    def name_of(entry: PolicyEntry) -> str:
        return entry.label if entry.label is not None else entry.policy

    names = [name_of(e) for e in spec.entries]
    raw = {
        "policy": names if len(names) > 1 else names[0],
        "mode": base.mode,
        "K": net.K,
        "nu": net.nu,
        "snr_db": _db_round_trip(net.P),
        "sigma_sr_db": _db_round_trip(net.var_sr),
        "sigma_rr_db": _db_round_trip(net.var_rr),
        "sigma_rd_db": _db_round_trip(net.var_rd),
        "q_max": "inf" if math.isinf(base.q_max) else base.q_max,
        "c0": pol.c0,
        "delta": pol.delta,
        "source_power_factor": pol.source_power_factor,
        "slots": base.slots,
        "warmup": base.warmup,
        "seed": base.seed,
        "paired_channels": base.paired_channels,
    }
    raw[spec.axis_name] = [
        "inf" if isinstance(v, float) and math.isinf(v) else v
        for v in spec.axis_values
    ] if spec.axis_name == "q_max" else list(spec.axis_values)
    if spec.out is not None:
        raw["out"] = spec.out
    return raw


# --- figure presets ---------------------------------------------------------

_SNR_AXIS = [0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]


def _srr(policy: str, db: float) -> PolicyEntry:
    return PolicyEntry(policy=policy, overrides={"sigma_rr_db": db})


def figure_preset(figure: int, slots: int = 10**6, warmup: int = 10**4,
                  seed: int = 1) -> RunSpec:
    """Built-in experiment families 2..6.

    2: adaptive rate vs SNR, K=2, three inter-relay interference levels.
    3: adaptive rate vs number of relays at 20 dB.
    4: adaptive rate vs buffer size at 20 dB, K=3.
    5: fixed-rate outage vs SNR, K=3, unit target rate.
    6: fixed-rate throughput vs SNR, K=3, q_max=10, two target rates.
    """

    def net(K: int, snr_db: float) -> NetworkConfig:
        return NetworkConfig(K=K, nu=2, P=_db_to_linear(snr_db))

    def base(K, snr_db, mode, q_max=math.inf, c0=1.0) -> SimConfig:
        return SimConfig(
            net=net(K, snr_db),
            policy="hd_brs",
            pol_cfg=PolicyConfig(c0=c0),
            mode=mode,
            slots=slots,
            warmup=warmup,
            seed=seed,
            q_max=q_max,
        )

    adaptive, fixed = _buffers.ADAPTIVE, _buffers.FIXED
    if figure == 2:
        entries = [
            PolicyEntry("upper_bound"),
            _srr("ba_sprs", -3.0),
            _srr("ba_sprs", 0.0),
            _srr("ba_sprs", 3.0),
            PolicyEntry("sfd_mmrs_ideal"),
            _srr("sfd_mmrs_nonideal", -3.0),
            _srr("sfd_mmrs_nonideal", 0.0),
            _srr("sfd_mmrs_nonideal", 3.0),
            PolicyEntry("hd_brs"),
            PolicyEntry("hd_hrs"),
            PolicyEntry("hd_mlrs"),
        ]
        return RunSpec(base(2, 0.0, adaptive), "snr_db", list(_SNR_AXIS), entries)
    if figure == 3:
        entries = [
            PolicyEntry("upper_bound"),
            _srr("ba_sprs", 0.0),
            _srr("ba_sprs", 3.0),
            PolicyEntry("sfd_mmrs_ideal"),
            _srr("sfd_mmrs_nonideal", 0.0),
            _srr("sfd_mmrs_nonideal", 3.0),
            PolicyEntry("hd_brs"),
            PolicyEntry("hd_hrs"),
            PolicyEntry("hd_mlrs"),
        ]
        return RunSpec(base(2, 20.0, adaptive), "K", [2, 3, 4, 5, 6], entries)
    if figure == 4:
        entries = [
            PolicyEntry("upper_bound"),
            PolicyEntry("ba_sprs"),
            PolicyEntry("sfd_mmrs_ideal"),
            PolicyEntry("sfd_mmrs_nonideal"),
            PolicyEntry("hd_brs"),
            PolicyEntry("hd_hrs"),
            PolicyEntry("hd_mlrs"),
        ]
        axis = [5.0, 10.0, 25.0, 50.0, 200.0, math.inf]
        return RunSpec(base(3, 20.0, adaptive), "q_max", axis, entries)
    if figure == 5:
        entries = [
            PolicyEntry("ba_pars"),
            PolicyEntry(
                "ba_pars", label="ba_pars_2p", overrides={"source_power_factor": 2.0}
            ),
            PolicyEntry("ba_sor"),
            PolicyEntry("sfd_mmrs_ideal"),
            PolicyEntry("sfd_mmrs_nonideal"),
            PolicyEntry("hd_brs"),
            PolicyEntry("hd_hrs"),
            PolicyEntry("hd_mlrs"),
        ]
        return RunSpec(base(3, 0.0, fixed), "snr_db", list(_SNR_AXIS), entries)
    if figure == 6:
        schemes = [
            ("ba_pars", None, {}),
            ("ba_pars", "ba_pars_2p", {"source_power_factor": 2.0}),
            ("ba_sor", None, {}),
            ("sfd_mmrs_ideal", None, {}),
            ("sfd_mmrs_nonideal", None, {}),
            ("hd_brs", None, {}),
            ("hd_hrs", None, {}),
            ("hd_mlrs", None, {}),
        ]
        entries = []
        for c0 in (1.5, 2.5):
            for policy, label, extra in schemes:
                overrides = dict(extra)
                overrides["c0"] = c0
                entries.append(PolicyEntry(policy, label=label, overrides=overrides))
        return RunSpec(base(3, 0.0, fixed, q_max=10.0), "snr_db", list(_SNR_AXIS), entries)
    raise ConfigError(f"unknown figure preset: {figure}")


# --- CSV --------------------------------------------------------------------


def _fmt(x) -> str:
    return "%.6g" % x


def _result_row(res: SimResult) -> str:
    cfg = res.cfg
    net = cfg.net
    adaptive = cfg.mode == _buffers.ADAPTIVE
    fields = [
        res.label or cfg.policy,
        cfg.mode,
        str(net.K),
        str(net.nu),
        _fmt(_linear_to_db(net.P / net.sigma2)),
        _fmt(_linear_to_db(net.var_rr)),
        _fmt(cfg.q_max),
        "" if adaptive else _fmt(cfg.pol_cfg.c0),
        str(cfg.slots),
        str(cfg.seed),
        _fmt(res.avg_rate_bpcu),
        "" if adaptive else _fmt(res.outage_prob),
        str(res.attempts),
        str(res.successes),
    ]
    return ",".join(fields)


def write_csv(results: list[SimResult], path_or_file) -> None:
    """Emit the stable result schema; floats carry 6 significant digits."""
    lines = [CSV_HEADER] + [_result_row(r) for r in results]
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# --- verify suites ----------------------------------------------------------


def _verify_checks() -> list[tuple[str, bool]]:
    rng = make_rng(20240917)
    checks: list[tuple[str, bool]] = []

    w = _precoding.optimal_omega(1.0, 1.0, 1.0)
    g = _precoding.oracle_grid_omega(1.0, 1.0, 1.0, 1e-4)
    spot = abs(w - (3.0 - math.sqrt(5.0)) / 2.0) < 1e-9 and abs(w - g) < 5e-4
    checks.append(("closed-form omega spot value vs grid", spot))

    ok = True
    for _ in range(200):
        h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        htr = complex(rng.standard_normal() + 1j * rng.standard_normal())
        sol = _precoding.precoding_matrix(h, htr, P=10.0, sigma2=1.0)
        power = np.vdot(sol.m1, sol.m1).real + np.vdot(sol.m2, sol.m2).real
        cross = np.vdot(h, sol.m2)
        ok &= abs(power - 1.0) < 1e-10
        ok &= abs(cross - (-sol.omega * htr)) <= 1e-9 * max(1.0, abs(htr))
    checks.append(("precoder power and alignment constraints", ok))

    ok = True
    for _ in range(200):
        h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        htr = complex(rng.standard_normal() + 1j * rng.standard_normal())
        a = float(np.vdot(h, h).real)
        b = abs(htr) ** 2
        joint = _precoding.joint_power_omega(h, htr, P_T=4.0, P_max=4.0, sigma2=1.0)
        w = _precoding.optimal_omega(a, b, 1.0 / 4.0)
        ok &= abs(joint.omega - w) < 1e-9 and joint.p_s == 4.0
    checks.append(("joint power reduces to fixed-power omega", ok))

    ok = True
    grid = np.exp(2j * math.pi * np.arange(4096) / 4096)
    for _ in range(100):
        hs2 = complex(rng.standard_normal() + 1j * rng.standard_normal())
        htr = complex(rng.standard_normal() + 1j * rng.standard_normal())
        resid = np.abs(hs2 * grid * math.sqrt(0.5) + htr)
        best = abs(hs2 * _phase.phase_min(hs2, htr) * math.sqrt(0.5) + htr)
        worst = abs(hs2 * _phase.phase_max(hs2, htr) * math.sqrt(0.5) + htr)
        ok &= best <= resid.min() + 1e-9
        ok &= worst >= resid.max() - 1e-9
        ok &= abs(best - abs(abs(htr) - abs(hs2) * math.sqrt(0.5))) < 1e-9
    checks.append(("phase alignment extremes vs dense grid", ok))
    return checks


# --- entry point ------------------------------------------------------------


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON run configuration")
    sub.add_argument("--out", help="CSV output path (default: stdout)")
    sub.add_argument("--seed", type=int, help="override the config seed")
    sub.add_argument("--policy", help="restrict to one policy name")


def _apply_cli_overrides(spec: RunSpec, args) -> RunSpec:
    if args.seed is not None:
        spec.base = dataclasses.replace(spec.base, seed=args.seed)
    if args.policy is not None:
        keep = [
            e
            for e in spec.entries
            if e.policy == args.policy or e.label == args.policy
        ]
        if not keep:
            raise ConfigError(f"--policy {args.policy!r} matches no configured entry")
        spec.entries = keep
    if args.out is not None:
        spec.out = args.out
    return spec


_FIGURE_MERGE_KEYS = {"slots", "warmup", "seed", "paired_channels", "out"}


def _merge_figure_config(figure: int, args) -> RunSpec:
    """Preset axis and entries; --config may override run-length knobs only."""
    knobs = {"slots": 10**6, "warmup": 10**4, "seed": 1, "paired_channels": True}
    out = None
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {args.config}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON in {args.config}: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        for key in raw:
            if key not in _FIGURE_MERGE_KEYS:
                raise ConfigError(
                    f"key {key!r} cannot accompany --figure (allowed:"
                    f" {sorted(_FIGURE_MERGE_KEYS)})"
                )
        out = raw.get("out")
        for key in ("slots", "warmup", "seed"):
            if key in raw:
                knobs[key] = _int(raw, key)
        if "paired_channels" in raw:
            if not isinstance(raw["paired_channels"], bool):
                raise ConfigError("key 'paired_channels' must be a boolean")
            knobs["paired_channels"] = raw["paired_channels"]
        if not knobs["slots"] > knobs["warmup"] >= 0:
            raise ConfigError(
                "keys 'slots'/'warmup': need slots > warmup >= 0,"
                f" got {knobs['slots']}/{knobs['warmup']}"
            )
    spec = figure_preset(
        figure, slots=knobs["slots"], warmup=knobs["warmup"], seed=knobs["seed"]
    )
    spec.base = dataclasses.replace(
        spec.base, paired_channels=knobs["paired_channels"]
    )
    spec.out = out
    return spec


def _emit(spec: RunSpec, results: list[SimResult]) -> None:
    if spec.out:
        write_csv(results, spec.out)
    else:
        write_csv(results, sys.stdout)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="relaysim",
        description="Monte Carlo simulator for buffer-aided relay selection",
    )
    subs = parser.add_subparsers(dest="command", required=True)
    p_run = subs.add_parser("run", help="execute a single configured run")
    _add_common(p_run)
    p_sweep = subs.add_parser("sweep", help="execute a sweep or figure preset")
    _add_common(p_sweep)
    p_sweep.add_argument(
        "--figure", type=int, choices=(2, 3, 4, 5, 6), help="built-in experiment family"
    )
    p_sweep.add_argument("--jobs", type=int, help="parallel worker processes")
    subs.add_parser("verify", help="run the built-in oracle self-checks")

    args = parser.parse_args(argv)
    try:
        if args.command == "verify":
            failed = False
            for name, ok in _verify_checks():
                print(("ok " if ok else "FAIL ") + name)
                failed |= not ok
            return 2 if failed else 0
        if args.command == "run":
            if not args.config:
                raise ConfigError("run requires --config")
            spec = _apply_cli_overrides(parse_config(args.config), args)
            if spec.n_rows != 1:
                raise ConfigError(
                    f"run expects exactly one run, config defines {spec.n_rows};"
                    " use the sweep command"
                )
            cfg = _engine._derive_cfg(
                spec.base,
                spec.entries[0],
                spec.axis_name,
                spec.axis_values[0],
                spec.base.seed,
            )
            res = _engine.run(cfg)
            res.label = spec.entries[0].effective_label
            _emit(spec, [res])
            return 0
        # sweep
        if args.figure is not None:
            spec = _merge_figure_config(args.figure, args)
            spec = _apply_cli_overrides(spec, args)
        elif args.config:
            spec = _apply_cli_overrides(parse_config(args.config), args)
        else:
            raise ConfigError("sweep requires --config or --figure")
        results = _engine.sweep(
            spec.base, spec.axis_name, spec.axis_values, spec.entries, jobs=args.jobs
        )
        _emit(spec, results)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime faults map to a distinct exit code
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
