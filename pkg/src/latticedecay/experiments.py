"""Experiment runner: configured runs, cross-engine comparisons, fits,
and figure-reproduction tables.

Every run is deterministic (no randomness anywhere in the pipeline);
identical configs produce bit-identical output files.  Tables are
written atomically as CSV (one header line, 15 significant digits) or
JSON, together with a metadata file documenting window choices,
declared tolerances, and measured deviations.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import bessel, regimes, switching
from .fitting import (FitError, fit_exponential_rate, fit_oscillation,
                      fit_powerlaw_envelope, envelope_maxima)
from .model import ModelParams, ProfileError, SwitchingProfile
from .propagator import (IntegrationError, PropagatorConfig, TruncationError,
                         propagate)


class ConfigError(ValueError):
    """Invalid configuration file or option set."""


class ToleranceError(RuntimeError):
    """A declared comparison tolerance was exceeded."""


_CONFIG_KEYS = {
    "delta", "profile", "rise_time", "initial_site", "t_max", "step",
    "out", "format", "tolerance_profile",
}

FORMATS = ("csv", "json")
TOLERANCE_PROFILES = ("strict", "figure")

# Declared comparison tolerances per preset.  "strict" bounds sit a
# comfortable margin above the measured deviations of the reference
# implementation; "figure" bounds only guarantee agreement at plot
# scale.  Windows and measured values are recorded in each preset's
# metadata file.
TOLERANCES = {
    "fig3": {  # max |P_tdse - P_series| over the full grid
        "strict": 5e-6, "figure": 1e-3,
    },
    "fig5": {  # max |exact - closed form| of the scaled memory sums,
        # per unit delta^2 of expected correction size
        "strict": 0.7, "figure": 1.5,
    },
    "fig6": {  # relative envelope error of the memory asymptotics in
        # the documented long-time window
        "strict": 0.04, "figure": 0.10,
    },
    "fig7": {  # log-residual RMS of the exponential component
        "strict": 0.01, "figure": 0.10,
    },
    "fig8": {  # log-residual RMS (site-2 handoffs oscillate harder)
        "strict": 0.15, "figure": 0.30,
    },
}

PRESETS = ("fig3", "fig5", "fig6", "fig7", "fig8")


@dataclass(frozen=True)
class ExperimentConfig:
    """Run configuration; mirrors the CLI flags and the key-value
    config-file keys one to one."""

    delta: float = 0.3
    profile: str = "sudden"          # sudden | linear | custom:<path>
    rise_time: float = 0.0
    initial_site: int = 1
    t_max: float = 50.0
    step: float = 1e-3
    out: str = "."
    format: str = "csv"
    tolerance_profile: str = "strict"

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)")
        kind = self.profile.split(":", 1)[0]
        if kind not in ("sudden", "linear", "custom"):
            raise ConfigError(f"unknown profile {self.profile!r}")
        if kind == "custom" and ":" not in self.profile:
            raise ConfigError("custom profile needs a path: custom:<path>")
        if kind == "linear" and self.rise_time <= 0.0:
            raise ConfigError("linear profile needs rise_time > 0")
        if self.initial_site < 1:
            raise ConfigError("initial_site must be >= 1")
        if self.t_max <= 0.0 or self.step <= 0.0:
            raise ConfigError("t_max and step must be positive")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if self.tolerance_profile not in TOLERANCE_PROFILES:
            raise ConfigError(
                f"tolerance_profile must be one of {TOLERANCE_PROFILES}")

    @property
    def params(self) -> ModelParams:
        return ModelParams(delta=self.delta)

    def build_profile(self) -> SwitchingProfile:
        kind = self.profile.split(":", 1)[0]
        try:
            if kind == "sudden":
                return SwitchingProfile.sudden(self.delta)
            if kind == "linear":
                return SwitchingProfile.linear(self.delta, self.rise_time)
            path = self.profile.split(":", 1)[1]
            return load_profile_table(path, self.delta)
        except ProfileError as exc:
            raise ConfigError(str(exc)) from exc

    def propagator_config(self) -> PropagatorConfig:
        return PropagatorConfig(step=self.step, t_max=self.t_max)

    def initial_state(self) -> np.ndarray:
        state = np.zeros(self.initial_site, dtype=complex)
        state[-1] = 1.0
        return state

    def tolerance(self, preset: str) -> float:
        return TOLERANCES[preset][self.tolerance_profile]


def load_config_file(path, overrides: dict | None = None) -> ExperimentConfig:
    """Parse a key-value config file (``key = value`` lines, ``#``
    comments).  Unknown keys are errors; CLI flags override."""
    values: dict = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = val
    if overrides:
        values.update(overrides)
    return config_from_strings(values)


def config_from_strings(values: dict) -> ExperimentConfig:
    """Build a config from string-valued (or typed) entries."""
    kwargs: dict = {}
    converters = {
        "delta": float, "rise_time": float, "t_max": float, "step": float,
        "initial_site": int, "profile": str, "out": str, "format": str,
        "tolerance_profile": str,
    }
    for key, val in values.items():
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            kwargs[key] = converters[key](val)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key!r}: {val!r}") from exc
    return ExperimentConfig(**kwargs)


def load_profile_table(path, delta: float) -> SwitchingProfile:
    """Custom switching profile from a two-column ``t value`` table.

    The table must start at t = 0, end at the rise time with the final
    coupling value ``delta``; the average over the rise interval is
    computed by the trapezoid rule.
    """
    try:
        raw = np.loadtxt(path, ndmin=2)
    except OSError as exc:
        raise ConfigError(f"cannot read profile table {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"malformed profile table {path}: {exc}") from exc
    if raw.shape[1] != 2 or raw.shape[0] < 2:
        raise ConfigError("profile table needs >= 2 rows of 't value'")
    t, v = raw[:, 0], raw[:, 1]
    if t[0] != 0.0 or np.any(np.diff(t) <= 0.0):
        raise ConfigError("profile times must start at 0 and increase")
    if abs(v[-1] - delta) > 1e-9:
        raise ConfigError("profile table must end at the coupling delta")
    average = float(np.trapezoid(v, t) / t[-1])
    return SwitchingProfile.custom(delta, float(t[-1]), t, v, average=average)


def _format_value(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.15g}"


def write_table(path: Path, columns: list[str], rows, fmt: str) -> Path:
    """Atomic table write; CSV has one header line and 15 significant
    digits per value."""
    path = Path(path)
    if fmt == "csv":
        lines = [",".join(columns)]
        lines.extend(",".join(_format_value(x) for x in row) for row in rows)
        payload = "\n".join(lines) + "\n"
        out = path.parent / (path.name + ".csv")
    else:
        doc = {"columns": columns,
               "rows": [[int(x) if isinstance(x, (int, np.integer))
                         else float(x) for x in row] for row in rows]}
        payload = json.dumps(doc, indent=1) + "\n"
        out = path.parent / (path.name + ".json")
    _atomic_write(out, payload)
    return out


def _atomic_write(path: Path, payload: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_metadata(path: Path, meta: dict) -> Path:
    path = Path(path)
    path = path.parent / (path.name + ".meta.json")
    _atomic_write(path, json.dumps(meta, indent=1, sort_keys=True) + "\n")
    return path


@dataclass
class RunResult:
    """Artifact bundle of one experiment run."""

    files: list = field(default_factory=list)
    deviations: dict = field(default_factory=dict)
    fits: dict = field(default_factory=dict)
    tolerance: float | None = None
    tolerance_ok: bool = True


def run_propagate(config: ExperimentConfig) -> RunResult:
    """Integrate the TDSE and emit the survival-probability table."""
    traj = propagate(config.initial_state(), config.build_profile(),
                     config.params, config.propagator_config())
    rows = np.column_stack([traj.times, traj.survival(), traj.norms()])
    out = write_table(Path(config.out) / "propagate", ["t", "p1", "norm"],
                      rows, config.format)
    return RunResult(files=[out])


def _series_survival(config: ExperimentConfig, traj) -> np.ndarray:
    """Bessel-series P(t) on the trajectory grid (constant-coupling
    epoch only; t < rise time is masked with NaN)."""
    handoff = traj.handoff()
    coeffs = bessel.compute_t_coefficients(handoff, config.params)
    tt = traj.shifted_times
    live = tt >= 0.0
    amps = bessel.exact_amplitudes(coeffs, config.params, [1], tt[live])
    out = np.full(tt.size, np.nan)
    out[live] = np.abs(amps[:, 0]) ** 2
    return out


def run_analytic(config: ExperimentConfig) -> RunResult:
    """Bessel-series survival probability; cross-checked against the
    TDSE on the same grid."""
    traj = propagate(config.initial_state(), config.build_profile(),
                     config.params, config.propagator_config())
    p_series = _series_survival(config, traj)
    p_tdse = traj.survival()
    rows = np.column_stack([traj.times, p_series, p_tdse])
    out = write_table(Path(config.out) / "analytic",
                      ["t", "p1_series", "p1_tdse"], rows, config.format)
    live = ~np.isnan(p_series)
    dev = float(np.max(np.abs(p_series[live] - p_tdse[live])))
    return RunResult(files=[out], deviations={"max_engine_dev": dev})


def run_regimes(config: ExperimentConfig) -> RunResult:
    """Handoff sums, phase/amplitude pair, and regime components."""
    traj = propagate(config.initial_state(), config.build_profile(),
                     config.params, config.propagator_config())
    handoff = traj.handoff()
    form = regimes.asymptotic_sums(handoff, config.params)
    expform = regimes.exponential_form(handoff, config.params, 1)
    tt = traj.shifted_times
    live = tt > 0.0
    p_exp = np.full(tt.size, np.nan)
    p_asym = np.full(tt.size, np.nan)
    p_exp[live] = np.abs(expform(tt[live])) ** 2
    p_asym[live] = np.abs(
        regimes.asymptotic_amplitude(form, config.params, 1, tt[live])) ** 2
    rows = np.column_stack([traj.times, traj.survival(), p_exp, p_asym,
                            np.where(live, p_exp + p_asym, np.nan)])
    out = write_table(Path(config.out) / "regimes",
                      ["t", "p1", "p1_exponential", "p1_asymptotic",
                       "p1_ansatz"], rows, config.format)
    meta = write_metadata(Path(config.out) / "regimes", {
        "s_odd": [form.s_odd.real, form.s_odd.imag],
        "s_even": [form.s_even.real, form.s_even.imag],
        "amplitude": form.amplitude,
        "phase": form.phase,
        "gamma": config.params.gamma,
        "exp_coefficient": [expform.coefficient.real,
                            expform.coefficient.imag],
    })
    return RunResult(files=[out, meta],
                     fits={"phase": form.phase, "amplitude": form.amplitude})


def run_diagrams(config: ExperimentConfig, m_max: int = 12) -> RunResult:
    """Closed-form vs brute-force diagram counts for all m <= m_max."""
    rows = []
    for m in range(0, m_max + 1):
        for n in range(1, m + 2):
            if (m - (n - 1)) % 2 or n - 1 > m:
                continue
            l = (m - (n - 1)) // 2
            formula = switching.count_diagrams_formula(n, l)
            brute = switching.count_diagrams_bruteforce(n, m)
            rows.append([m, n, formula, brute])
            if formula != brute:
                raise ToleranceError(
                    f"diagram count mismatch at m={m}, n={n}")
    out = write_table(Path(config.out) / "diagrams",
                      ["lines", "site", "formula", "bruteforce"],
                      rows, config.format)
    return RunResult(files=[out])


def run_identities(config: ExperimentConfig, k_max: int = 20) -> RunResult:
    """Exact identity sweep plus the memory-sum series/closed-form
    comparison."""
    report = switching.appendix_identities(k_max)
    rows = []
    worst = 0.0
    for big_t in (0.1, 0.5, 1.0, 2.0, math.pi):
        so_c, se_c = switching.memory_sums_closed_form(big_t, config.params)
        so_s, se_s = switching.memory_sums_series(big_t, config.params)
        dev = max(abs(so_c - so_s), abs(se_c - se_s))
        worst = max(worst, dev)
        rows.append([big_t, so_c.real, so_s.real, se_c.imag, se_s.imag, dev])
    out = write_table(Path(config.out) / "identities",
                      ["rise_time", "s_odd_closed", "s_odd_series",
                       "s_even_closed", "s_even_series", "max_dev"],
                      rows, config.format)
    ok = report.all_ok and worst <= 1e-12
    if not ok:
        raise ToleranceError(
            f"identity sweep failed (max series deviation {worst:.3e})")
    return RunResult(files=[out], deviations={"memory_sum_dev": worst},
                     tolerance=1e-12, tolerance_ok=ok)


# --------------------------------------------------------------------
# figure presets


def _preset_fig3(config: ExperimentConfig) -> RunResult:
    cfg = replace(config, profile="sudden", rise_time=0.0, initial_site=1,
                  t_max=config.t_max if config.t_max != 50.0 else 130.0)
    traj = propagate(cfg.initial_state(), cfg.build_profile(), cfg.params,
                     cfg.propagator_config())
    p1 = traj.survival()
    handoff = traj.handoff()
    form = regimes.asymptotic_sums(handoff, cfg.params)
    expform = regimes.exponential_form(handoff, cfg.params, 1)
    tt = traj.times
    live = tt > 0.0
    p_exp = np.abs(expform(tt)) ** 2
    p_asym = np.full(tt.size, np.nan)
    p_asym[live] = np.abs(
        regimes.asymptotic_amplitude(form, cfg.params, 1, tt[live])) ** 2
    p_ansatz = np.where(live, p_exp + p_asym, p_exp)
    p_series = _series_survival(cfg, traj)
    rows = np.column_stack([tt, p1, p_exp, p_asym, p_ansatz])
    out = write_table(Path(cfg.out) / "fig3",
                      ["t", "p1", "p1_exponential", "p1_asymptotic",
                       "p1_ansatz"], rows, cfg.format)
    dev = np.abs(p_series - p1)
    max_dev = float(np.max(dev))
    rms_dev = float(np.sqrt(np.nanmean(dev ** 2)))
    tol = cfg.tolerance("fig3")
    meta = write_metadata(Path(cfg.out) / "fig3", {
        "preset": "fig3", "delta": cfg.delta, "t_max": cfg.t_max,
        "engines": "tdse vs bessel-series, survival probability",
        "max_engine_dev": max_dev, "rms_engine_dev": rms_dev,
        "tolerance": tol, "tolerance_profile": cfg.tolerance_profile,
    })
    result = RunResult(files=[out, meta],
                       deviations={"max": max_dev, "rms": rms_dev},
                       tolerance=tol, tolerance_ok=max_dev <= tol)
    if not result.tolerance_ok:
        raise ToleranceError(
            f"fig3 engine deviation {max_dev:.3e} exceeds {tol:.3e}")
    return result


def _fig5_point(delta: float, big_t: float, step: float):
    params = ModelParams(delta)
    profile = SwitchingProfile.linear(delta, big_t)
    cfg = PropagatorConfig(step=step, t_max=big_t)
    n_sites = max(64, int(3.0 * big_t) + 32)
    traj = propagate(np.array([1.0]), profile, params, cfg, n_sites=n_sites)
    form = regimes.asymptotic_sums(traj.handoff(), params)
    d2 = delta ** 2
    return (big_t, form.s_odd.real / d2, form.x_even.real / d2,
            math.sin(2.0 * big_t) / (2.0 * big_t),
            math.sin(big_t) ** 2 / big_t)


def _preset_fig5(config: ExperimentConfig) -> RunResult:
    deltas = (0.3, 0.5, 0.9)
    t_grid = np.round(np.arange(0.1, 6.0001, 0.1), 10)
    files = []
    deviations = {}
    tol = config.tolerance("fig5")
    ok = True
    with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as ex:
        futures = {d: [ex.submit(_fig5_point, d, float(t), config.step)
                       for t in t_grid] for d in deltas}
        for d in deltas:
            rows = [f.result() for f in futures[d]]
            out = write_table(Path(config.out) / f"fig5_delta{d}",
                              ["rise_time", "s_odd_scaled", "x_even_scaled",
                               "s_odd_closed", "x_even_closed"],
                              rows, config.format)
            files.append(out)
            arr = np.asarray(rows)
            dev = float(max(np.max(np.abs(arr[:, 1] - arr[:, 3])),
                            np.max(np.abs(arr[:, 2] - arr[:, 4]))))
            deviations[f"delta{d}"] = dev
            # first-order forms carry O(delta^2) corrections
            ok = ok and dev <= tol * d ** 2
    meta = write_metadata(Path(config.out) / "fig5", {
        "preset": "fig5", "deltas": list(deltas),
        "rise_time_grid": [0.1, 6.0, 0.1],
        "comparison": "exact memory sums vs first-order closed forms",
        "tolerance_per_delta_sq": tol,
        "tolerance_profile": config.tolerance_profile,
        "max_deviation": deviations,
    })
    files.append(meta)
    result = RunResult(files=files, deviations=deviations, tolerance=tol,
                       tolerance_ok=ok)
    if not ok:
        raise ToleranceError(
            f"fig5 memory-sum deviation exceeds {tol} per delta^2")
    return result


def _preset_fig6(config: ExperimentConfig) -> RunResult:
    big_t = 1.0
    window = (180.0, 260.0)
    cfg = replace(config, profile="linear", rise_time=big_t, initial_site=1,
                  t_max=265.0)
    traj = propagate(cfg.initial_state(), cfg.build_profile(), cfg.params,
                     cfg.propagator_config())
    handoff = traj.handoff()
    form = regimes.asymptotic_sums(handoff, cfg.params)
    expform = regimes.exponential_form(handoff, cfg.params, 1)
    tt = traj.shifted_times
    live = tt > 0.0
    p_asym = np.full(tt.size, np.nan)
    p_closed = np.full(tt.size, np.nan)
    p_exp = np.abs(expform(tt)) ** 2
    p_asym[live] = np.abs(
        regimes.asymptotic_amplitude(form, cfg.params, 1, tt[live])) ** 2
    after = traj.times > big_t
    p_closed[after] = np.abs(switching.memory_asymptotic(
        1, traj.times[after], big_t, cfg.params)) ** 2
    rows = np.column_stack([traj.times, traj.survival(), p_exp, p_asym,
                            p_closed])
    out = write_table(Path(cfg.out) / "fig6",
                      ["t", "p1", "p1_exponential", "p1_memory_asym",
                       "p1_memory_closed"], rows, cfg.format)
    tm, pm = envelope_maxima(traj.times, traj.survival(), window)
    env = np.abs(regimes.asymptotic_amplitude(
        form, cfg.params, 1, tm - big_t)) ** 2
    env_err = float(np.max(np.abs(env / pm - 1.0)))
    osc = fit_oscillation(traj.times, traj.survival(), window,
                          rise_time=big_t)
    tol = cfg.tolerance("fig6")
    meta = write_metadata(Path(cfg.out) / "fig6", {
        "preset": "fig6", "delta": cfg.delta, "rise_time": big_t,
        "envelope_window": list(window),
        "comparison": "memory asymptotics vs tdse envelope",
        "relative_envelope_error": env_err,
        "extracted_phase": osc.value,
        "node_spacing": osc.extras["spacing"],
        "tolerance": tol, "tolerance_profile": cfg.tolerance_profile,
    })
    ok = env_err <= tol and abs(osc.value - big_t) <= 0.05
    result = RunResult(files=[out, meta],
                       deviations={"envelope": env_err},
                       fits={"phase": osc.value,
                             "spacing": osc.extras["spacing"]},
                       tolerance=tol, tolerance_ok=ok)
    if not ok:
        raise ToleranceError(
            f"fig6 envelope error {env_err:.3f} exceeds {tol} "
            f"(phase {osc.value:.3f})")
    return result


def _exp_window_rms(traj, params: ModelParams, big_t: float) -> float:
    """Log-residual RMS of the exponential component over the window
    [2 tau / 5, 4 tau] of shifted time."""
    handoff = traj.handoff()
    expform = regimes.exponential_form(handoff, params, 1)
    tau = 1.0 / params.gamma
    tt = traj.shifted_times
    mask = (tt >= 0.4 * tau) & (tt <= 4.0 * tau)
    p = traj.survival()[mask]
    model = np.abs(expform(tt[mask])) ** 2
    return float(np.sqrt(np.mean((np.log(p) - np.log(model)) ** 2)))


def _fig78_point(initial_site: int, big_t: float, config: ExperimentConfig):
    params = config.params
    profile = SwitchingProfile.linear(config.delta, big_t)
    cfg = PropagatorConfig(step=config.step, t_max=big_t + 25.0)
    state = np.zeros(initial_site, dtype=complex)
    state[-1] = 1.0
    traj = propagate(state, profile, params, cfg)
    return traj, _exp_window_rms(traj, params, big_t)


def _preset_fig78(config: ExperimentConfig, initial_site: int,
                  name: str) -> RunResult:
    rise_times = (0.5, 1.0, 2.0)
    files = []
    rms = {}
    peaks = {}
    columns = ["t", "p1", "p1_exponential"]
    tol = config.tolerance(name)
    for big_t in rise_times:
        traj, r = _fig78_point(initial_site, big_t, config)
        rms[f"T{big_t}"] = r
        peaks[f"T{big_t}"] = float(np.max(traj.survival()))
        expform = regimes.exponential_form(traj.handoff(), config.params, 1)
        tt = traj.shifted_times
        p_exp = np.where(tt >= 0.0, np.abs(expform(tt)) ** 2, np.nan)
        rows = np.column_stack([traj.times, traj.survival(), p_exp])
        files.append(write_table(Path(config.out) / f"{name}_T{big_t}",
                                 columns, rows, config.format))
    ok = all(r <= tol for r in rms.values())
    peak_list = [peaks[f"T{t}"] for t in rise_times]
    monotone = all(a > b for a, b in zip(peak_list, peak_list[1:]))
    if initial_site != 1:
        ok = ok and monotone and max(peak_list) <= config.delta ** 2
    meta = write_metadata(Path(config.out) / name, {
        "preset": name, "delta": config.delta, "initial_site": initial_site,
        "rise_times": list(rise_times),
        "exp_window": "shifted time in [0.4 tau, 4 tau]",
        "log_residual_rms": rms, "peak_survival": peaks,
        "tolerance": tol, "tolerance_profile": config.tolerance_profile,
    })
    files.append(meta)
    result = RunResult(files=files, deviations=rms, fits={"peaks": peaks},
                       tolerance=tol, tolerance_ok=ok)
    if not ok:
        raise ToleranceError(
            f"{name} log-residual RMS {max(rms.values()):.3f} exceeds {tol}")
    return result


def reproduce(name: str, config: ExperimentConfig) -> RunResult:
    """Run a figure preset and write its tables and metadata."""
    if name == "fig3":
        return _preset_fig3(config)
    if name == "fig5":
        return _preset_fig5(config)
    if name == "fig6":
        return _preset_fig6(config)
    if name == "fig7":
        return _preset_fig78(config, 1, "fig7")
    if name == "fig8":
        return _preset_fig78(config, 2, "fig8")
    raise ConfigError(f"unknown preset {name!r}; choose from {PRESETS}")


def _sweep_point(config: ExperimentConfig, big_t: float) -> tuple:
    cfg = replace(config, profile="linear", rise_time=big_t)
    traj = propagate(cfg.initial_state(), cfg.build_profile(), cfg.params,
                     cfg.propagator_config())
    form = regimes.asymptotic_sums(traj.handoff(), cfg.params)
    rows = np.column_stack([traj.times, traj.survival()])
    out = write_table(Path(cfg.out) / f"sweep_T{big_t}", ["t", "p1"],
                      rows, cfg.format)
    try:
        fit = fit_exponential_rate(traj.times, traj.survival(),
                                   (big_t + 5.0, min(big_t + 25.0,
                                                     cfg.t_max)))
        gamma_fit = fit.value
    except FitError:
        gamma_fit = float("nan")
    return out, (big_t, gamma_fit, form.phase, form.amplitude)


def run_sweep(config: ExperimentConfig, rise_times) -> RunResult:
    """Linear-rise sweep over rise times; points run concurrently and
    each point's files are written atomically."""
    rise_times = [float(t) for t in rise_times]
    if not rise_times or any(t <= 0.0 for t in rise_times):
        raise ConfigError("sweep needs positive rise times")
    files = []
    summary = []
    with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as ex:
        futures = [ex.submit(_sweep_point, config, t) for t in rise_times]
        for fut in futures:
            out, row = fut.result()
            files.append(out)
            summary.append(row)
    out = write_table(Path(config.out) / "sweep_summary",
                      ["rise_time", "gamma_fit", "phase", "amplitude"],
                      summary, config.format)
    files.append(out)
    return RunResult(files=files)
