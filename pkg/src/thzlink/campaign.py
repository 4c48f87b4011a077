"""Monte Carlo campaign driver: paired trials, parallel execution, CSV export.

Trial seeds are derived from the master seed with a splittable scheme
(spawn-key children of one seed sequence), so results do not depend on worker
count or completion order; outputs are written once, in trial order, with
round-trippable float formatting.  Identical (config, master seed) therefore
yields byte-identical CSV files at any parallelism.
"""

from __future__ import annotations

import concurrent.futures
import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .allocation import (
    Allocation,
    continuous_allocation,
    discretize_allocation,
    serving_users,
    sum_channel_gains,
    uniform_allocation,
)
from .analog import ALGORITHM1, DEFAULT_OPTIONS, IDEAL, SolverOptions, coupling_tensor, design_analog_precoder
from .channel import synthesize_channel, write_channel_dump
from .config import ConfigError, SystemConfig, build_subcarrier_grid, load_config, to_json_dict
from .digital import design_digital_precoder, effective_channel_tensor
from .metrics import (
    GainProfile,
    RateReport,
    achievable_rates,
    asymptotic_rate_bounds,
    empirical_cdf,
    finite_size_rate_bounds,
    gain_profile,
    min_subarray_objective,
)

SCHEMES = ("proposed_alg1", "uniform_alg1", "proposed_iasp")


class CampaignAborted(RuntimeError):
    """Raised when more than 10% of trials fail."""


@dataclass(frozen=True)
class CampaignSpec:
    """Everything needed to reproduce one campaign."""

    config_path: str
    trials: int
    master_seed: int
    schemes: tuple[str, ...] = SCHEMES
    output_dir: str = "out"
    parallelism: int = 1
    solver: SolverOptions = DEFAULT_OPTIONS
    dump_channels: bool = False
    trace_solver: bool = False


@dataclass(frozen=True)
class SchemeResult:
    scheme: str
    allocation: Allocation
    rates: RateReport
    gains: GainProfile
    min_objective: float
    omega: float
    clamp_rate: float
    fallback_used: bool


@dataclass(frozen=True)
class TrialResult:
    trial: int
    psi: np.ndarray  # (N,) user directions, kept for audits
    alpha_tilde: np.ndarray  # (N,)
    schemes: tuple[SchemeResult, ...]


@dataclass(frozen=True)
class CampaignResult:
    config: SystemConfig
    config_echo: dict
    spec: CampaignSpec
    freqs: np.ndarray
    results: tuple[TrialResult, ...]
    failures: tuple[tuple[int, str], ...] = field(default_factory=tuple)


def trial_rng(master_seed: int, trial: int) -> np.random.Generator:
    """Independent per-trial stream; reconstructible in any worker."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(trial,)))


def run_trial(
    cfg: SystemConfig,
    schemes: tuple[str, ...],
    master_seed: int,
    trial: int,
    options: SolverOptions = DEFAULT_OPTIONS,
    dump_dir: str | Path | None = None,
    trace_dir: str | Path | None = None,
) -> TrialResult:
    """One channel draw evaluated under every requested scheme (paired seeds)."""
    grid = build_subcarrier_grid(cfg)
    channel = synthesize_channel(cfg, trial_rng(master_seed, trial))
    if dump_dir is not None:
        write_channel_dump(channel, Path(dump_dir) / f"trial_{trial:05d}.csv")
    alpha_tilde = sum_channel_gains(channel)
    fair_alloc = discretize_allocation(
        continuous_allocation(alpha_tilde, cfg.rf_chain_count), cfg.rf_chain_count
    )
    even_alloc = uniform_allocation(cfg.user_count, cfg.rf_chain_count)
    per_scheme = []
    for scheme in schemes:
        alloc = even_alloc if scheme == "uniform_alg1" else fair_alloc
        method = IDEAL if scheme == "proposed_iasp" else ALGORITHM1
        trace: list | None = [] if (trace_dir is not None and method == ALGORITHM1) else None
        precoder = design_analog_precoder(grid, channel, alloc, cfg, method, options, trace)
        if trace:
            _write_trace(trace, Path(trace_dir) / f"trial_{trial:05d}_{scheme}.csv")
        couplings = coupling_tensor(channel, precoder, grid, cfg)
        eff = effective_channel_tensor(channel, precoder, grid, cfg, couplings)
        digital = design_digital_precoder(eff, alloc)
        rates = achievable_rates(eff, digital.weights, cfg.snr_linear)
        report = RateReport(
            rates=rates,
            min_rate=float(rates.min()),
            bound_asymptotic=asymptotic_rate_bounds(
                alpha_tilde, np.asarray(alloc.counts), cfg, digital.omega
            ),
            bound_finite=finite_size_rate_bounds(channel, couplings, cfg, digital.omega),
        )
        clamp_rate = 0.0
        if precoder.solutions is not None:
            proposals = sum(s.proposal_count for s in precoder.solutions)
            clamps = sum(s.clamp_count for s in precoder.solutions)
            clamp_rate = clamps / proposals if proposals else 0.0
        per_scheme.append(
            SchemeResult(
                scheme=scheme,
                allocation=alloc,
                rates=report,
                gains=gain_profile(couplings, serving_users(alloc)),
                min_objective=min_subarray_objective(alpha_tilde, np.asarray(alloc.counts)),
                omega=digital.omega,
                clamp_rate=clamp_rate,
                fallback_used=digital.fallback_used,
            )
        )
    return TrialResult(
        trial=trial, psi=channel.psi, alpha_tilde=alpha_tilde, schemes=tuple(per_scheme)
    )


def run_campaign(spec: CampaignSpec) -> CampaignResult:
    """Run all trials (optionally in worker processes) and gather in trial order."""
    cfg = load_config(spec.config_path)
    if spec.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {spec.trials}")
    if spec.parallelism < 1:
        raise ConfigError(f"parallelism must be >= 1, got {spec.parallelism}")
    unknown = [s for s in spec.schemes if s not in SCHEMES]
    if unknown or not spec.schemes:
        raise ConfigError(
            f"schemes must be a non-empty subset of {SCHEMES}, got {spec.schemes}"
        )
    out_dir = Path(spec.output_dir)
    dump_dir = trace_dir = None
    if spec.dump_channels:
        dump_dir = out_dir / "channels"
        dump_dir.mkdir(parents=True, exist_ok=True)
    if spec.trace_solver:
        trace_dir = out_dir / "traces"
        trace_dir.mkdir(parents=True, exist_ok=True)

    results: dict[int, TrialResult] = {}
    failures: list[tuple[int, str]] = []
    if spec.parallelism == 1:
        for trial in range(spec.trials):
            try:
                results[trial] = run_trial(
                    cfg, spec.schemes, spec.master_seed, trial, spec.solver, dump_dir, trace_dir
                )
            except Exception as exc:  # noqa: BLE001 - collected and reported below
                failures.append((trial, f"{type(exc).__name__}: {exc}"))
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
            futures = {
                pool.submit(
                    run_trial,
                    cfg,
                    spec.schemes,
                    spec.master_seed,
                    trial,
                    spec.solver,
                    dump_dir,
                    trace_dir,
                ): trial
                for trial in range(spec.trials)
            }
            for future in concurrent.futures.as_completed(futures):
                trial = futures[future]
                try:
                    results[trial] = future.result()
                except Exception as exc:  # noqa: BLE001
                    failures.append((trial, f"{type(exc).__name__}: {exc}"))
    failures.sort()
    if len(failures) > 0.1 * spec.trials:
        lines = "; ".join(f"trial {t}: {msg}" for t, msg in failures[:5])
        raise CampaignAborted(
            f"{len(failures)} of {spec.trials} trials failed (>10%): {lines}"
        )
    ordered = tuple(results[t] for t in sorted(results))
    return CampaignResult(
        config=cfg,
        config_echo=to_json_dict(cfg),
        spec=spec,
        freqs=build_subcarrier_grid(cfg).freqs,
        results=ordered,
        failures=tuple(failures),
    )


def min_rate_samples(results: tuple[TrialResult, ...], scheme: str) -> np.ndarray:
    return np.array([_scheme(t, scheme).rates.min_rate for t in results])


def min_objective_samples(results: tuple[TrialResult, ...], scheme: str) -> np.ndarray:
    return np.array([_scheme(t, scheme).min_objective for t in results])


def gain_means(results: tuple[TrialResult, ...], scheme: str) -> tuple[np.ndarray, np.ndarray]:
    """Trial-averaged (raw, normalized) gain profiles for one scheme."""
    raw = np.mean([_scheme(t, scheme).gains.raw for t in results], axis=0)
    normalized = np.mean([_scheme(t, scheme).gains.normalized for t in results], axis=0)
    return raw, normalized


def write_outputs(campaign: CampaignResult, out_dir: str | Path) -> None:
    """Write the five CSV tables plus manifest.json into ``out_dir``."""
    if not campaign.results:
        raise ValueError("campaign produced no successful trials; nothing to write")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    schemes = campaign.spec.schemes

    with _open(out_dir / "allocation.csv") as writer:
        writer.writerow(["trial", "scheme", "user", "alpha_tilde", "s_count", "min_objective"])
        for result in campaign.results:
            for scheme_result in result.schemes:
                for n in range(campaign.config.user_count):
                    writer.writerow(
                        [
                            result.trial,
                            scheme_result.scheme,
                            n + 1,
                            _fmt(result.alpha_tilde[n]),
                            scheme_result.allocation.counts[n],
                            _fmt(scheme_result.min_objective),
                        ]
                    )

    with _open(out_dir / "rates.csv") as writer:
        writer.writerow(
            ["trial", "scheme", "user", "rate", "min_rate", "bound_lemma1", "bound_finite"]
        )
        for result in campaign.results:
            for scheme_result in result.schemes:
                for n in range(campaign.config.user_count):
                    writer.writerow(
                        [
                            result.trial,
                            scheme_result.scheme,
                            n + 1,
                            _fmt(scheme_result.rates.rates[n]),
                            _fmt(scheme_result.rates.min_rate),
                            _fmt(scheme_result.rates.bound_asymptotic[n]),
                            _fmt(scheme_result.rates.bound_finite[n]),
                        ]
                    )

    with _open(out_dir / "gain.csv") as writer:
        writer.writerow(["scheme", "k", "f_hz", "raw_gain_mean", "normalized_gain_mean"])
        for scheme in schemes:
            raw, normalized = gain_means(campaign.results, scheme)
            for k0, f_hz in enumerate(campaign.freqs):
                writer.writerow(
                    [scheme, k0 + 1, _fmt(f_hz), _fmt(raw[k0]), _fmt(normalized[k0])]
                )

    for name, sampler in (
        ("cdf_minrate.csv", min_rate_samples),
        ("cdf_minobj.csv", min_objective_samples),
    ):
        with _open(out_dir / name) as writer:
            writer.writerow(["scheme", "value", "prob"])
            for scheme in schemes:
                series = empirical_cdf(sampler(campaign.results, scheme))
                for value, prob in zip(series.values, series.probs):
                    writer.writerow([scheme, _fmt(value), _fmt(prob)])

    manifest = {
        "code_version": __version__,
        "config": campaign.config_echo,
        "master_seed": campaign.spec.master_seed,
        "trials": campaign.spec.trials,
        "schemes": list(schemes),
        "failed_trials": [list(f) for f in campaign.failures],
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _scheme(result: TrialResult, scheme: str) -> SchemeResult:
    for scheme_result in result.schemes:
        if scheme_result.scheme == scheme:
            return scheme_result
    raise KeyError(f"trial {result.trial} has no scheme {scheme!r}")


def _fmt(x: float) -> str:
    """Shortest decimal string that round-trips to the same float64."""
    return repr(float(x))


class _open:
    """CSV writer context with fixed newline/encoding for byte-stable output."""

    def __init__(self, path: Path):
        self._handle = path.open("w", encoding="utf-8", newline="")

    def __enter__(self) -> csv.writer:
        return csv.writer(self._handle, lineterminator="\n")

    def __exit__(self, *exc) -> None:
        self._handle.close()


def _write_trace(rows: list, path: Path) -> None:
    with _open(path) as writer:
        writer.writerow(["l", "m", "iteration", "t_seconds", "nmse"])
        for l, m, iteration, t_s, nmse in rows:
            writer.writerow([l, m, iteration, _fmt(t_s), _fmt(nmse)])
