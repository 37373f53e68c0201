"""Command-line front end.

Each run reads one JSON document whose ``command`` key selects the analysis::

    qtopography --config run.json [--seed N] [--out DIR] [--format csv|json|both]

Exit codes: 0 on success, 1 for unreadable input files, 2 for invalid
configurations.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError, model_validator

from . import analytics, network, photonic, simulation
from .analytics import Mode, TaskThresholds

EXIT_OK, EXIT_IO, EXIT_CONFIG = 0, 1, 2


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class DistributionSpec(_Strict):
    delta: float = Field(ge=0.0, le=1.0)
    a: float = Field(1.0, ge=0.0, le=1.0)
    b: float = Field(1.0, ge=1.0)
    shape: Literal["uniform", "point"] = "point"

    @model_validator(mode="after")
    def _consistent(self):
        self.build()  # raises ConfigError (a ValueError) on inconsistent a, b, shape
        return self

    def build(self) -> network.ParamDistribution:
        return network.ParamDistribution(self.delta, self.a, self.b, self.shape)


class ErdosRenyiSpec(_Strict):
    kind: Literal["erdos_renyi"]
    n: int = Field(ge=2)
    mean_degree: float = Field(gt=0.0)
    largest_component: bool = False

    def build(self, seed: int) -> network.QuantumNetwork:
        return network.build_erdos_renyi(self.n, self.mean_degree, seed, self.largest_component)


class ScaleFreeSpec(_Strict):
    kind: Literal["scale_free"]
    n: int = Field(ge=2)
    m: int = Field(ge=1)

    def build(self, seed: int) -> network.QuantumNetwork:
        return network.build_scale_free(self.n, self.m, seed)


class SoftRGGSpec(_Strict):
    kind: Literal["soft_rgg"]
    n: int = Field(ge=2)
    R: float = Field(gt=0.0)
    alpha: float | None = Field(None, gt=0.0)
    gamma: float = Field(0.2, gt=0.0)
    n_p: float = Field(1e6, gt=0.0)
    beta: float = Field(1.0, gt=0.0, le=1.0)
    largest_component: bool = False

    def build(self, seed: int) -> network.QuantumNetwork:
        return network.build_soft_rgg(
            self.n, self.R, self.alpha, self.gamma, self.n_p, seed, self.beta, self.largest_component
        )


class LatticeSpec(_Strict):
    kind: Literal["lattice"]
    rows: int = Field(ge=1)
    cols: int = Field(ge=1)

    def build(self, seed: int) -> network.QuantumNetwork:
        return network.build_lattice(self.rows, self.cols)


TopologySpec = Annotated[
    Union[ErdosRenyiSpec, ScaleFreeSpec, SoftRGGSpec, LatticeSpec], Field(discriminator="kind")
]


class ThresholdSpec(_Strict):
    c_star: float = Field(ge=0.0, le=1.0)
    p_star: float = Field(gt=0.0, le=1.0)
    xi: float = Field(analytics.XI_DEFAULT, gt=0.0, le=1.0)
    eps_c: float = Field(1.0, ge=0.0, le=1.0)
    eps_p: float = Field(1.0, ge=0.0, le=1.0)

    def build(self) -> TaskThresholds:
        return TaskThresholds(self.c_star, self.p_star, self.xi, self.eps_c, self.eps_p)


class QKDSpec(_Strict):
    r_sec: float = Field(1e3, gt=0.0)
    r_eps: float = Field(1e6, gt=0.0)
    conc: float = Field(0.8, gt=0.0, le=1.0)
    xi: float = Field(analytics.XI_DEFAULT, gt=0.0, le=1.0)
    eps_c: float = Field(1.0, ge=0.0, le=1.0)
    eps_p: float = Field(1.0, ge=0.0, le=1.0)

    def build(self) -> TaskThresholds:
        p = photonic.qkd_min_probability(self.r_sec, self.r_eps, self.conc)
        return TaskThresholds(self.conc, p, self.xi, self.eps_c, self.eps_p)


class GenerateConfig(_Strict):
    command: Literal["generate"]
    seed: int = Field(0, ge=0)
    topology: TopologySpec
    conc_dist: DistributionSpec
    prob_dist: DistributionSpec


class RadiiConfig(_Strict):
    command: Literal["radii"]
    seed: int = Field(0, ge=0)
    mean_conc: float = Field(ge=0.0, le=1.0)
    mean_prob: float = Field(gt=0.0, le=1.0)
    thresholds: ThresholdSpec | None = None
    qkd: QKDSpec | None = None
    conc_dist: DistributionSpec | None = None
    prob_dist: DistributionSpec | None = None
    n_nodes: int | None = Field(None, ge=3)
    topology: Literal["erdos_renyi", "scale_free"] | None = None
    multipath_k: int = Field(1, ge=1)

    @model_validator(mode="after")
    def _one_task(self):
        if (self.thresholds is None) == (self.qkd is None):
            raise ValueError("give exactly one of 'thresholds' or 'qkd'")
        if (self.n_nodes is None) != (self.topology is None):
            raise ValueError("'n_nodes' and 'topology' go together")
        return self


class SimSpec(_Strict):
    n_source_samples: int = Field(100, ge=1)
    n_dest_samples: int = Field(100, ge=1)
    k_max: int = Field(1, ge=1)
    improve_only: bool = True
    l_max: int = Field(1000, ge=1)
    resample_edges: bool = True


class SimulateConfig(_Strict):
    command: Literal["simulate"]
    seed: int = Field(0, ge=0)
    network_file: str | None = None
    topology: TopologySpec | None = None
    conc_dist: DistributionSpec
    prob_dist: DistributionSpec
    sim: SimSpec = SimSpec()
    workers: int = Field(1, ge=1)
    thresholds: ThresholdSpec | None = None

    @model_validator(mode="after")
    def _one_source(self):
        if (self.network_file is None) == (self.topology is None):
            raise ValueError("give exactly one of 'network_file' or 'topology'")
        return self


class ModelSpec(_Strict):
    R: float = Field(1000.0, gt=0.0)
    N: int = Field(1500, ge=1)
    two_alpha_R: float = Field(226.0, gt=0.0)
    beta: float = Field(1.0, gt=0.0, le=1.0)
    gamma: float = Field(0.2, gt=0.0)
    n_p: float = Field(1e6, gt=0.0)
    b_coeff: float = Field(5e-5, ge=0.0)
    rho_c: float = Field(6.82e-5, gt=0.0)
    step_cutoff_km: float | None = Field(None, gt=0.0)


class InternetConfig(_Strict):
    command: Literal["internet"]
    seed: int = Field(0, ge=0)
    model: ModelSpec = ModelSpec()
    target_mean_conc: float = Field(0.95, gt=0.0, le=1.0)
    qkd: QKDSpec = QKDSpec()


RunConfig = Annotated[
    Union[GenerateConfig, RadiiConfig, SimulateConfig, InternetConfig], Field(discriminator="command")
]
_ADAPTER = TypeAdapter(RunConfig)


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _field_path(loc: tuple) -> str:
    # drop the union tags pydantic inserts for discriminated unions
    tags = {"generate", "radii", "simulate", "internet", "erdos_renyi", "scale_free", "soft_rgg", "lattice"}
    parts = [str(p) for i, p in enumerate(loc) if not (p in tags and i in (0, 2))]
    return ".".join(parts) or "<root>"


def parse_config(doc: dict, seed: int | None = None):
    """Validate a config document; ``seed`` overrides the document's seed."""
    if seed is not None:
        if not isinstance(doc, dict):
            raise CLIError("config: top level must be a JSON object", EXIT_CONFIG)
        doc = {**doc, "seed": seed}
    try:
        return _ADAPTER.validate_python(doc)
    except ValidationError as exc:
        lines = [f"{_field_path(e['loc'])}: {e['msg']}" for e in exc.errors()]
        raise CLIError("invalid config\n  " + "\n  ".join(lines), EXIT_CONFIG) from None


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x) if math.isfinite(x) else None  # JSON has no infinity
    if hasattr(x, "value") and isinstance(getattr(x, "value"), str):
        return x.value
    return x


def _dump(path: Path, obj) -> None:
    path.write_text(json.dumps(_jsonable(obj), indent=2) + "\n")


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


def _domain(fn, *args):
    """Run a builder, turning library validation errors into exit code 2."""
    try:
        return fn(*args)
    except ValueError as exc:
        raise CLIError(f"invalid config: {exc}", EXIT_CONFIG) from None


# -- commands ----------------------------------------------------------------


def cmd_generate(cfg: GenerateConfig, out: Path, fmt: str) -> str:
    conc, prob = _domain(cfg.conc_dist.build), _domain(cfg.prob_dist.build)
    net = _domain(cfg.topology.build, cfg.seed)
    net = _domain(network.assign_edge_states, net, conc, prob, np.random.default_rng([cfg.seed, 1]))
    doc = net.to_json_dict()
    doc["config"] = cfg.model_dump(mode="json")
    _dump(out / "network.json", doc)
    return (
        f"generate: {net.node_count} nodes, {net.edge_count} edges, mean degree {net.mean_degree:.3f}, "
        f"mean concurrence {float(np.mean(net.edge_concurrence)):.4f}, "
        f"mean probability {float(np.mean(net.edge_p)):.4f}, seed {cfg.seed}"
    )


def cmd_radii(cfg: RadiiConfig, out: Path, fmt: str) -> str:
    try:
        t = cfg.thresholds.build() if cfg.thresholds else cfg.qkd.build()
    except ValueError as exc:
        raise CLIError(f"invalid config: {exc}", EXIT_CONFIG) from None
    report: dict = {"config": cfg.model_dump(mode="json"), "thresholds": asdict(t), "warnings": []}
    for mode in (Mode.SMALL_DELTA, Mode.EXACT_LOG):
        report[mode.value] = {
            policy: analytics.radii_report(t, cfg.mean_conc, cfg.mean_prob, mode, policy).to_dict()
            for policy in ("real", "floored")
        }
    widths: dict = {}
    if t.eps_c < 1.0:
        widths["mean_form_conc"] = analytics.mvr_width_mean_form(t, cfg.mean_conc, t.eps_c)
    rc, rp, _ = analytics.tvr_radius(t, cfg.mean_conc, cfg.mean_prob, Mode.EXACT_LOG)
    for name, dist, r, eps in (("conc", cfg.conc_dist, rc, t.eps_c), ("prob", cfg.prob_dist, rp, t.eps_p)):
        if dist is None:
            continue
        try:
            widths[f"distribution_form_{name}"] = analytics.mvr_width_distribution_form(r, eps, dist.a, dist.b)
        except ValueError as exc:
            report["warnings"].append(f"distribution-form width ({name}) omitted: {exc}")
    report["widths"] = widths
    if cfg.conc_dist and cfg.prob_dist:
        _, _, r_star = analytics.tvr_radius(t, cfg.mean_conc, cfg.mean_prob, Mode.EXACT_LOG, "floored")
        report["sgp_optimality_bound"] = analytics.sgp_optimality_bound(
            r_star, cfg.conc_dist.a, cfg.conc_dist.b, cfg.prob_dist.a, cfg.prob_dist.b
        )
    if cfg.n_nodes is not None:
        c, p = analytics.scaling_targets(cfg.n_nodes, cfg.topology, t.xi)
        report["scaling_targets"] = {"mean_conc": c, "mean_prob": p}
    if cfg.multipath_k > 1:
        mc, mp, kb = analytics.multipath_estimates(
            1.0 - cfg.mean_conc, 1.0 - cfg.mean_prob, cfg.multipath_k, t
        )
        report["multipath"] = {"k": cfg.multipath_k, "r_c": mc, "r_p": mp, "k_beneficial_max": kb}
    for w in report["warnings"]:
        _warn(w)
    _dump(out / "radii.json", report)
    floored = report["exact_log"]["floored"]
    return (
        f"radii: r_star={floored['r_star']:g} (exact_log, floored; "
        f"r_star_c={floored['r_star_c']:g}, r_star_p={floored['r_star_p']:g}), "
        f"r_tilde={floored['r_tilde']:g}"
    )


def _load_network(path: str) -> network.QuantumNetwork:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CLIError(f"cannot read network file {path}: {exc.strerror}", EXIT_IO) from None
    try:
        return network.QuantumNetwork.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise CLIError(f"cannot parse network file {path}: {exc}", EXIT_IO) from None


def cmd_simulate(cfg: SimulateConfig, out: Path, fmt: str) -> str:
    conc, prob = _domain(cfg.conc_dist.build), _domain(cfg.prob_dist.build)
    if cfg.network_file is not None:
        net = _load_network(cfg.network_file)
    else:
        net = _domain(cfg.topology.build, cfg.seed)
    s = cfg.sim
    if s.resample_edges:
        sim_cfg = simulation.SimConfig(
            s.n_source_samples, s.n_dest_samples, s.k_max, s.improve_only, cfg.seed, s.l_max, conc, prob
        )
    else:
        if cfg.topology is not None:
            net = _domain(network.assign_edge_states, net, conc, prob, np.random.default_rng([cfg.seed, 1]))
        sim_cfg = simulation.SimConfig(
            s.n_source_samples, s.n_dest_samples, s.k_max, s.improve_only, cfg.seed, s.l_max
        )
    camp = simulation.run_campaign(net, sim_cfg, cfg.workers)
    modes = ("single", "multi") if s.k_max >= 2 else ("single",)
    if fmt in ("csv", "both"):
        (out / "curves.csv").write_text(simulation.curves_csv(camp, modes))
    single = camp.curve("single")
    if fmt in ("json", "both"):
        report = {
            "config": cfg.model_dump(mode="json"),
            "master_seed": cfg.seed,
            "unreachable": camp.unreachable,
            "beyond_l_max": camp.beyond_l_max,
            "curves": {m: [asdict(p) for p in camp.curve(m)] for m in modes},
            "analytic_overlay": simulation.analytic_overlay(single, conc.mean, prob.mean),
        }
        if cfg.thresholds is not None:
            v = simulation.viability_from_campaign(camp, _domain(cfg.thresholds.build))
            report["viability"] = asdict(v)
        _dump(out / "report.json", report)
    if camp.unreachable:
        _warn(f"{camp.unreachable} sampled pairs were disconnected and skipped")
    if camp.beyond_l_max:
        _warn(f"{camp.beyond_l_max} sampled pairs beyond l_max were discarded")
    return (
        f"simulate: {len(camp.samples)} paths over l=1..{single[-1].l if single else 0}, "
        f"modes {','.join(modes)}, seed {cfg.seed}"
    )


def cmd_internet(cfg: InternetConfig, out: Path, fmt: str) -> str:
    model = _domain(lambda: photonic.InternetModel(**cfg.model.model_dump()))
    try:
        t = cfg.qkd.build()
    except photonic.NoKeyError as exc:
        raise CLIError(f"invalid config: qkd.conc: {exc}", EXIT_CONFIG) from None
    except ValueError as exc:
        raise CLIError(f"invalid config: {exc}", EXIT_CONFIG) from None
    verdict = photonic.viability_verdict(model, t, cfg.target_mean_conc)
    doc = verdict.to_dict()
    doc["config"] = cfg.model_dump(mode="json")
    for note in verdict.notes:
        _warn(note)
    _dump(out / "internet.json", doc)
    return (
        f"internet: viable={str(verdict.viable).lower()} (r_star={verdict.r_star:.3f}, "
        f"<l>={verdict.avg_graph_distance:.3f}, mean edge probability {verdict.mean_edge_probability:.4f}, "
        f"connected={str(verdict.connected).lower()})"
    )


_COMMANDS = {
    "generate": cmd_generate,
    "radii": cmd_radii,
    "simulate": cmd_simulate,
    "internet": cmd_internet,
}


def run(config_path: str, seed: int | None = None, out: str = ".", fmt: str = "both") -> str:
    """Execute one configured run and return the one-line summary."""
    try:
        text = Path(config_path).read_text()
    except OSError as exc:
        raise CLIError(f"cannot read config {config_path}: {exc.strerror}", EXIT_IO) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CLIError(f"config is not valid JSON: {exc}", EXIT_CONFIG) from None
    cfg = parse_config(doc, seed)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt == "csv" and cfg.command != "simulate":
        _warn(f"'{cfg.command}' writes JSON only; ignoring --format csv")
    return _COMMANDS[cfg.command](cfg, out_dir, fmt)


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="qtopography", description=__doc__.splitlines()[0])
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--seed", type=_u64, default=None, help="overrides the config's seed")
    ap.add_argument("--out", default=".", help="output directory")
    ap.add_argument("--format", choices=("csv", "json", "both"), default="both")
    args = ap.parse_args(argv)
    try:
        summary = run(args.config, args.seed, args.out, args.format)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    print(summary)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
