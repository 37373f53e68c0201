import json
import subprocess
import sys

import pytest

from qtopography.cli import main

UNIFORM_90 = {"delta": 0.1, "a": 0.5, "b": 1.5, "shape": "uniform"}
UNIFORM_95 = {"delta": 0.05, "a": 0.5, "b": 1.5, "shape": "uniform"}
ER_1000 = {"kind": "erdos_renyi", "n": 1000, "mean_degree": 6}


def _run(tmp_path, doc, *flags, name="run.json"):
    cfg = tmp_path / name
    cfg.write_text(json.dumps(doc))
    out = tmp_path / "out"
    return main(["--config", str(cfg), "--out", str(out), *flags]), out


def _gen_doc(**kw):
    return {"command": "generate", "seed": 5, "topology": ER_1000, "conc_dist": UNIFORM_90,
            "prob_dist": UNIFORM_95, **kw}


def test_generate(tmp_path, capsys):
    code, out = _run(tmp_path, _gen_doc())
    assert code == 0
    doc = json.loads((out / "network.json").read_text())
    assert doc["nodes"] == 1000 and doc["seed"] == 5
    assert doc["config"]["conc_dist"] == UNIFORM_90
    summary = capsys.readouterr().out.strip()
    assert summary.startswith("generate: 1000 nodes") and "\n" not in summary


def test_generate_is_reproducible_and_seed_flag_overrides(tmp_path):
    _, out = _run(tmp_path, _gen_doc())
    first = (out / "network.json").read_bytes()
    _, out = _run(tmp_path, _gen_doc())
    assert (out / "network.json").read_bytes() == first
    _, out = _run(tmp_path, _gen_doc(), "--seed", "6")
    doc = json.loads((out / "network.json").read_text())
    assert doc["seed"] == 6 and doc["config"]["seed"] == 6


@pytest.mark.parametrize(
    "doc, path",
    [
        (_gen_doc(conc_dist={"delta": 1.5}), "conc_dist.delta"),
        (_gen_doc(prob_dist={"delta": 0.1, "extra": 1}), "prob_dist.extra"),
        (_gen_doc(topology={"kind": "erdos_renyi", "n": 1}), "topology.n"),
        ({"command": "radii", "mean_conc": 0.9, "mean_prob": 0.9, "thresholds": {"c_star": 2, "p_star": 0.5}},
         "thresholds.c_star"),
        ({"command": "simulate", "topology": ER_1000, "conc_dist": UNIFORM_90, "prob_dist": UNIFORM_95,
          "sim": {"n_source_samples": 0}}, "sim.n_source_samples"),
        ({"command": "teleport"}, "command"),
    ],
)
def test_schema_violations_exit_2_with_field_path(tmp_path, capsys, doc, path):
    code, _ = _run(tmp_path, doc)
    assert code == 2
    assert path in capsys.readouterr().err


def test_inconsistent_distribution_is_a_config_error(tmp_path, capsys):
    code, _ = _run(tmp_path, _gen_doc(conc_dist={"delta": 0.1, "a": 0.5, "b": 1.0, "shape": "uniform"}))
    assert code == 2
    assert "conc_dist" in capsys.readouterr().err


def test_unreadable_and_malformed_config(tmp_path):
    assert main(["--config", str(tmp_path / "nope.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["--config", str(bad)]) == 2


def _radii_doc(**kw):
    return {"command": "radii", "mean_conc": 0.95, "mean_prob": 0.404, "qkd": {}, **kw}


def test_radii_headline(tmp_path, capsys):
    code, out = _run(tmp_path, _radii_doc(n_nodes=10**6, topology="erdos_renyi"))
    assert code == 0
    rep = json.loads((out / "radii.json").read_text())
    assert rep["exact_log"]["floored"]["r_star"] == 4
    assert rep["small_delta"]["real"]["r_star_p"] > 6
    assert rep["scaling_targets"]["mean_conc"] == pytest.approx(0.88, abs=0.005)
    assert rep["scaling_targets"]["mean_prob"] == pytest.approx(0.72, abs=0.005)
    assert rep["exact_log"]["real"]["r_tilde"] == rep["exact_log"]["real"]["r_star"]
    assert rep["config"]["mean_conc"] == 0.95
    assert "r_star=4" in capsys.readouterr().out


def test_radii_widths_and_warning(tmp_path, capsys):
    doc = _radii_doc(
        qkd={"eps_c": 0.3, "eps_p": 0.9},
        conc_dist=UNIFORM_95, prob_dist={"delta": 0.596, "a": 0.5, "b": 1.5, "shape": "uniform"},
        multipath_k=3,
    )
    code, out = _run(tmp_path, doc)
    assert code == 0
    rep = json.loads((out / "radii.json").read_text())
    assert "distribution_form_conc" not in rep["widths"]  # eps_c = 0.3 < 1 - 1/1.5
    assert "distribution_form_prob" in rep["widths"] and "mean_form_conc" in rep["widths"]
    assert len(rep["warnings"]) == 1 and "1 - 1/b" in rep["warnings"][0]
    assert 0 < rep["sgp_optimality_bound"] < 1
    assert rep["multipath"]["k"] == 3
    assert "warning" in capsys.readouterr().err


def test_radii_needs_exactly_one_task(tmp_path):
    doc = _radii_doc(thresholds={"c_star": 0.8, "p_star": 0.1})
    assert _run(tmp_path, doc)[0] == 2


@pytest.fixture
def network_file(tmp_path):
    _run(tmp_path, _gen_doc(topology={"kind": "erdos_renyi", "n": 400, "mean_degree": 6}), name="gen.json")
    return tmp_path / "out" / "network.json"


def _sim_doc(**kw):
    return {"command": "simulate", "seed": 2, "conc_dist": UNIFORM_90, "prob_dist": UNIFORM_95,
            "sim": {"n_source_samples": 10, "n_dest_samples": 20, "k_max": 3}, **kw}


def test_simulate_from_file(tmp_path, network_file, capsys):
    doc = _sim_doc(network_file=str(network_file), thresholds={"c_star": 0.6, "p_star": 0.5})
    cfg = tmp_path / "sim.json"
    cfg.write_text(json.dumps(doc))
    out = tmp_path / "sim_out"
    assert main(["--config", str(cfg), "--out", str(out)]) == 0
    lines = (out / "curves.csv").read_text().splitlines()
    assert lines[0] == "l,mean_conc,stderr_conc,mean_prob,stderr_prob,n_samples,mode"
    assert {ln.split(",")[-1] for ln in lines[1:]} == {"single", "multi"}
    rep = json.loads((out / "report.json").read_text())
    assert rep["master_seed"] == 2 and rep["config"]["network_file"] == str(network_file)
    assert {"analytic_conc", "conc_within_3se"} <= set(rep["analytic_overlay"][0])
    assert "viability" in rep
    assert capsys.readouterr().out.startswith("simulate:")


def test_simulate_inline_topology_and_formats(tmp_path):
    doc = _sim_doc(topology={"kind": "lattice", "rows": 8, "cols": 8})
    code, out = _run(tmp_path, doc, "--format", "csv")
    assert code == 0 and (out / "curves.csv").exists() and not (out / "report.json").exists()
    code, out2 = _run(tmp_path, doc, "--format", "json", name="b.json")
    assert code == 0 and (out2 / "report.json").exists()


def test_simulate_single_mode_only_for_k1(tmp_path):
    doc = _sim_doc(topology={"kind": "lattice", "rows": 5, "cols": 5},
                   sim={"n_source_samples": 5, "n_dest_samples": 5})
    _, out = _run(tmp_path, doc)
    assert {ln.split(",")[-1] for ln in (out / "curves.csv").read_text().splitlines()[1:]} == {"single"}


def test_simulate_missing_network_exits_1(tmp_path, capsys):
    code, _ = _run(tmp_path, _sim_doc(network_file=str(tmp_path / "missing.json")))
    assert code == 1
    assert "missing.json" in capsys.readouterr().err


def test_simulate_is_reproducible(tmp_path):
    doc = _sim_doc(topology={"kind": "scale_free", "n": 300, "m": 2})
    _, out = _run(tmp_path, doc)
    first = (out / "curves.csv").read_bytes()
    _, out = _run(tmp_path, {**doc, "workers": 2})
    assert (out / "curves.csv").read_bytes() == first


@pytest.mark.parametrize(
    "model, viable, connected",
    [({}, True, True), ({"n_p": 1000.0}, False, True), ({"N": 100}, False, False)],
)
def test_internet(tmp_path, capsys, model, viable, connected):
    code, out = _run(tmp_path, {"command": "internet", "model": model})
    assert code == 0
    rep = json.loads((out / "internet.json").read_text())
    assert rep["viable"] is viable and rep["connected"] is connected
    assert rep["config"]["model"]["R"] == 1000.0
    captured = capsys.readouterr()
    assert f"viable={str(viable).lower()}" in captured.out
    assert "warning" in captured.err


def test_internet_no_key_is_a_config_error(tmp_path, capsys):
    code, _ = _run(tmp_path, {"command": "internet", "qkd": {"conc": 0.7}})
    assert code == 2
    assert "qkd.conc" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    cfg = tmp_path / "i.json"
    cfg.write_text(json.dumps({"command": "internet"}))
    res = subprocess.run([sys.executable, "-m", "qtopography", "--config", str(cfg), "--out", str(tmp_path)],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.count("\n") == 1
