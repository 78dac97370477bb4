import json
import math

import numpy as np
import pytest

from erspud import cli, xphase
from erspud.errors import ConfigError, RankDeficiencyError
from erspud.pipelines import CandidateSet, greedy_select
from erspud.xphase import (
    PhaseCell,
    PhaseConfig,
    num_samples,
    pgm_pixel,
    pgm_text,
    run_grid,
    run_trial,
)


def cell(n, k, err):
    return PhaseCell.from_errors(n, k, [err], 1e-4)


def test_num_samples():
    assert num_samples(20) == 300
    assert num_samples(8) == 84
    assert num_samples(10) == math.ceil(50 * math.log(10))


def test_pgm_pixels():
    assert pgm_pixel(0.0) == 0
    assert pgm_pixel(1.0) == 255 and pgm_pixel(7.0) == 255
    assert pgm_pixel(0.5) == 128


def test_pgm_layout():
    cells = [cell(10, 1, 0.0), cell(10, 2, 1.0), cell(20, 1, 0.0), cell(20, 2, 0.5)]
    assert pgm_text(cells) == "P2\n2 2\n255\n255 128\n0 0\n"
    assert pgm_text([cell(3, 1, 0.0)]).splitlines()[-1] == "0"


def test_pgm_ragged():
    with pytest.raises(ConfigError):
        pgm_text([cell(10, 1, 0.0), cell(10, 2, 0.0), cell(20, 1, 0.0)])


def test_phase_cell_summary():
    c = PhaseCell.from_errors(5, 1, [0.0, 1e-3, 2e-5, 1.0], 1e-4)
    assert c.mean_error == pytest.approx((1e-3 + 2e-5 + 1.0) / 4)
    assert c.success_rate == 0.5


@pytest.mark.parametrize("bad", [
    {"n_values": [], "k_values": [1]},
    {"n_values": [1], "k_values": [1]},
    {"n_values": [4], "k_values": [5]},
    {"n_values": [4], "k_values": [1], "trials": 0},
    {"n_values": [4], "k_values": [1], "algorithm": "ksvd"},
    {"n_values": [4], "k_values": [1], "bogus": 1},
])
def test_config_validation(bad):
    with pytest.raises(ConfigError):
        PhaseConfig.from_dict(bad)


def test_run_trial_success_small():
    assert run_trial(2, 1, 20, "dc", trial_seed=0) < 1e-6


def test_run_trial_dense_two_by_two_is_not_identifiable():
    # with k = n = 2 the rows of X are dense, while the row space contains
    # vectors with a zero entry, so the sparsest vectors are not rows of X
    assert run_trial(2, 2, 20, "dc", trial_seed=0) > 1e-6


def test_failure_path_scores_one(monkeypatch):
    def empty_recover(Y, *a, **kw):
        return greedy_select(CandidateSet.empty(Y.shape[0], Y.shape[1]), Y.shape[0])

    monkeypatch.setattr(xphase, "recover", empty_recover)
    with pytest.raises(RankDeficiencyError):
        empty_recover(np.eye(2))
    assert run_trial(4, 1, 30, "sc", trial_seed=1) == 1.0


def test_grid_single_cell(tmp_path):
    cfg = PhaseConfig(n_values=[4], k_values=[1], trials=1, algorithm="sc", output_dir=str(tmp_path))
    cells = run_grid(cfg)
    assert len(cells) == 1 and len(cells[0].errors) == 1
    assert {p.name for p in tmp_path.iterdir()} == {"grid.csv", "summary.csv", "phase.pgm", "meta.json"}
    meta = json.loads((tmp_path / "meta.json").read_text())
    assert meta["config"]["n_values"] == [4] and "wall_time_s" in meta
    assert (tmp_path / "grid.csv").read_text().splitlines()[0] == "n,k,trial,rel_error"


def test_grid_independent_of_workers():
    cfg = PhaseConfig(n_values=[4, 5], k_values=[1, 2], trials=2, algorithm="dc")
    a = run_grid(cfg, workers=1)
    b = run_grid(cfg, workers=2)
    assert xphase.grid_csv(a) == xphase.grid_csv(b)
    assert all(np.isfinite(e) and e >= 0 for c in a for e in c.errors)


def write_cfg(tmp_path, **kw):
    d = {"n_values": [4], "k_values": [1], "trials": 1, "algorithm": "sc"}
    d.update(kw)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(d))
    return str(path)


def test_cli_run(tmp_path, capsys):
    assert cli.main(["run", "--config", write_cfg(tmp_path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out[0]["n"] == 4 and out[0]["success"] and len(out[0]["match"]["assignment"]) == 4


def test_cli_phase(tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert cli.main(["phase", "--config", write_cfg(tmp_path), "--output-dir", str(out_dir)]) == 0
    assert capsys.readouterr().out.startswith("n,k,mean_error,success_rate\n4,1,")
    assert (out_dir / "phase.pgm").read_text().startswith("P2\n1 1\n255\n")


def test_cli_theory(capsys):
    rc = cli.main(["theory", "--check", "row_l1_concentration", "--param", "n=10", "--param", "p=500",
                   "--param", "theta=0.2", "--param", "delta=0.9", "--param", "seed=0"])
    rep = json.loads(capsys.readouterr().out)
    assert rc == 0 and rep["pass"] and rep["name"] == "row_l1_concentration"
    rc = cli.main(["theory", "--check", "avg_lower_bound", "--param", "n=4", "--param", "theta=0.5",
                   "--param", "v=[1,0,0,0]", "--param", "samples=2000", "--param", "seed=1"])
    assert rc == 0 and json.loads(capsys.readouterr().out)["pass"]


def test_cli_errors(capsys):
    assert cli.main(["theory", "--check", "gap_statistics", "--param", "d=5", "--param", "n=3"]) == 2
    assert "error" in capsys.readouterr().err
