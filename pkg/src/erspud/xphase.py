"""Phase-transition experiments over an (n, k) grid.

Each trial draws a dictionary ``A`` and a fixed-k coefficient matrix ``X``,
runs one recovery pipeline on ``Y = A X`` and scores the result with the
permutation-scale relative error.  Every random draw is derived from
``(master_seed, n, k, trial)`` so results do not depend on execution order or
on the number of worker processes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .densela import rank_with_tol
from .dictmetrics import rel_error
from .errors import ConfigError, DataGenerationError, ErspudError
from .pipelines import METHODS, recover
from .randmodel import DICT_KINDS, VALUE_DISTS, CoeffModel, DictModel, derive_seed, gen_coeffs, gen_dict

MAX_RANK_ATTEMPTS = 10

# sub-stream tags under a trial seed
TAG_DICT, TAG_COEFF, TAG_PAIR = 1, 2, 3


@dataclass
class PhaseConfig:
    n_values: list
    k_values: list
    trials: int = 10
    p_rule: float = 5.0
    algorithm: str = "proj"
    dict_kind: str = "gaussian_iid"
    precondition: bool = True
    master_seed: int = 0
    success_threshold: float = 1e-4
    output_dir: str | None = None
    value_dist: str = "gaussian"
    cols_per_round: int | None = None

    def __post_init__(self):
        self.n_values = [int(n) for n in self.n_values]
        self.k_values = [int(k) for k in self.k_values]
        if not self.n_values or not self.k_values:
            raise ConfigError("n_values and k_values must be non-empty")
        if min(self.n_values) < 2:
            raise ConfigError("every n must be at least 2")
        if max(self.k_values) > min(self.n_values) or min(self.k_values) < 1:
            raise ConfigError("every k must lie in [1, min(n_values)]")
        if self.trials < 1:
            raise ConfigError("trials must be at least 1")
        if self.algorithm not in METHODS:
            raise ConfigError(f"algorithm must be one of {METHODS}")
        if self.dict_kind not in DICT_KINDS:
            raise ConfigError(f"dict_kind must be one of {DICT_KINDS}")
        if self.value_dist not in VALUE_DISTS:
            raise ConfigError(f"value_dist must be one of {VALUE_DISTS}")

    def p_for(self, n: int) -> int:
        return num_samples(n, self.p_rule)

    @classmethod
    def from_dict(cls, d: dict) -> "PhaseConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, path) -> "PhaseConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class PhaseCell:
    n: int
    k: int
    errors: list = field(default_factory=list)
    mean_error: float = 0.0
    success_rate: float = 0.0

    @classmethod
    def from_errors(cls, n, k, errors, threshold) -> "PhaseCell":
        errs = [float(e) for e in errors]
        return cls(
            n=n,
            k=k,
            errors=errs,
            mean_error=float(np.mean(errs)),
            success_rate=float(np.mean([e < threshold for e in errs])),
        )


def num_samples(n: int, multiplier: float = 5.0) -> int:
    """``ceil(multiplier * n * ln n)``."""
    return int(math.ceil(multiplier * n * math.log(n)))


def generate_instance(n, k, p, dict_kind, trial_seed, value_dist="gaussian"):
    """Draw ``(A, X)``; ``X`` is redrawn until it has full row rank."""
    A = gen_dict(DictModel(n, dict_kind, seed=derive_seed(trial_seed, [TAG_DICT])))
    for attempt in range(MAX_RANK_ATTEMPTS):
        model = CoeffModel(n, p, k=k, dist=value_dist, seed=derive_seed(trial_seed, [TAG_COEFF, attempt]))
        X = gen_coeffs(model)
        if rank_with_tol(X) == n:
            return A, X
    raise DataGenerationError(
        f"no full-rank X after {MAX_RANK_ATTEMPTS} draws (n={n}, k={k}, p={p})"
    )


def score(A_hat, A) -> float:
    return rel_error(A_hat, A).rel_error


def run_trial(n, k, p, algorithm, dict_kind="gaussian_iid", precondition=True, trial_seed=0,
              *, value_dist="gaussian", cols_per_round=None, return_details=False):
    """Relative dictionary error of one seeded trial.

    A pipeline failure (too few independent candidates, singular
    reconstruction) scores 1.0, the error of an all-zero estimate.
    """
    A, X = generate_instance(n, k, p, dict_kind, trial_seed, value_dist)
    Y = A @ X
    try:
        res = recover(
            Y,
            algorithm,
            precondition_data=precondition,
            pair_seed=derive_seed(trial_seed, [TAG_PAIR]),
            cols_per_round=cols_per_round,
        )
        err = score(res.A_hat, A)
    except ErspudError:
        res = None
        err = score(np.zeros_like(A), A)
    if not np.isfinite(err):
        err = 1.0
    if return_details:
        return err, {"A": A, "X": X, "Y": Y, "result": res}
    return err


def trial_seed_for(master: int, n: int, k: int, trial: int) -> int:
    return derive_seed(master, [n, k, trial])


def _trial_job(args):
    cfg, n, k, t = args
    return run_trial(
        n, k, cfg.p_for(n), cfg.algorithm, cfg.dict_kind, cfg.precondition,
        trial_seed_for(cfg.master_seed, n, k, t),
        value_dist=cfg.value_dist, cols_per_round=cfg.cols_per_round,
    )


def run_grid(cfg: PhaseConfig, workers: int = 1, write: bool = True):
    """Run every ``(n, k, trial)`` of the grid and return the cells.

    Cells are ordered by ``n`` then ``k`` as listed in the config.  With
    ``write`` and a configured ``output_dir`` the CSV/PGM/JSON outputs are
    written there.
    """
    start = time.time()
    jobs = [(cfg, n, k, t) for n in cfg.n_values for k in cfg.k_values for t in range(cfg.trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            errors = list(pool.map(_trial_job, jobs))
    else:
        errors = [_trial_job(j) for j in jobs]
    cells = []
    it = iter(errors)
    for n in cfg.n_values:
        for k in cfg.k_values:
            errs = [next(it) for _ in range(cfg.trials)]
            cells.append(PhaseCell.from_errors(n, k, errs, cfg.success_threshold))
    if write and cfg.output_dir:
        write_outputs(cfg, cells, wall_time=time.time() - start)
    return cells


def grid_csv(cells) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "trial", "rel_error"])
    for c in cells:
        for t, e in enumerate(c.errors):
            w.writerow([c.n, c.k, t, "%.10e" % e])
    return buf.getvalue()


def summary_csv(cells) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "mean_error", "success_rate"])
    for c in cells:
        w.writerow([c.n, c.k, "%.10e" % c.mean_error, "%.10e" % c.success_rate])
    return buf.getvalue()


def pgm_pixel(err: float) -> int:
    """Grey level of a mean error: ``round(255 * min(err, 1))``, halves rounded up."""
    return int(math.floor(255.0 * min(max(err, 0.0), 1.0) + 0.5))


def pgm_text(cells) -> str:
    """ASCII PGM (P2): ``n`` increases left to right, ``k`` bottom to top."""
    ns = sorted({c.n for c in cells})
    ks = sorted({c.k for c in cells})
    table = {}
    for c in cells:
        if (c.n, c.k) in table:
            raise ConfigError(f"duplicate cell n={c.n}, k={c.k}")
        table[(c.n, c.k)] = c
    if len(table) != len(ns) * len(ks):
        raise ConfigError("cells do not form a rectangular grid")
    lines = ["P2", f"{len(ns)} {len(ks)}", "255"]
    for k in reversed(ks):
        lines.append(" ".join(str(pgm_pixel(table[(n, k)].mean_error)) for n in ns))
    return "\n".join(lines) + "\n"


def emit_pgm(cells, path) -> None:
    text = pgm_text(cells)
    with open(path, "w") as fh:
        fh.write(text)


def write_outputs(cfg: PhaseConfig, cells, wall_time: float = 0.0) -> None:
    out = cfg.output_dir
    os.makedirs(out, exist_ok=True)
    try:
        with open(os.path.join(out, "grid.csv"), "w") as fh:
            fh.write(grid_csv(cells))
        with open(os.path.join(out, "summary.csv"), "w") as fh:
            fh.write(summary_csv(cells))
        emit_pgm(cells, os.path.join(out, "phase.pgm"))
        meta = {"config": asdict(cfg), "version": __version__, "wall_time_s": wall_time}
        with open(os.path.join(out, "meta.json"), "w") as fh:
            json.dump(meta, fh, indent=2)
    except OSError as exc:
        raise OSError(f"writing grid outputs to {out!r} failed: {exc}") from exc
