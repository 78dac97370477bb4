"""
A small phase-transition grid
=============================

Mean relative error over trials for each ``(n, k)`` cell, written as CSV and
as a greyscale PGM image (black = failure).
"""

import tempfile

from erspud.xphase import PhaseConfig, pgm_text, run_grid, summary_csv

out = tempfile.mkdtemp(prefix="phase_")
cfg = PhaseConfig(
    n_values=[6, 8, 10],
    k_values=[1, 2, 3, 4, 5, 6],
    trials=3,
    algorithm="dc",
    output_dir=out,
)
cells = run_grid(cfg, workers=2)

print(summary_csv(cells))
print(pgm_text(cells))
print("outputs written to", out)
