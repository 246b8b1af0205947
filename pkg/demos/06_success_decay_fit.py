"""Fit the exponential success-decay model P_delta = P_0 (1 - c)^(n-1) to a
noisy sweep and compare the fitted per-ancilla rate c against the
odd-inversion prediction 3 delta (1-delta)^2 + delta^3.

Run: python demos/06_success_decay_fit.py   (a few minutes)
"""

import json
import warnings

from rotbench.experiment import (ExperimentConfig, fit_exponential,
                                 plot_data, predicted_c, run_experiment)

cfg = ExperimentConfig(n_list=(4, 5, 6, 7), delta_list=(0.01, 0.05),
                       shots=20_000, seed=13)
with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    rows = run_experiment(cfg)

fits = []
for delta in cfg.delta_list:
    fit = fit_exponential(rows, delta)
    fits.append(fit)
    print(f"delta={delta}: fitted c = {fit.c_delta:.5f}  "
          f"(prediction {predicted_c(delta):.5f}), R^2 = {fit.r_squared:.4f}")

data = plot_data(rows, fits)
with open("success_decay.json", "w") as fh:
    json.dump(data, fh, indent=2)
print("\nwrote success_decay.json (x/y series for plotting: measured "
      "probabilities per delta plus the fitted model curves)")
