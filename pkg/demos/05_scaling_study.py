"""How the optimized square-pulse fidelity scales with ion number.

Doubles the ion count from 2 up to 64 (pass --full to extend through 128
plus 300), optimizing the detuning at each size, then fits power laws to
the achieved fidelity and to the optimal detuning.  The fidelity decays
with a tiny exponent near -0.04, staying above 0.8 even for hundreds of
ions; the optimal detuning falls off much faster.
"""

import math
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dickeladder import scaling_study

TWO_PI = 2 * math.pi
chi = TWO_PI * 3.0

full = "--full" in sys.argv[1:]
counts = [2, 4, 8, 16, 32, 64]
if full:
    counts += [128, 300]

study = scaling_study(counts, chi=chi)
for r in study.results:
    print(f"{r.n_ions:4d} ions: F = {r.best_fidelity:.4f}, "
          f"delta_opt/chi = {r.delta_opt / chi:.4f}, t_peak = {r.time_of_peak:.3f} ms")
fit_f, fit_d = study.fidelity_fit, study.delta_opt_fit
print(f"fidelity  ~ {fit_f.coefficient:.4f} * N^{fit_f.exponent:+.4f}")
print(f"delta_opt ~ {fit_d.coefficient / chi:.4f} chi * N^{fit_d.exponent:+.4f}")

n = np.array([r.n_ions for r in study.results], dtype=float)
fig, (axf, axd) = plt.subplots(1, 2, figsize=(10, 4))
axf.loglog(n, [r.best_fidelity for r in study.results], "o")
axf.loglog(n, fit_f.coefficient * n**fit_f.exponent, "-", lw=1,
           label=f"fit exponent {fit_f.exponent:+.3f}")
axf.set_xlabel("number of ions")
axf.set_ylabel("optimized peak fidelity")
axf.legend()
axd.loglog(n, [r.delta_opt / chi for r in study.results], "s", color="C1")
axd.loglog(n, fit_d.coefficient / chi * n**fit_d.exponent, "-", lw=1, color="C1",
           label=f"fit exponent {fit_d.exponent:+.3f}")
axd.set_xlabel("number of ions")
axd.set_ylabel("delta_opt / chi")
axd.legend()
fig.tight_layout()
fig.savefig("demos/output/scaling_study.png", dpi=150)
print("wrote demos/output/scaling_study.png")
