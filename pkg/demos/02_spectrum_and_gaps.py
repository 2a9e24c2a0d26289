"""Eigenvalue curves of the 16-ion ladder along the detuning axis.

The initial all-auxiliary state rides the top adiabatic curve: for a
strongly negative detuning (with the interaction off) it is the highest
state, and at the positive end the target Dicke state is.  The curves
never cross (the ladder matrix is an irreducible Jacobi matrix), and the
top and bottom gaps are asymmetric because the diagonal is nonlinear in
the pair index: sweeping up the top curve is easier than sweeping down
the bottom one.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dickeladder import EffectiveParams, min_gap, spectrum_scan

TWO_PI = 2 * math.pi
chi = TWO_PI * 3.0  # rad/ms
params = EffectiveParams.from_chi(8, chi=chi)  # 16 ions

grid = np.linspace(-TWO_PI * 28, TWO_PI * 112, 561)
spectrum = spectrum_scan(params, grid)

top = min_gap(spectrum, which="highest")
bottom = min_gap(spectrum, which="lowest")
print(f"top-curve minimal gap    {top.gap / chi:7.4f} * chi at {top.delta_at_min / TWO_PI:+7.2f} kHz")
print(f"bottom-curve minimal gap {bottom.gap / chi:7.4f} * chi at {bottom.delta_at_min / TWO_PI:+7.2f} kHz")

fig, (ax, axg) = plt.subplots(1, 2, figsize=(11, 4.5), width_ratios=[2, 1])
for c in range(spectrum.n_curves):
    ax.plot(grid / TWO_PI, spectrum.tracked[:, c] / chi, lw=0.9)
ax.set_xlabel("detuning (kHz)")
ax.set_ylabel("energy / chi")
ax.set_title("ladder eigenvalues, 16 ions")

axg.plot(grid / TWO_PI, (spectrum.energies[:, -1] - spectrum.energies[:, -2]) / chi,
         label="two highest")
axg.plot(grid / TWO_PI, (spectrum.energies[:, 1] - spectrum.energies[:, 0]) / chi,
         "--", label="two lowest")
axg.scatter([top.delta_at_min / TWO_PI], [top.gap / chi], zorder=5, s=18)
axg.set_xlabel("detuning (kHz)")
axg.set_ylabel("gap / chi")
axg.set_title("adiabatic gaps")
axg.legend()
fig.tight_layout()
fig.savefig("demos/output/spectrum_and_gaps.png", dpi=150)
print("wrote demos/output/spectrum_and_gaps.png")
