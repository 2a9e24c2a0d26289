"""Cross-checks of the ladder reduction against the full symmetric model.

The reduced (N+1)-state ladder is trusted because it is validated three
ways: a brute-force tensor-product construction (up to 6 ions), the
projection of the full symmetric-subspace Hamiltonian (up to 24 ions),
and a leakage study quantifying how much population actually escapes the
ladder at finite dressing strength -- which falls off quadratically with
chi/omega1, as it should for a virtual-excitation error.
"""

import json

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from dickeladder import leakage_study, validation_report

report = validation_report(max_ions=8)
print(json.dumps(report, indent=2)[:400], "...\n")
print(f"all {len(report['checks'])} checks passed: {report['passed']}")

ratios = [2.0**-k for k in range(3, 9)]
study = leakage_study(2, ratios=ratios, chi=1.0)
print(f"leakage slope across ratios: {study.slope:.3f} (quadratic suppression = 2)")

fig, ax = plt.subplots(figsize=(5.5, 4))
ax.loglog(study.ratios, study.leakages, "o-", label="4 ions")
guide = study.leakages[-1] * (np.array(study.ratios) / study.ratios[-1]) ** 2
ax.loglog(study.ratios, guide, ":", label="slope 2 guide")
ax.set_xlabel("chi / omega1")
ax.set_ylabel("population outside the ladder")
ax.legend()
fig.tight_layout()
fig.savefig("demos/output/oracle_checks.png", dpi=150)
print("wrote demos/output/oracle_checks.png")
