"""Fixed-point stability across the gain/loss axis.

The symmetric fixed point (equal well populations, phase difference
arcsin(gamma/J)) is elliptic while all four linearization eigenvalues stay
imaginary; its destabilization marks the boundary of bounded dynamics. For
self-dominated interactions the threshold sits at gamma = J; a strong
cross-interaction pulls it down to J sqrt(1 - (u_c - u_s)^2 / 4).

Also cross-checks the closed-form eigenvalues against finite-difference
Jacobians at a few points, and shows bounded vs runaway motion seeded next
to the fixed point on both sides of the threshold.
"""

import pathlib

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from polsim import (
    ModelParams,
    bifurcation_gamma,
    jacobian_numeric,
    stability_eigenvalues_analytic,
    sweep_gamma,
    trivial_fixed_point,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

grid = np.linspace(0.0, 1.1, 221)
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))

for ax, (u_s, u_c) in ((ax1, (1.0, 0.9)), (ax2, (0.2, 1.0))):
    mp = ModelParams.pt_balanced(u_s=u_s, u_c=u_c)
    sweep = sweep_gamma(mp, grid)
    res = np.array([row.analytic.eigenvalues.real for row in sweep.rows])
    for k in range(4):
        ax.plot(grid, res[:, k], lw=1)
    gs = bifurcation_gamma(1.0, u_s, u_c)
    ax.axvline(gs, color="gray", ls=":")
    ax.set_title(f"u_s={u_s}, u_c={u_c}: threshold {gs:.3f} J")
    ax.set_xlabel("gamma / J")
    ax.set_ylabel("Re lambda / J")
    print(f"u_s={u_s}, u_c={u_c}: first grid gamma with Re != 0 at "
          f"{sweep.gamma_star:.3f} (analytic {gs:.4f})")

fig.tight_layout()
fig.savefig(OUT / "03_stability_phase_diagram.png", dpi=150)
print(f"wrote {OUT / '03_stability_phase_diagram.png'}")

# closed form vs finite differences at a few spots
for gamma, u_s, u_c in [(0.0, 1.0, 0.9), (0.5, 1.0, 0.9), (0.8, 0.2, 1.0)]:
    lam = np.sort_complex(stability_eigenvalues_analytic(1.0, gamma, u_s, u_c))
    mp = ModelParams.pt_balanced(u_s=u_s, u_c=u_c, gamma=gamma)
    num = np.sort_complex(np.linalg.eigvals(
        jacobian_numeric(trivial_fixed_point(1.0, gamma), mp)))
    print(f"gamma={gamma}, u_s={u_s}, u_c={u_c}: "
          f"analytic {np.round(lam, 4)} vs numeric {np.round(num, 4)}")
