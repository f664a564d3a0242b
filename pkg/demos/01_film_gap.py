"""Film-phase spectrum versus the standard BCS gap.

Run with ``python3 demos/01_film_gap.py``. Prints both reduced order
parameters on a coarse grid and writes ``film_gap.svg`` next to this file.
"""
import pathlib

import numpy as np

from bcsreps import cli, gap

np.set_printoptions(precision=5, suppress=True)

# %% film phase: eta = tanh(eta / tau), no coupling constant left
tau = np.linspace(0.0, 1.0, 11)
eta = gap.eta_curve(tau)

# %% standard phase at weak coupling, normalized to its own Tc and Delta(0)
gN0 = 0.25
sol = gap.solve_standard(gN0, T=tau * gap.bcs_tc(gN0).numeric)
bcs = sol.Delta / sol.Delta[0]

print(" tau    eta(film)  Delta/Delta0")
for row in zip(tau, eta, bcs):
    print("  %.1f   %.5f    %.5f" % row)

# the film spectrum opens at 2 Tc whatever the coupling
spec = gap.epsilon_of_T(0.0, G=0.01, T_F=1e4)
print("epsilon0 / Tc =", spec.epsilon0 / spec.Tc)

# %% plot
dense = np.linspace(0.0, 1.0, 201)
curve = cli.CurveFile(("tau", "eta"), tuple(zip(dense.tolist(), gap.eta_curve(dense).tolist())))
out = pathlib.Path(__file__).with_name("film_gap.svg")
out.write_text(cli.render_svg(curve, {"title": "film phase"}))
print("wrote", out)
