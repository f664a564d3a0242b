"""Critical fields and the specific-heat anomaly.

The film phase has a continuous specific heat at Tc with a kink, a
third-order transition, while the standard phase jumps by 12 / (7 zeta(3)).
"""
import numpy as np

from bcsreps import thermo

# %% critical fields on each phase's own reduced temperature
tau = np.array([0.0, 0.2, 0.4, 0.6, 0.8, 0.9, 0.99])
print(" tau    R_H film   two-fluid   coupling integral")
for t in tau:
    print("  %.2f  %.5f    %.5f     %.5f" % (
        t, thermo.hc_ratio_novel(t), thermo.hc_standard(t),
        thermo.hc_standard(t, "coupling_integral")))

# %% specific heat
print("\n tau    R_C film")
for t in (0.05, 0.25, 0.5, 0.75, 0.95, 0.999):
    print("  %.3f  % .5f" % (t, thermo.specific_heat_ratio_novel(t, gN0=0.2).R_C))

sig = thermo.novel_transition_signature(0.2)
print("\njump at Tc %.1e, left slope %.3f, order %d" % sig)
print("standard jump", thermo.STANDARD_CV_JUMP)

# the heat anomaly integrates to the entropy gap
print(thermo.entropy_sum_rule(0.5))
