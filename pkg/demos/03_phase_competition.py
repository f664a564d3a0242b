"""Which Gibbs state wins: a 100 K film phase against a 20 K standard phase.

With gN0 = 0.1 the film phase has the larger zero-temperature critical
field and the lower free energy everywhere below its Tc. Lowering gN0
moves the crossing; the condition on the critical temperatures flips at
the same coupling as the free-energy ordering.
"""
import numpy as np

from bcsreps import thermo

params = thermo.CompetitionParams(Tc=100.0, Tc_prime=20.0, gN0=0.1)
print("H_c(0)/H_c'(0) = %.4f, condition %s" % (params.field_ratio, params.novel_condition))

# %% free energies on a shared temperature grid
T = np.linspace(0.0, 100.0, 11)
curves = thermo.free_energy_curves(T, params.Tc, params.Tc_prime, params.gN0)
for row in zip(*curves):
    print("T = %5.1f K   df = % .4f   df' = % .4f" % row)

for t in (5.0, 50.0, 120.0):
    print(t, "K ->", thermo.phase_select(t, params).winner.value)

# %% coupling sweep
for g in (0.1, 0.08, 0.076, 0.075, 0.06):
    p = thermo.CompetitionParams(100.0, 20.0, g)
    print("gN0 = %.3f  ratio %.4f  winner at T=0: %s" % (
        g, p.field_ratio, thermo.phase_select(0.0, p).winner.value))
