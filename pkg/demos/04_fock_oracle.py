"""Exact finite Fock-space checks of the pairing transformation.

Builds Jordan-Wigner operators for a few pairs, rotates them with
exp(iQ) and compares with the closed forms.
"""
import math

import numpy as np

from bcsreps import fockring as fr

rng = np.random.default_rng(1)
for P in (1, 2, 3, 4):
    ops = fr.build_mode_operators(P)
    alphas = rng.uniform(-math.pi, math.pi, P)
    after = fr.verify_ring(fr.bogoliubov_transform(ops, alphas))
    print("P=%d dim=%4d ring %.1e conj %.1e overlap %.6f (closed %.6f)" % (
        P, ops.dim, after.max_deviation, fr.conjugation_residual(ops, alphas),
        fr.vacuum_overlap_matrix(ops, alphas).real, fr.vacuum_overlap(alphas)))

# the vacuum overlap shrinks geometrically with the number of pairs
print([round(fr.vacuum_overlap([math.pi / 4] * P), 6) for P in range(1, 11)])

# %% mean-field spectrum and the thermal pair amplitude
ops = fr.build_mode_operators(3)
xi = np.array([-0.4, 0.0, 0.4])
h = fr.build_h02(ops, xi, 0.25)
print("spectrum dev", np.abs(np.linalg.eigvalsh(h) - fr.h02_closed_form_spectrum(xi, 0.25)).max())
E = math.hypot(xi[1], 0.25)
print("<aa> =", fr.thermal_anomalous_average(h, ops, 4.0, 1).real, "closed", 0.25 / (2 * E) * math.tanh(2 * E))
