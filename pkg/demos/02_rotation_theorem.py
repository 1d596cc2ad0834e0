# %% [markdown]
# Rotating the pair is a unitary change of basis
#
# Rotating the separation vector by D_u(alpha) changes every coupling, yet
# the dipole Hamiltonian and the dissipator at the new geometry are just the
# old ones conjugated with W = exp(-i alpha J1.u) exp(-i alpha J2.u).  As a
# consequence the energy levels depend on R only.

# %%
import math

import numpy as np

from zeeman_pair import Geometry, spectrum_dipole, spectrum_full
from zeeman_pair.experiments import random_axis, random_density_matrix, random_geometry
from zeeman_pair.spectra import dissipator_rotation_residual, hamiltonian_rotation_residual

rng = np.random.default_rng(1)

# %% Hamiltonian and dissipator residuals for a few random rotations
for _ in range(5):
    g = random_geometry(rng)
    u, alpha = random_axis(rng), rng.uniform(0, 2 * math.pi)
    states = [random_density_matrix(rng) for _ in range(5)]
    print(f"R={g.R:.3f} theta={g.theta:.3f} phi={g.phi:.3f}  "
          f"H residual {hamiltonian_rotation_residual(g, u, alpha):.1e}  "
          f"L residual {dissipator_rotation_residual(g, u, alpha, states):.1e}")

# %% Spectrum of H_Omega for three orientations at R = 0.3
for theta, phi in ((0.0, 0.0), (1.0, 0.3), (math.pi / 2, 2.0)):
    w = spectrum_dipole(Geometry(0.3, theta, phi)).eigenvalues
    print(f"theta={theta:.2f} phi={phi:.2f}:", np.round(w[np.abs(w) > 1e-12], 6))

# %% A Zeeman splitting only commutes with rotations about z: with delta = 2
# the levels still ignore phi but now depend on theta.
a = spectrum_full(Geometry(0.3, 0.0, 0.0), 2.0).eigenvalues
b = spectrum_full(Geometry(0.3, math.pi / 2, 0.0), 2.0).eigenvalues
c = spectrum_full(Geometry(0.3, math.pi / 2, 1.3), 2.0).eigenvalues
print("theta 0 vs pi/2:", np.abs(a - b).max(), "   phi 0 vs 1.3:", np.abs(b - c).max())
