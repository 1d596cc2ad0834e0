# %% [markdown]
# Dipole-dipole couplings between two J=0 <-> J=1 atoms
#
# Units: hbar = gamma = 1, lengths in units of the transition wavelength.
# The couplings Omega_ij (coherent) and Gamma_ij (collective decay) are
# 3x3 Hermitian matrices over the excited sublevels m = -1, 0, +1.

# %%
import math

import numpy as np

from zeeman_pair import Geometry, coupling_closed_form, coupling_from_tensor

np.set_printoptions(precision=4, suppress=True, linewidth=110)

# %% Atoms stacked along the quantization axis: every cross coupling vanishes.
on_axis = coupling_from_tensor(Geometry(0.3, 0.0, 0.0))
print("theta = 0, Omega:\n", on_axis.omega)
print("largest |Omega_ij|, i != j:", on_axis.max_cross())

# %% Tilting the pair switches the cross couplings on.
tilted = coupling_from_tensor(Geometry(0.3, math.pi / 3, 1.1))
print("theta = pi/3, Omega:\n", tilted.omega)
print("theta = pi/3, Gamma:\n", tilted.gamma)

# %% In the equatorial plane level 2 (m = 0) decouples from levels 1 and 3
# but Omega_31 survives, so the m = -1 and m = +1 transitions talk.
flat = coupling_from_tensor(Geometry(0.3, math.pi / 2, math.pi / 2))
print("theta = pi/2: Omega_21 =", flat.omega[1, 0], " Omega_31 =", flat.omega[2, 0])

# %% The closed trigonometric forms agree with the tensor contraction.
rng = np.random.default_rng(0)
worst = 0.0
for _ in range(1000):
    g = Geometry(rng.uniform(0.05, 5), math.acos(rng.uniform(-1, 1)), rng.uniform(0, 2 * math.pi))
    a, b = coupling_from_tensor(g), coupling_closed_form(g)
    worst = max(worst, np.abs(a.omega - b.omega).max(), np.abs(a.gamma - b.gamma).max())
print("max |tensor - closed form| over 1000 geometries:", worst)

# %% Close together the decay rates approach the single-atom value, and the
# coherent shifts blow up like 1/R^3.
for R in (1e-1, 1e-2, 1e-3, 1e-4):
    c = coupling_from_tensor(Geometry(R, 0.7, 0.0))
    print(f"R = {R:7.0e}  Gamma_11 = {c.gamma[0, 0].real:.10f}  Omega_11 = {c.omega[0, 0].real: .3e}")
