# %% [markdown]
# A driven pair leaks out of the two-level picture
#
# Both atoms sit in the ground state and a sigma+ laser drives only the
# m = 0 -> m = +1 transition (levels 4 -> 3).  With the pair in the xy plane
# along y, the dipole coupling Omega_31 transfers population from level 3
# into level 1, which the laser never touches.  S holds the states built
# from levels 3 and 4, V the ones that involve level 1.

# %%
import math

import numpy as np

from zeeman_pair import Geometry, SystemParams, evolve, ground_state

drives = {
    "weak": (0.3, SystemParams(omega_L=2.0, detuning=0.58, laser_on=True)),
    "strong": (0.1, SystemParams(omega_L=5.4, detuning=5.2, laser_on=True)),
}

# %%
results = {}
for name, (R, params) in drives.items():
    traj = evolve(ground_state(), params, Geometry(R, math.pi / 2, math.pi / 2), 25.0, 0.05)
    obs = traj.observables
    results[name] = traj
    print(f"{name} drive: min <P_S> = {obs['P_S'].min():.4f}, "
          f"max |P_S + P_V - 1| = {np.abs(obs['P_S'] + obs['P_V'] - 1).max():.1e}, "
          f"trace drift {traj.trace_error:.1e}, step {traj.dt:g}")

# %% For a generic orientation level 2 joins in, and S + V no longer
# holds all the population.
generic = evolve(ground_state(), drives["weak"][1], Geometry(0.3, 1.0, 0.3), 10.0, 0.05)
print("theta=1.0, phi=0.3: max population outside S and V =", generic.observables["P_rest"].max())

# %% Plot, if matplotlib is around
try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None
if plt is not None:
    for name, traj in results.items():
        plt.plot(traj.times, traj.observables["P_S"], label=f"{name} drive")
    plt.xlabel("gamma t")
    plt.ylabel("<P_S>")
    plt.legend()
    plt.savefig("leakage.png", dpi=120)
    print("wrote leakage.png")
