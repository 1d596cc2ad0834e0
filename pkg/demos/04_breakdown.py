# %% [markdown]
# Few-level models pick up a fake orientation dependence
#
# Keeping only the m = 0 level turns the pair into two coupled two-level
# atoms whose symmetric and antisymmetric states are split by 2|Omega_22|.
# That splitting changes with theta, while the full multiplet's levels
# do not.

# %%
import math

import numpy as np

from zeeman_pair import Geometry, SystemParams, TruncationScheme
from zeeman_pair.fewlevel import breakdown_report, compare_truncated_dynamics, large_delta_decoupling_check

thetas = np.linspace(0, math.pi / 2, 7)
rep = breakdown_report(TruncationScheme((2,)), 0.2, thetas)
for th, full, trunc, split in rep.rows():
    print(f"theta={th:.3f}  full max {full[-1]: .5f}  two-level max {trunc[-1]: .5f}  2|Omega_22| {split:.5f}")
print("spectrum variation over theta: full", rep.full_variation, " two-level", rep.truncated_variation)

# %% Which truncations survive?  Along z any single level works; in the
# equatorial plane the V system {1, 3} is exact; at theta = pi/4 keeping
# level 3 alone loses population.
drive = SystemParams(omega_L=2.0, detuning=0.58, laser_on=True)
for scheme, theta in (((3,), 0.0), ((1, 3), math.pi / 2), ((3,), math.pi / 4)):
    dev, leak, _, _ = compare_truncated_dynamics(TruncationScheme(scheme), Geometry(0.3, theta, math.pi / 2),
                                                 drive, 5.0, output_dt=0.1)
    print(f"keep {scheme} at theta={theta:.3f}: deviation {dev:.1e}, population lost {leak:.1e}")

# %% A large Zeeman splitting suppresses the cross couplings dynamically.
report = large_delta_decoupling_check(Geometry(0.3, math.pi / 2, math.pi / 2), drive, t_end=3.0)
for delta, dev in zip(report.deltas, report.deviations):
    print(f"delta = {delta:8.2f}: max |P_S(full) - P_S(no cross terms)| = {dev:.2e}")
