# coding: utf-8

# # Level velocities of a Gaussian process
#
# H(x) = cos(x) H1 + sin(x) H2 with independent GOE matrices H1, H2 is a
# random-matrix family whose entries are correlated as cos(x - x').  After
# unfolding, the mean squared level velocity fixes a natural unit for x;
# measured in that unit, families with different matrix scales behave alike.

import numpy as np

from aqcsat.ensembles import (
    RmtEnsembleConfig,
    covariance_check,
    mean_squared_velocity,
    sample_gp_family,
    velocity_rescaling,
)
from aqcsat.seeding import child_seed

# Second moments against the closed form.

rows = covariance_check(1, dim=16, families=5000, seed=1)
print("moments within 3 sigma: %d/%d" % (sum(r["pass"] for r in rows), len(rows)))

# One scale, two matrix widths.

grid = np.arange(128) * (2 * np.pi / 128)
narrow = [sample_gp_family(RmtEnsembleConfig(1, 64, 1.0, seed=child_seed(1, k)), grid) for k in range(30)]
wide = [sample_gp_family(RmtEnsembleConfig(1, 64, 4.0, seed=child_seed(2, k)), grid) for k in range(30)]
scale = velocity_rescaling(narrow)
print(f"scale from omega=1 families: {scale:.3f}")
print(f"<v^2> on the rescaled grid: omega=1 {mean_squared_velocity(narrow, grid=grid * scale):.3f}, "
      f"omega=4 {mean_squared_velocity(wide, grid=grid * scale):.3f}")
