"""Close-in path loss and visibility odds over distance.

Prints a small table for both calibrated environments at 28 GHz: LOS and
NLOS loss from the 1 m free-space intercept out to the far wall, next to
the probability that a link at that distance is line-of-sight at all.
"""

import numpy as np

from rischan import Environment, los_probability, path_loss

DISTANCES = np.array([1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0])

for env in (Environment.indoor_office(), Environment.street_canyon()):
    print(f"\n{env.kind.value}  (28 GHz)")
    print(f"{'d [m]':>7} {'LOS [dB]':>10} {'NLOS [dB]':>10} {'P(LOS)':>8}")
    for d in DISTANCES:
        los = path_loss(28e9, d, env.path_loss, los=True).loss_db
        nlos = path_loss(28e9, d, env.path_loss, los=False).loss_db
        p = los_probability(d, env.kind)
        print(f"{d:7.0f} {los:10.2f} {nlos:10.2f} {p:8.3f}")

# The gap between the two states is what the surface has to make up for:
# a blocked 50 m indoor link loses ~25 dB relative to a clear one.
env = Environment.indoor_office()
gap = (
    path_loss(28e9, 50.0, env.path_loss, los=False).loss_db
    - path_loss(28e9, 50.0, env.path_loss, los=True).loss_db
)
print(f"\nindoor blockage penalty at 50 m: {gap:.1f} dB")
