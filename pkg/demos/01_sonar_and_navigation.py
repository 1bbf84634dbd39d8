# %% [markdown]
# # Sonar ring and midpoint steering
#
# Eight range sensors fan out from -90 to +90 degrees. A reading is an
# integer in [0, 1024]: 0 means nothing within 5 m, larger means closer.
# The navigation law averages each side in raw units, converts to metres and
# nudges the wheels so the robot drifts toward the middle of the gap.

# %%
import math

from intrudersim import Pose, Rect, World, nav_command, raw_to_distance, scan

# A corridor 3 m wide with the robot 0.5 m left of its centreline.
world = World([Rect(10, 1.6, 10, 0.1), Rect(10, -1.6, 10, 0.1)])
pose = Pose(2.0, 0.5, 0.0)

reading = scan(world, pose)
print("raw readings  ", reading.raw)
print("as metres     ", [round(raw_to_distance(r), 2) if r else None for r in reading.raw])

# %% [markdown]
# The beams at +/-10 and +/-30 degrees meet the walls too far off the surface
# normal (beyond 45 degrees) and come back silent, so each side's mean rests
# on its 50 and 90 degree beams.

# %%
decision = nav_command(reading)
print(f"left {decision.d_left:.3f} m, right {decision.d_right:.3f} m, midpoint {decision.midpoint:.3f} m")
print("wheel command (rad/s):", tuple(round(v, 2) for v in decision.command))

# %% [markdown]
# The left wall is nearer (the midpoint lies beyond the left distance), so
# the left wheel speeds up and the robot veers right toward the centreline.

# %%
for heading in (-0.3, 0.0, 0.3):
    d = nav_command(scan(world, Pose(2.0, 0.0, heading)))
    print(f"centred, heading {math.degrees(heading):+5.1f} deg -> {tuple(round(v, 2) for v in d.command)}")
