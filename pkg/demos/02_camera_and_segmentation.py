# %% [markdown]
# # Camera rendering and colour segmentation
#
# Each robot carries a 256x128 colour camera with a 60 degree field of view and
# an aligned range image. Intruders are painted pure blue or green, so two
# fixed RGB threshold tests are enough to find them.

# %%
from pathlib import Path

from intrudersim import Pose, Rect, World, render, segment
from intrudersim.perception import BLUE_RGB, GREEN_RGB, Sprite

world = World([Rect(8.0, 0.0, 0.2, 3.0)])  # a wall 8 m ahead
sprites = [Sprite(4.0, 0.6, 0.2, 0.38, BLUE_RGB), Sprite(3.0, -0.5, 0.2, 0.38, GREEN_RGB)]
frame, depth = render(world, Pose(0, 0, 0), sprites)

seg = segment(frame, depth)
for name, s in (("blue", seg.blue), ("green", seg.green)):
    print(f"{name:5s}: {s.left_count:4d} px left, {s.right_count:4d} px right, nearest {s.min_range:.2f} m")

# %% [markdown]
# Blue sits left of the optical axis and green to the right. The nearest
# range is the distance to the front face of each cylinder.

# %%
out = Path("camera_view.ppm")
frame.write_ppm(out)
print("wrote", out, out.stat().st_size, "bytes")

# %% [markdown]
# Pixel count falls off roughly with the square of distance. The stop
# threshold of 3000 pixels is reached a little under 2 m from the intruder.

# %%
for d in (1.5, 1.8, 2.0, 3.0, 5.0):
    f, dep = render(World(), Pose(0, 0, 0), [Sprite(d, 0.0, 0.2, 0.38, BLUE_RGB)])
    print(f"{d:.1f} m -> {segment(f, dep).blue.total} px")
