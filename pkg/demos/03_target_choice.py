# %% [markdown]
# # Choosing and chasing an intruder
#
# When no obstacle is close, a robot looks at both colours and chases the one
# whose nearest pixel is closer (blue wins a tie). It steers toward the image
# half holding more of that colour and stops once the colour fills more than
# 3000 pixels. With fewer than 10 pixels in view it spins in place to search.

# %%
from intrudersim import pursuit_command, select_target
from intrudersim.perception import ColorSighting, SegmentationResult

ranges = [(6.05, 6.55), (6.06, 5.37), (6.28, 5.27), (8.52, 5.51)]
for robot, (blue, green) in enumerate(ranges, start=1):
    seen = SegmentationResult(ColorSighting(40, 40, blue), ColorSighting(40, 40, green))
    print(f"robot {robot}: blue {blue} m, green {green} m -> {select_target(seen).label}")

# %%
cases = {
    "mostly left": SegmentationResult(ColorSighting(400, 300, 4.0), ColorSighting(0, 0, 10.0)),
    "far and tiny": SegmentationResult(ColorSighting(3, 2, 9.5), ColorSighting(0, 0, 10.0)),
    "right up close": SegmentationResult(ColorSighting(0, 0, 10.0), ColorSighting(1600, 1500, 1.6)),
}
for label, seen in cases.items():
    d = pursuit_command(seen)
    print(f"{label:15s} -> {d.mode.value:10s} wheels {tuple(round(v, 2) for v in d.command)}")
