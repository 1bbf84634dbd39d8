# %% [markdown]
# # A full corridor run
#
# The bundled corridor scenario starts one robot 0.5 m off-centre in a 3 m
# corridor. We simulate 40 s and check how far its actual position (the larger
# side distance) strays from the suggested midpoint.

# %%
from intrudersim import path_metrics, run, shipped_scenario
from intrudersim.analysis import emit_plot

trace = run(shipped_scenario("corridor"))
print(len(trace), "trace rows,", len(trace.collisions), "contact events")

rows = path_metrics(trace, "1", [3, 5, 8, 12, 15, 19, 22, 26, 29, 33, 36, 39.9])
print(" time   left  right  total  suggested  actual")
for r in rows:
    actual = "   -" if r.actual is None else f"{r.actual:.2f}"
    print(f"{r.time:5.1f}  {r.d_left:5.2f}  {r.d_right:5.2f}  {r.total:5.2f}  {r.suggested:9.2f}  {actual}")

# %%
emit_plot(rows, "path", "corridor_path.svg", title="Corridor run")
print("wrote corridor_path.svg")
