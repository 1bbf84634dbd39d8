# %% [markdown]
# # Two robots following a walking intruder
#
# The green intruder pauses for a second, then walks 1.45 m over the next
# twelve. Two robots start about 1.8 m behind it on either side. They stop
# while it fills their view and creep forward whenever it pulls away.

# %%
from intrudersim import follow_metrics, run, shipped_scenario
from intrudersim.analysis import emit_plot

trace = run(shipped_scenario("follow"))
rows = follow_metrics(trace, ["3", "4"], "green", [1, 5, 9, 13])
print("time  moved  robot 3  robot 4")
for r in rows:
    print(f"{r.time:4.1f}  {r.displacement:5.2f}  {r.distances['3']:7.2f}  {r.distances['4']:7.2f}")

# %%
modes = {}
for rec in trace.robot("3"):
    modes[rec.mode] = modes.get(rec.mode, 0) + 1
print("robot 3 ticks per mode:", modes)
emit_plot(rows, "follow", "following.svg", title="Following a green intruder")
