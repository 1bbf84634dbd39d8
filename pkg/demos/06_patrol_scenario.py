# %% [markdown]
# # Four robots, two intruders
#
# The patrol scenario holds two lanes of boxes with two robots in each. The
# intruders wait in the open area past the obstacles. Each robot threads its
# lane with sonar, then picks whichever intruder is closer once it is clear.

# %%
import time
from collections import Counter

from intrudersim import run, shipped_scenario

scenario = shipped_scenario("patrol")
start = time.perf_counter()
trace = run(scenario)
print(f"{len(trace)} rows in {time.perf_counter() - start:.1f} s wall clock")

# %%
for rid in ("1", "2", "3", "4"):
    recs = trace.robot(rid)
    chased = Counter(r.chosen_color for r in recs if r.mode in ("Follow", "Stopped"))
    last = recs[-1]
    print(f"robot {rid}: ends at ({last.x:5.2f}, {last.y:5.2f}) in {last.mode:10s} chased {dict(chased)}")

# %%
with open("patrol_trace.csv", "w", newline="") as fh:
    fh.write(trace.to_csv())
print("trace written; analyse it with `intrudersim analyze-path --trace patrol_trace.csv ...`")
