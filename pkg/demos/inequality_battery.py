"""Check every shipped inequality instance and summarise the verdicts by case."""

import collections
import time

from dbar_poincare import default_battery, run_battery

t0 = time.perf_counter()
inst = default_battery()
recs = run_battery(inst)
by_case = collections.defaultdict(collections.Counter)
worst = {}
for it, r in zip(inst, recs):
    key = (it.case, it.domain.kind.value)
    by_case[key][r.verdict] += 1
    ratio = r.rhs / (r.constant_value * r.lhs) if r.lhs > 0 else float("inf")
    worst[key] = min(worst.get(key, float("inf")), ratio)
for key in sorted(by_case):
    print(f"{key[0]:13s} {key[1]:9s} {dict(by_case[key])}  smallest rhs/(delta lhs) {worst[key]:.3g}")
print(f"{len(recs)} instances in {time.perf_counter() - t0:.1f}s")
