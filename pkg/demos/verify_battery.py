"""Run every checker over a small sweep and print one status row per instance.

    python demos/verify_battery.py [max_seed] [out.svg]

With an SVG path, the last defect-3 instance is drawn there.
"""

import sys

from gcsets import generate
from gcsets.constructors import MIN_DEGREE
from gcsets.svg import render_svg
from gcsets.verify import CHECKERS, run_checks

seeds = range(int(sys.argv[1]) if len(sys.argv) > 1 else 2)
svg_path = sys.argv[2] if len(sys.argv) > 2 else None

ids = ["gc"] + sorted(CHECKERS)
print(f"{'instance':<24}" + " ".join(f"{t:>13}" for t in ids))
last = None
for family in ("chung-yao", "carnicer-gasca", "defect-2", "defect-3", "principal"):
    for n in range(max(3, MIN_DEGREE[family]), 6):
        for seed in seeds:
            X = generate(family, n, seed)
            bundle = run_checks(X)
            status = {r.theorem_id: r.status for r in bundle.reports}
            print(f"{family + f' n={n} s={seed}':<24}" + " ".join(f"{status[t]:>13}" for t in ids))
            if family == "defect-3":
                last = X

if svg_path and last is not None:
    with open(svg_path, "w") as fh:
        fh.write(render_svg(last, f"defect-3 n={last.degree}"))
    print("wrote", svg_path)
