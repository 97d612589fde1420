"""Walk through one instance of each family: maximal lines, defect, and who
uses which line.

    python demos/family_tour.py [seed]
"""

import sys
from collections import Counter
from math import comb

from gcsets import generate
from gcsets.gcset import defect, maximal_lines
from gcsets.usage import usage_census, used_line_catalog, used_nodes_bruteforce, used_nodes_pipeline

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0

for family, n in [("chung-yao", 4), ("carnicer-gasca", 4), ("defect-2", 4), ("defect-3", 5), ("principal", 4)]:
    X = generate(family, n, seed)
    print(f"\n== {family}, n={n}: {len(X)} nodes, {len(maximal_lines(X))} maximal lines, defect {defect(X)}")

    total, per_line = usage_census(X)
    print(f"   line usages: {total} (n*C(n+2,2) = {n * comb(n + 2, 2)})")

    cat = used_line_catalog(X)
    for cls, size in sorted(cat.class_sizes.items()):
        print(f"   {cls:>14}: {size:3d} lines, {cat.class_usages[cls]:4d} usages")

    # the two routes to the users of a line agree, line by line
    labels = Counter()
    for line in per_line:
        rep = used_nodes_pipeline(X, line)
        assert set(rep.users) == used_nodes_bruteforce(X, line)
        labels[rep.label] += 1
    print("   classification of used lines:", dict(sorted(labels.items())))
