"""Lines carrying hat-2m nodes, and the one configuration where the count
s = k - r - r_hat comes out one too high.

Random family instances almost never put a hat-2m node on a used line, so the
sets here are built by hand (see gcsets.special).

    python demos/hat_nodes.py
"""

from math import comb

from gcsets.special import DEFECT3_CASES, defect_three_hat, defect_two_hat
from gcsets.usage import used_nodes_pipeline
from gcsets.verify import run_checks


def show(name, X, line):
    rep = used_nodes_pipeline(X, line)
    steps = [st.kind for st in rep.classification.trace.steps]
    predicted = rep.k - rep.r - rep.r_hat
    print(f"{name:>10}: n={X.degree} {rep.label:<15} k={rep.k} r={rep.r} r_hat={rep.r_hat} "
          f"users={len(rep.users)} s={rep.s} (k-r-r_hat={predicted}, C={comb(predicted, 2)}) steps={steps}")
    failed = [r.theorem_id for r in run_checks(X).reports if r.status == "fail"]
    print(f"{'':>10}  failing checks: {failed or 'none'}")


X, line = defect_two_hat(4, 0)
show("defect-2", X, line)
for case in DEFECT3_CASES:
    X, line = defect_three_hat(6 if case == "l-i-j-two" else 5, 0, case)
    show(case, X, line)

# In the last case both OO-crossings of l_3^4 are 1m-nodes.  After lowering,
# only one of them is a 2m-node, but two adjoint reductions are still needed,
# so a single node uses the line while k - r - r_hat = 3 predicts three.
