#!/usr/bin/env python3
"""Subspace counting over a finite field, interpolated.

The shifted q-binomial polynomials evaluate at q-integers to subspace
counts; the q-Pascal recursion and the Grassmannian product rule hold as
exact polynomial identities.
"""

from oligocat import QContext
from oligocat.glqmeasure import count_subspaces

for q in (2, 3):
    ctx = QContext(q)
    print(f"== q = {q} ==")
    print("  q-integers:", [ctx.q_int(n) for n in range(6)])
    print("  omega_{0,2}(x) =", ctx.omega(0, 2).to_text("x"))
    print("  values at [n]_q:",
          [str(ctx.omega(0, 2)(ctx.q_int(n))) for n in range(6)])
    print("  brute-force subspace counts:",
          [count_subspaces(q, n, 2) for n in range(6)])
    print("  q-Pascal identity up to (4,4):",
          "pass" if ctx.check_q_pascal(4).ok else "FAIL")
    sc = ctx.grassmann_structure_constants(1, 1)
    print("  [line] * [line] =",
          " + ".join(f"{v}*[dim {d}]" for d, v in sorted(sc.items())))
    print()
