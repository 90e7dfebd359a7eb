#!/usr/bin/env python3
"""The rigid tensor category of permutation objects.

Objects are declared sets, morphisms invariant matrices.  Every object is
self-dual and carries a Frobenius algebra; the categorical trace is the
matrix trace, so dimensions may be negative or a polynomial in t.
"""

from oligocat import (SymContext, OrderContext, PermObject, power, inj,
                      hom_basis, zigzag, identity_morphism, frobenius,
                      categorical_dimension, graph_matrices, matmul,
                      GSetMap, Poly)

for ctx, tag in [(SymContext(), "symmetric"), (OrderContext(-1, -1), "line")]:
    obj = PermObject(ctx, power(1))
    print(f"== {tag} backend ==")
    print("  dim Hom(V, V) =", len(hom_basis(obj, obj)))
    print("  zigzag = identity:", zigzag(obj) == identity_morphism(obj))
    print("  categorical dimension:", categorical_dimension(obj).to_text())
    data, checks = frobenius(obj)
    print("  Frobenius axioms:",
          "all pass" if all(ok for _, ok in checks)
          else [n for n, ok in checks if not ok])
    a_f, b_f = graph_matrices(ctx, GSetMap.coordinates(inj(2), [0]))
    comp = matmul(a_f, b_f)
    c = list(comp.entries.terms.values())[0]
    print("  A_f B_f = c I for the pair-to-point projection, c =", c.to_text())
    print()
