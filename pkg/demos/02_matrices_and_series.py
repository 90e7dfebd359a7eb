#!/usr/bin/env python3
"""Invariant matrices: infinite matrices tamed by a measure.

The all-ones matrix on Omega satisfies A^2 = tA because a row-times-column
sum is an integral: sum over Omega of 1 equals t.  Its characteristic
series, traces and Jordan splitting all come out exact.
"""

from fractions import Fraction

from oligocat import (SymContext, power, InvariantMatrix, matmul, trace,
                      higher_trace, char_series, min_poly, jordan_split,
                      trace_pairing, EvalPoint, Poly)

ctx = SymContext()
t = Poly.var()
I = InvariantMatrix.identity(ctx, power(1))
A = InvariantMatrix.all_ones(ctx, power(1))

print("== the all-ones matrix ==")
print("  tr(A)   =", trace(A).to_text())
print("  A^2     = tA:", matmul(A, A) == A.scale(t))
print("  chi_A(u) =", char_series(A, 5).to_text())

print()
print("== the identity has binomial higher traces ==")
for n in range(5):
    print(f"  T_{n}(I) = {higher_trace(I, n).to_text()}")

print()
print("== a general element alpha*I + beta*A, alpha=2, beta=3 ==")
M = I.scale(2) + A.scale(3)
print("  chi(u) =", char_series(M, 5).to_text())

print()
print("== Jordan splitting after evaluation ==")
for t0 in (0, 5):
    s, n = jordan_split(A, EvalPoint.rational(t0))
    kind = "nilpotent" if s.is_zero() else "semisimple"
    print(f"  at t = {t0}: A is {kind};"
          f" min poly {min_poly(A, EvalPoint.rational(t0)).to_text('x')}")

print()
print("== trace pairing on End(Vec_Omega) ==")
gram, disc, predicted, r = trace_pairing(ctx, power(1))
print("  Gram matrix:", [[e.to_text() for e in row] for row in gram])
print("  discriminant:", disc.to_text(), "| predicted:", predicted.to_text())
