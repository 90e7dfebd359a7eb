"""Invariant matrix calculus: multiplication, trace, higher traces,
characteristic series, Jordan splitting and the trace pairing.

A matrix from X to Y is a Schwartz function on Y x X; multiplication
integrates over the middle variable.  Entries are polynomials in t through
their orbit coefficients, so every identity here is exact.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .scalar import (EvalPoint, Poly, TruncatedSeries, evaluate)
from .setexpr import SetExpr, product, one
from .integration import (GSetMap, SchwartzFunction, change_level, integrate,
                          pullback, pushforward)


class InvariantMatrix:
    """A Schwartz function on codomain x domain viewed as a morphism."""

    __slots__ = ("ctx", "domain", "codomain", "entries")

    def __init__(self, ctx, domain: SetExpr, codomain: SetExpr,
                 entries: SchwartzFunction):
        if entries.expr != product(codomain, domain):
            raise ValueError("entries must live on codomain x domain")
        self.ctx = ctx
        self.domain = domain
        self.codomain = codomain
        self.entries = entries

    @property
    def level(self) -> int:
        return self.entries.level

    def __repr__(self):
        return (f"InvariantMatrix({self.domain.to_text()} -> "
                f"{self.codomain.to_text()}, {self.entries!r})")

    def __eq__(self, other):
        if not isinstance(other, InvariantMatrix):
            return NotImplemented
        return (self.domain == other.domain and self.codomain == other.codomain
                and self.entries == other.entries)

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(ctx, domain, codomain, level: int = 0) -> "InvariantMatrix":
        return InvariantMatrix(ctx, domain, codomain,
                               SchwartzFunction.zero(ctx, product(codomain, domain),
                                                     level))

    @staticmethod
    def identity(ctx, x: SetExpr, level: int = 0) -> "InvariantMatrix":
        ent = pushforward(GSetMap.diagonal(x),
                          SchwartzFunction.indicator(ctx, x, level))
        return InvariantMatrix(ctx, x, x, ent)

    @staticmethod
    def all_ones(ctx, x: SetExpr, level: int = 0) -> "InvariantMatrix":
        return InvariantMatrix(ctx, x, x,
                               SchwartzFunction.indicator(ctx, product(x, x), level))

    @staticmethod
    def from_graph(ctx, f: GSetMap) -> "InvariantMatrix":
        """A_f: the indicator of the graph of f, as a matrix source -> target."""
        ent = pushforward(f.graph_map(),
                          SchwartzFunction.indicator(ctx, f.source, 0))
        return InvariantMatrix(ctx, f.source, f.target, ent)

    # -- linear structure ------------------------------------------------

    def __add__(self, other):
        self._same_shape(other)
        return InvariantMatrix(self.ctx, self.domain, self.codomain,
                               self.entries + other.entries)

    def __sub__(self, other):
        self._same_shape(other)
        return InvariantMatrix(self.ctx, self.domain, self.codomain,
                               self.entries - other.entries)

    def __neg__(self):
        return InvariantMatrix(self.ctx, self.domain, self.codomain, -self.entries)

    def scale(self, c) -> "InvariantMatrix":
        return InvariantMatrix(self.ctx, self.domain, self.codomain,
                               self.entries.scale(c))

    def _same_shape(self, other):
        if self.domain != other.domain or self.codomain != other.codomain:
            raise ValueError("matrix shape mismatch")

    def transpose(self) -> "InvariantMatrix":
        swap = GSetMap.swap(self.domain, self.codomain)  # dom x cod -> cod x dom
        return InvariantMatrix(self.ctx, self.codomain, self.domain,
                               pullback(swap, self.entries))

    def is_zero(self) -> bool:
        return self.entries.is_zero()

    def at_level(self, level: int) -> "InvariantMatrix":
        return InvariantMatrix(self.ctx, self.domain, self.codomain,
                               change_level(self.entries, level))


def matmul(b: InvariantMatrix, a: InvariantMatrix) -> InvariantMatrix:
    """Composition b after a: integrate over the middle variable."""
    if a.codomain != b.domain:
        raise ValueError("inner sets do not match")
    x, y, z = a.domain, a.codomain, b.codomain
    lvl = max(a.level, b.level)
    pzy = GSetMap.proj_product([z, y, x], [0, 1])
    pyx = GSetMap.proj_product([z, y, x], [1, 2])
    pzx = GSetMap.proj_product([z, y, x], [0, 2])
    big = (pullback(pzy, change_level(b.entries, lvl))
           * pullback(pyx, change_level(a.entries, lvl)))
    return InvariantMatrix(a.ctx, x, z, pushforward(pzx, big))


def apply_to(a: InvariantMatrix, v: SchwartzFunction) -> SchwartzFunction:
    """Matrix-vector product; vectors on X are matrices X <- point."""
    vm = InvariantMatrix(v.ctx, one(), v.expr, v)
    return matmul(a, vm).entries


def trace(a: InvariantMatrix) -> Poly:
    """Integral of the diagonal restriction."""
    if a.domain != a.codomain:
        raise ValueError("trace of a non-square matrix")
    diag = GSetMap.diagonal(a.domain)
    return integrate(pullback(diag, a.entries))


def matrix_power(a: InvariantMatrix, n: int) -> InvariantMatrix:
    if a.domain != a.codomain:
        raise ValueError("power of a non-square matrix")
    out = InvariantMatrix.identity(a.ctx, a.domain, a.level)
    for _ in range(n):
        out = matmul(out, a)
    return out


def higher_trace(a: InvariantMatrix, n: int) -> Poly:
    """T_n(a): integral of the n x n minor determinant over n-element
    subsets, computed through the permutation-expansion formula in terms of
    traces of powers (valid over Q, uniform across backends)."""
    if n < 0:
        raise ValueError("higher trace needs n >= 0")
    if n == 0:
        return Poly.one()
    powers = {}
    cur = a
    for j in range(1, n + 1):
        powers[j] = trace(cur)
        if j < n:
            cur = matmul(cur, a)
    total = Poly.zero()
    for lam in _partitions_of(n):
        mult = {}
        for part in lam:
            mult[part] = mult.get(part, 0) + 1
        term = Poly.one()
        for j, mj in mult.items():
            base = powers[j] * Fraction((-1) ** (j + 1), j)
            piece = Poly.one()
            for _ in range(mj):
                piece = piece * base
            term = term * piece / _factorial(mj)
        total = total + term
    return total


def char_series(a: InvariantMatrix, order: int = TruncatedSeries.DEFAULT_ORDER
                ) -> TruncatedSeries:
    """det(1 + u*a) to the given truncation order."""
    return TruncatedSeries(order, [higher_trace(a, n) for n in range(order)])


@lru_cache(maxsize=None)
def _partitions_of(n: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []

    def rec(rest, maxpart, acc):
        if rest == 0:
            out.append(tuple(acc))
            return
        for p in range(min(rest, maxpart), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return tuple(out)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


# ---------------------------------------------------------------------------
# The invariant endomorphism algebra of an object


class EndAlgebra:
    """End(Vec_X) in the orbit-indicator basis, with exact structure
    constants in Q[t]."""

    def __init__(self, ctx, x: SetExpr):
        self.ctx = ctx
        self.x = x
        self.orbit_list = list(ctx.orbits(product(x, x), 0))
        self.basis = [
            InvariantMatrix(ctx, x, x,
                            SchwartzFunction.from_orbit(ctx, product(x, x), pat))
            for pat in self.orbit_list]
        self.dim = len(self.basis)
        self._sc = None
        self._identity = None

    def matrix_to_vec(self, a: InvariantMatrix) -> list[Poly]:
        ent = a.entries
        if ent.level != 0:
            raise ValueError("End algebra coordinates need level-0 matrices")
        return [ent.coeff(pat) for pat in self.orbit_list]

    def vec_to_matrix(self, v) -> InvariantMatrix:
        terms = {}
        for pat, c in zip(self.orbit_list, v):
            c = c if isinstance(c, Poly) else Poly.const(c)
            if not c.is_zero():
                terms[pat] = c
        return InvariantMatrix(self.ctx, self.x, self.x,
                               SchwartzFunction(self.ctx, product(self.x, self.x),
                                                0, terms))

    def structure_constants(self):
        """c[i][j] = coordinates of basis_i * basis_j."""
        if self._sc is None:
            self._sc = [[self.matrix_to_vec(matmul(bi, bj)) for bj in self.basis]
                        for bi in self.basis]
        return self._sc

    def identity_vec(self) -> list[Poly]:
        if self._identity is None:
            self._identity = self.matrix_to_vec(
                InvariantMatrix.identity(self.ctx, self.x))
        return self._identity

    def check_associativity(self) -> bool:
        sc = self.structure_constants()

        def mul(u, v):
            out = [Poly.zero()] * self.dim
            for i, a in enumerate(u):
                if a.is_zero():
                    continue
                for j, b in enumerate(v):
                    if b.is_zero():
                        continue
                    for k, c in enumerate(sc[i][j]):
                        out[k] = out[k] + a * b * c
            return out

        es = [[Poly.one() if i == j else Poly.zero() for j in range(self.dim)]
              for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if mul(mul(es[i], es[j]), es[k]) != mul(es[i], mul(es[j], es[k])):
                        return False
        return True

    def specialize(self, at: EvalPoint) -> "SpecializedEnd":
        if at.mode != "rational":
            raise ValueError("specialization needs a rational evaluation point")
        sc = [[[evaluate(c, at) for c in row] for row in plane]
              for plane in self.structure_constants()]
        ident = [evaluate(c, at) for c in self.identity_vec()]
        return SpecializedEnd(self, at, sc, ident)


class SpecializedEnd:
    """The finite-dimensional algebra End(Vec_X) at a rational point of t,
    with elements as coordinate vectors over Q."""

    def __init__(self, parent: EndAlgebra, at: EvalPoint, sc, ident):
        self.parent = parent
        self.at = at
        self.sc = sc
        self.ident = [Fraction(c) for c in ident]
        self.dim = parent.dim

    def mul(self, u, v):
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(u):
            if a:
                for j, b in enumerate(v):
                    if b:
                        ab = a * b
                        for k, c in enumerate(self.sc[i][j]):
                            if c:
                                out[k] += ab * c
        return out

    def element(self, a: InvariantMatrix):
        return [evaluate(c, self.at) for c in self.parent.matrix_to_vec(a)]

    def to_matrix(self, v) -> InvariantMatrix:
        return self.parent.vec_to_matrix([Poly.const(c) for c in v])

    def poly_of(self, p: Poly, v):
        """p(v) inside the algebra."""
        out = [c * p.coeffs[-1] for c in self.ident] if p.coeffs else \
            [Fraction(0)] * self.dim
        for c in reversed(p.coeffs[:-1]):
            out = self.mul(out, v)
            out = [a + b * c for a, b in zip(out, self.ident)]
        return out

    def min_poly(self, v) -> Poly:
        """Minimal polynomial by linear-dependence search on powers."""
        rows = []
        cur = list(self.ident)
        powers = [cur]
        for _ in range(self.dim + 1):
            rows.append(list(powers[-1]))
            dep = _solve_dependency(rows)
            if dep is not None:
                return Poly(dep).monic()
            powers.append(self.mul(powers[-1], v))
        raise RuntimeError("minimal polynomial not found (dimension bound hit)")

    def jordan(self, v):
        """Semisimple and nilpotent parts (v = s + n), both polynomials in v.

        Newton iteration on the squarefree part of the minimal polynomial;
        exact over Q, no factorization needed."""
        p = self.min_poly(v)
        q = p.squarefree_part()
        if q == p:
            return list(v), [Fraction(0)] * self.dim
        s = list(v)
        # q(s) is nilpotent in Q[v]; iterate s <- s - q(s)/q'(s)
        for _ in range(self.dim.bit_length() + 2):
            qs = self.poly_of(q, s)
            if all(c == 0 for c in qs):
                break
            inv = self.invert(self.poly_of(q.derivative(), s))
            s = [a - b for a, b in zip(s, self.mul(qs, inv))]
        n = [a - b for a, b in zip(v, s)]
        return s, n

    def invert(self, w):
        """Inverse of w, a polynomial in w (from its minimal polynomial)."""
        m = self.min_poly(w)
        c0 = m.coeffs[0]
        if c0 == 0:
            raise ArithmeticError("element is not invertible")
        g = Poly(list(m.coeffs[1:]))  # m(x) = x*g(x) + c0
        return [-c / c0 for c in self.poly_of(g, w)]

    def is_nilpotent(self, v) -> bool:
        cur = list(v)
        for _ in range(self.dim + 1):
            if all(c == 0 for c in cur):
                return True
            cur = self.mul(cur, v)
        return False

    def is_commutative(self) -> bool:
        es = [[Fraction(1) if i == j else Fraction(0) for j in range(self.dim)]
              for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                if self.mul(es[i], es[j]) != self.mul(es[j], es[i]):
                    return False
        return True

    def center_basis(self):
        """Basis of the center as coordinate vectors."""
        # z central iff z*e_i - e_i*z = 0 for all basis elements
        es = [[Fraction(1) if i == j else Fraction(0) for j in range(self.dim)]
              for i in range(self.dim)]
        rows = []
        for e in es:
            # linear map z -> z*e - e*z, columns over the basis
            cols = []
            for b in es:
                cols.append([x - y for x, y in zip(self.mul(b, e), self.mul(e, b))])
            rows.append(cols)
        # stack constraints
        mat = []
        for cols in rows:
            for k in range(self.dim):
                mat.append([cols[j][k] for j in range(self.dim)])
        return _nullspace(mat, self.dim)


def _solve_dependency(rows):
    """If the last row depends linearly on the previous ones, return monic
    polynomial coefficients (c_0..c_{m-1}, 1) expressing the dependency."""
    m = len(rows) - 1
    if m < 0:
        return None
    cols = [rows[i] for i in range(m)]
    target = rows[m]
    sol = _solve_linear(cols, target)
    if sol is None:
        return None
    return [-c for c in sol] + [Fraction(1)]


def _solve_linear(cols, target):
    """Solve sum_i x_i cols[i] = target exactly over Q; None if unsolvable."""
    if not cols:
        return [] if all(c == 0 for c in target) else None
    n = len(target)
    m = len(cols)
    a = [[cols[j][i] for j in range(m)] + [target[i]] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(n):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    for i in range(r, n):
        if a[i][m] != 0:
            return None
    sol = [Fraction(0)] * m
    for row, c in enumerate(piv_cols):
        sol[c] = a[row][m]
    return sol


def _nullspace(mat, width):
    """Basis of the kernel of the stacked constraint matrix."""
    rows = [list(r) for r in mat if any(r)]
    n = len(rows)
    piv_of_col = {}
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_of_col[c] = r
        r += 1
    free = [c for c in range(width) if c not in piv_of_col]
    out = []
    for fc in free:
        v = [Fraction(0)] * width
        v[fc] = Fraction(1)
        for c, row in piv_of_col.items():
            v[c] = -rows[row][fc]
        out.append(v)
    return out


# ---------------------------------------------------------------------------
# Operations on matrices through the specialized algebra


def min_poly(a: InvariantMatrix, at: EvalPoint) -> Poly:
    alg = EndAlgebra(a.ctx, a.domain)
    sp = alg.specialize(at)
    return sp.min_poly(sp.element(a))


def jordan_split(a: InvariantMatrix, at: EvalPoint
                 ) -> tuple[InvariantMatrix, InvariantMatrix]:
    alg = EndAlgebra(a.ctx, a.domain)
    sp = alg.specialize(at)
    s, n = sp.jordan(sp.element(a))
    return sp.to_matrix(s), sp.to_matrix(n)


def trace_pairing(ctx, x: SetExpr):
    """Gram matrix <B_i,B_j> = tr(B_i B_j) on the orbit basis, its
    determinant, and the predicted value (-1)^r prod mu(Z_i)."""
    alg = EndAlgebra(ctx, x)
    gram = [[trace(matmul(bi, bj)) for bj in alg.basis] for bi in alg.basis]
    disc = _poly_det(gram)
    # transpose involution on orbits
    xx = product(x, x)
    swap = GSetMap.swap(x, x)
    tau = {}
    for i, pat in enumerate(alg.orbit_list):
        img = ctx.image_orbit(swap, pat)
        tau[i] = alg.orbit_list.index(img)
    r = sum(1 for i, j in tau.items() if i < j)
    predicted = Poly.one()
    for pat in alg.orbit_list:
        predicted = predicted * ctx.measure(xx, pat)
    if r % 2:
        predicted = -predicted
    return gram, disc, predicted, r


def _poly_det(m) -> Poly:
    """Fraction-free Bareiss determinant over Q[t] (divisions are exact)."""
    n = len(m)
    if n == 0:
        return Poly.one()
    a = [[m[i][j] for j in range(n)] for i in range(n)]
    sign = 1
    prev = Poly.one()
    for k in range(n - 1):
        if a[k][k].is_zero():
            piv = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if piv is None:
                return Poly.zero()
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return -det if sign < 0 else det


def is_semisimple_end(ctx, x: SetExpr, at: EvalPoint, seed: int = 0) -> bool:
    """Discriminant nonzero at the point, plus the sanity check that the
    nilpotent parts of a few seeded elements have trace zero."""
    _, disc, _, _ = trace_pairing(ctx, x)
    if evaluate(disc, at) == 0:
        return False
    import random
    rng = random.Random(seed)
    alg = EndAlgebra(ctx, x)
    sp = alg.specialize(at)
    tr_vec = [evaluate(trace(b), at) for b in alg.basis]
    for _ in range(3):
        v = [Fraction(rng.randint(-3, 3)) for _ in range(alg.dim)]
        _, nil = sp.jordan(v)
        if sum(c * t for c, t in zip(nil, tr_vec)) != 0:
            return False
    return True
