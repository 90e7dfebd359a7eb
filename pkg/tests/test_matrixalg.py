import random
from fractions import Fraction

from oligocat.category import PermObject, hom_basis
from oligocat.integration import SchwartzFunction
from oligocat.matrixalg import (EndAlgebra, InvariantMatrix, char_series,
                                higher_trace, is_semisimple_end, jordan_split,
                                matmul, matrix_power, min_poly, trace,
                                trace_pairing)
from oligocat.ordercontext import OrderContext
from oligocat.scalar import (EvalPoint, Poly, TruncatedSeries, binomial_poly,
                             binomial_series, evaluate)
from oligocat.setexpr import power, product
from oligocat.symcontext import SymContext

sym = SymContext()
order = OrderContext(-1, -1)
t = Poly.var()


def rand_matrix(ctx, x, rng, lo=-3, hi=3):
    basis = hom_basis(PermObject(ctx, x), PermObject(ctx, x))
    m = basis[0].scale(rng.randint(lo, hi))
    for b in basis[1:]:
        m = m + b.scale(rng.randint(lo, hi))
    return m


def order_end_basis():
    rr = product(power(1), power(1))
    pats = {p.classes: p for p in order.orbits(rr, 0)}

    def ind(classes):
        return InvariantMatrix(order, power(1), power(1),
                               SchwartzFunction.from_orbit(order, rr,
                                                           pats[classes]))
    return ind(((0,), (1,))), ind(((1,), (0,)))


def test_allones_square():
    a = InvariantMatrix.all_ones(sym, power(1))
    i = InvariantMatrix.identity(sym, power(1))
    assert matmul(a, a) == a.scale(t)
    assert matmul(i, a) == a and matmul(a, i) == a


def test_graph_composition():
    from oligocat.integration import GSetMap
    from oligocat.setexpr import inj
    f = GSetMap.coordinates(inj(2), [0])
    a_f = InvariantMatrix.from_graph(sym, f)
    b_f = a_f.transpose()
    assert matmul(a_f, b_f) == InvariantMatrix.identity(sym, power(1)).scale(t - 1)


def test_traces():
    i = InvariantMatrix.identity(sym, power(1))
    a = InvariantMatrix.all_ones(sym, power(1))
    assert trace(i) == t and trace(a) == t
    alpha, beta = Fraction(3), Fraction(5)
    m = i.scale(alpha - beta) + a.scale(beta)  # diag alpha, off-diag beta
    assert trace(m) == t * alpha


def test_trace_symmetry_randomized():
    rng = random.Random(23)
    for ctx in (sym, order):
        for _ in range(30):
            a = rand_matrix(ctx, power(1), rng)
            b = rand_matrix(ctx, power(1), rng)
            assert trace(matmul(a, b)) == trace(matmul(b, a))


def test_associativity_randomized():
    rng = random.Random(29)
    for ctx in (sym, order):
        for _ in range(30):
            a, b, c = (rand_matrix(ctx, power(1), rng) for _ in range(3))
            assert matmul(matmul(a, b), c) == matmul(a, matmul(b, c))


def test_higher_traces():
    i = InvariantMatrix.identity(sym, power(1))
    assert higher_trace(i, 0) == Poly.one()
    assert higher_trace(i, 1) == t
    assert higher_trace(i, 2) == binomial_poly(2)
    assert higher_trace(i, 3) == binomial_poly(3)


def test_char_series_examples():
    i = InvariantMatrix.identity(sym, power(1))
    assert char_series(i, 5) == TruncatedSeries(
        5, [binomial_poly(n) for n in range(5)])
    a = InvariantMatrix.all_ones(sym, power(1))
    assert char_series(a, 4) == TruncatedSeries(4, [Poly.one(), t])


def test_deligne_char_series():
    i = InvariantMatrix.identity(sym, power(1))
    a = InvariantMatrix.all_ones(sym, power(1))
    for alpha, beta in [(2, 3), (1, -1), (Fraction(-1, 2), Fraction(1, 3))]:
        m = i.scale(alpha) + a.scale(beta)
        lhs = char_series(m, 6)
        rhs = (binomial_series(t - 1, alpha, 6)
               * TruncatedSeries(6, [Poly.one(), Poly.const(alpha) + t * beta]))
        assert lhs == rhs


def test_order_end_relations():
    a, b = order_end_basis()
    i = InvariantMatrix.identity(order, power(1))
    assert matmul(a, a) == a.scale(-1)
    assert matmul(b, b) == b.scale(-1)
    ab = matmul(a, b)
    assert ab == matmul(b, a)
    assert ab == i.scale(-1) - a - b
    assert trace(i) == Poly.const(-1)
    assert trace(a) == Poly.zero()
    # indicator of x<y has empty diagonal
    assert trace(b) == Poly.zero()


def test_trace_pairing_omega():
    gram, disc, predicted, r = trace_pairing(sym, power(1))
    assert disc == t * t * (t - 1)
    assert predicted == disc and r == 0


def test_trace_pairing_r():
    gram, disc, predicted, r = trace_pairing(order, power(1))
    assert disc == Poly.one() and predicted == disc and r == 1


def test_min_poly_and_jordan():
    a = InvariantMatrix.all_ones(sym, power(1))
    x = Poly.var()
    assert min_poly(a, EvalPoint.rational(5)) == x * x - 5 * x
    s5, n5 = jordan_split(a, EvalPoint.rational(5))
    assert n5.is_zero() and s5 == a.at_level(0)
    s0, n0 = jordan_split(a, EvalPoint.rational(0))
    assert s0.is_zero() and n0 == a.at_level(0)
    # idempotent splits as itself
    e = a.scale(Fraction(1, 5))
    alg = EndAlgebra(sym, power(1))
    sp = alg.specialize(EvalPoint.rational(5))
    sv, nv = sp.jordan(sp.element(e))
    assert sp.to_matrix(sv) == e.at_level(0)
    assert all(c == 0 for c in nv)


def test_is_semisimple():
    assert is_semisimple_end(sym, power(1), EvalPoint.rational(5))
    assert not is_semisimple_end(sym, power(1), EvalPoint.rational(0))
    assert is_semisimple_end(order, power(1), EvalPoint.rational(7))


def test_idempotent_char_series_factored():
    # semisimple at t0 = 5: product of (1 + c_i u)^{m_i} matches, exponents
    # summing to the measure of the set
    a = InvariantMatrix.all_ones(sym, power(1))
    e1 = a.scale(Fraction(1, 5))
    i = InvariantMatrix.identity(sym, power(1))
    e2 = i - e1
    at = EvalPoint.rational(5)
    m1 = evaluate(trace(e1), at)
    m2 = evaluate(trace(e2), at)
    assert m1 + m2 == evaluate(sym.set_measure(power(1)), at)
    # A = 5 e1 + 0 e2: char series (1 + 5u)^1 (1 + 0u)^4
    lhs = TruncatedSeries(5, [Poly.const(evaluate(c, at))
                              for c in char_series(a, 5).coeffs])
    rhs = binomial_series(Fraction(m1), 5, 5) * binomial_series(Fraction(m2), 0, 5)
    assert lhs == rhs


def test_min_poly_needs_rational_point():
    import pytest
    a = InvariantMatrix.all_ones(sym, power(1))
    with pytest.raises(ValueError):
        min_poly(a, EvalPoint.generic())


def test_trace_requires_square():
    import pytest
    from oligocat.integration import GSetMap
    from oligocat.setexpr import inj
    a = InvariantMatrix.from_graph(sym, GSetMap.coordinates(inj(2), [0]))
    with pytest.raises(ValueError):
        trace(a)


def test_end_algebra_associativity():
    for ctx, x in [(sym, power(1)), (order, power(1))]:
        alg = EndAlgebra(ctx, x)
        assert alg.check_associativity()


def test_matrix_power_and_apply():
    a = InvariantMatrix.all_ones(sym, power(1))
    assert matrix_power(a, 2) == a.scale(t)
    assert matrix_power(a, 0) == InvariantMatrix.identity(sym, power(1))
