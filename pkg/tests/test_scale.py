import random
from fractions import Fraction as F

import pytest

from ppm.errors import Singular
from ppm.linalg import Lattice, QMatrix, apply
from ppm.qpcore import PContext, vp
from ppm.scale import invariant_lattice, scale_newton, scale_tidy

CTX3 = PContext(3)


def _rand_invertible(rng, n, bound=12):
    while True:
        m = QMatrix([[F(rng.randint(-bound, bound), rng.randint(1, bound))
                      for _ in range(n)] for _ in range(n)])
        if m.det() != 0:
            return m


def test_newton_examples():
    assert scale_newton(QMatrix.identity(2), CTX3) == 0
    assert scale_newton(QMatrix.diagonal([F(1, 3), 1]), CTX3) == 1
    assert scale_newton(QMatrix([[0, 3], [1, 0]]).inverse(), CTX3) == 1
    with pytest.raises(Singular):
        scale_newton(QMatrix([[1, 1], [2, 2]]), CTX3)


def test_tidy_examples():
    r = scale_tidy(QMatrix.identity(2), CTX3)
    assert (r.scale_exponent, r.iteration_trace) == (0, ((0, 0),))
    assert r.minimizing_lattice == Lattice.standard(CTX3, 2)

    r = scale_tidy(QMatrix.diagonal([F(1, 3), 1]), CTX3)
    assert r.scale_exponent == 1
    assert r.iteration_trace[0] == (0, 1)  # attained at the standard lattice already

    inv = QMatrix([[0, 3], [1, 0]]).inverse()
    assert apply(inv, Lattice.standard(CTX3, 2)) \
        == Lattice.from_diagonal_exponents(CTX3, [0, -1])
    r = scale_tidy(inv, CTX3)
    assert r.scale_exponent == 1 and r.iteration_trace[0] == (0, 1)


def test_tidy_report_invariants():
    rng = random.Random(101)
    for p in (2, 3, 5):
        ctx = PContext(p)
        for n in (2, 3):
            for _ in range(6):
                a = _rand_invertible(rng, n)
                r = scale_tidy(a, ctx)
                assert r.method_agreement
                assert r.scale_exponent == scale_newton(a, ctx)
                exps = [e for _, e in r.iteration_trace]
                assert all(x >= y for x, y in zip(exps, exps[1:]))
                assert exps[-1] == r.scale_exponent
                # the reported lattice really attains the minimum
                from ppm.linalg import lattice_index, lattice_intersect
                img = apply(a, r.minimizing_lattice)
                attained = lattice_index(img, lattice_intersect(img, r.minimizing_lattice))
                assert attained == r.scale_exponent


def test_power_law_small():
    rng = random.Random(5)
    for _ in range(10):
        a = _rand_invertible(rng, 2)
        base = scale_newton(a, CTX3)
        for n in range(1, 6):
            assert scale_newton(a ** n, CTX3) == n * base


def test_determinant_relation():
    rng = random.Random(9)
    for _ in range(10):
        a = _rand_invertible(rng, 3)
        assert scale_newton(a, CTX3) - scale_newton(a.inverse(), CTX3) \
            == -vp(a.det(), CTX3)


def test_invariant_lattice_examples():
    assert invariant_lattice(QMatrix([[1, 1], [0, 1]]), CTX3) \
        == Lattice.standard(CTX3, 2)
    assert invariant_lattice(QMatrix.diagonal([F(1, 3), 1]), CTX3) is None
    lat = invariant_lattice(QMatrix([[1, F(1, 3)], [0, 1]]), CTX3)
    assert lat == Lattice.from_diagonal_exponents(CTX3, [-1, 0])


def test_invariant_lattice_is_exactly_invariant():
    rng = random.Random(13)
    found = 0
    for _ in range(40):
        a = _rand_invertible(rng, 2, bound=6)
        lat = invariant_lattice(a, CTX3)
        if lat is not None:
            found += 1
            assert apply(a, lat) == lat
            assert apply(a.inverse(), lat) == lat
    assert found >= 3  # unit-eigenvalue matrices do occur in the sample
