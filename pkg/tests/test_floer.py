import random
from fractions import Fraction as F
from itertools import product as iter_product

import pytest

from toricfloer import (
    CliffordElement,
    Fiber,
    NotBalanced,
    boundary_pairing,
    disc_areas,
    disc_l_term,
    elimination_rank,
    formal_hessian,
    hf_rank,
    is_balanced,
    l_product,
    load_toric,
    m1_apply,
    m2_product,
    novikov_rank,
    obstruction_form,
    subsets_graded,
    superpotential_derivative,
    wedge,
)
from toricfloer.floer import differential_matrix
from toricfloer.novikov import ONE, ZERO, NovikovElement, monomial

from conftest import balanced_fiber, random_interior_fiber


def all_tuples(n, m):
    return list(iter_product(range(n), repeat=m))


class TestObstructionForm:
    def test_cp2_example(self):
        X = load_toric("CP2")
        alpha = obstruction_form(X, Fiber((F(1, 4), F(1, 4))))
        expected = monomial(1, F(1, 4), 1) - monomial(1, F(1, 2), 1)
        assert alpha == [expected, expected]

    def test_vanishes_exactly_at_balanced_fibers(self, builtin):
        rng = random.Random(41)
        center = balanced_fiber(builtin)
        assert all(a == ZERO for a in obstruction_form(builtin, center))
        for _ in range(25):
            f = random_interior_fiber(builtin, rng)
            vanishes = all(a == ZERO for a in obstruction_form(builtin, f))
            assert vanishes == is_balanced(builtin, f).balanced


class TestDifferential:
    def test_m1_of_unit_cp2(self):
        X = load_toric("CP2")
        out = m1_apply(X, Fiber((F(1, 4), F(1, 4))), CliffordElement.unit(2))
        c = monomial(1, F(1, 4), 1) - monomial(1, F(1, 2), 1)
        assert out == CliffordElement(2, {(0,): c, (1,): c})

    def test_m1_of_unit_cp1_carries_the_sign(self):
        X = load_toric("CP1")
        out = m1_apply(X, Fiber((F(1, 4),)), CliffordElement.unit(1))
        c = monomial(1, F(1, 4), 1) - monomial(1, F(3, 4), 1)
        assert out == CliffordElement(1, {(0,): -c})

    def test_top_class_is_closed(self, builtin):
        rng = random.Random(42)
        top = CliffordElement.basis_element(builtin.n, tuple(range(builtin.n)))
        for _ in range(5):
            f = random_interior_fiber(builtin, rng)
            assert not m1_apply(builtin, f, top)

    def test_m1_vanishes_at_center(self, builtin):
        center = balanced_fiber(builtin)
        for subset in subsets_graded(builtin.n):
            x = CliffordElement.basis_element(builtin.n, subset)
            assert not m1_apply(builtin, center, x)

    def test_matrix_convention(self):
        X = load_toric("CP2")
        f = Fiber((F(1, 4), F(1, 4)))
        basis, M = differential_matrix(X, f)
        assert basis == [(), (0,), (1,), (0, 1)]
        assert len(M) == len(M[0]) == 4
        alpha = obstruction_form(X, f)
        col = basis.index(())
        assert M[basis.index((0,))][col] == alpha[0]
        assert M[basis.index((1,))][col] == alpha[1]
        # wedging the one-form onto C_1 and C_2 lands on the top class
        assert M[basis.index((0, 1))][basis.index((0,))] == -alpha[1]
        assert M[basis.index((0, 1))][basis.index((1,))] == alpha[0]

    def test_matrix_matches_m1_apply(self, builtin):
        rng = random.Random(43)
        f = random_interior_fiber(builtin, rng)
        basis, M = differential_matrix(builtin, f)
        for col, subset in enumerate(basis):
            img = m1_apply(
                builtin, f, CliffordElement.basis_element(builtin.n, subset)
            )
            for row, target in enumerate(basis):
                assert img.coefficient(target) == M[row][col]

    def test_squares_to_zero(self, builtin):
        rng = random.Random(44)
        for _ in range(10):
            f = random_interior_fiber(builtin, rng)
            for subset in subsets_graded(builtin.n):
                x = CliffordElement.basis_element(builtin.n, subset)
                assert not m1_apply(builtin, f, m1_apply(builtin, f, x))

    def test_squares_to_zero_as_matrix(self):
        X = load_toric("CP1xCP1")
        _, M = differential_matrix(X, Fiber((F(1, 3), F(1, 5))))
        size = len(M)
        for i in range(size):
            for j in range(size):
                acc = ZERO
                for k in range(size):
                    acc = acc + M[i][k] * M[k][j]
                assert acc == ZERO

    def test_left_wedge_module_property(self, builtin):
        # wedging the obstruction form on the left slides past factors
        # one sign at a time: m1(ab) = m1(a)b = (-1)^{|a|} a m1(b)
        rng = random.Random(45)
        n = builtin.n
        f = random_interior_fiber(builtin, rng)
        for s1 in subsets_graded(n):
            for s2 in subsets_graded(n):
                a = CliffordElement.basis_element(n, s1)
                b = CliffordElement.basis_element(n, s2)
                lhs = m1_apply(builtin, f, wedge(a, b))
                assert lhs == wedge(m1_apply(builtin, f, a), b)
                assert lhs == wedge(a, m1_apply(builtin, f, b)) * ((-1) ** len(s1))


class TestRank:
    def test_small_matrices(self):
        one = monomial(1)
        t = monomial(1, F(1, 2), 1)
        assert elimination_rank([[one]], 10) == 1
        assert elimination_rank([[ZERO]], 10) == 0
        assert elimination_rank([[t, ZERO], [ZERO, ZERO]], 10) == 1
        # second row is T^{1/2}q times the first
        assert elimination_rank([[one, t], [t, t * t]], 10) == 1
        # invertible despite the low-valuation off-diagonal
        assert elimination_rank([[t, one], [one, t]], 10) == 2

    def test_cutoff_doubling_recovers_deep_cancellation(self):
        one = monomial(1)
        deep = monomial(1, 15, 1)
        M = [[one, one], [one, one + deep]]
        assert elimination_rank(M, 10) == 1
        assert elimination_rank(M, 20) == 2
        assert novikov_rank(M, initial_cutoff=10) == 2

    def test_rank_values(self):
        X = load_toric("CP2")
        assert hf_rank(X, Fiber((F(1, 3), F(1, 3)))) == 4
        assert hf_rank(X, Fiber((F(1, 4), F(1, 4)))) == 0
        Y = load_toric("CP1")
        assert hf_rank(Y, Fiber((F(1, 2),))) == 2
        assert hf_rank(Y, Fiber((F(1, 3),))) == 0
        Z = load_toric("CP1xCP1")
        assert hf_rank(Z, Fiber((F(1, 2), F(1, 2)))) == 4
        assert hf_rank(Z, Fiber((F(1, 2), F(1, 3)))) == 0
        W = load_toric("CPn(3)")
        assert hf_rank(W, balanced_fiber(W)) == 8
        assert hf_rank(W, Fiber((F(1, 4), F(1, 4), F(1, 3)))) == 0

    def test_dichotomy_random(self, builtin):
        # coarse denominators keep the valuation gaps, and with them the
        # truncated inverse series, short
        rng = random.Random(46)
        for _ in range(20):
            f = random_interior_fiber(builtin, rng, denom=6)
            expected = 2**builtin.n if is_balanced(builtin, f).balanced else 0
            assert hf_rank(builtin, f) == expected

    def test_rank_stable_across_cutoffs(self, builtin):
        rng = random.Random(47)
        f = random_interior_fiber(builtin, rng, denom=6)
        _, M = differential_matrix(builtin, f)
        r10 = elimination_rank(M, 10)
        assert r10 == elimination_rank(M, 20) == novikov_rank(M)


class TestLProducts:
    def test_cp2_center_goldens(self):
        X = load_toric("CP2")
        f = Fiber((F(1, 3), F(1, 3)))
        t = monomial(1, F(1, 3), 1)
        assert l_product(X, f) == 3 * t
        assert l_product(X, f, (0,)) == ZERO
        assert l_product(X, f, (0, 1)) == t
        assert l_product(X, f, (0, 0)) == 2 * t
        assert l_product(X, f, (0, 0, 0)) == ZERO
        assert l_product(X, f, (0, 0, 1)) == -t

    def test_cp1_goldens(self):
        X = load_toric("CP1")
        f = Fiber((F(1, 2),))
        t = monomial(1, F(1, 2), 1)
        assert l_product(X, f) == 2 * t
        assert l_product(X, f, (0,)) == ZERO
        assert l_product(X, f, (0, 0)) == 2 * t

    def test_symmetric_in_the_arguments(self, builtin):
        rng = random.Random(48)
        f = random_interior_fiber(builtin, rng)
        for _ in range(20):
            idx = [rng.randrange(builtin.n) for _ in range(rng.randint(2, 4))]
            shuffled = list(idx)
            rng.shuffle(shuffled)
            assert l_product(builtin, f, tuple(idx)) == l_product(
                builtin, f, tuple(shuffled)
            )

    def test_index_out_of_range(self):
        X = load_toric("CP1")
        with pytest.raises(IndexError):
            l_product(X, Fiber((F(1, 2),)), (1,))

    def test_matches_formal_hessian_in_two_slots(self, builtin):
        rng = random.Random(49)
        for f in (balanced_fiber(builtin), random_interior_fiber(builtin, rng)):
            Q = formal_hessian(builtin, f)
            for i in range(builtin.n):
                for j in range(builtin.n):
                    assert l_product(builtin, f, (i, j)) == Q.entry(i, j)


class TestDivisorRelation:
    def test_on_builtin_discs(self, builtin):
        rng = random.Random(50)
        f = random_interior_fiber(builtin, rng)
        n = builtin.n
        for d in disc_areas(builtin, f):
            for m in range(1, 5):
                for idx in all_tuples(n, m):
                    lhs = disc_l_term(n, d.normal, d.area, idx)
                    rhs = boundary_pairing(n, d.normal, idx[0]) * disc_l_term(
                        n, d.normal, d.area, idx[1:]
                    )
                    assert lhs == rhs

    def test_on_synthetic_discs(self):
        rng = random.Random(51)
        for _ in range(100):
            n = rng.randint(1, 4)
            normal = tuple(rng.randint(-3, 3) for _ in range(n))
            area = F(rng.randint(1, 9), rng.randint(1, 9))
            m = rng.randint(1, 4)
            idx = tuple(rng.randrange(n) for _ in range(m))
            lhs = disc_l_term(n, normal, area, idx)
            rhs = boundary_pairing(n, normal, idx[0]) * disc_l_term(
                n, normal, area, idx[1:]
            )
            assert lhs == rhs

    def test_pairing_values(self):
        assert boundary_pairing(1, (-1,), 0) == 1
        assert boundary_pairing(2, (-1, -1), 0) == -1
        assert boundary_pairing(2, (0, 1), 1) == 1


class TestPotentialCorrespondence:
    def test_numeric_match(self, builtin):
        rng = random.Random(52)
        n = builtin.n
        fibers = [balanced_fiber(builtin)] + [
            random_interior_fiber(builtin, rng) for _ in range(2)
        ]
        for f in fibers:
            theta = [float(x) for x in f.u]
            for m in range(0, 5):
                for idx in all_tuples(n, m):
                    lhs = l_product(builtin, f, idx).numeric()
                    rhs = (-1) ** ((n - 1) * m) * superpotential_derivative(
                        builtin, theta, idx
                    )
                    assert abs(rhs.imag) < 1e-14
                    assert lhs == pytest.approx(rhs.real, rel=1e-10, abs=1e-12)


class TestM2:
    def test_cp1_point_squares_to_area_monomial(self):
        X = load_toric("CP1")
        f = Fiber((F(1, 2),))
        p = CliffordElement.generator(1, 0)
        assert m2_product(X, f, p, p) == CliffordElement(
            1, {(): monomial(1, F(1, 2), 1)}
        )

    def test_unit_laws(self, builtin):
        center = balanced_fiber(builtin)
        u = CliffordElement.unit(builtin.n)
        for subset in subsets_graded(builtin.n):
            x = CliffordElement.basis_element(builtin.n, subset)
            assert m2_product(builtin, center, u, x) == x
            assert m2_product(builtin, center, x, u) == x

    def test_associative_on_basis(self):
        X = load_toric("CP2")
        f = balanced_fiber(X)
        basis = [CliffordElement.basis_element(2, s) for s in subsets_graded(2)]
        for a in basis:
            for b in basis:
                for c in basis:
                    left = m2_product(X, f, m2_product(X, f, a, b), c)
                    right = m2_product(X, f, a, m2_product(X, f, b, c))
                    assert left == right

    def test_anticommutator_recovers_two_slot_product(self, builtin):
        center = balanced_fiber(builtin)
        n = builtin.n
        for i in range(n):
            for j in range(n):
                ci = CliffordElement.generator(n, i)
                cj = CliffordElement.generator(n, j)
                anti = m2_product(builtin, center, ci, cj) + m2_product(
                    builtin, center, cj, ci
                )
                expected = CliffordElement(n, {(): l_product(builtin, center, (i, j))})
                assert anti == expected

    def test_rejects_unbalanced_fiber(self):
        X = load_toric("CP2")
        u = CliffordElement.unit(2)
        with pytest.raises(NotBalanced, match="not.*balanced"):
            m2_product(X, Fiber((F(1, 4), F(1, 4))), u, u)
