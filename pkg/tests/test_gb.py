import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from reeskit.gb import (
    GroebnerBasis, HilbertSeries, Ideal, codimension, dimension_and_degree,
    eliminate, graded_piece_dim, groebner_basis, hilbert_series,
    intersect_ideals, kernel_of_matrix, kernel_of_ring_map, minors_ideal,
    module_contains, normal_form, radical_membership, ring_dimension,
    saturate, saturation_exponent, standard_monomials, trim_homogeneous,
    colon,
)
from reeskit.polyring import (FreeModuleMap, RingMap, make_ring, random_poly,
                              transport)


def spoly(f, g):
    lf, lg = f.lead_exps(), g.lead_exps()
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    p = f.ring.p
    mf = f.ring.monomial(tuple(m - a for a, m in zip(lf, lcm)),
                         pow(f.lead_coeff(), -1, p))
    mg = g.ring.monomial(tuple(m - a for a, m in zip(lg, lcm)),
                         pow(g.lead_coeff(), -1, p))
    return mf * f - mg * g


def brute_monomial_count(lt_gens, nvars, degree):
    """Oracle: count degree-d standard monomials by full enumeration."""
    count = 0
    for e in itertools.product(range(degree + 1), repeat=nvars):
        if sum(e) != degree:
            continue
        if not any(all(a >= b for a, b in zip(e, m)) for m in lt_gens):
            count += 1
    return count


class TestGroebnerBasis:
    def test_hand_buchberger_step(self, A2):
        # S(x^2 - y, y) reduces to x^2; reduced basis is {y, x^2}
        x, y = A2.gens()
        basis = Ideal(A2, (x ** 2 - y, y)).groebner().elements
        assert [str(g) for g in basis] == ["y", "x^2"]

    def test_single_generator(self, A2):
        basis = Ideal(A2, (A2.var("x"),)).groebner().elements
        assert [str(g) for g in basis] == ["x"]

    def test_module_span_membership(self, A2):
        x, y = A2.gens()
        M = FreeModuleMap(A2, [[x, y], [-y, x]])
        gb = groebner_basis(M)
        assert module_contains(gb, (x, -y))
        assert module_contains(gb, (y, x))
        assert not module_contains(gb, (A2.one(), A2.zero()))

    def test_generators_reduce_to_zero(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 3 - y ** 2, x * y - 1, x + y ** 5))
        for g in I.gens:
            assert normal_form(g, I).is_zero()

    def test_representation_coefficients(self, A2):
        # optional bookkeeping: each basis element as a combination of the
        # original generators
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2 - y, x * y - 1))
        gbr = I.groebner(want_rep=True)
        for elt, rep in zip(gbr.ambient_elements, gbr.representation):
            back = A2.zero()
            for idx, coef in rep.items():
                back = back + coef * I.gens[idx]
            assert back == elt

    @settings(max_examples=12, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_all_spairs_reduce_to_zero(self, seed):
        rng = random.Random(seed)
        ring = make_ring(13, ["x", "y", "z"])
        gens = tuple(random_poly(ring, 1 + rng.randrange(3), rng)
                     for _ in range(3))
        I = Ideal(ring, gens)
        basis = I.groebner().elements
        for f, g in itertools.combinations(basis, 2):
            assert normal_form(spoly(f, g), I).is_zero()


class TestNormalForm:
    def test_single_division_step(self, A2):
        x, y = A2.gens()
        assert normal_form(x ** 2, Ideal(A2, (x ** 2 - y,))) == y

    def test_basis_member(self, A2):
        x, y = A2.gens()
        assert normal_form(y, Ideal(A2, (y, x ** 2))).is_zero()

    def test_zero(self, A2):
        assert normal_form(A2.zero(), Ideal(A2, (A2.var("x"),))).is_zero()

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_exact_division_identity(self, seed):
        rng = random.Random(seed)
        ring = make_ring(101, ["x", "y"])
        I = Ideal(ring, tuple(random_poly(ring, 1 + rng.randrange(2), rng)
                              for _ in range(2)))
        f = random_poly(ring, 3, rng)
        r, quots = normal_form(f, I, want_quotients=True)
        back = r
        for b, q in quots:
            back = back + q * b
        assert back == f


class TestEliminate:
    def test_cuspidal_cubic(self):
        R = make_ring(101, ["t", "x", "y"])
        t, x, y = R.gens()
        E = eliminate(Ideal(R, (x - t ** 2, y - t ** 3)), ["t"])
        # oracle: substitute the parametrization back in
        T = make_ring(101, ["t"])
        phi = RingMap(E.ring, T, [T.var("t") ** 2, T.var("t") ** 3])
        for g in E.gens:
            assert phi(g).is_zero()
        assert [str(g) for g in E.display_gens()] == ["x^3 - y^2"]

    def test_empty_block(self, A2):
        I = Ideal(A2, (A2.var("x"),))
        assert eliminate(I, []) is I

    def test_graph_ideal_contracts_to_zero(self):
        R = make_ring(101, ["t", "x"])
        t, x = R.gens()
        E = eliminate(Ideal(R, (t - x ** 2,)), ["t"])
        assert not E.display_gens()

    def test_unknown_variable(self, A2):
        with pytest.raises(ValueError):
            eliminate(Ideal(A2, (A2.var("x"),)), ["zz"])

    def test_generators_free_of_block_and_members(self):
        R = make_ring(101, ["t", "x", "y"])
        t, x, y = R.gens()
        I = Ideal(R, (x - t ** 2, y - t ** 3, t * x - y))
        E = eliminate(I, ["t"])
        for g in E.gens:
            assert "t" not in str(g)
            assert normal_form(transport(g, R), I).is_zero()


class TestKernelOfRingMap:
    def test_monomial_curve(self):
        W = make_ring(101, ["w_0", "w_1"])
        S = make_ring(101, ["s"])
        s = S.var("s")
        K = kernel_of_ring_map(RingMap(W, S, [s ** 2, s ** 3]))
        assert [str(g) for g in K.display_gens()] == ["w_0^3 - w_1^2"]
        # oracle: inclusion (images vanish) and dimension one
        assert dimension_and_degree(K)[0] == 1

    def test_identity_map(self, A2):
        K = kernel_of_ring_map(RingMap(A2, A2, list(A2.gens())))
        assert not K.display_gens()

    def test_map_onto_quotient(self):
        W = make_ring(101, ["w"])
        X0 = make_ring(101, ["x"])
        X = make_ring(101, ["x"], quotient=[X0.var("x")])
        K = kernel_of_ring_map(RingMap(W, X, [X.var("x")]))
        assert [str(g) for g in K.display_gens()] == ["w"]


class TestColonSaturate:
    def test_remove_x_component(self, A2):
        x, y = A2.gens()
        assert [str(g) for g in
                saturate(Ideal(A2, (x ** 2 * y,)), x).display_gens()] == ["y"]

    def test_hand_colon(self, A2):
        x, y = A2.gens()
        got = colon(Ideal(A2, (x * y, y ** 2)), y)
        assert got == Ideal(A2, (x, y))

    def test_colon_by_unit(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, y))
        assert colon(I, A2.one()) == I

    def test_colon_by_ideal(self, A2):
        x, y = A2.gens()
        got = colon(Ideal(A2, (x * y,)), Ideal(A2, (x, y)))
        # oracle by hand: (xy) : (x,y) = (xy):x meet (xy):y = (y) meet (x)
        assert got == Ideal(A2, (x * y,))

    def test_colon_by_zero_ideal_rejected(self, A2):
        with pytest.raises(ValueError):
            colon(Ideal(A2, (A2.var("x"),)), Ideal(A2, ()))

    def test_saturation_stability_properties(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 3 * y ** 2, x * y ** 4))
        n, sat = saturation_exponent(I, x)
        assert colon(sat, x) == sat
        for g in I.gens:
            assert normal_form(g, sat).is_zero()
        # f^N * sat inside I
        for g in sat.gens:
            assert normal_form(x ** n * g, I).is_zero()

    @settings(max_examples=8, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_rabinowitsch_agrees_with_iterated_colon(self, seed):
        rng = random.Random(seed)
        ring = make_ring(13, ["x", "y"])
        gens = tuple(random_poly(ring, 1 + rng.randrange(3), rng)
                     for _ in range(2))
        f = random_poly(ring, 1 + rng.randrange(2), rng)
        I = Ideal(ring, gens)
        assert saturate(I, f) == saturate(I, f, method="rabinowitsch")


class TestIntersect:
    def test_two_axes(self, A2):
        x, y = A2.gens()
        got = intersect_ideals(Ideal(A2, (x,)), Ideal(A2, (y,)))
        assert got == Ideal(A2, (x * y,))

    def test_self_intersection(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2 - y, y ** 3))
        assert intersect_ideals(I, I) == I

    def test_containment(self, A2):
        x, _ = A2.gens()
        got = intersect_ideals(Ideal(A2, (x ** 2,)), Ideal(A2, (x,)))
        assert got == Ideal(A2, (x ** 2,))


class TestDimensionDegree:
    def test_line(self, A2):
        assert dimension_and_degree(Ideal(A2, (A2.var("x"),))) == (1, 1)

    def test_smooth_conic(self, A2):
        x, y = A2.gens()
        assert dimension_and_degree(Ideal(A2, (x ** 2 - y,))) == (1, 2)

    def test_point(self, A2):
        x, y = A2.gens()
        assert dimension_and_degree(Ideal(A2, (x, y))) == (0, 1)

    def test_unit_ideal_convention(self, A2):
        assert dimension_and_degree(Ideal(A2, (A2.one(),))) == (-1, 0)

    def test_ring_dimension_with_quotient(self, artinian5):
        assert ring_dimension(artinian5) == 0

    def test_degree_of_squarefree_hypersurface(self, A2):
        # sanity: degree of (f) equals the total degree for squarefree f
        x, y = A2.gens()
        for f in (x * y - 1, x ** 3 + y ** 2 * x + y, (x + y) * (x - y) + 1):
            assert dimension_and_degree(Ideal(A2, (f,)))[1] == f.total_degree()

    def test_codim_unit(self, A2):
        import math
        assert codimension(Ideal(A2, (A2.one(),))) == math.inf


class TestHilbertSeries:
    def test_principal_quadric(self, A2):
        hs = hilbert_series(Ideal(A2, (A2.var("x") ** 2,)))
        # (1 - T^2)/(1 - T)^2 as a rational function
        assert hs.equivalent(HilbertSeries({0: 1, 2: -1}, (1, 1)))

    def test_zero_ideal(self, A2):
        hs = hilbert_series(Ideal(A2, ()))
        assert hs == HilbertSeries({0: 1}, (1, 1))

    def test_irrelevant_ideal_is_one(self, A2):
        hs = hilbert_series(Ideal(A2, tuple(A2.gens())))
        assert hs == HilbertSeries({0: 1}, ())

    def test_inhomogeneous_rejected(self, A2):
        x, y = A2.gens()
        with pytest.raises(ValueError):
            hilbert_series(Ideal(A2, (x ** 2 - y,)))

    def test_weighted_variable_degrees(self):
        W = make_ring(101, ["x", "y"], degrees=(1, 2))
        assert hilbert_series(Ideal(W, ())) == HilbertSeries({0: 1}, (1, 2))
        hs = hilbert_series(Ideal(W, (W.var("y"),)))
        # k[x] with deg x = 1
        assert hs.equivalent(HilbertSeries({0: 1}, (1,)))

    @settings(max_examples=10, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_series_against_brute_count(self, seed):
        rng = random.Random(seed)
        ring = make_ring(13, ["x", "y", "z"])
        gens = []
        for _ in range(2):
            d = 1 + rng.randrange(3)
            f = random_poly(ring, d, rng, homogeneous=True)
            if not f.is_zero():
                gens.append(f)
        I = Ideal(ring, tuple(gens))
        hs = hilbert_series(I)
        coeffs = hs.coefficients(6)
        lt = [g.lead_exps() for g in I.groebner().ambient_elements]
        for d in range(7):
            assert coeffs[d] == brute_monomial_count(lt, 3, d)


class TestKernelOfMatrix:
    def test_koszul_syzygy(self, A2):
        x, y = A2.gens()
        ker = kernel_of_matrix(FreeModuleMap(A2, [[x, y]]))
        assert ker.cols == 1
        assert ker.column(0) in ((y, -x), (-y, x))

    def test_identity_has_zero_kernel(self, A2):
        one, zero = A2.one(), A2.zero()
        ker = kernel_of_matrix(FreeModuleMap(A2, [[one, zero], [zero, one]]))
        assert ker.cols == 0

    def test_common_factor_row(self, A2):
        x, y = A2.gens()
        ker = kernel_of_matrix(FreeModuleMap(A2, [[x ** 2, x * y]]))
        assert ker.cols == 1
        assert ker.column(0) in ((y, -x), (-y, x))

    def test_kernel_columns_annihilated(self, A3):
        x, y, z = A3.gens()
        A = FreeModuleMap(A3, [[x, y, z], [y, z, x]])
        ker = kernel_of_matrix(A)
        for j in range(ker.cols):
            col = ker.column(j)
            for i in range(A.rows):
                acc = A3.zero()
                for k in range(A.cols):
                    acc = acc + A.entries[i][k] * col[k]
                assert acc.is_zero()

    def test_annihilator_over_quotient(self, artinian5):
        # ann(z) = (x,y,z)^5 in the Artinian quotient ring, as a one-column kernel
        z = artinian5.var("z")
        ker = kernel_of_matrix(FreeModuleMap(artinian5, [[z]]))
        assert ker.rows == 1
        degs = sorted({f.total_degree() for (f,) in ker.columns()})
        assert degs == [5]
        assert ker.cols == 19  # 21 degree-5 monomials minus x^5, y^5


class TestMinors:
    def test_generic_2x3(self, A3):
        x, y, z = A3.gens()
        A = FreeModuleMap(A3, [[x, y, z], [y, z, x]])
        M = minors_ideal(2, A)
        assert len(M.gens) == 3
        assert all(g.total_degree() == 2 for g in M.gens)

    def test_conventions(self, A2):
        x, y = A2.gens()
        A = FreeModuleMap(A2, [[x, y], [y, x]])
        assert minors_ideal(0, A).is_unit()
        assert minors_ideal(3, A).is_zero()


class TestTrim:
    def test_drops_redundant(self, A2):
        x, y = A2.gens()
        got = trim_homogeneous(Ideal(A2, (x, x ** 2, y)))
        assert sorted(str(g) for g in got.gens) == ["x", "y"]

    def test_keeps_independent_quadrics(self, A2):
        x, y = A2.gens()
        got = trim_homogeneous(Ideal(A2, (x ** 2 + y ** 2, y ** 2)))
        assert len(got.gens) == 2

    def test_zero(self, A2):
        assert not trim_homogeneous(Ideal(A2, ())).gens

    def test_inhomogeneous_reported(self, A2):
        x, y = A2.gens()
        with pytest.raises(ValueError):
            trim_homogeneous(Ideal(A2, (x ** 2 - y,)))


class TestGradedPieces:
    def test_linear_piece(self, A2):
        I = Ideal(A2, tuple(A2.gens()))
        assert graded_piece_dim(1, I) == 2

    def test_quadratic_piece(self, A2):
        I = Ideal(A2, tuple(A2.gens()))
        assert graded_piece_dim(2, I) == 3

    def test_zero_ideal(self, A2):
        assert graded_piece_dim(3, Ideal(A2, ())) == 0

    def test_infinite_piece_reported(self):
        ring = make_ring(101, [["x"], ["w"]]).with_rees_block(1)
        I = Ideal(ring, (ring.var("w"),))
        with pytest.raises(ValueError):
            graded_piece_dim(1, I, "wblock")


class TestRadicalMembership:
    def test_power_detected(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 3, y ** 2 * x))
        assert radical_membership(x, I)
        assert not radical_membership(y, I)
