import itertools
import random

import pytest

from reeskit.gb import (Ideal, codimension, dimension_and_degree,
                        graded_piece_dim, kernel_of_ring_map, minors_ideal,
                        normal_form, ring_dimension, vector_space_dimension)
from reeskit.polyring import (FreeModuleMap, RingMap, make_ring, random_poly,
                              row_times_matrix, transport)
from reeskit.rees import (
    PresentedModule, analytic_spread, expected_rees_ideal, is_linear_type,
    is_reduction, jacobian_dual, minimal_reduction, multiplicity,
    normal_cone, reduction_number, rees_ideal, rees_presentation,
    special_fiber_ideal, symmetric_algebra_ideal, symmetric_kernel,
    universal_embedding, which_gm,
)


def brute_colength(I):
    """Independent oracle: count standard monomials by plain enumeration."""
    basis = I.groebner().ambient_elements
    lt = [g.lead_exps() for g in basis]
    n = I.ring.ambient.nvars
    bound = max(max(e) for e in lt) + 1
    count = 0
    for e in itertools.product(range(bound), repeat=n):
        if not any(all(a >= b for a, b in zip(e, m)) for m in lt):
            count += 1
    return count


def rees_oracle_for_ideal(I):
    """Independent route: eliminate t from the graph of w_i -> g_i * t."""
    ring = I.ring
    names = list(ring.names)
    n = len(I.gens)
    wnames = [f"w_{i}" for i in range(n)]
    big = make_ring(ring.p, [names, wnames, ["t"]])
    t = big.var("t")
    gens = [big.var(w) - transport(g, big) * t
            for w, g in zip(wnames, I.gens)]
    from reeskit.gb import eliminate
    E = eliminate(Ideal(big, tuple(gens)), ["t"])
    W = rees_ideal(I).ring
    return Ideal(W, tuple(transport(g, W) for g in E.display_gens()))


class TestUniversalEmbedding:
    def test_small_module_embeds_by_x_y_z(self, artinian5):
        z = artinian5.var("z")
        M = PresentedModule.from_ideal(Ideal(artinian5, (z,)))
        phi = universal_embedding(M)
        assert phi.cols == 1 and phi.rows == 3
        entries = sorted(str(phi.entries[i][0]) for i in range(3))
        assert entries == ["x", "y", "z"]

    def test_free_rank_one(self, A2):
        M = PresentedModule.from_ideal(Ideal(A2, (A2.one(),)))
        phi = universal_embedding(M)
        assert phi.rows == 1 and phi.cols == 1
        assert phi.entries[0][0] == A2.one()

    def test_ideal_x_y_gives_inclusion(self, A2):
        x, y = A2.gens()
        M = PresentedModule.from_ideal(Ideal(A2, (x, y)))
        phi = universal_embedding(M)
        assert phi.rows == 1 and phi.cols == 2
        assert set(phi.entries[0]) == {x, y}


class TestSymmetricKernel:
    def test_inclusion_of_maximal_ideal(self, A2):
        x, y = A2.gens()
        K = symmetric_kernel(FreeModuleMap(A2, [[x, y]]))
        assert [str(g) for g in K.display_gens()] == ["y*w_0 - x*w_1"]

    def test_identity_map(self, A2):
        K = symmetric_kernel(FreeModuleMap(A2, [[A2.one()]]))
        assert not K.display_gens()

    def test_ideal_embedding_matches_versal(self, artinian5):
        x, y, z = artinian5.gens()
        M = PresentedModule.from_ideal(Ideal(artinian5, (z,)))
        Iiota = symmetric_kernel(FreeModuleMap(artinian5, [[z]]))
        Iphi = symmetric_kernel(universal_embedding(M))
        assert Iiota == Iphi


class TestSymmetricAlgebraIdeal:
    def test_koszul(self, A2):
        x, y = A2.gens()
        I0 = symmetric_algebra_ideal(Ideal(A2, (x, y)))
        assert I0 == Ideal(I0.ring, (I0.ring.var("y") * I0.ring.var("w_0")
                                     - I0.ring.var("x") * I0.ring.var("w_1"),))

    def test_free_module(self, A2):
        M = PresentedModule.from_matrix(
            FreeModuleMap(A2, (), rows=1, cols=0))
        assert not symmetric_algebra_ideal(M).display_gens()

    def test_veronese_linear_relations(self, A2):
        x, y = A2.gens()
        I0 = symmetric_algebra_ideal(Ideal(A2, (x ** 2, x * y, y ** 2)))
        W = I0.ring
        w0, w1, w2 = (W.var(f"w_{i}") for i in range(3))
        xx, yy = W.var("x"), W.var("y")
        expected = Ideal(W, (yy * w0 - xx * w1, yy * w1 - xx * w2))
        assert I0 == expected


class TestReesIdeal:
    def test_complete_intersection(self, A2):
        x, y = A2.gens()
        RI = rees_ideal(Ideal(A2, (x, y)))
        assert [str(g) for g in RI.display_gens()] == ["y*w_0 - x*w_1"]

    def test_veronese_and_elimination_oracle(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        RI = rees_ideal(I)
        assert RI == rees_oracle_for_ideal(I)
        W = RI.ring
        w0, w1, w2 = (W.var(f"w_{i}") for i in range(3))
        assert normal_form(w1 ** 2 - w0 * w2, RI).is_zero()

    def test_partial_embedding_differs(self, artinian5):
        x, y, z = artinian5.gens()
        M = PresentedModule.from_ideal(Ideal(artinian5, (z,)))
        Ipsi = symmetric_kernel(FreeModuleMap(artinian5, [[x], [y]]))
        Iphi = symmetric_kernel(universal_embedding(M))
        assert Ipsi != Iphi
        # the embeddings disagree exactly in degree p = 5
        assert graded_piece_dim(5, Ipsi, "wblock") != \
            graded_piece_dim(5, Iphi, "wblock")

    def test_saturation_strategy_agrees(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        assert rees_ideal(I, f=x ** 2) == rees_ideal(I)

    def test_saturation_strategy_zero_rejected(self, A2):
        with pytest.raises(ValueError):
            rees_ideal(Ideal(A2, (A2.var("x"),)), f=A2.zero())


class TestLinearType:
    def test_complete_intersection_is_linear_type(self, A2):
        x, y = A2.gens()
        assert is_linear_type(Ideal(A2, (x, y)))

    def test_veronese_is_not(self, A2):
        x, y = A2.gens()
        assert not is_linear_type(Ideal(A2, (x ** 2, x * y, y ** 2)))

    def test_principal_is_linear_type(self, A2):
        x, y = A2.gens()
        assert is_linear_type(Ideal(A2, (x ** 3 - y,)))


class TestNormalCone:
    def test_principal(self, A2):
        nc = normal_cone(Ideal(A2, (A2.var("x"),)))
        assert [str(g) for g in nc.quotient] == ["x"]

    def test_maximal_ideal(self, A2):
        x, y = A2.gens()
        nc = normal_cone(Ideal(A2, (x, y)))
        assert sorted(str(g) for g in nc.quotient) == ["x", "y"]
        assert ring_dimension(nc) == 2  # gr is a polynomial ring in w

    def test_unit_rejected(self, A2):
        with pytest.raises(ValueError):
            normal_cone(Ideal(A2, (A2.one(),)))


class TestMultiplicity:
    def test_regular_parameters(self, A2):
        x, y = A2.gens()
        assert multiplicity(Ideal(A2, (x, y))) == 1

    def test_x2_y(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, y))
        assert multiplicity(I) == 2
        # oracle: direct colength count of a few powers
        assert brute_colength(I) == 2
        assert brute_colength(I * I) == 6  # dim k[x,y]/(x^2,y)^2

    def test_squares_of_maximal_ideal(self, A2):
        x, y = A2.gens()
        d_values = {}
        for d in (1, 2, 3):
            I = Ideal(A2, (x, y)) ** d
            d_values[d] = multiplicity(I)
        assert d_values == {1: 1, 2: 4, 3: 9}

    def test_normal_cone_degree_cross_check(self, A2):
        # the w-graded pieces of the normal cone are I^n/I^(n+1); their
        # dimensions are the first differences of the power colengths
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, y))
        nc = normal_cone(I)
        unit = Ideal(nc, (nc.one(),))
        pieces = [graded_piece_dim(n, unit, "wblock") for n in range(6)]
        lengths = [brute_colength(I ** (n + 1)) for n in range(6)]
        diffs = [lengths[0]] + [b - a for a, b in zip(lengths, lengths[1:])]
        assert pieces == diffs

    def test_not_zero_dimensional_rejected(self, A2):
        with pytest.raises(ValueError):
            multiplicity(Ideal(A2, (A2.var("x"),)))

    def test_over_quotient_base(self):
        # double line: colength of (y)^(n+1) grows like 2(n+1)
        R0 = make_ring(101, ["x", "y"])
        R = make_ring(101, ["x", "y"], quotient=[R0.var("x") ** 2])
        assert multiplicity(Ideal(R, (R.var("y"),))) == 2


class TestSpecialFiber:
    def test_veronese_fiber(self, A2):
        x, y = A2.gens()
        F = special_fiber_ideal(Ideal(A2, (x ** 2, x * y, y ** 2)))
        assert [str(g) for g in F.display_gens()] == ["w_1^2 - w_0*w_2"]

    def test_linear_fiber_is_free(self, A2):
        x, y = A2.gens()
        assert not special_fiber_ideal(Ideal(A2, (x, y))).display_gens()

    def test_principal_fiber(self, A2):
        x, _ = A2.gens()
        F = special_fiber_ideal(Ideal(A2, (x,)))
        assert not F.display_gens()
        assert F.ring.names == ("w_0",)

    def test_not_contained_rejected(self, A2):
        x, y = A2.gens()
        with pytest.raises(ValueError):
            special_fiber_ideal(Ideal(A2, (x + 1,)))

    def test_nilpotent_fiber(self, artinian5):
        # classes of z^d survive up to d = 5, so the fiber is k[w]/(w^6)
        z = artinian5.var("z")
        F = special_fiber_ideal(Ideal(artinian5, (z,)))
        assert [str(g) for g in F.display_gens()] == ["w_0^6"]
        assert analytic_spread(Ideal(artinian5, (z,))) == 0


class TestAnalyticSpread:
    def test_maximal_ideal(self, A2):
        x, y = A2.gens()
        assert analytic_spread(Ideal(A2, (x, y))) == 2

    def test_veronese(self, A2):
        x, y = A2.gens()
        assert analytic_spread(Ideal(A2, (x ** 2, x * y, y ** 2))) == 2

    def test_sandwich_property(self, A2):
        x, y = A2.gens()
        for I in (Ideal(A2, (x, y)), Ideal(A2, (x ** 2, x * y, y ** 2)),
                  Ideal(A2, (x ** 2, y ** 3))):
            ell = analytic_spread(I)
            height = codimension(I)
            assert height <= ell <= ring_dimension(A2)


class TestReductions:
    def test_reduction_of_itself(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        cert = is_reduction(I, I)
        assert cert.accepted and cert.witness == 0

    def test_veronese_diagonal_reduction(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        J = Ideal(A2, (x ** 2, y ** 2))
        cert = is_reduction(I, J)
        assert cert.accepted and cert.witness == 1
        # independent oracle: J*I and I^2 agree as monomial sets in degree 4
        mono = lambda K: {g.lead_exps() for g in (K).groebner().elements}
        assert mono(J * I) == mono(I * I)

    def test_refutation_within_cap(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        cert = is_reduction(I, Ideal(A2, (x ** 2,)), cap=5)
        assert not cert.accepted

    def test_not_contained_rejected(self, A2):
        x, y = A2.gens()
        with pytest.raises(ValueError):
            is_reduction(Ideal(A2, (x ** 2,)), Ideal(A2, (y,)))

    def test_minimal_reduction_accepted_for_seeds(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        for seed in (0, 1, 2):
            J = minimal_reduction(I, seed=seed)
            assert len(J.gens) == 2
            assert is_reduction(I, J).accepted

    def test_linear_case_reduction_number_zero(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x, y))
        J = minimal_reduction(I, seed=0)
        assert reduction_number(I, J) == 0

    def test_principal_returns_itself(self, A2):
        x, _ = A2.gens()
        I = Ideal(A2, (x ** 2,))
        assert minimal_reduction(I, seed=0) == I

    def test_reduction_number_examples(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        assert reduction_number(I, Ideal(A2, (x ** 2, y ** 2))) == 1
        assert reduction_number(I, I) == 0
        with pytest.raises(ValueError):
            reduction_number(I, Ideal(A2, (x ** 2,)))


class TestWhichGm:
    def test_maximal_ideal_infinite(self, A2):
        import math
        x, y = A2.gens()
        assert which_gm(Ideal(A2, (x, y))) == math.inf

    def test_veronese(self, A2):
        x, y = A2.gens()
        gm = which_gm(Ideal(A2, (x ** 2, x * y, y ** 2)))
        assert gm >= 2


class TestJacobianDual:
    def test_coefficient_extraction(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y))
        psi = jacobian_dual(I)
        W = psi.ring
        # exact identity T*phi = X*psi
        M = PresentedModule.from_ideal(I)
        pres = M.presentation
        lifted = FreeModuleMap(
            W, [[transport(e, W) for e in row] for row in pres.entries],
            rows=pres.rows, cols=pres.cols)
        T = [W.var("w_0"), W.var("w_1")]
        X = [W.var("x"), W.var("y")]
        left = row_times_matrix(T, lifted)
        right = row_times_matrix(X, psi)
        assert left == right

    def test_zero_matrix(self, A2):
        x, y = A2.gens()
        W = rees_ideal(Ideal(A2, (x, y))).ring
        zero = FreeModuleMap(W, [[W.zero()], [W.zero()]])
        psi = jacobian_dual(zero, [W.var("x"), W.var("y")],
                            [W.var("w_0"), W.var("w_1")])
        assert psi.is_zero()

    def test_membership_failure_reported(self, A2):
        x, y = A2.gens()
        W = rees_ideal(Ideal(A2, (x, y))).ring
        bad = FreeModuleMap(W, [[W.one()], [W.zero()]])
        with pytest.raises(ValueError):
            jacobian_dual(bad, [W.var("x"), W.var("y")],
                          [W.var("w_0"), W.var("w_1")])


class TestExpectedReesIdeal:
    def test_x2_xy(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y))
        assert expected_rees_ideal(I) == rees_ideal(I)

    def test_complete_intersection(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x, y))
        E = expected_rees_ideal(I)
        assert E == rees_ideal(I) == symmetric_algebra_ideal(I)

    def test_veronese_determinant_closes_the_gap(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        E = expected_rees_ideal(I)
        assert E == rees_ideal(I)
        psi = jacobian_dual(I)
        dets = minors_ideal(2, psi)
        W = dets.ring
        w0, w1, w2 = (W.var(f"w_{i}") for i in range(3))
        # the determinant recovers the Plucker-type quadric
        assert normal_form(w1 ** 2 - w0 * w2, dets).is_zero()


class TestStructuralInvariants:
    def test_containment_chain(self, A2):
        x, y = A2.gens()
        for gens in ((x, y), (x ** 2, x * y, y ** 2), (x ** 3, y ** 2)):
            I = Ideal(A2, gens)
            I0 = symmetric_algebra_ideal(I)
            RI = rees_ideal(I)
            for g in I0.gens:
                assert normal_form(g, RI).is_zero()
            assert (I0 == RI) == is_linear_type(I)

    def test_linear_part_characterization(self, A2):
        # w-degree-1 part of the Rees ideal equals the symmetric algebra part
        x, y = A2.gens()
        for gens in ((x ** 2, x * y, y ** 2), (x ** 2, y ** 2), (x, y)):
            I = Ideal(A2, gens)
            I0 = symmetric_algebra_ideal(I)
            RI = rees_ideal(I)
            wnames = set(RI.ring.blocks[RI.ring.rees_block])
            widx = [RI.ring.var_index(n) for n in wnames]
            for g in RI.groebner().elements:
                wdeg = max(sum(e[i] for i in widx) for e, _ in g.terms)
                if wdeg == 1:
                    assert normal_form(g, I0).is_zero()

    def test_maximal_minors_of_dual_in_rees_ideal(self, A2):
        x, y = A2.gens()
        I = Ideal(A2, (x ** 2, x * y, y ** 2))
        psi = jacobian_dual(I)
        RI = rees_ideal(I)
        for g in minors_ideal(psi.rows, psi).gens:
            assert normal_form(g, RI).is_zero()

    def test_rees_presentation_fields(self, A2):
        x, y = A2.gens()
        rp = rees_presentation(Ideal(A2, (x, y)))
        assert rp.generators == (x, y)
        assert rp.ideal.ring == rp.ring
        # degree-one w-part belongs to the symmetric algebra ideal
        assert rp.ring.rees_block is not None
