from fractions import Fraction

import pytest

from latfree.errors import ArityError, DimensionError, UnsupportedSpaceError
from latfree.expr import parse, print_expr
from latfree.free import (
    LatticeMap,
    contractivity_audit,
    element_norm,
    embed,
    extend_hom,
    generator,
    make_element,
    pullback_seminorm,
    target_lattice,
    zero_element,
)
from latfree.norm import (
    fvl_space,
    maximality_audit,
    norm_exact_polyhedral,
    seq_space,
)
from latfree.pwl import equivalent

F = Fraction


def identity_basis(n):
    return [tuple(F(1 if i == j else 0) for j in range(n)) for i in range(n)]


class TestEmbed:
    def test_realized_is_the_evaluation_functional(self):
        el = embed((1, 0), seq_space(1, 2))
        assert el.realized.eval((5, 7)) == 5
        el2 = embed((2, -3), seq_space(1, 2))
        assert el2.realized.eval((1, 1)) == -1

    def test_norm_recovers_the_vector_norm(self):
        cert = element_norm(embed((3, 4), seq_space(2, 2)), restarts=4, seed=1)
        assert cert.lower == 5 == cert.upper

    def test_zero_vector(self):
        z = embed((0, 0), seq_space(1, 2))
        cert = element_norm(z)
        assert cert.lower == 0 == cert.upper


class TestGenerator:
    def test_projects_onto_its_coordinate(self):
        g = generator(fvl_space(2), 1)
        assert g.realized.eval((3, -1)) == 3

    def test_has_unit_norm(self):
        cert = element_norm(generator(fvl_space(3), 2))
        assert cert.exact and cert.lower == 1 == cert.upper

    def test_index_validation(self):
        with pytest.raises(DimensionError):
            generator(fvl_space(2), 3)


class TestMakeElement:
    def test_independent_vectors_kept(self):
        el = make_element(fvl_space(2), [(1, 0), (0, 1)], parse(r"t1 \/ t2", 2))
        assert el.vectors == ((F(1), F(0)), (F(0), F(1)))
        assert print_expr(el.expr) == r"t1 \/ t2"

    def test_duplicate_vector_cancels(self):
        el = make_element(fvl_space(1), [(1,), (1,)], parse("t1 - t2", 2))
        assert len(el.vectors) == 1
        eq, _ = equivalent(el.realized, zero_element(fvl_space(1)).realized)
        assert eq

    def test_linear_dependence_rewritten(self):
        el = make_element(
            fvl_space(3),
            [(1, 0, 0), (0, 1, 0), (1, 1, 0)],
            parse("t3 - t1 - t2", 3),
        )
        assert len(el.vectors) == 2
        eq, _ = equivalent(el.realized, zero_element(fvl_space(3)).realized)
        assert eq

    def test_realized_function_is_preserved(self):
        el = make_element(
            fvl_space(2), [(1, 0), (0, 1), (1, 1)], parse(r"t3 /\ (t1 + t2)", 3)
        )
        direct = make_element(fvl_space(2), [(1, 0), (0, 1)], parse("t1 + t2", 2))
        eq, _ = equivalent(el.realized, direct.realized)
        assert eq


class TestExtendHom:
    def test_generator_images_drive_the_extension(self):
        phi = LatticeMap(
            source=fvl_space(2),
            target=target_lattice("inf", 2),
            images=((1, 0), (0, 1)),
        )
        fab = make_element(fvl_space(2), identity_basis(2), parse(r"t1 \/ t2", 2))
        assert extend_hom(phi, fab) == (F(1), F(1))

    def test_well_defined_on_equivalent_elements(self):
        phi = LatticeMap(
            source=fvl_space(3),
            target=target_lattice(1, 2),
            images=((2, 1), (-1, 3), (0, 5)),
        )
        fa = make_element(fvl_space(3), identity_basis(3), parse(r"t1 + (t2 \/ t3)", 3))
        fb = make_element(
            fvl_space(3), identity_basis(3), parse(r"(t1 + t2) \/ (t1 + t3)", 3)
        )
        assert extend_hom(phi, fa) == extend_hom(phi, fb)

    def test_matrix_mode_extension_of_embedding_is_the_matrix_action(self):
        T = LatticeMap(
            source=seq_space(1, 2),
            target=target_lattice(1, 2),
            matrix=((1, 2), (3, -1)),
        )
        xhat = embed((2, -5), seq_space(1, 2))
        assert extend_hom(T, xhat) == (F(-8), F(11))

    def test_extension_coordinates_equal_realized_at_dual_rows(self):
        phi = LatticeMap(
            source=fvl_space(3),
            target=target_lattice(1, 2),
            images=((2, 1), (-1, 3), (0, 5)),
        )
        el = make_element(
            fvl_space(3), identity_basis(3), parse(r"t1 /\ t2 + t1 \/ (2*t3)", 3)
        )
        out = extend_hom(phi, el)
        assert out == tuple(el.realized.eval(r) for r in phi.dual_rows)

    def test_lattice_operations_preserved(self):
        phi = LatticeMap(
            source=fvl_space(2),
            target=target_lattice(1, 2),
            images=((1, 2), (2, -1)),
        )
        a = make_element(fvl_space(2), identity_basis(2), parse("t1", 2))
        b = make_element(fvl_space(2), identity_basis(2), parse("t2", 2))
        ab = make_element(fvl_space(2), identity_basis(2), parse(r"t1 \/ t2", 2))
        ga, gb, gab = extend_hom(phi, a), extend_hom(phi, b), extend_hom(phi, ab)
        assert gab == tuple(max(p, q) for p, q in zip(ga, gb))


class TestLatticeMap:
    def test_requires_exactly_one_mode(self):
        with pytest.raises(ArityError):
            LatticeMap(source=fvl_space(2), target=target_lattice(1, 2))
        with pytest.raises(ArityError):
            LatticeMap(
                source=fvl_space(2),
                target=target_lattice(1, 2),
                images=((1, 0), (0, 1)),
                matrix=((1, 0), (0, 1)),
            )

    def test_admissibility_scale(self):
        phi = LatticeMap(
            source=fvl_space(2),
            target=target_lattice("inf", 2),
            images=((3, 0), (0, 3)),
        )
        assert phi.admissibility_scale() == 3
        small = LatticeMap(
            source=fvl_space(2),
            target=target_lattice("inf", 2),
            images=((F(1, 2), 0), (0, F(1, 2))),
        )
        assert small.admissibility_scale() == F(1, 2)


class TestContractivityAudit:
    def test_admissible_map_is_contractive(self):
        phi = LatticeMap(
            source=fvl_space(2),
            target=target_lattice("inf", 2),
            images=((1, 0), (0, 1)),
        )
        fab = make_element(fvl_space(2), identity_basis(2), parse(r"t1 \/ t2", 2))
        rep = contractivity_audit(phi, [fab])
        assert rep.passed
        assert rep.entries[0].observed == "1"

    def test_norm_preserving_case_is_tight(self):
        Tid = LatticeMap(
            source=seq_space(1, 2),
            target=target_lattice(1, 2),
            matrix=((1, 0), (0, 1)),
        )
        rep = contractivity_audit(Tid, [embed((1, 1), seq_space(1, 2))])
        assert rep.passed
        assert rep.entries[0].observed == "2"
        assert rep.entries[0].bound == "2"

    def test_zero_map(self):
        phi = LatticeMap(
            source=fvl_space(2),
            target=target_lattice("inf", 2),
            images=((0, 0), (0, 0)),
        )
        suite = [
            make_element(fvl_space(2), identity_basis(2), parse(r"t1 \/ t2", 2)),
            zero_element(fvl_space(2)),
        ]
        assert contractivity_audit(phi, suite).passed


class TestPullbackSeminorm:
    def test_generators_stay_admissible(self):
        phi = LatticeMap(
            source=fvl_space(2),
            target=target_lattice("inf", 2),
            images=((1, 0), (0, 1)),
        )
        nu = pullback_seminorm(phi, "nu_phi")
        assert nu.name == "nu_phi"
        assert nu.leq(generator(fvl_space(2), 1).realized, F(1))

    def test_joins_the_maximality_family(self):
        phi = LatticeMap(
            source=fvl_space(2),
            target=target_lattice("inf", 2),
            images=((1, 0), (0, 1)),
        )
        fab = make_element(fvl_space(2), identity_basis(2), parse(r"t1 \/ t2", 2))
        cert = norm_exact_polyhedral(fab.realized, fvl_space(2))
        rep = maximality_audit(
            fab.realized, fvl_space(2), [pullback_seminorm(phi)], cert
        )
        assert rep.passed

    def test_oversized_images_are_rescaled(self):
        big = LatticeMap(
            source=fvl_space(2),
            target=target_lattice("inf", 2),
            images=((3, 0), (0, 3)),
        )
        nu = pullback_seminorm(big)
        assert nu.leq(generator(fvl_space(2), 1).realized, F(1))

    def test_euclidean_target_compares_through_squares(self):
        l2map = LatticeMap(
            source=fvl_space(2),
            target=target_lattice(2, 2),
            images=((1, 0), (0, 1)),
        )
        fab = make_element(fvl_space(2), identity_basis(2), parse(r"t1 \/ t2", 2))
        nu = pullback_seminorm(l2map)
        assert nu.leq(fab.realized, F(2))
        assert not nu.leq(fab.realized, F(1))


class TestTargetLattice:
    def test_norm_upper_for_each_p(self):
        assert target_lattice(1, 2).norm_upper((F(3), F(-4))) == 7
        assert target_lattice("inf", 2).norm_upper((F(3), F(-4))) == 4
        assert target_lattice(2, 2).norm_upper((F(3), F(4))) == 5

    def test_unsupported_p(self):
        with pytest.raises(UnsupportedSpaceError):
            target_lattice(F(1, 2), 2)
