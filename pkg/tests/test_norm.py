import math
from fractions import Fraction

import pytest

from latfree.errors import DimensionError, UnsupportedSpaceError
from latfree.expr import parse
from latfree.norm import (
    budget_directions,
    constraint_norm,
    evaluation_seminorm,
    functional_tuple,
    fvl_space,
    maximality_audit,
    norm_bounds,
    norm_by_cell_assignment,
    norm_certificate,
    norm_exact_polyhedral,
    parse_space,
    seq_space,
    strong_unit_factor,
    tuple_admissible,
    tuple_seminorm_value,
)
from latfree.pwl import PwlFunction, make_pwl

F = Fraction


def pw(text: str, n: int) -> PwlFunction:
    return PwlFunction.from_expr(parse(text, n), n)


class TestSpaceSpec:
    @pytest.mark.parametrize(
        "text", ["fvl:2", "seq:inf:3", "seq:2:2", "seq:3/2:2", "seq:1:1"]
    )
    def test_round_trip(self, text):
        assert str(parse_space(text)) == text

    def test_polyhedral_flags(self):
        assert parse_space("fvl:2").is_polyhedral
        assert parse_space("seq:1:4").is_polyhedral
        assert parse_space("seq:inf:3").is_polyhedral
        assert not parse_space("seq:2:2").is_polyhedral

    @pytest.mark.parametrize(
        "bad", ["fvl:0", "seq:0.5:2", "seq:1/2:2", "vl:2", "seq:2", "fvl:x", ""]
    )
    def test_malformed_rejected(self, bad):
        with pytest.raises(UnsupportedSpaceError):
            parse_space(bad)


class TestConstraintNorm:
    def test_basis_tuple_in_fvl(self):
        assert constraint_norm(functional_tuple(fvl_space(2), [(1, 0), (0, 1)])) == 1

    def test_opposite_signs_add_up(self):
        assert constraint_norm(functional_tuple(fvl_space(1), [(1,), (-1,)])) == 2

    def test_seq_inf_budget_is_worst_sign_combination(self):
        tup = functional_tuple(seq_space("inf", 2), [(1, 0), (0, 1)])
        assert constraint_norm(tup) == 2

    def test_seq_2_single_point(self):
        assert constraint_norm(functional_tuple(seq_space(2, 2), [(1, 0)])) == 1

    def test_admissibility_predicate(self):
        space = fvl_space(2)
        assert tuple_admissible(functional_tuple(space, [(F(1, 2), 0), (0, F(1, 2))]))
        assert not tuple_admissible(functional_tuple(space, [(2, 0)]))


class TestTupleSeminorm:
    def test_sums_absolute_values(self):
        f = pw(r"t1 \/ t2", 2)
        tup = functional_tuple(fvl_space(2), [(1, 0), (0, 1)])
        assert tuple_seminorm_value(f, tup) == 2

    def test_zero_tuple_gives_zero(self):
        f = pw(r"t1 \/ t2", 2)
        assert tuple_seminorm_value(f, functional_tuple(fvl_space(2), [(0, 0)])) == 0


EXACT_CASES = [
    (r"t1 \/ t2", 2, F(2)),
    (r"t1 \/ t2 \/ t3", 3, F(3)),
    ("|t1| + |t2|", 2, F(2)),
    ("t1 - t2", 2, F(2)),
    ("|t1|", 1, F(1)),
]


class TestExactPolyhedralNorm:
    @pytest.mark.parametrize("text,n,expected", EXACT_CASES)
    def test_frozen_values(self, text, n, expected):
        f = pw(text, n)
        cert = norm_exact_polyhedral(f, fvl_space(n))
        assert cert.exact
        assert cert.lower == expected == cert.upper
        assert cert.upper_method == "exact_match"

    @pytest.mark.parametrize("text,n,expected", EXACT_CASES)
    def test_witness_rescoring(self, text, n, expected):
        f = pw(text, n)
        cert = norm_exact_polyhedral(f, fvl_space(n))
        assert tuple_admissible(cert.witness)
        assert tuple_seminorm_value(f, cert.witness) == expected

    @pytest.mark.parametrize("text,n,expected", EXACT_CASES)
    def test_independent_assignment_oracle_agrees(self, text, n, expected):
        assert norm_by_cell_assignment(pw(text, n), fvl_space(n)) == expected

    def test_join_witness_is_the_basis_pair(self):
        cert = norm_exact_polyhedral(pw(r"t1 \/ t2", 2), fvl_space(2))
        assert set(cert.witness.points) == {(F(1), F(0)), (F(0), F(1))}

    def test_running_example_norm(self):
        f = pw(r"t1 /\ t2 + t1 \/ (2*t3)", 3)
        cert = norm_exact_polyhedral(f, fvl_space(3))
        assert cert.exact and cert.lower == 4 == cert.upper
        assert norm_by_cell_assignment(f, fvl_space(3)) == 4

    def test_zero_function(self):
        cert = norm_exact_polyhedral(pw("0*t1", 2), fvl_space(2))
        assert cert.lower == 0 == cert.upper and cert.exact

    def test_seq_inf_join(self):
        cert = norm_exact_polyhedral(pw(r"t1 \/ t2", 2), seq_space("inf", 2))
        assert cert.exact and cert.lower == 1 == cert.upper

    def test_embedded_vector_recovers_its_norm(self):
        xhat = make_pwl(parse("t1", 1), [(2, -3)])
        assert norm_exact_polyhedral(xhat, seq_space("inf", 2)).lower == 3
        assert norm_exact_polyhedral(xhat, seq_space(1, 2)).lower == 5

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            norm_exact_polyhedral(pw("t1", 1), fvl_space(2))

    def test_non_polyhedral_space_rejected(self):
        with pytest.raises(UnsupportedSpaceError):
            norm_exact_polyhedral(pw("t1", 2), seq_space(2, 2))


class TestCellAssignment:
    def test_duplicate_slots_never_improve(self):
        f = pw(r"t1 \/ t2", 2)
        base = norm_by_cell_assignment(f, fvl_space(2))
        for slot in range(4):
            assert norm_by_cell_assignment(f, fvl_space(2), duplicate_slot=slot) == base


class TestBudgetDirections:
    def test_fvl_budget_is_standard_basis(self):
        dirs = budget_directions(fvl_space(2))
        assert set(dirs) == {(F(1), F(0)), (F(0), F(1))}

    def test_seq_inf_budget_has_half_the_cube(self):
        dirs = budget_directions(seq_space("inf", 3))
        assert len(dirs) == 4
        assert all(d[0] == 1 for d in dirs)

    def test_float_p_rejected(self):
        with pytest.raises(UnsupportedSpaceError):
            budget_directions(seq_space(2, 2))


class TestStrongUnitFactor:
    def test_join_needs_lambda_one(self):
        lam, rows = strong_unit_factor(pw(r"t1 \/ t2", 2))
        assert lam == 1
        assert len(rows) == 2

    def test_scaled_function(self):
        lam, _ = strong_unit_factor(pw("3*t1", 1))
        assert lam == 3


class TestNormBounds:
    def test_exact_on_polyhedral_space(self):
        cert = norm_bounds(pw(r"t1 \/ t2", 2), fvl_space(2), restarts=8, seed=7)
        assert cert.exact and cert.lower == 2 == cert.upper
        assert cert.lam == 1
        assert cert.upper_method == "strong_unit_lambda_n"

    def test_euclidean_pythagorean_vector_is_exact(self):
        xhat = make_pwl(parse("t1", 1), [(3, 4)])
        cert = norm_bounds(xhat, seq_space(2, 2), restarts=4, seed=1)
        assert cert.exact and cert.lower == 5 == cert.upper

    def test_euclidean_irrational_sandwich(self):
        xhat = make_pwl(parse("t1", 1), [(1, 1)])
        cert = norm_bounds(xhat, seq_space(2, 2), restarts=4, seed=1)
        assert not cert.exact
        assert cert.lower <= cert.upper
        assert abs(float(cert.lower) - math.sqrt(2)) < 1e-9
        assert float(cert.upper - cert.lower) < 1e-9

    def test_zero_function(self):
        cert = norm_bounds(pw("0*t1", 2), fvl_space(2))
        assert cert.lower == 0 == cert.upper and cert.exact

    def test_nondegeneracy_of_small_elements(self):
        cert = norm_bounds(pw(r"1/7*(t1 /\ t2)", 2), fvl_space(2), restarts=4, seed=2)
        assert cert.lower > 0

    def test_lower_reaches_known_values(self):
        for text, n, expected in EXACT_CASES:
            cert = norm_bounds(pw(text, n), fvl_space(n), restarts=6, seed=3)
            assert cert.lower == expected
            assert cert.upper >= expected

    def test_witness_rescoring_matches_lower(self):
        f = pw(r"t1 - 2*t2", 2)
        cert = norm_bounds(f, seq_space(2, 2), restarts=4, seed=5)
        assert tuple_seminorm_value(f, cert.witness) == cert.lower

    def test_threads_do_not_change_the_result(self):
        f = pw(r"t1 \/ t2", 2)
        b1 = norm_bounds(f, fvl_space(2), restarts=8, seed=5, threads=1)
        b4 = norm_bounds(f, fvl_space(2), restarts=8, seed=5, threads=4)
        assert (b1.lower, b1.upper) == (b4.lower, b4.upper)
        assert b1.witness.points == b4.witness.points


class TestNormCertificateDispatch:
    def test_polyhedral_goes_exact(self):
        cert = norm_certificate(pw(r"t1 \/ t2", 2), fvl_space(2))
        assert cert.upper_method == "exact_match"

    def test_non_polyhedral_goes_bounds(self):
        cert = norm_certificate(
            make_pwl(parse("t1", 1), [(3, 4)]), seq_space(2, 2), restarts=4, seed=1
        )
        assert cert.upper_method == "strong_unit_lambda_n"


class TestMaximalityAudit:
    def test_admissible_seminorms_stay_below_certificate(self):
        f = pw(r"t1 \/ t2", 2)
        space = fvl_space(2)
        cert = norm_exact_polyhedral(f, space)
        family = [
            evaluation_seminorm(functional_tuple(space, [(1, 1)]), "all_ones"),
            evaluation_seminorm(
                functional_tuple(space, [(F(1, 2), F(-1, 2))]), "half_diff"
            ),
        ]
        report = maximality_audit(f, space, family, cert)
        assert report.passed
        assert [e.name for e in report.entries] == ["all_ones", "half_diff"]
        assert report.violations == ()

    def test_evaluation_seminorms_self_normalize(self):
        # oversized tuples are scaled down by their constraint norm, so the
        # induced seminorm is always admissible and never beats the norm
        f = pw(r"t1 \/ t2", 2)
        tup = functional_tuple(fvl_space(2), [(3, 0), (0, 3)])
        assert tuple_seminorm_value(f, tup) == 2

    def test_violation_is_reported(self):
        from latfree.norm import SeminormHandle

        f = pw(r"t1 \/ t2", 2)
        space = fvl_space(2)
        cert = norm_exact_polyhedral(f, space)
        broken = SeminormHandle(
            name="broken",
            leq=lambda func, bound: False,
            display=lambda func: "99",
        )
        report = maximality_audit(f, space, [broken], cert)
        assert not report.passed
        assert len(report.violations) == 1
        assert report.violations[0].name == "broken"
