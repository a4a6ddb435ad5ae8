import json

import pytest

from soncbound.covers import (
    PER_VARIABLE,
    UNIFORM,
    BoundConstraint,
    build_candidates_and_covers,
    make_bound_constraints,
    select_bound_exponents,
)
from soncbound.generator import generate_instance
from soncbound.geometry import BOUND_CONSTRAINT, SUPPORT_EVEN, CoverUnavailable
from soncbound.poly import parse_instance
from soncbound.relaxation import assemble_lagrangian
from soncbound.status import NumericalError


def make_inst(n=1, lower=(-1,), upper=(2,), objective=(((1,), -1.0),), constraints=()):
    return parse_instance(
        json.dumps(
            {
                "n": n,
                "objective": [[list(e), c] for e, c in objective],
                "constraints": [[[list(e), c] for e, c in g] for g in constraints],
                "lower": list(lower),
                "upper": list(upper),
            }
        )
    )


class TestSelectExponents:
    def test_uniform_degree_four(self):
        inst = make_inst(n=2, lower=(-1, -1), upper=(1, 1), objective=(((2, 2), -1.0),))
        a = select_bound_exponents(inst, {(2, 2)}, UNIFORM)
        assert a == (4, 4)
        # explicit construction: 2/4 + 2/4 = 1 <= 1
        assert sum(b / ai for b, ai in zip((2, 2), a)) <= 1.0

    def test_uniform_linear(self):
        inst = make_inst()
        assert select_bound_exponents(inst, {(1,)}, UNIFORM) == (2,)

    def test_uniform_mixed(self):
        inst = make_inst(n=2, lower=(-1, -1), upper=(1, 1), objective=(((3, 1), 1.0),))
        a = select_bound_exponents(inst, {(3, 1)}, UNIFORM)
        assert a == (4, 4)
        assert 3 / 4 + 1 / 4 == 1.0

    def test_per_variable_covers_all(self):
        inst = make_inst(n=2, lower=(-1, -1), upper=(1, 1), objective=(((3, 1), 1.0),))
        a = select_bound_exponents(inst, {(3, 1), (1, 3), (2, 2)}, PER_VARIABLE)
        assert all(ai % 2 == 0 and ai >= 2 for ai in a)
        for beta in ((3, 1), (1, 3), (2, 2)):
            assert sum(b / ai for b, ai in zip(beta, a)) <= 1.0

    def test_empty_inner_defaults(self):
        inst = make_inst()
        assert select_bound_exponents(inst, set(), UNIFORM) == (2,)

    def test_evenness_always(self):
        inst = make_inst(n=3, lower=(-1,) * 3, upper=(1,) * 3, objective=(((1, 2, 3), 1.0),))
        for strategy in (UNIFORM, PER_VARIABLE):
            a = select_bound_exponents(inst, {(1, 2, 3), (5, 0, 0)}, strategy)
            assert all(ai % 2 == 0 for ai in a)


class TestMakeBoundConstraints:
    def test_big_m_example(self):
        inst = make_inst(lower=(-2,), upper=(1,))
        (bc,) = make_bound_constraints(inst, (4,))
        assert bc.big_m == 16.0

    def test_big_m_asymmetric(self):
        inst = make_inst(lower=(-1,), upper=(2,))
        (bc,) = make_bound_constraints(inst, (2,))
        assert bc.big_m == 4.0

    def test_degenerate_fixed_variable(self):
        inst = make_inst(lower=(0,), upper=(0,))
        (bc,) = make_bound_constraints(inst, (2,))
        assert bc.big_m == 0.0

    def test_overflow_names_variable(self):
        inst = make_inst(n=2, lower=(-1, -1e200), upper=(1, 1e200),
                         objective=(((1, 1), 1.0),))
        with pytest.raises(NumericalError, match="variable 1"):
            make_bound_constraints(inst, (2, 4))

    def test_invalid_exponent_rejected(self):
        with pytest.raises(ValueError):
            BoundConstraint(var_index=0, exponent=3, big_m=1.0)


class TestBuildCandidatesAndCovers:
    def test_linear_without_bcs_unavailable(self):
        inst = make_inst()
        lag = assemble_lagrangian(inst, [], False)
        with pytest.raises(CoverUnavailable) as err:
            build_candidates_and_covers(lag.support, [], inst.n)
        assert err.value.beta == (1,)

    def test_linear_with_bc_covered(self):
        inst = make_inst()
        bcs = make_bound_constraints(inst, (2,))
        lag = assemble_lagrangian(inst, bcs, True)
        lag_plain = assemble_lagrangian(inst, [], False)
        cands, covers = build_candidates_and_covers(
            lag.support, bcs, inst.n, genuine_support=lag_plain.support
        )
        assert cands.points == ((0,), (2,))
        assert cands.tags == ("origin", BOUND_CONSTRAINT)
        assert covers[(1,)].weights[0] == pytest.approx(0.5, abs=1e-9)

    def test_motzkin_without_bcs_covered(self):
        inst = make_inst(
            n=2, lower=(-2, -2), upper=(2, 2),
            objective=(((4, 2), 1.0), ((2, 4), 1.0), ((2, 2), -3.0), ((0, 0), 1.0)),
        )
        lag = assemble_lagrangian(inst, [], False)
        cands, covers = build_candidates_and_covers(lag.support, [], inst.n)
        assert set(cands.points) == {(0, 0), (2, 4), (4, 2)}
        assert set(covers) == {(2, 2)}

    def test_bound_point_collision_tagged_support_even(self):
        # objective already contains x^2; the bound point (2,) must appear once
        inst = make_inst(objective=(((2,), -1.0),))
        bcs = make_bound_constraints(inst, (2,))
        lag = assemble_lagrangian(inst, bcs, True)
        lag_plain = assemble_lagrangian(inst, [], False)
        cands, _ = build_candidates_and_covers(
            lag.support, bcs, inst.n, genuine_support=lag_plain.support
        )
        assert cands.points.count((2,)) == 1
        assert cands.tags[cands.points.index((2,))] == SUPPORT_EVEN
        # and the nu multiplier still feeds that exponent's coefficient
        assert lag.coeffs[(2,)].nu == {0: 1.0}

    def test_generated_instances_never_unavailable_with_bcs(self):
        for seed in range(40):
            inst = generate_instance(seed, n=1 + seed % 3, m=seed % 3,
                                     max_degree=3 + seed % 4)
            lag_plain = assemble_lagrangian(inst, [], False)
            from soncbound.covers import build_candidate_set
            from soncbound.geometry import classify_support

            cands0 = build_candidate_set(lag_plain.support, [], inst.n)
            _, inner0 = classify_support(lag_plain.support, cands0)
            a = select_bound_exponents(inst, [e for e, _ in inner0])
            bcs = make_bound_constraints(inst, a)
            lag = assemble_lagrangian(inst, bcs, True)
            cands, covers = build_candidates_and_covers(
                lag.support, bcs, inst.n, genuine_support=lag_plain.support
            )
            inner = set(lag.support) - set(cands.points)
            assert set(covers) == inner  # no CoverUnavailable raised
