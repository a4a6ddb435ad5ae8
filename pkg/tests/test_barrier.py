import json
import time

import numpy as np
import pytest

from soncbound import status as st
from soncbound.barrier import SolverOptions, solve_relaxation
from soncbound.covers import build_candidates_and_covers, make_bound_constraints
from soncbound.poly import evaluate, parse_instance
from soncbound.relaxation import assemble_lagrangian, build_model, geometric_mean


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


def build_for(inst, a=None):
    lag_plain = assemble_lagrangian(inst, [], False)
    if a is None:
        bcs = []
        lag = lag_plain
    else:
        bcs = make_bound_constraints(inst, a)
        lag = assemble_lagrangian(inst, bcs, True)
    cands, covers = build_candidates_and_covers(
        lag.support, bcs, inst.n, genuine_support=lag_plain.support
    )
    return build_model(lag, cands, covers, bcs)


MOTZKIN = make_inst(
    n=2, lower=(-2, -2), upper=(2, 2),
    objective=(((4, 2), 1.0), ((2, 4), 1.0), ((2, 2), -3.0), ((0, 0), 1.0)),
)


def brute_force_min_x_bound():
    """Grid oracle for min -x on [-1,2] with a=2: gamma = -(4 nu + c0),
    subject to 2 sqrt(c0 c2) >= 1 with c2 <= nu."""
    best = -np.inf
    for nu in np.linspace(1e-3, 2.0, 4000):
        c0 = 1.0 / (4.0 * nu)  # tight circuit condition at c2 = nu
        best = max(best, -(4.0 * nu + c0))
    return best


class TestClosedForms:
    def test_min_minus_x(self):
        model = build_for(make_inst(), a=(2,))
        start = time.perf_counter()
        res = solve_relaxation(model)
        assert time.perf_counter() - start < 1.0
        assert res.status == st.OPTIMAL
        assert res.gamma == pytest.approx(-2.0, abs=1e-5)
        assert brute_force_min_x_bound() == pytest.approx(-2.0, abs=1e-3)

    def test_min_minus_x_squared_a4(self):
        model = build_for(make_inst(objective=(((2,), -1.0),)), a=(4,))
        start = time.perf_counter()
        res = solve_relaxation(model)
        assert time.perf_counter() - start < 1.0
        assert res.status == st.OPTIMAL
        # calculus oracle: min over nu of 16 nu + 1/(4 nu) = 4 at nu = 1/8
        assert res.gamma == pytest.approx(-4.0, abs=1e-5)
        assert res.nu[0] == pytest.approx(1 / 8, abs=1e-3)

    def test_motzkin_gamma_zero(self):
        model = build_for(MOTZKIN)
        start = time.perf_counter()
        res = solve_relaxation(model)
        assert time.perf_counter() - start < 1.0
        assert res.status == st.OPTIMAL
        assert res.gamma == pytest.approx(0.0, abs=1e-5)


class TestStatuses:
    def test_trivially_infeasible(self):
        model = build_for(make_inst(objective=(((4,), -1.0),)))
        res = solve_relaxation(model)
        assert res.status == st.INFEASIBLE

    def test_phase1_infeasible(self):
        # min x^2 - x^4 s.t. x^4 >= 0: coefficient at (4,) is -1 - mu, never >= 0
        inst = make_inst(objective=(((2,), 1.0), ((4,), -1.0)),
                         constraints=((((4,), 1.0),),))
        model = build_for(inst, a=(2,))
        res = solve_relaxation(model)
        assert res.status == st.INFEASIBLE

    def test_iteration_cap_is_numerical_error(self):
        model = build_for(make_inst(), a=(2,))
        res = solve_relaxation(model, SolverOptions(max_outer=2))
        assert res.status == st.NUMERICAL_ERROR

    def test_liftable_negative_vertex_solved(self):
        # min -x^4 s.t. 1 - x^4 >= 0 on [-1,1]: optimum -1 via mu = 1
        inst = make_inst(lower=(-1,), upper=(1,), objective=(((4,), -1.0),),
                         constraints=((((0,), 1.0), ((4,), -1.0)),))
        model = build_for(inst, a=(2,))
        res = solve_relaxation(model)
        assert res.status == st.OPTIMAL
        assert res.gamma == pytest.approx(-1.0, abs=1e-4)


class TestSolverInvariants:
    def test_interior_residuals(self):
        for inst, a in ((make_inst(), (2,)), (MOTZKIN, None)):
            model = build_for(inst, a=a)
            res = solve_relaxation(model)
            assert res.status == st.OPTIMAL
            assert res.max_residual <= 1e-7
            for blk in model.blocks:
                c = np.array([res.c[blk.beta][j] for j in blk.cand_indices])
                theta = geometric_mean(c, np.array(blk.lambdas))
                assert res.t[blk.beta] <= theta * (1 + 1e-7)

    def test_gamma_trace_nondecreasing(self):
        for inst, a in ((make_inst(), (2,)), (MOTZKIN, None),
                        (make_inst(objective=(((2,), -1.0),)), (4,))):
            res = solve_relaxation(build_for(inst, a=a))
            trace = res.gamma_trace
            assert all(trace[i + 1] >= trace[i] - 1e-10 for i in range(len(trace) - 1))

    def test_determinism_bit_identical(self):
        model = build_for(MOTZKIN)
        r1 = solve_relaxation(model)
        r2 = solve_relaxation(model)
        assert r1.gamma == r2.gamma
        assert r1.mu.tobytes() == r2.mu.tobytes()
        assert r1.nu.tobytes() == r2.nu.tobytes()
        assert r1.gamma_trace == r2.gamma_trace
        assert r1.iterations == r2.iterations

    def test_kkt_and_gap_reported(self):
        res = solve_relaxation(build_for(make_inst(), a=(2,)))
        assert res.kkt_residual <= 1e-7
        assert res.duality_gap <= 1e-6 * (1 + abs(res.gamma))


class TestSoundnessOnSamples:
    def test_bound_holds_on_feasible_samples(self):
        rng = np.random.default_rng(5)
        inst = make_inst(
            objective=(((2,), 1.0), ((1,), -1.0)),
            constraints=((((0,), 1.0), ((2,), -1.0)),),
        )
        model = build_for(inst, a=(2,))
        res = solve_relaxation(model)
        assert res.status == st.OPTIMAL
        gamma = res.gamma
        for _ in range(1000):
            x = [rng.uniform(-1, 2)]
            if evaluate(inst.constraints[0], x) < 0:
                continue
            assert evaluate(inst.objective, x) >= gamma - 1e-6 * (1 + abs(gamma))

    def test_big_m_monotonicity(self):
        # nested boxes: growing the box never improves the bound
        gammas = []
        for hi in (1.0, 2.0, 3.0, 4.0):
            inst = make_inst(lower=(-hi,), upper=(hi,))
            res = solve_relaxation(build_for(inst, a=(2,)))
            assert res.status == st.OPTIMAL
            gammas.append(res.gamma)
        for smaller, larger in zip(gammas, gammas[1:]):
            assert larger <= smaller + 1e-7
