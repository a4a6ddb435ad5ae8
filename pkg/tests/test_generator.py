import pytest

from soncbound.generator import generate_instance
from soncbound.poly import evaluate, serialize_instance


class TestGenerator:
    def test_same_seed_identical(self):
        a = generate_instance(7, n=2, m=1, max_degree=5)
        b = generate_instance(7, n=2, m=1, max_degree=5)
        assert serialize_instance(a) == serialize_instance(b)

    def test_different_seeds_differ(self):
        a = generate_instance(1, n=2, m=1, max_degree=5)
        b = generate_instance(2, n=2, m=1, max_degree=5)
        assert serialize_instance(a) != serialize_instance(b)

    @pytest.mark.parametrize("seed", range(25))
    def test_objective_has_odd_entry_term(self, seed):
        inst = generate_instance(seed, n=2, m=1, max_degree=5)
        assert any(any(v % 2 for v in e) for e in inst.objective)

    @pytest.mark.parametrize("seed", range(25))
    def test_center_feasible(self, seed):
        inst = generate_instance(seed, n=3, m=2, max_degree=4)
        center = inst.box_center()
        for g in inst.constraints:
            assert evaluate(g, center) >= 0.1 - 1e-9

    def test_coefficients_in_range(self):
        for seed in range(20):
            inst = generate_instance(seed, n=2, m=2, max_degree=6)
            for e, c in inst.objective.items():
                assert 1e-3 <= abs(c) <= 2.0
            for g in inst.constraints:
                for e, c in g.items():
                    if sum(e) > 0:  # the constant may carry the feasibility lift
                        assert 1e-3 <= abs(c) <= 2.0

    def test_degree_cap_respected(self):
        for seed in range(20):
            for d in (3, 4, 5, 6):
                inst = generate_instance(seed, n=2, m=1, max_degree=d)
                for poly in [inst.objective] + inst.constraints:
                    assert all(sum(e) <= d for e in poly)

    def test_box_orientation(self):
        for seed in range(20):
            inst = generate_instance(seed, n=3, m=0, max_degree=3)
            for lo, hi in zip(inst.lower, inst.upper):
                assert -3.0 <= lo <= 0.0 <= hi <= 3.0

    def test_bad_parameters_rejected(self):
        with pytest.raises(ValueError):
            generate_instance(0, n=0, m=0, max_degree=3)
        with pytest.raises(ValueError):
            generate_instance(0, n=1, m=0, max_degree=0)
