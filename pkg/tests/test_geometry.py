import random

import numpy as np
import pytest

from soncbound.covers import build_candidate_set
from soncbound.geometry import (
    ONE_SIDED,
    TWO_SIDED,
    CandidateSet,
    CoverUnavailable,
    barycentric_coordinates,
    classify_support,
    inner_term_kind,
    is_monomial_square,
    polytope_vertices,
)

from oracle import in_hull_exact, vertices_exact

MOTZKIN_SUPPORT = [(4, 2), (2, 4), (2, 2), (0, 0)]


def cand_set(points):
    points = [tuple(p) for p in points]
    origin = points[0]
    assert all(v == 0 for v in origin)
    return CandidateSet(points=tuple(points), tags=("origin",) + ("support-even",) * (len(points) - 1))


class TestMonomialSquare:
    @pytest.mark.parametrize(
        "e,coeff,expected",
        [
            ((4, 2), 1.0, True),
            ((2, 2), -3.0, False),
            ((1, 0), 5.0, False),
            ((0, 0), 0.0, True),
            ((0,), -0.1, False),
        ],
    )
    def test_examples(self, e, coeff, expected):
        assert is_monomial_square(e, coeff) is expected


class TestPolytopeVertices:
    def test_midpoint_dropped(self):
        verts = polytope_vertices({(0, 0), (2, 0), (0, 2), (1, 1)})
        assert verts == {(0, 0), (2, 0), (0, 2)}

    def test_motzkin(self):
        # (2,2) = ((4,2)+(2,4)+(0,0))/3, checked by the exact oracle too
        verts = polytope_vertices(set(MOTZKIN_SUPPORT))
        assert verts == {(4, 2), (2, 4), (0, 0)}
        assert vertices_exact(MOTZKIN_SUPPORT) == verts

    def test_singleton(self):
        assert polytope_vertices({(0, 0)}) == {(0, 0)}

    def test_agrees_with_exact_oracle_on_random_supports(self):
        rng = random.Random(123)
        for _ in range(60):
            dim = rng.randint(1, 3)
            size = rng.randint(1, 8)
            support = {tuple(rng.randint(0, 6) for _ in range(dim)) for _ in range(size)}
            assert polytope_vertices(support) == vertices_exact(support)


class TestClassifySupport:
    def test_motzkin(self):
        cands = cand_set([(0, 0), (2, 4), (4, 2)])
        present, inner = classify_support(set(MOTZKIN_SUPPORT), cands)
        assert set(present) == {(0, 0), (2, 4), (4, 2)}
        assert inner == [((2, 2), ONE_SIDED)]

    def test_univariate_parity(self):
        cands = cand_set([(0,), (2,)])
        _, inner = classify_support({(0,), (1,), (2,)}, cands)
        assert inner == [((1,), TWO_SIDED)]

    def test_all_even_candidates_leave_no_inner(self):
        cands = cand_set([(0, 0), (2, 0), (0, 2)])
        _, inner = classify_support({(0, 0), (2, 0), (0, 2)}, cands)
        assert inner == []

    def test_kind_tagging(self):
        assert inner_term_kind((2, 2)) == ONE_SIDED
        assert inner_term_kind((3, 1)) == TWO_SIDED


class TestBarycentric:
    def test_motzkin_cover(self):
        cands = cand_set([(0, 0), (2, 4), (4, 2)])
        cover = barycentric_coordinates((2, 2), cands)
        lams = [cover.weights.get(j, 0.0) for j in range(3)]
        assert lams == pytest.approx([1 / 3, 1 / 3, 1 / 3], abs=1e-9)

    def test_midpoint(self):
        cands = cand_set([(0,), (2,)])
        cover = barycentric_coordinates((1,), cands)
        assert cover.weights[0] == pytest.approx(0.5, abs=1e-9)
        assert cover.weights[1] == pytest.approx(0.5, abs=1e-9)

    def test_outside_hull(self):
        cands = cand_set([(0,), (2,)])
        with pytest.raises(CoverUnavailable):
            barycentric_coordinates((3,), cands)

    def test_origin_weight_maximized(self):
        # (3,) over {0, 2, 4}: max origin weight is 1/4 via (0, 0, 3/4)
        cands = cand_set([(0,), (2,), (4,)])
        cover = barycentric_coordinates((3,), cands)
        assert cover.origin_weight == pytest.approx(0.25, abs=1e-9)

    def test_reconstruction_and_size_on_random_pairs(self):
        rng = random.Random(7)
        checked_available = 0
        checked_unavailable = 0
        for _ in range(500):
            dim = rng.randint(1, 3)
            n_points = rng.randint(1, 5)
            pts = {tuple(0 for _ in range(dim))}
            for _ in range(60):  # the even-point pool in dim 1 is tiny
                if len(pts) >= n_points + 1:
                    break
                pts.add(tuple(2 * rng.randint(0, 3) for _ in range(dim)))
            ordered = [tuple(0 for _ in range(dim))] + sorted(pts - {tuple(0 for _ in range(dim))})
            cands = cand_set(ordered)
            beta = tuple(rng.randint(0, 6) for _ in range(dim))
            if beta in pts:
                continue
            expected = in_hull_exact(beta, ordered)
            try:
                cover = barycentric_coordinates(beta, cands)
            except CoverUnavailable:
                assert not expected
                checked_unavailable += 1
                continue
            assert expected
            checked_available += 1
            total = sum(cover.weights.values())
            recon = np.zeros(dim)
            for j, w in cover.weights.items():
                recon += w * np.array(ordered[j], float)
            assert abs(total - 1.0) <= 1e-9
            assert np.max(np.abs(recon - np.array(beta, float))) <= 1e-9
            assert len(cover.weights) <= dim + 1
        assert checked_available >= 50
        assert checked_unavailable >= 50


class TestGuaranteedCovers:
    def test_origin_and_axis_points_cover_everything_in_budget(self):
        # candidates {0} U {a*e_i} with even a >= total degree of beta:
        # the explicit weights beta_i / a always form a cover
        rng = random.Random(99)
        for _ in range(200):
            dim = rng.randint(1, 3)
            beta = tuple(rng.randint(0, 5) for _ in range(dim))
            if sum(beta) == 0:
                continue
            a = sum(beta) + (sum(beta) % 2)
            a = max(a, 2)
            points = [tuple(0 for _ in range(dim))]
            for i in range(dim):
                e = [0] * dim
                e[i] = a
                points.append(tuple(e))
            cands = cand_set(points)
            if beta in points:
                continue
            cover = barycentric_coordinates(beta, cands)  # must not raise
            assert sum(cover.weights.values()) == pytest.approx(1.0, abs=1e-9)


class TestCandidateSetInvariants:
    def test_origin_required_first(self):
        with pytest.raises(ValueError):
            CandidateSet(points=((2, 0), (0, 0)), tags=("support-even", "origin"))

    def test_odd_point_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            CandidateSet(points=((0, 0), (1, 2)), tags=("origin", "support-even"))

    def test_duplicates_rejected(self):
        with pytest.raises(ValueError, match="distinct"):
            CandidateSet(points=((0,), (2,), (2,)), tags=("origin",) * 3)

    def test_build_candidate_set_filters_nonvertices(self):
        cands = build_candidate_set(set(MOTZKIN_SUPPORT), [], 2)
        assert set(cands.points) == {(0, 0), (2, 4), (4, 2)}
        assert cands.points[0] == (0, 0)
