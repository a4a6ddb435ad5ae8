"""Bound constraints derived from variable boxes, and cover assembly.

Finite variable bounds l <= x <= u imply, for any even a_i, the valid
inequality x_i**a_i <= M_i**a_i with M_i = max(|l_i|, |u_i|).  Each such
bound constraint contributes the even exponent a_i * e_i as an extra
cover vertex, which is what makes every inner term coverable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import BOUND_CONSTRAINT, ORIGIN, SUPPORT_EVEN, CandidateSet, Cover
from .geometry import barycentric_coordinates, is_even, polytope_vertices
from .poly import Exponent, PopInstance, zero_exponent
from .status import NumericalError

UNIFORM = "uniform"
PER_VARIABLE = "per-variable"
STRATEGIES = (UNIFORM, PER_VARIABLE)


@dataclass(frozen=True)
class BoundConstraint:
    """x_i**exponent <= big_m, i.e. the polynomial big_m - x_i**exponent >= 0."""

    var_index: int
    exponent: int
    big_m: float

    def __post_init__(self):
        if self.exponent < 2 or self.exponent % 2:
            raise ValueError(f"bound exponent must be even and >= 2, got {self.exponent}")
        if not (math.isfinite(self.big_m) and self.big_m >= 0):
            raise ValueError(f"big_m must be finite and nonnegative, got {self.big_m}")

    def point(self, n: int) -> Exponent:
        e = [0] * n
        e[self.var_index] = self.exponent
        return tuple(e)


def _smallest_even_at_least(d: int) -> int:
    d = max(d, 2)
    return d if d % 2 == 0 else d + 1


def select_bound_exponents(
    inst: PopInstance, inner_terms: set[Exponent] | list[Exponent], strategy: str = UNIFORM
) -> tuple[int, ...]:
    """Choose even exponents a so that the origin and the points a_i*e_i
    cover every inner term via the explicit weights lambda_i = beta_i/a_i.

    uniform: one shared a = smallest even integer >= max total degree of
    the inner terms.  per-variable: start from per-coordinate maxima and
    double entries until sum_i beta_i/a_i <= 1 for every inner term.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown exponent strategy {strategy!r}")
    inner = list(inner_terms)
    if not inner:
        return (2,) * inst.n

    if strategy == UNIFORM:
        a = _smallest_even_at_least(max(sum(b) for b in inner))
        return (a,) * inst.n

    a = [_smallest_even_at_least(max(b[i] for b in inner)) for i in range(inst.n)]
    while True:
        worst = max(inner, key=lambda b: sum(b[i] / a[i] for i in range(inst.n)))
        if sum(worst[i] / a[i] for i in range(inst.n)) <= 1.0:
            return tuple(a)
        # Double the coordinate contributing most to the violation.
        i_star = max(range(inst.n), key=lambda i: (worst[i] / a[i], -i))
        a[i_star] *= 2


def make_bound_constraints(inst: PopInstance, a: tuple[int, ...]) -> list[BoundConstraint]:
    """One bound constraint per variable with big_m = max(|l|,|u|)**a_i."""
    out = []
    for i in range(inst.n):
        big = max(abs(inst.lower[i]), abs(inst.upper[i]))
        try:
            big_m = big ** a[i]
        except OverflowError:
            big_m = math.inf
        if not math.isfinite(big_m):
            raise NumericalError(
                f"bound constraint for variable {i}: {big}**{a[i]} overflows the float range"
            )
        out.append(BoundConstraint(var_index=i, exponent=a[i], big_m=big_m))
    return out


def build_candidate_set(
    support: set[Exponent] | list[Exponent],
    bcs: list[BoundConstraint],
    n: int,
    genuine_support: set[Exponent] | None = None,
) -> CandidateSet:
    """Candidates = origin + even polytope vertices + bound exponents.

    Even support points that are not vertices of the support's convex
    hull are left out: they become one-sided inner terms instead, so a
    negative coefficient there does not wreck feasibility.

    genuine_support marks exponents carried by the instance polynomials
    themselves (used for provenance tags); defaults to the full support.
    """
    support = set(support)
    if genuine_support is None:
        genuine_support = support
    origin = zero_exponent(n)
    vertices = polytope_vertices(support | {origin})
    points = {p for p in vertices if is_even(p) and p != origin}
    points.update(bc.point(n) for bc in bcs)
    ordered = [origin] + sorted(points)
    tags = [ORIGIN] + [
        SUPPORT_EVEN if p in genuine_support else BOUND_CONSTRAINT for p in sorted(points)
    ]
    return CandidateSet(points=tuple(ordered), tags=tuple(tags))


def build_candidates_and_covers(
    support: set[Exponent] | list[Exponent],
    bcs: list[BoundConstraint],
    n: int,
    genuine_support: set[Exponent] | None = None,
) -> tuple[CandidateSet, dict[Exponent, Cover]]:
    """Assemble the candidate set and one cover per inner term.

    Raises CoverUnavailable(beta) at the first inner term outside the
    candidate hull.  With bound constraints from select_bound_exponents
    this never happens; without them it is the common failure mode.
    """
    cands = build_candidate_set(support, bcs, n, genuine_support)
    cand_points = set(cands.points)
    covers: dict[Exponent, Cover] = {}
    for beta in sorted(set(support) - cand_points):
        covers[beta] = barycentric_coordinates(beta, cands)
    return cands, covers
