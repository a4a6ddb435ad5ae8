"""Deterministic random instance generator for corpus experiments.

Instances are seeded and reproducible.  Every objective carries one
guaranteed exponent with odd total degree equal to the effective degree
cap, so its support always contains a non-monomial-square point that no
even support point can dominate: without bound constraints such an
instance cannot be covered.  Keeping the cap odd also keeps every inner
term strictly inside the bound-constraint simplex, which guarantees
covers with positive origin weight and therefore certifiable repairs.
"""

from __future__ import annotations

import random

from .poly import Exponent, Polynomial, PopInstance, evaluate

COEFF_RANGE = 2.0
COEFF_MIN = 1e-3
CENTER_MARGIN = 0.1


def _effective_cap(max_degree: int) -> int:
    """Largest odd degree not exceeding max_degree."""
    if max_degree < 1:
        raise ValueError("max_degree must be >= 1")
    return max_degree if max_degree % 2 else max_degree - 1


def _coefficient(rng: random.Random) -> float:
    while True:
        c = rng.uniform(-COEFF_RANGE, COEFF_RANGE)
        if abs(c) >= COEFF_MIN:
            return c


def _composition(rng: random.Random, n: int, total: int) -> Exponent:
    """A uniform-ish composition of `total` into n nonnegative parts."""
    parts = [0] * n
    for _ in range(total):
        parts[rng.randrange(n)] += 1
    return tuple(parts)


def _sample_exponent(rng: random.Random, n: int, cap: int) -> Exponent:
    return _composition(rng, n, rng.randint(0, cap))


def generate_instance(
    seed: int, n: int, m: int, max_degree: int, density: float = 0.5
) -> PopInstance:
    """Seeded random box-constrained instance.

    The objective always contains a term of odd total degree equal to
    the effective cap (max_degree rounded down to odd); all exponents
    respect that cap.  Coefficients are uniform in [-2, 2] with
    magnitude at least 1e-3.  Boxes have lower bounds in [-3, 0] and
    upper bounds in [0, 3], and each constraint's constant term is
    lifted so the box center satisfies g(center) >= 0.1.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(seed)
    cap = _effective_cap(max_degree)

    lower = tuple(rng.uniform(-3.0, 0.0) for _ in range(n))
    upper = tuple(rng.uniform(0.0, 3.0) for _ in range(n))
    center = [(lo + hi) / 2.0 for lo, hi in zip(lower, upper)]

    # Guaranteed odd-total-degree term at the cap; odd total degree
    # forces at least one odd entry.
    forced = _composition(rng, n, cap)
    objective: Polynomial = {forced: _coefficient(rng)}
    num_terms = max(2, round(1 + density * 2 * (n + 1)))
    attempts = 0
    while len(objective) < num_terms and attempts < 50 * num_terms:
        attempts += 1
        e = _sample_exponent(rng, n, cap)
        if e not in objective:
            objective[e] = _coefficient(rng)

    constraints: list[Polynomial] = []
    for _ in range(m):
        g: Polynomial = {}
        g_terms = max(1, round(density * 2 * n))
        attempts = 0
        while len(g) < g_terms and attempts < 50 * g_terms:
            attempts += 1
            e = _sample_exponent(rng, n, cap)
            if e not in g:
                g[e] = _coefficient(rng)
        value = evaluate(g, center)
        if value < CENTER_MARGIN:
            zero = (0,) * n
            bump = CENTER_MARGIN - value
            g[zero] = g.get(zero, 0.0) + bump
        constraints.append(g)

    return PopInstance(
        n=n, objective=objective, constraints=constraints, lower=lower, upper=upper
    )
