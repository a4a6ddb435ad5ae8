"""A posteriori certification of solver output.

The interior-point solution is repaired into a certificate whose
inequalities hold in evaluated floating-point arithmetic: multipliers
are clamped nonnegative, vertex shares are scaled down until every
splitting constraint holds with margin, each circuit's origin share is
recomputed in closed form to dominate the inner coefficient, and the
bound is re-derived from the origin budget.  Repair can only lower the
bound, never raise it above the solver's value.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import ONE_SIDED
from .poly import Exponent, PopInstance, evaluate, zero_exponent
from .relaxation import RelaxationModel, geometric_mean
from .barrier import SolveResult

SOUNDNESS_SLACK = 1e-6  # f(x) >= gamma - SOUNDNESS_SLACK * (1 + |gamma|)
FEAS_SAMPLE_TOL = 1e-9  # sampled point counts as feasible when g >= -tol


class RepairFailure(Exception):
    """The solver output could not be repaired into a certificate."""


@dataclass(frozen=True)
class CircuitCertificate:
    beta: Exponent
    lambdas: dict[int, float]  # candidate index -> barycentric weight
    c: dict[int, float]  # candidate index -> repaired vertex share
    inner_coeff: float  # f_beta(mu) at the clamped multipliers


@dataclass(frozen=True)
class Certificate:
    gamma_certified: float
    mu: np.ndarray
    nu: np.ndarray
    circuits: tuple[CircuitCertificate, ...]
    leftovers: dict[int, float]  # candidate index -> unused coefficient mass
    candidates: tuple[Exponent, ...]

    def to_json(self) -> str:
        data = {
            "gamma": self.gamma_certified,
            "mu": [float(v) for v in self.mu],
            "nu": [float(v) for v in self.nu],
            "candidates": [list(p) for p in self.candidates],
            "circuits": [
                {
                    "beta": list(circ.beta),
                    "lambda": [circ.lambdas.get(j, 0.0) for j in range(len(self.candidates))],
                    "c": [circ.c.get(j, 0.0) for j in range(len(self.candidates))],
                }
                for circ in self.circuits
            ],
            "leftovers": [self.leftovers.get(j, 0.0) for j in range(len(self.candidates))],
        }
        return json.dumps(data, indent=1)


def _required_magnitude(kind: str, s: float) -> float:
    return max(0.0, -s) if kind == ONE_SIDED else abs(s)


def repair_and_certify(model: RelaxationModel, result: SolveResult) -> Certificate:
    """Turn an optimal SolveResult into a rigorously repaired Certificate.

    Raises RepairFailure when a cover carries no origin weight while its
    inner coefficient is nonzero, or when a non-origin share vanished.
    """
    if result.gamma is None:
        raise RepairFailure("solver result carries no bound")
    mu = np.maximum(np.asarray(result.mu, dtype=float), 0.0)
    nu = np.maximum(np.asarray(result.nu, dtype=float), 0.0)
    nu_full = np.zeros(model.lag.n)
    nu_full[: len(nu)] = nu

    origin = zero_exponent(model.lag.n)
    c_vals: dict[Exponent, dict[int, float]] = {
        beta: dict(shares) for beta, shares in result.c.items()
    }

    # Scale vertex shares so every splitting constraint holds with margin.
    blocks_at: dict[int, list[Exponent]] = {}
    for blk in model.blocks:
        for j in blk.cand_indices:
            if j != 0:
                blocks_at.setdefault(j, []).append(blk.beta)
    coeff_at: dict[int, float] = {}
    for j, point in enumerate(model.cands.points):
        if j == 0:
            continue
        coeff = model.lag.coeffs.get(point)
        if coeff is None:
            continue
        value = coeff.value(mu, nu_full)
        if value < 0.0:
            raise RepairFailure(
                f"vertex coefficient at {point} is negative ({value:.3e}) after clamping"
            )
        coeff_at[j] = value
        betas = blocks_at.get(j, [])
        total = sum(c_vals[b][j] for b in betas)
        if total > value:
            scale = 0.0 if value == 0.0 else (value / total) * (1.0 - 1e-13)
            for b in betas:
                c_vals[b][j] *= scale
            while sum(c_vals[b][j] for b in betas) > value:
                for b in betas:
                    c_vals[b][j] *= 1.0 - 1e-13

    # Recompute each circuit's origin share in closed form.
    circuits = []
    origin_total = 0.0
    for blk in model.blocks:
        cover = model.covers[blk.beta]
        s = blk.coeff.value(mu, nu_full)
        required = _required_magnitude(blk.kind, s)
        shares = c_vals[blk.beta]
        lam0 = cover.origin_weight
        if required == 0.0:
            if 0 in shares:
                shares[0] = 0.0
        else:
            if lam0 <= 0.0:
                raise RepairFailure(
                    f"cover of {blk.beta} has no origin weight; "
                    "the required magnitude cannot be absorbed at the origin"
                )
            log_prod = 0.0
            for j, lam in cover.weights.items():
                if j == 0:
                    continue
                if shares[j] <= 0.0:
                    raise RepairFailure(
                        f"non-origin share at candidate {j} vanished for {blk.beta} "
                        f"while the inner coefficient is {s:.3e}"
                    )
                log_prod += lam * (np.log(shares[j]) - np.log(lam))
            c0 = lam0 * (required / np.exp(log_prod)) ** (1.0 / lam0)
            if not np.isfinite(c0):
                raise RepairFailure(f"origin share for {blk.beta} overflows")
            # Pad until the circuit condition holds in evaluated arithmetic.
            lams_arr = np.array([cover.weights[j] for j in sorted(cover.weights)])
            for _ in range(20):
                trial = dict(shares)
                trial[0] = c0
                theta = geometric_mean(
                    np.array([trial[j] for j in sorted(cover.weights)]), lams_arr
                )
                if theta >= required:
                    break
                c0 *= 1.0 + 1e-13
            else:
                raise RepairFailure(f"could not stabilize the origin share for {blk.beta}")
            shares[0] = c0
        origin_total += shares.get(0, 0.0)
        circuits.append(
            CircuitCertificate(
                beta=blk.beta,
                lambdas=dict(cover.weights),
                c=dict(shares),
                inner_coeff=s,
            )
        )

    origin_coeff = model.lag.coeffs[origin]
    gamma_formula = origin_coeff.value(mu, nu_full, gamma=0.0) - origin_total
    gamma_certified = min(gamma_formula, float(result.gamma))

    leftovers = {0: gamma_formula - gamma_certified}
    for j, value in coeff_at.items():
        used = sum(c_vals[b][j] for b in blocks_at.get(j, []))
        leftovers[j] = value - used

    return Certificate(
        gamma_certified=gamma_certified,
        mu=mu,
        nu=nu,
        circuits=tuple(circuits),
        leftovers=leftovers,
        candidates=model.cands.points,
    )


def _exact_solve(rows, rhs):
    """Gaussian elimination over the rationals; None when singular."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    a = [row[:] + [b] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [v * inv for v in a[r]]
        for i in range(m):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [vi - f * vr for vi, vr in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    for i in range(r, m):
        if a[i][n] != 0:
            return None
    if len(pivots) < n:
        return None
    x = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        x[col] = a[i][n]
    return x


def _exact_affine(coeff, mu, nu) -> Fraction:
    total = Fraction(coeff.constant)
    for i, v in coeff.mu.items():
        total += Fraction(v) * mu[i]
    for i, v in coeff.nu.items():
        total += Fraction(v) * nu[i]
    return total


def strict_gamma(model: RelaxationModel, cert: Certificate) -> Fraction:
    """Re-derive the certified bound in exact rational arithmetic.

    Barycentric weights are recomputed exactly from the integer cover
    points, vertex shares are rescaled exactly where splitting demands
    it, and each circuit condition is verified as an integer-power
    inequality (raising both sides to the lcm of the weight
    denominators), so no irrational quantity is ever evaluated.  The
    returned Fraction is a mathematically rigorous lower bound.
    """
    mu = [Fraction(float(v)) for v in cert.mu]
    nu = [Fraction(float(v)) for v in cert.nu]
    nu_full = nu + [Fraction(0)] * (model.lag.n - len(nu))
    origin = zero_exponent(model.lag.n)

    # Exact vertex shares, rescaled to meet the splitting constraints.
    shares: dict[Exponent, dict[int, Fraction]] = {
        circ.beta: {j: Fraction(float(v)) for j, v in circ.c.items()}
        for circ in cert.circuits
    }
    blocks_at: dict[int, list[Exponent]] = {}
    for circ in cert.circuits:
        for j in circ.c:
            if j != 0:
                blocks_at.setdefault(j, []).append(circ.beta)
    for j, betas in sorted(blocks_at.items()):
        coeff = model.lag.coeffs.get(model.cands.points[j])
        value = _exact_affine(coeff, mu, nu_full) if coeff is not None else Fraction(0)
        if value < 0:
            raise RepairFailure(f"strict mode: negative vertex coefficient at index {j}")
        total = sum(shares[b][j] for b in betas)
        if total > value:
            scale = value / total
            for b in betas:
                shares[b][j] *= scale

    origin_total = Fraction(0)
    for blk in model.blocks:
        circ_shares = shares[blk.beta]
        s = _exact_affine(blk.coeff, mu, nu_full)
        required = max(Fraction(0), -s) if blk.kind == ONE_SIDED else abs(s)
        if required == 0:
            circ_shares[0] = Fraction(0)
            continue
        pts = [model.cands.points[j] for j in sorted(circ_shares)]
        rows = [[Fraction(p[i]) for p in pts] for i in range(model.lag.n)]
        rows.append([Fraction(1)] * len(pts))
        rhs = [Fraction(v) for v in blk.beta] + [Fraction(1)]
        lam = _exact_solve(rows, rhs)
        if lam is None or any(v < 0 for v in lam):
            raise RepairFailure(f"strict mode: no exact barycentric weights for {blk.beta}")
        index_of = {j: k for k, j in enumerate(sorted(circ_shares))}
        if 0 not in index_of or lam[index_of[0]] <= 0:
            raise RepairFailure(f"strict mode: cover of {blk.beta} has no origin weight")
        denom_lcm = 1
        for v in lam:
            denom_lcm = denom_lcm * v.denominator // math.gcd(denom_lcm, v.denominator)

        def circuit_holds(c0: Fraction) -> bool:
            lhs = required**denom_lcm
            rhs_val = Fraction(1)
            for j, k in index_of.items():
                if lam[k] == 0:
                    continue
                c_j = c0 if j == 0 else circ_shares[j]
                if c_j <= 0:
                    return False
                rhs_val *= (c_j / lam[k]) ** int(lam[k] * denom_lcm)
            return rhs_val >= lhs

        c0 = circ_shares.get(0, Fraction(0))
        bump = Fraction(2**40 + 1, 2**40)
        for _ in range(200):
            if c0 > 0 and circuit_holds(c0):
                break
            c0 = c0 * bump if c0 > 0 else Fraction(1, 10**6)
        else:
            raise RepairFailure(f"strict mode: cannot settle the origin share for {blk.beta}")
        circ_shares[0] = c0
        origin_total += c0

    gamma_exact = _exact_affine(model.lag.coeffs[origin], mu, nu_full) - origin_total
    return min(gamma_exact, Fraction(float(cert.gamma_certified)))


def strict_gamma_float(model: RelaxationModel, cert: Certificate) -> float:
    """Float representation of the strict bound, rounded toward -inf."""
    exact = strict_gamma(model, cert)
    value = float(exact)
    while Fraction(value) > exact:
        value = math.nextafter(value, -math.inf)
    return value


@dataclass(frozen=True)
class SoundnessReport:
    samples: int
    feasible: int
    violations: int
    min_slack: float | None  # min of f(x) - gamma over feasible samples
    vacuous: bool

    def ok(self) -> bool:
        return self.violations == 0


def sample_soundness_check(
    inst: PopInstance, gamma: float, k: int = 1000, seed: int = 0
) -> SoundnessReport:
    """Sample k box points and check f(x) >= gamma on the feasible ones.

    A point is kept when every constraint satisfies g_i(x) >= -1e-9; the
    bound check allows slack 1e-6 * (1 + |gamma|).  An empty feasible
    sample set is reported as vacuous, not as a failure.
    """
    rng = random.Random(seed)
    allowed = gamma - SOUNDNESS_SLACK * (1.0 + abs(gamma))
    feasible = 0
    violations = 0
    min_slack = None
    for _ in range(k):
        x = [rng.uniform(lo, hi) for lo, hi in zip(inst.lower, inst.upper)]
        if any(evaluate(g, x) < -FEAS_SAMPLE_TOL for g in inst.constraints):
            continue
        feasible += 1
        fx = evaluate(inst.objective, x)
        slack = fx - gamma
        if min_slack is None or slack < min_slack:
            min_slack = slack
        if fx < allowed:
            violations += 1
    return SoundnessReport(
        samples=k,
        feasible=feasible,
        violations=violations,
        min_slack=min_slack,
        vacuous=feasible == 0,
    )
