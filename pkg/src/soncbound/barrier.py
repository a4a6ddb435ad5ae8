"""Log-barrier interior-point solver for the relaxation model.

Maximizes gamma over the linear rows plus the concave geometric-mean
conditions t_beta <= prod_j (c_j/lambda_j)**lambda_j.  Both constraint
families are handled with logarithmic barriers: -log of a positive
concave function is convex, so each centering step is a damped Newton
method on a smooth convex function.  A phase-1 pass (minimize the
uniform violation w) supplies a strictly feasible start when the canned
initialization is not already interior.

Everything is deterministic: fixed iteration order, no randomness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import status as st
from .poly import Exponent
from .relaxation import RelaxationModel

CANNED_EPS = 1e-3  # canned-start value for mu, nu and the c variables
GAMMA_DIVERGENCE = 1e10  # |gamma| beyond this: the relaxation looks unbounded

# All variables are capped at this value so the barrier stays bounded along
# recession directions (e.g. multipliers of constraints with vanishing
# constant term).  A solution pressing against the cap is reported as a
# numerical error rather than silently truncated.
VARIABLE_CAP = 1e8


@dataclass(frozen=True)
class SolverOptions:
    tol_gap: float = 1e-6  # relative duality-gap target
    tol_feas: float = 1e-7  # posterior feasibility tolerance
    tol_kkt: float = 1e-7  # scaled stationarity residual
    max_outer: int = 200
    max_inner: int = 50
    tau0: float = 1.0
    tau_factor: float = 10.0


@dataclass(frozen=True)
class SolveResult:
    status: str
    gamma: float | None = None
    mu: np.ndarray = field(default_factory=lambda: np.zeros(0))
    nu: np.ndarray = field(default_factory=lambda: np.zeros(0))
    t: dict[Exponent, float] = field(default_factory=dict)
    c: dict[Exponent, dict[int, float]] = field(default_factory=dict)
    iterations: int = 0
    outer_iterations: int = 0
    duality_gap: float = float("inf")
    kkt_residual: float = float("inf")
    max_residual: float = float("inf")
    gamma_trace: tuple[float, ...] = ()
    message: str = ""


@dataclass
class _Geo:
    """Barrier term -log(geo(c) - t [+ w]) for one inner block."""

    t_index: int
    c_indices: np.ndarray
    lambdas: np.ndarray
    w_index: int = -1  # phase-1 shift variable, -1 when absent


@dataclass
class _Barrier:
    """min tau * obj.z  subject to rows z + rhs >= 0 and geo slacks > 0.

    Row barrier terms carry weights: regularization rows (the variable
    caps) get a small weight so they barely inflate the duality-gap
    estimate while still fencing off recession directions.
    """

    obj: np.ndarray
    rows: np.ndarray
    rhs: np.ndarray
    geos: list[_Geo]
    weights: np.ndarray | None = None

    def __post_init__(self):
        if self.weights is None:
            self.weights = np.ones(len(self.rhs))
        # Slacks of nearly-active rows suffer catastrophic cancellation in
        # float64 once the barrier parameter is large; extended precision
        # keeps the stationarity residual measurable.
        self.rows_hp = self.rows.astype(np.longdouble)
        self.rhs_hp = self.rhs.astype(np.longdouble)

    @property
    def num_terms(self) -> float:
        return float(np.sum(self.weights)) + len(self.geos)

    def slacks(self, z: np.ndarray) -> np.ndarray:
        acc = self.rows_hp @ z.astype(np.longdouble) + self.rhs_hp
        return acc.astype(float)


def _geo_slack(geo: _Geo, z: np.ndarray) -> tuple[float, float, np.ndarray]:
    """Return (slack, theta, c) for one geometric-mean term, evaluated in
    extended precision: the slack cancels catastrophically near activity."""
    c = z[geo.c_indices]
    if np.any(c <= 0.0):
        return -np.inf, 0.0, c
    c_hp = c.astype(np.longdouble)
    lam_hp = geo.lambdas.astype(np.longdouble)
    theta_hp = np.exp(np.sum(lam_hp * (np.log(c_hp) - np.log(lam_hp))))
    slack_hp = theta_hp - np.longdouble(z[geo.t_index])
    if geo.w_index >= 0:
        slack_hp += np.longdouble(z[geo.w_index])
    return float(slack_hp), float(theta_hp), c


def _phi(prob: _Barrier, tau: float, z: np.ndarray) -> float:
    rho = prob.slacks(z)
    if np.any(rho <= 0.0):
        return np.inf
    val = tau * float(prob.obj @ z) - float(prob.weights @ np.log(rho))
    for geo in prob.geos:
        slack, _, _ = _geo_slack(geo, z)
        if slack <= 0.0:
            return np.inf
        val -= np.log(slack)
    return val


def _grad_hess(prob: _Barrier, tau: float, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rho = prob.slacks(z)
    grad = tau * prob.obj.copy()
    grad -= prob.rows.T @ (prob.weights / rho)
    hess = (prob.rows * (prob.weights / rho**2)[:, None]).T @ prob.rows
    for geo in prob.geos:
        slack, theta, c = _geo_slack(geo, z)
        psi = geo.lambdas / c  # d(log theta)/dc
        # gradient of the slack
        u = np.zeros(len(z))
        u[geo.c_indices] = theta * psi
        u[geo.t_index] = -1.0
        if geo.w_index >= 0:
            u[geo.w_index] = 1.0
        grad -= u / slack
        hess += np.outer(u, u) / slack**2
        # -hess(slack)/slack: theta * (diag(lam/c^2) - psi psi^T) / slack
        block = theta * (np.diag(geo.lambdas / c**2) - np.outer(psi, psi)) / slack
        hess[np.ix_(geo.c_indices, geo.c_indices)] += block
    return grad, hess


def _grad_hp(prob: _Barrier, tau: float, z: np.ndarray) -> np.ndarray:
    """Gradient assembled in extended precision, for residual reporting.

    At large barrier parameters the float64 gradient is dominated by
    cancellation between the objective and near-active barrier terms.
    """
    zl = z.astype(np.longdouble)
    rho = prob.rows_hp @ zl + prob.rhs_hp
    weights = prob.weights.astype(np.longdouble)
    grad = tau * prob.obj.astype(np.longdouble) - prob.rows_hp.T @ (weights / rho)
    for geo in prob.geos:
        c = zl[geo.c_indices]
        lam = geo.lambdas.astype(np.longdouble)
        theta = np.exp(np.sum(lam * (np.log(c) - np.log(lam))))
        slack = theta - zl[geo.t_index]
        if geo.w_index >= 0:
            slack += zl[geo.w_index]
        u = np.zeros(len(z), dtype=np.longdouble)
        u[geo.c_indices] = theta * lam / c
        u[geo.t_index] = -1.0
        if geo.w_index >= 0:
            u[geo.w_index] = 1.0
        grad -= u / slack
    return grad


def _newton_direction(hess: np.ndarray, grad: np.ndarray) -> np.ndarray:
    """Newton step with two rounds of extended-precision refinement."""
    try:
        d = np.linalg.solve(hess, -grad)
    except np.linalg.LinAlgError:
        return np.linalg.solve(hess + 1e-10 * np.eye(len(grad)), -grad)
    hess_hp = hess.astype(np.longdouble)
    rhs_hp = -grad.astype(np.longdouble)
    for _ in range(2):
        residual = rhs_hp - hess_hp @ d.astype(np.longdouble)
        try:
            d = d + np.linalg.solve(hess, residual.astype(float))
        except np.linalg.LinAlgError:
            break
    return d


def _max_step(prob: _Barrier, z: np.ndarray, d: np.ndarray) -> float:
    """Largest step keeping the linear slacks strictly positive."""
    rho = prob.slacks(z)
    dr = prob.rows @ d
    shrink = dr < -1e-300
    if not np.any(shrink):
        return 1.0
    return min(1.0, 0.99 * float(np.min(rho[shrink] / -dr[shrink])))


def _decrement_floor(tau: float) -> float:
    """Newton-decrement level below which float64 cannot improve the center."""
    return max(1e-17, 1e-21 * tau)


def _stall_tolerance(tau: float) -> float:
    """A stalled line search at this decrement still counts as centered."""
    return max(1e-8, 1e-15 * tau)


def _center(
    prob: _Barrier,
    tau: float,
    z: np.ndarray,
    max_inner: int,
    stop_early=None,
) -> tuple[np.ndarray, bool, int, float]:
    """Damped Newton to the analytic center; returns (z, converged, steps, decrement)."""
    steps = 0
    decrement = np.inf
    for _ in range(max_inner):
        grad, hess = _grad_hess(prob, tau, z)
        d = _newton_direction(hess, grad)
        decrement = float(-grad @ d)
        if abs(decrement) <= _decrement_floor(tau):
            return z, True, steps, decrement
        alpha = _max_step(prob, z, d)
        phi0 = _phi(prob, tau, z)
        gd = float(grad @ d)
        while alpha > 1e-16:
            cand = z + alpha * d
            if _phi(prob, tau, cand) <= phi0 + 0.01 * alpha * gd:
                break
            alpha *= 0.5
        else:
            # Progress is below float resolution; fine if nearly centered.
            return z, abs(decrement) <= _stall_tolerance(tau), steps, decrement
        z = z + alpha * d
        steps += 1
        if stop_early is not None and stop_early(z):
            return z, True, steps, decrement
    return z, abs(decrement) <= _stall_tolerance(tau), steps, decrement


def _kkt_residual(prob: _Barrier, tau: float, z: np.ndarray) -> float:
    """Relative stationarity residual with implicit barrier duals 1/(tau*slack)."""
    grad_inf = float(np.max(np.abs(_grad_hp(prob, tau, z))))
    rho = prob.slacks(z)
    max_dual = float(np.max(prob.weights / (tau * rho))) if len(rho) else 0.0
    for geo in prob.geos:
        slack, _, _ = _geo_slack(geo, z)
        max_dual = max(max_dual, 1.0 / (tau * slack))
    return grad_inf / (tau * (1.0 + max_dual))


def _canned_start(model: RelaxationModel) -> np.ndarray:
    """mu = nu = c = 1e-3, t = geo(c)/2, gamma with origin slack 1e-3."""
    z = np.zeros(model.nvar)
    for v in model.nonneg_indices:
        z[v] = CANNED_EPS
    for blk in model.blocks:
        lams = np.asarray(blk.lambdas)
        c = z[list(blk.c_indices)]
        theta = float(np.exp(np.sum(lams * (np.log(c) - np.log(lams)))))
        z[blk.t_index] = 0.5 * theta
    # gamma appears only in the origin row with coefficient -1
    for row, const in zip(model.rows, model.rhs):
        if row[model.gamma_index]:
            rest = float(row @ z + const - row[model.gamma_index] * z[model.gamma_index])
            z[model.gamma_index] = rest - CANNED_EPS
            break
    return z


def _strictly_feasible(prob: _Barrier, z: np.ndarray) -> bool:
    return _feasible_margin(prob, z) > 0.0


def _feasible_margin(prob: _Barrier, z: np.ndarray) -> float:
    rho = prob.slacks(z)
    margin = float(np.min(rho)) if len(rho) else np.inf
    for geo in prob.geos:
        margin = min(margin, _geo_slack(geo, z)[0])
    return margin


def _constructive_start(model: RelaxationModel) -> np.ndarray | None:
    """Closed-form strictly feasible point exploiting the model structure.

    Multipliers start at epsilon; each circuit gets provisional vertex
    shares within the available capacity, the geometric mean is lifted
    to twice the required magnitude through the origin share (when the
    cover touches the origin) or through bound-point shares backed by
    nu, and gamma absorbs the whole origin budget.  Returns None when
    some vertex capacity cannot be arranged; the generic phase 1 then
    takes over.
    """
    z = np.zeros(model.nvar)
    for v in model.mu_indices + model.nu_indices:
        z[v] = CANNED_EPS
    mu_vec = np.full(len(model.mu_indices), CANNED_EPS)
    nu_zero = np.zeros(model.lag.n)

    boostable: dict[int, int] = {}  # candidate index -> nu variable position
    fixed_part: dict[int, float] = {}
    blocks_at: dict[int, list[int]] = {}
    for bi, blk in enumerate(model.blocks):
        for j in blk.cand_indices:
            if j != 0:
                blocks_at.setdefault(j, []).append(bi)
    for j in sorted(blocks_at):
        coeff = model.lag.coeffs.get(model.cands.points[j])
        if coeff is None:
            return None
        fixed = coeff.value(mu_vec, nu_zero)
        fixed_part[j] = fixed
        if coeff.nu:
            boostable[j] = min(coeff.nu)  # variable index whose nu backs this point

    c_vals = [np.zeros(len(blk.c_indices)) for blk in model.blocks]
    for bi, blk in enumerate(model.blocks):
        lams = np.asarray(blk.lambdas)
        s = blk.coeff.value(mu_vec, nu_zero)
        required = abs(s) if blk.kind != "one-sided" else max(0.0, -s)
        target = 2.0 * (required + 1.0)
        prov = np.zeros(len(blk.cand_indices))
        lam0 = 0.0
        for k, j in enumerate(blk.cand_indices):
            if j == 0:
                lam0 = lams[k]
                continue
            if j in boostable:
                prov[k] = 1.0
            else:
                avail = fixed_part[j]
                if avail <= 1e-9:
                    return None
                prov[k] = min(1.0, 0.9 * avail / len(blocks_at[j]))
        if lam0 > 0.0:
            others = [k for k, j in enumerate(blk.cand_indices) if j != 0]
            log_prod = sum(lams[k] * (np.log(prov[k]) - np.log(lams[k])) for k in others)
            origin_k = list(blk.cand_indices).index(0)
            c0 = lams[origin_k] * (target / np.exp(log_prod)) ** (1.0 / lams[origin_k])
            if not np.isfinite(c0) or c0 > 1e7:
                return None
            prov[origin_k] = c0
        else:
            boost_ks = [k for k, j in enumerate(blk.cand_indices) if j in boostable]
            lam_boost = float(sum(lams[k] for k in boost_ks))
            if lam_boost <= 0.0:
                return None
            theta = float(np.exp(np.sum(lams * (np.log(prov) - np.log(lams)))))
            factor = (target / theta) ** (1.0 / lam_boost)
            if not np.isfinite(factor) or factor > 1e5:
                return None
            for k in boost_ks:
                prov[k] *= factor
        c_vals[bi] = prov
        z[blk.t_index] = required + 1.0
        for k, cvar in enumerate(blk.c_indices):
            z[cvar] = prov[k]

    # Back the bound points with enough nu to leave unit slack.
    for j, nu_pos in boostable.items():
        total = sum(
            c_vals[bi][list(model.blocks[bi].cand_indices).index(j)] for bi in blocks_at[j]
        )
        z[model.nu_indices[nu_pos]] = max(CANNED_EPS, total + 1.0 - fixed_part[j])

    for row, const in zip(model.rows, model.rhs):
        if row[model.gamma_index]:
            rest = float(row @ z + const - row[model.gamma_index] * z[model.gamma_index])
            z[model.gamma_index] = rest - 1.0
            break
    return z


def _moderate(prob: _Barrier, z_feasible: np.ndarray, z_anchor: np.ndarray) -> np.ndarray:
    """Pull a strictly feasible point back toward the canned anchor.

    Every slack is concave along the segment, so the strictly feasible
    region of the segment is an interval containing the feasible end;
    bisection finds the smallest workable blend.
    """
    target = min(1e-6, 0.5 * _feasible_margin(prob, z_feasible))
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        zmid = z_anchor + mid * (z_feasible - z_anchor)
        if _feasible_margin(prob, zmid) >= target:
            hi = mid
        else:
            lo = mid
    return z_anchor + hi * (z_feasible - z_anchor)


CAP_WEIGHT = 0.01


def _cap_rows(nvar: int) -> tuple[np.ndarray, np.ndarray]:
    """Rows VARIABLE_CAP - z_v >= 0 for every variable."""
    return -np.eye(nvar), np.full(nvar, VARIABLE_CAP)


def _phase2_problem(model: RelaxationModel) -> _Barrier:
    obj = np.zeros(model.nvar)
    obj[model.gamma_index] = -1.0  # maximize gamma
    geos = [
        _Geo(blk.t_index, np.array(blk.c_indices), np.array(blk.lambdas))
        for blk in model.blocks
    ]
    cap_rows, cap_rhs = _cap_rows(model.nvar)
    rows = np.vstack([model.rows, cap_rows]) if len(model.rows) else cap_rows
    rhs = np.concatenate([model.rhs, cap_rhs])
    weights = np.concatenate([np.ones(len(model.rhs)), np.full(model.nvar, CAP_WEIGHT)])
    return _Barrier(obj=obj, rows=rows, rhs=rhs, geos=geos, weights=weights)


def _phase1(model: RelaxationModel, opts: SolverOptions) -> tuple[np.ndarray | None, str, int]:
    """Minimize the uniform violation w; returns (z or None, message, steps).

    Rows containing gamma are dropped (gamma always has feasible room);
    variable sign bounds stay hard; everything else is shifted by w.
    """
    g = model.gamma_index
    old_to_new = {}
    for v in range(model.nvar):
        if v != g:
            old_to_new[v] = len(old_to_new)
    w = len(old_to_new)
    nvar1 = w + 1

    rows1, rhs1 = [], []
    for row, const, label in zip(model.rows, model.rhs, model.row_labels):
        if row[g]:
            continue
        new_row = np.zeros(nvar1)
        for v in np.nonzero(row)[0]:
            new_row[old_to_new[v]] = row[v]
        if not label.startswith("bound"):
            new_row[w] = 1.0
        rows1.append(new_row)
        rhs1.append(const)
    geos1 = [
        _Geo(
            old_to_new[blk.t_index],
            np.array([old_to_new[v] for v in blk.c_indices]),
            np.array(blk.lambdas),
            w_index=w,
        )
        for blk in model.blocks
    ]
    obj = np.zeros(nvar1)
    obj[w] = 1.0
    cap_rows, cap_rhs = _cap_rows(nvar1)
    all_rows = np.vstack([np.array(rows1), cap_rows]) if rows1 else cap_rows
    all_rhs = np.concatenate([np.array(rhs1), cap_rhs])
    weights = np.concatenate([np.ones(len(rhs1)), np.full(nvar1, CAP_WEIGHT)])
    prob = _Barrier(obj=obj, rows=all_rows, rhs=all_rhs, geos=geos1, weights=weights)

    z_model = _canned_start(model)
    z = np.zeros(nvar1)
    for v, nv in old_to_new.items():
        z[nv] = z_model[v]
    worst = 0.0
    if len(prob.rhs):
        worst = min(worst, float(np.min(prob.rows[:, :w] @ z[:w] + prob.rhs)))
    for geo in prob.geos:
        slack, _, _ = _geo_slack(geo, z)
        worst = min(worst, slack)
    z[w] = -worst + 1.0

    total_steps = 0
    tau = opts.tau0
    found = lambda zz: zz[w] <= -1e-3
    for _ in range(opts.max_outer):
        z, converged, steps, _ = _center(prob, tau, z, opts.max_inner, stop_early=found)
        total_steps += steps
        if found(z):
            break
        if not converged:
            return None, "phase-1 centering did not converge", total_steps
        gap = prob.num_terms / tau
        if gap <= 1e-9 * (1.0 + abs(z[w])):
            break
        tau *= opts.tau_factor
    else:
        return None, "phase-1 iteration cap exceeded", total_steps

    if z[w] > -1e-8:
        return None, f"no strictly feasible start exists (best violation {z[w]:.3e})", total_steps

    z_full = np.zeros(model.nvar)
    for v, nv in old_to_new.items():
        z_full[v] = z[nv]
    # pick gamma so the origin row has healthy slack
    for row, const in zip(model.rows, model.rhs):
        if row[g]:
            rest = float(row @ z_full + const - row[g] * z_full[g])
            z_full[g] = rest - 1.0
            break
    return z_full, "", total_steps


def _extract(model: RelaxationModel, z: np.ndarray, stat: str, gap: float, kkt: float,
             trace: list[float], steps: int, outers: int, message: str = "") -> SolveResult:
    rho = model.rows @ z + model.rhs
    max_resid = max(0.0, float(-np.min(rho))) if len(rho) else 0.0
    c_vals: dict[Exponent, dict[int, float]] = {}
    t_vals: dict[Exponent, float] = {}
    for blk in model.blocks:
        t_vals[blk.beta] = float(z[blk.t_index])
        c_vals[blk.beta] = {
            j: float(z[v]) for j, v in zip(blk.cand_indices, blk.c_indices)
        }
        theta = float(
            np.exp(np.sum(np.asarray(blk.lambdas) * (np.log(z[list(blk.c_indices)]) - np.log(blk.lambdas))))
        )
        max_resid = max(max_resid, z[blk.t_index] - theta)
    return SolveResult(
        status=stat,
        gamma=float(z[model.gamma_index]),
        mu=np.array([z[v] for v in model.mu_indices]),
        nu=np.array([z[v] for v in model.nu_indices]),
        t=t_vals,
        c=c_vals,
        iterations=steps,
        outer_iterations=outers,
        duality_gap=gap,
        kkt_residual=kkt,
        max_residual=max_resid,
        gamma_trace=tuple(trace),
        message=message,
    )


def solve_relaxation(model: RelaxationModel, opts: SolverOptions | None = None) -> SolveResult:
    """Barrier path-following on the relaxation; maximizes gamma.

    Returns status optimal once the scaled stationarity residual is
    below tol_kkt and the gap estimate is below tol_gap * (1 + |gamma|);
    infeasible when no strictly feasible point exists; numerical-error
    on iteration caps, divergence, or line-search failure.
    """
    opts = opts or SolverOptions()
    if model.infeasible_reason is not None:
        return SolveResult(status=st.INFEASIBLE, message=model.infeasible_reason)

    prob = _phase2_problem(model)
    total_steps = 0
    z = _canned_start(model)
    if not _strictly_feasible(prob, z):
        z_anchor = z
        z_built = _constructive_start(model)
        if z_built is not None and _strictly_feasible(prob, z_built):
            z = _moderate(prob, z_built, z_anchor)
        else:
            z_start, message, ph1_steps = _phase1(model, opts)
            total_steps += ph1_steps
            if z_start is None:
                if message.startswith("no strictly feasible"):
                    return SolveResult(status=st.INFEASIBLE, message=message)
                return SolveResult(status=st.NUMERICAL_ERROR, message=message)
            z = _moderate(prob, z_start, z_anchor)

    tau = opts.tau0
    trace: list[float] = []
    outers = 0
    for _ in range(opts.max_outer):
        z, converged, steps, _ = _center(prob, tau, z, opts.max_inner)
        total_steps += steps
        outers += 1
        gamma = float(z[model.gamma_index])
        trace.append(gamma)
        if not converged:
            return _extract(model, z, st.NUMERICAL_ERROR, prob.num_terms / tau,
                            _kkt_residual(prob, tau, z), trace, total_steps, outers,
                            "inner Newton stalled")
        if abs(gamma) > GAMMA_DIVERGENCE:
            return _extract(model, z, st.NUMERICAL_ERROR, prob.num_terms / tau,
                            _kkt_residual(prob, tau, z), trace, total_steps, outers,
                            "gamma diverged; the relaxation appears unbounded "
                            "(the problem is likely infeasible)")
        if float(np.max(z)) > 0.1 * VARIABLE_CAP:
            return _extract(model, z, st.NUMERICAL_ERROR, prob.num_terms / tau,
                            _kkt_residual(prob, tau, z), trace, total_steps, outers,
                            "a variable pressed against the regularization cap")
        gap = prob.num_terms / tau
        if gap <= opts.tol_gap * (1.0 + abs(gamma)):
            kkt = _kkt_residual(prob, tau, z)
            if kkt > opts.tol_kkt:
                return _extract(model, z, st.NUMERICAL_ERROR, gap, kkt, trace,
                                total_steps, outers,
                                f"stationarity residual {kkt:.2e} above tolerance")
            result = _extract(model, z, st.OPTIMAL, gap, kkt, trace, total_steps, outers)
            if result.max_residual > opts.tol_feas:
                return _extract(model, z, st.NUMERICAL_ERROR, gap, kkt, trace,
                                total_steps, outers,
                                f"constraint residual {result.max_residual:.2e} "
                                "above the feasibility tolerance")
            return result
        # Jump exactly to the barrier weight that meets the gap target:
        # overshooting a full decade costs conditioning for no benefit.
        tau_target = 1.01 * prob.num_terms / (opts.tol_gap * (1.0 + abs(gamma)))
        tau_next = tau * opts.tau_factor
        if tau < tau_target <= tau_next:
            tau_next = tau_target
        tau = tau_next
    return _extract(model, z, st.NUMERICAL_ERROR, prob.num_terms / tau,
                    float("inf"), trace, total_steps, outers,
                    "outer iteration cap exceeded")
