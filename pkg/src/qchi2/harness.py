"""Randomized property scans.

Every scan draws trial ``i`` from its own generator
``default_rng(SeedSequence(seed, spawn_key=(i,)))``, so trials are
independent of each other and of execution order; running with
``workers > 1`` gives the same report as a serial run.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channels import contraction_check, random_channel
from .divergence import chi2
from .errors import DomainError, NumericError, SingularStateError
from .fop import (
    WeightFunction,
    from_weight,
    log_grid,
    ruskai_family,
    wyd_family,
)
from .linalg import DensityMatrix
from .report import ScanReport

DEFAULT_LAMBDA_GRID = tuple(round(0.1 * k, 1) for k in range(1, 10))
CONVEXITY_TOL = 1e-9
QUAD_INV_TOL = 1e-10
CONTRACTION_TOL = 1e-9
DEFAULT_SCAN_FLOOR = 1e-3
DEFAULT_NOISE = 1e-3


def trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _ginibre(n, rng):
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_unitary(n, seed):
    """Haar-random unitary."""
    rng = np.random.default_rng(seed)
    q, r = np.linalg.qr(_ginibre(n, rng))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_density(n, seed, min_eig_floor=0.0):
    """``G G* / Tr(G G*)`` for complex Gaussian ``G``, mixed with ``I/n`` up to the floor.

    ``seed`` may be an int, a ``SeedSequence`` or a ``Generator`` (used in place).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if not 0.0 <= min_eig_floor < 1.0 / n:
        raise DomainError(f"min_eig_floor must lie in [0, 1/n), got {min_eig_floor}")
    rng = np.random.default_rng(seed)
    g = _ginibre(n, rng)
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T) / np.trace(rho).real
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < min_eig_floor:
        p = (min_eig_floor - lo) / (1.0 / n - lo)
        rho = (1.0 - p) * rho + p * np.eye(n) / n
    return DensityMatrix(rho)


def mix_with_noise(rho, delta):
    """``(1 - delta) rho + delta I/n``."""
    data = np.asarray(getattr(rho, "data", rho))
    n = data.shape[0]
    return DensityMatrix((1.0 - delta) * data + delta * np.eye(n) / n)


def _map_trials(fn, trials, workers):
    if workers and workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, range(trials)))
    return [fn(i) for i in range(trials)]


def _collect(name, params, results, tol, seed, start):
    margins, failed = [], []
    for i, res in enumerate(results):
        if res is None:
            failed.append(i)
        else:
            margins.append(res)
    details = {"failed_trials": failed} if failed else {}
    return ScanReport(name, params, margins, tol, seed, len(failed),
                      time.perf_counter() - start, details)


def _relative(margin, scale):
    return margin / scale if scale > 0.0 else margin


# -- convexity ----------------------------------------------------------------


def convexity_margins(func, rho1, sigma1, rho2, sigma2, lambda_grid, path="eigenbasis"):
    """Raw margins and scales of joint convexity at each ``lam`` in the grid.

    ``margin = lam chi2(r1, s1) + (1 - lam) chi2(r2, s2) - chi2(mixed pair)``
    and ``scale`` is the convex combination of the endpoint values.
    """
    r1, s1, r2, s2 = (np.asarray(getattr(x, "data", x)) for x in (rho1, sigma1, rho2, sigma2))
    c1 = chi2(func, rho1, sigma1, path).value
    c2 = chi2(func, rho2, sigma2, path).value
    margins, scales = [], []
    for lam in lambda_grid:
        rho = DensityMatrix(lam * r1 + (1.0 - lam) * r2)
        sigma = DensityMatrix(lam * s1 + (1.0 - lam) * s2)
        scale = lam * c1 + (1.0 - lam) * c2
        margins.append(scale - chi2(func, rho, sigma, path).value)
        scales.append(scale)
    return np.array(margins), np.array(scales)


def convexity_scan(func, n, trials, lambda_grid=DEFAULT_LAMBDA_GRID, seed=0,
                   tol=CONVEXITY_TOL, floor=DEFAULT_SCAN_FLOOR, path="eigenbasis", workers=1):
    """Joint convexity of ``(rho, sigma) -> chi2_f(rho, sigma)`` on random quadruples.

    Each trial records its worst relative margin ``margin / scale``; the
    scan passes iff none is below ``-tol``.
    """
    if n < 2:
        raise DomainError("convexity scan needs n >= 2")
    grid = [float(x) for x in lambda_grid]
    if not grid or min(grid) < 0.0 or max(grid) > 1.0:
        raise DomainError("lambda grid must be non-empty and lie in [0, 1]")
    start = time.perf_counter()

    def one(i):
        rng = trial_rng(seed, i)
        quad = [random_density(n, rng, floor) for _ in range(4)]
        try:
            m, s = convexity_margins(func, *quad, grid, path)
        except (SingularStateError, NumericError):
            return None
        return float(min(_relative(a, b) for a, b in zip(m, s)))

    params = {"f": func.spec, "n": n, "trials": trials, "lambda_grid": grid,
              "floor": floor, "path": path}
    return _collect("convexity", params, _map_trials(one, trials, workers), tol, seed, start)


# -- quadratic-inverse lemma --------------------------------------------------


def quadratic_inverse(a, xi):
    """``<xi, A^-1 xi>`` for positive definite ``A``."""
    return float(np.vdot(xi, np.linalg.solve(a, xi)).real)


def quadratic_inverse_margin(a1, a2, xi1, xi2, lam):
    """Raw joint-convexity margin of ``(A, xi) -> <xi, A^-1 xi>`` at ``lam``."""
    a1, a2 = np.atleast_2d(a1), np.atleast_2d(a2)
    xi1, xi2 = np.atleast_1d(xi1), np.atleast_1d(xi2)
    ends = lam * quadratic_inverse(a1, xi1) + (1.0 - lam) * quadratic_inverse(a2, xi2)
    mid = quadratic_inverse(lam * a1 + (1.0 - lam) * a2, lam * xi1 + (1.0 - lam) * xi2)
    return ends - mid, ends


def random_positive_definite(n, rng, lo=0.1, hi=10.0):
    u = random_unitary(n, rng)
    w = rng.uniform(lo, hi, size=n)
    a = (u * w) @ u.conj().T
    return 0.5 * (a + a.conj().T)


def quadratic_inverse_convexity_scan(n, trials, lambda_grid=DEFAULT_LAMBDA_GRID, seed=0,
                                     tol=QUAD_INV_TOL, workers=1):
    if n < 1:
        raise DomainError("n must be >= 1")
    grid = [float(x) for x in lambda_grid]
    if not grid or min(grid) < 0.0 or max(grid) > 1.0:
        raise DomainError("lambda grid must be non-empty and lie in [0, 1]")
    start = time.perf_counter()

    def one(i):
        rng = trial_rng(seed, i)
        a1 = random_positive_definite(n, rng)
        a2 = random_positive_definite(n, rng)
        xi1 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        xi2 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        try:
            rel = [_relative(*quadratic_inverse_margin(a1, a2, xi1, xi2, lam)) for lam in grid]
        except np.linalg.LinAlgError:
            return None
        return float(min(rel))

    params = {"n": n, "trials": trials, "lambda_grid": grid}
    return _collect("quadratic-inverse", params, _map_trials(one, trials, workers),
                    tol, seed, start)


# -- contraction --------------------------------------------------------------


def contraction_scan(func, n, trials, seed=0, env_dims=(1, 2, 4), delta=DEFAULT_NOISE,
                     tol=CONTRACTION_TOL, workers=1):
    """Contraction of ``chi2_f`` under random channels ``M_n -> M_n``.

    ``trials`` triples are drawn for each environment dimension; ``sigma`` is
    mixed with white noise of weight ``delta``.  Trials with ``env_dim == 1``
    are unitary channels and their largest ``|margin| / max(1, before)`` is
    reported as ``details["unitary_max_deviation"]``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    env_dims = [int(e) for e in env_dims]
    start = time.perf_counter()
    unitary_dev = []

    def one(k):
        e_idx, i = divmod(k, trials)
        env = env_dims[e_idx]
        rng = trial_rng(seed, k)
        chan = random_channel(n, n, env, rng)
        rho = random_density(n, rng)
        sigma = mix_with_noise(random_density(n, rng), delta)
        try:
            res = contraction_check(func, chan, rho, sigma, tol)
        except (SingularStateError, NumericError):
            return None
        return res.relative_margin, (abs(res.margin) / max(1.0, res.before) if env == 1 else None)

    results = _map_trials(one, trials * len(env_dims), workers)
    margins = []
    for res in results:
        if res is None:
            margins.append(None)
            continue
        margins.append(res[0])
        if res[1] is not None:
            unitary_dev.append(res[1])
    params = {"f": func.spec, "n": n, "trials": trials, "env_dims": env_dims, "delta": delta}
    report = _collect("contraction", params, margins, tol, seed, start)
    if unitary_dev:
        report.details["unitary_max_deviation"] = max(unitary_dev)
    return report


# -- families -----------------------------------------------------------------

FAMILY_BUILDERS = {
    "wyd": wyd_family,
    "ruskai": ruskai_family,
    "weight": lambda a: from_weight(WeightFunction.const(a)),
}


def family_order_key(family, alpha):
    """Key along which ``f_alpha`` is pointwise non-increasing.

    WYD and constant-weight members decrease in ``alpha``; the Ruskai family
    is symmetric under ``alpha -> 1 - alpha`` and decreases in ``|alpha - 1/2|``.
    """
    if family == "ruskai":
        return abs(alpha - 0.5)
    return alpha


@dataclass
class FamilyScanReport:
    family: str
    alpha_grid: list
    convexity: list
    contraction: list
    f_monotonicity: ScanReport
    chi2_monotonicity: ScanReport
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return (all(r.passed for r in self.convexity) and all(r.passed for r in self.contraction)
                and self.f_monotonicity.passed and self.chi2_monotonicity.passed)

    def to_dict(self, verbose=False):
        return {
            "scan": "family",
            "family": self.family,
            "alpha_grid": self.alpha_grid,
            "convexity": [r.to_dict(verbose) for r in self.convexity],
            "contraction": [r.to_dict(verbose) for r in self.contraction],
            "f_monotonicity": self.f_monotonicity.to_dict(verbose),
            "chi2_monotonicity": self.chi2_monotonicity.to_dict(verbose),
            "pass": self.passed,
        }


def family_monotonicity(family, alpha_grid, n, trials, seed, t_grid=None, tol=1e-10,
                        floor=DEFAULT_SCAN_FLOOR, diagonal=False):
    """Pointwise order of ``f_alpha`` and of ``chi2_{f_alpha}`` along the family.

    Members are sorted by :func:`family_order_key`; between neighbours
    ``f`` must not increase (margin ``(f_prev - f_next) / max(1, f_prev)``)
    and ``chi2`` must not decrease on shared random pairs.
    """
    build = FAMILY_BUILDERS[family]
    alphas = sorted((float(a) for a in alpha_grid), key=lambda a: family_order_key(family, a))
    funcs = [build(a) for a in alphas]
    t = log_grid(1e-3, 1e3, 61) if t_grid is None else np.asarray(t_grid, dtype=np.float64)
    fvals = np.array([f(t) for f in funcs])
    f_margins = [float(np.min((fvals[k] - fvals[k + 1]) / np.maximum(1.0, fvals[k])))
                 for k in range(len(funcs) - 1)]
    pairs = []
    for i in range(trials):
        rng = trial_rng(seed, i)
        if diagonal:
            p = rng.dirichlet(np.ones(n))
            q = (1.0 - floor * n) * rng.dirichlet(np.ones(n)) + floor
            pairs.append((DensityMatrix(np.diag(p)), DensityMatrix(np.diag(q))))
        else:
            pairs.append((random_density(n, rng), random_density(n, rng, floor)))
    chis = np.array([[chi2(f, r, s).value for r, s in pairs] for f in funcs]).reshape(len(funcs), -1)
    c_margins = []
    if pairs:
        c_margins = [float(np.min((chis[k + 1] - chis[k]) / (1.0 + chis[k])))
                     for k in range(len(funcs) - 1)]
    params = {"family": family, "alphas_in_order": alphas}
    f_rep = ScanReport("f-monotonicity", params, f_margins, tol, seed)
    c_rep = ScanReport("chi2-monotonicity", dict(params, n=n, trials=trials), c_margins, tol, seed)
    return f_rep, c_rep, chis


def family_scan(family, alpha_grid, n, trials, seed=0, lambda_grid=DEFAULT_LAMBDA_GRID,
                tol=CONVEXITY_TOL, workers=1):
    """Convexity and contraction scans for each member, plus order checks along the family."""
    if family not in FAMILY_BUILDERS:
        raise DomainError(f"unknown family {family!r}; expected one of {sorted(FAMILY_BUILDERS)}")
    alphas = [float(a) for a in alpha_grid]
    if not alphas or min(alphas) < 0.0 or max(alphas) > 1.0:
        raise DomainError("alpha grid must be non-empty and lie in [0, 1]")
    conv, contr = [], []
    for a in alphas:
        func = FAMILY_BUILDERS[family](a)
        conv.append(convexity_scan(func, n, trials, lambda_grid, seed, tol, workers=workers))
        contr.append(contraction_scan(func, n, trials, seed, tol=tol, workers=workers))
    f_rep, c_rep, _ = family_monotonicity(family, alphas, n, trials, seed)
    return FamilyScanReport(family, alphas, conv, contr, f_rep, c_rep)
