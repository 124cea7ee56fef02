"""Monte Carlo replication over walk paths, with exact small-n oracles.

Replicate i always draws from the Philox stream (master_seed, i), and
aggregation runs over a replicate-indexed array, so results are bit-identical
for a fixed seed regardless of how many worker processes execute the paths.
The worker count is capped by the HULLWALK_THREADS environment variable.

The enumeration oracles walk the full product space of finite-support
increment models and evaluate hull functionals exactly; they pin down the
Spitzer-Widom and Barndorff-Nielsen/Baxter identities and the resampling
martingale decomposition of the perimeter variance at small n.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from . import geom2d
from .errors import (
    DegenerateDriftError,
    InvalidReplicatesError,
    SupportTooLargeError,
    TooFewSamplesError,
    ZeroDriftError,
)
from .hullstream import CheckpointSchedule, _series_arrays
from .walkgen import RngStream, sample_path

ENUMERATION_BUDGET = 10**7
THREADS_ENV_VAR = "HULLWALK_THREADS"


@dataclass(frozen=True)
class MonteCarloEstimate:
    n: int
    statistic: str
    value: float
    std_error: float
    replicates: int


@dataclass(frozen=True)
class SampleSet:
    """One functional value per replicate at a fixed step count."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if not np.isfinite(vals).all():
            raise ValueError("sample values must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)


def worker_count() -> int:
    """Workers to use: HULLWALK_THREADS if set, else the CPU count."""
    env = os.environ.get(THREADS_ENV_VAR)
    if env:
        w = int(env)
        if w < 1:
            raise ValueError(f"{THREADS_ENV_VAR} must be >= 1, got {w}")
        return w
    return os.cpu_count() or 1


def _map_replicates(func, total: int, args: tuple, min_chunk: int = 64) -> np.ndarray:
    """Run ``func(lo, hi, *args)`` over [0, total) and stack results by index.

    ``func`` must be a module-level function returning an array whose leading
    axis has length hi - lo.  The output ordering depends only on replicate
    indices, never on worker scheduling.
    """
    workers = min(worker_count(), max(1, total // min_chunk))
    if workers <= 1:
        return func(0, total, *args)
    n_chunks = workers * 4
    bounds = np.linspace(0, total, n_chunks + 1).astype(int)
    pieces: list = [None] * n_chunks
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {
            pool.submit(func, int(lo), int(hi), *args): j
            for j, (lo, hi) in enumerate(zip(bounds[:-1], bounds[1:]))
            if hi > lo
        }
        for fut, j in futures.items():
            pieces[j] = fut.result()
    return np.concatenate([p for p in pieces if p is not None], axis=0)


def _series_block(lo: int, hi: int, model, n: int, checkpoints: tuple, master_seed: int) -> np.ndarray:
    out = np.empty((hi - lo, len(checkpoints), 3))
    cps = list(checkpoints)
    for i in range(lo, hi):
        path = sample_path(model, n, RngStream(master_seed, i))
        out[i - lo] = _series_arrays(path.positions, cps)
    return out


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    m = float(values.mean())
    if len(values) < 2:
        return m, 0.0
    s = float(values.std(ddof=1))
    return m, s / math.sqrt(len(values))


def _var_se(values: np.ndarray) -> tuple[float, float]:
    """Unbiased sample variance and its standard error from the fourth moment."""
    r = len(values)
    centered = values - values.mean()
    s2 = float((centered @ centered) / (r - 1))
    m4 = float(np.mean(centered**4))
    var_of_var = (m4 - s2 * s2 * (r - 3) / (r - 1)) / r
    return s2, math.sqrt(max(var_of_var, 0.0))


def estimate(model, n: int, sched: CheckpointSchedule, replicates: int, master_seed: int):
    """Mean/variance estimates of L and A plus the mean inradius, per checkpoint.

    Returns one MonteCarloEstimate per (checkpoint, statistic) with statistic
    in {meanL, varL, meanA, varA, meanR}.  Standard errors use s/sqrt(R) for
    means and the fourth-central-moment estimator for variances.

    Raises:
        InvalidReplicatesError: if fewer than two replicates are requested.
    """
    if replicates < 2:
        raise InvalidReplicatesError(f"need replicates >= 2, got {replicates}")
    checkpoints = tuple(sched.resolve(n))
    vals = _map_replicates(_series_block, replicates, (model, n, checkpoints, master_seed))
    out = []
    for j, c in enumerate(checkpoints):
        L, A, r = vals[:, j, 0], vals[:, j, 1], vals[:, j, 2]
        for stat, (v, se) in (
            ("meanL", _mean_se(L)),
            ("varL", _var_se(L)),
            ("meanA", _mean_se(A)),
            ("varA", _var_se(A)),
            ("meanR", _mean_se(r)),
        ):
            out.append(MonteCarloEstimate(c, stat, v, se, replicates))
    return out


_FUNCTIONAL_COLUMN = {"L": 0, "A": 1, "r": 2}


def _terminal_block(lo: int, hi: int, model, n: int, column: int, master_seed: int) -> np.ndarray:
    out = np.empty(hi - lo)
    for i in range(lo, hi):
        path = sample_path(model, n, RngStream(master_seed, i))
        out[i - lo] = _series_arrays(path.positions, [n])[0, column]
    return out


def collect_samples(model, n: int, replicates: int, master_seed: int, functional: str = "L") -> SampleSet:
    """One terminal functional value (L, A, or r at step n) per replicate."""
    if replicates < 1:
        raise InvalidReplicatesError(f"need replicates >= 1, got {replicates}")
    col = _FUNCTIONAL_COLUMN[functional]
    vals = _map_replicates(_terminal_block, replicates, (model, n, col, master_seed))
    return SampleSet(n, vals)


def _norm_block(lo: int, hi: int, model, ks: tuple, master_seed: int) -> np.ndarray:
    idx = np.asarray(ks, dtype=int)
    n = int(idx.max())
    out = np.empty((hi - lo, len(idx)))
    for i in range(lo, hi):
        pos = sample_path(model, n, RngStream(master_seed, i)).positions
        sel = pos[idx]
        out[i - lo] = np.hypot(sel[:, 0], sel[:, 1])
    return out


def norm_mean_estimates(model, ks, replicates: int, master_seed: int):
    """Monte Carlo estimates of E|S_k| at the given k, with standard errors.

    Feeds the Spitzer-Widom sum for models without enumerable support; the
    returned (means, std_errors) arrays align with ``ks``.
    """
    if replicates < 2:
        raise InvalidReplicatesError(f"need replicates >= 2, got {replicates}")
    ks = tuple(int(k) for k in ks)
    if any(k < 1 for k in ks):
        raise ValueError("norm means need k >= 1")
    vals = _map_replicates(_norm_block, replicates, (model, ks, master_seed))
    return vals.mean(axis=0), vals.std(axis=0, ddof=1) / math.sqrt(replicates)


# ---------------------------------------------------------------------------
# Distribution tests
# ---------------------------------------------------------------------------


def ks_statistic(samples, cdf) -> float:
    """One-sample Kolmogorov-Smirnov distance between samples and a cdf.

    D = max over order statistics x_(i) of max(i/m - F(x_(i)), F(x_(i)) - (i-1)/m).

    Raises:
        TooFewSamplesError: with fewer than two samples.
    """
    values = samples.values if isinstance(samples, SampleSet) else np.asarray(samples, dtype=float)
    m = len(values)
    if m < 2:
        raise TooFewSamplesError(f"need at least 2 samples, got {m}")
    xs = np.sort(values)
    try:
        f = np.asarray(cdf(xs), dtype=float)
        if f.shape != xs.shape:
            raise ValueError
    except (TypeError, ValueError):
        f = np.array([float(cdf(x)) for x in xs])
    i = np.arange(1, m + 1)
    return float(np.maximum(i / m - f, f - (i - 1) / m).max())


def ks_threshold(m: int, level_constant: float = 1.36) -> float:
    """Asymptotic 5% critical value of the one-sample KS distance."""
    return level_constant / math.sqrt(m)


@dataclass(frozen=True)
class CltResult:
    D: float
    threshold: float
    passed: bool


def clt_test(model, n: int, replicates: int, master_seed: int) -> CltResult:
    """Normality check of the perimeter under the sqrt(4 sigma2_mu n) scaling.

    Centers terminal L samples at their sample mean, scales by the theoretical
    standard deviation, and compares with the standard normal cdf at the 5%
    KS level.

    Raises:
        ZeroDriftError: if the model has zero mean increment.
        DegenerateDriftError: if fluctuations along the drift vanish
            (sigma2_mu = 0), where the Gaussian limit fails.
    """
    mom = model.moments()
    if mom.norm_mu == 0.0:
        raise ZeroDriftError("the Gaussian perimeter limit needs a drift")
    if not mom.finite_variance or mom.sigma2_mu is None or mom.sigma2_mu <= 0.0:
        raise DegenerateDriftError(
            "sigma2_mu = 0: increments fluctuate only orthogonally to the drift"
        )
    samples = collect_samples(model, n, replicates, master_seed, functional="L")
    z = standardized_perimeter_samples(samples, mom.sigma2_mu)
    d = ks_statistic(z, ndtr)
    thr = ks_threshold(replicates)
    return CltResult(D=d, threshold=thr, passed=d < thr)


def standardized_perimeter_samples(samples: SampleSet, sigma2_mu: float) -> np.ndarray:
    """(L - mean L) / sqrt(4 sigma2_mu n) for each replicate."""
    scale = math.sqrt(4.0 * sigma2_mu * samples.n)
    return (samples.values - samples.values.mean()) / scale


# ---------------------------------------------------------------------------
# Exact enumeration oracles
# ---------------------------------------------------------------------------


def _path_LA(points: list[tuple[float, float]]) -> tuple[float, float]:
    """Perimeter and area of hull(points) for a short list of tuples."""
    pts = sorted(set(points))
    if len(pts) == 1:
        return 0.0, 0.0
    hull = geom2d._chain(pts)
    if len(hull) == 2:
        (x0, y0), (x1, y1) = hull
        return 2.0 * math.hypot(x1 - x0, y1 - y0), 0.0
    L = 0.0
    A2 = 0.0
    for (x0, y0), (x1, y1) in zip(hull, hull[1:] + hull[:1]):
        L += math.hypot(x1 - x0, y1 - y0)
        A2 += x0 * y1 - x1 * y0
    return L, 0.5 * abs(A2)


def _enumerate_functionals(model, n: int, budget: int):
    """L and A of every length-n step sequence, plus the sequence weights.

    Entry j corresponds to the big-endian base-s expansion of j over the
    support, so reshaping to (s,) * n puts step i on axis i - 1.
    """
    steps, probs = model.support()
    s = len(steps)
    total = s**n
    if total > budget:
        raise SupportTooLargeError(f"support^{n} = {total} exceeds the {budget} budget")
    step_tuples = [(float(x), float(y)) for x, y in steps]
    L_all = np.empty(total)
    A_all = np.empty(total)
    positions = [(0.0, 0.0)]
    idx = 0

    def dfs(depth: int):
        nonlocal idx
        if depth == n:
            L_all[idx], A_all[idx] = _path_LA(positions)
            idx += 1
            return
        x, y = positions[-1]
        for dx, dy in step_tuples:
            positions.append((x + dx, y + dy))
            dfs(depth + 1)
            positions.pop()

    dfs(0)
    weights = np.ones(1)
    for _ in range(n):
        weights = np.kron(weights, probs)
    return L_all, A_all, weights, s, np.asarray(probs, dtype=float)


def exact_position_distributions(model, n: int, budget: int = ENUMERATION_BUDGET):
    """Distribution of S_k for k = 1..n as point-mass dicts, by convolution.

    Cheaper than path enumeration (the state space is positions, not paths),
    so it reaches larger n for the expectation identities that only need
    marginals of the walk.
    """
    steps, probs = model.support()
    step_items = [((float(x), float(y)), float(p)) for (x, y), p in zip(steps, probs)]
    dists: list[dict[tuple[float, float], float]] = []
    current = {(0.0, 0.0): 1.0}
    for _ in range(n):
        nxt: dict[tuple[float, float], float] = {}
        for (x, y), p in current.items():
            for (dx, dy), q in step_items:
                key = (x + dx, y + dy)
                nxt[key] = nxt.get(key, 0.0) + p * q
        current = nxt
        if len(current) > budget:
            raise SupportTooLargeError(f"position support exceeds the {budget} budget")
        dists.append(current)
    return dists


def exact_norm_means(model, n: int) -> list[float]:
    """E|S_k| for k = 1..n, exactly, for finite-support models."""
    out = []
    for dist in exact_position_distributions(model, n):
        out.append(sum(p * math.hypot(x, y) for (x, y), p in dist.items()))
    return out


def exact_triangle_mean(model, m: int, k: int) -> float:
    """E T(S_m, S_k - S_m): expected triangle area spanned by two walk legs.

    Uses independence of S_m and S_k - S_m (distributed as S_{k-m}).
    """
    if not 1 <= m < k:
        raise ValueError(f"need 1 <= m < k, got m={m}, k={k}")
    dists = exact_position_distributions(model, max(m, k - m))
    d1, d2 = dists[m - 1], dists[k - m - 1]
    total = 0.0
    for (ux, uy), p in d1.items():
        for (vx, vy), q in d2.items():
            total += p * q * 0.5 * abs(ux * vy - uy * vx)
    return total


@dataclass(frozen=True)
class ExactMoments:
    EL: float
    VarL: float
    EA: float


def enumerate_exact(model, n: int, budget: int = ENUMERATION_BUDGET) -> ExactMoments:
    """Exact E[L_n], Var[L_n], E[A_n] by full enumeration of support^n.

    Raises:
        NotFiniteSupportError: for models with continuous increments.
        SupportTooLargeError: if support^n exceeds the budget.
    """
    if n == 0:
        return ExactMoments(0.0, 0.0, 0.0)
    L_all, A_all, w, _, _ = _enumerate_functionals(model, n, budget)
    el = float(w @ L_all)
    var = float(w @ (L_all * L_all)) - el * el
    return ExactMoments(el, max(var, 0.0), float(w @ A_all))


@dataclass(frozen=True)
class MartingaleCheck:
    lhs: float
    rhs: float


def martingale_decomposition_check(model, n: int, budget: int = ENUMERATION_BUDGET) -> MartingaleCheck:
    """Exact check of Var L_n = sum_i E[D_i^2] for the resampling differences.

    D_i = E[L_n - L_n^(i) | first i steps], where L_n^(i) is the perimeter
    after independently resampling step i.  Both sides are evaluated by full
    enumeration: the left as the variance over support^n, the right by
    averaging the resampled perimeter over (replacement step, future) for
    every prefix.

    Raises:
        SupportTooLargeError: if support^(n+1) exceeds the budget.
    """
    steps, probs = model.support()
    s = len(steps)
    if s ** (n + 1) > budget:
        raise SupportTooLargeError(f"support^{n + 1} = {s ** (n + 1)} exceeds the {budget} budget")
    L_all, _, w_all, s, p = _enumerate_functionals(model, n, budget)
    el = float(w_all @ L_all)
    lhs = float(w_all @ (L_all * L_all)) - el * el

    rhs = 0.0
    for i in range(1, n + 1):
        head, fut = s ** (i - 1), s ** (n - i)
        T = L_all.reshape(head, s, fut)
        w_fut = np.ones(1)
        for _ in range(n - i):
            w_fut = np.kron(w_fut, p)
        m1 = T @ w_fut  # E[L_n | first i steps]            -> (head, s)
        m2 = m1 @ p  # E[L_n^(i) | first i steps], resampled -> (head,)
        d = m1 - m2[:, None]
        w_head = np.ones(1)
        for _ in range(i - 1):
            w_head = np.kron(w_head, p)
        rhs += float(w_head @ ((d * d) @ p))
    return MartingaleCheck(lhs=max(lhs, 0.0), rhs=rhs)
