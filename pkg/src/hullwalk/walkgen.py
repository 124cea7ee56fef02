"""Increment models and path generation for planar random walks.

Each model carries its analytic moments (mean drift, covariance, the variance
split along and across the drift direction) next to a vectorized sampler, so
simulations can always be checked against closed forms.  Randomness comes
from counter-based Philox streams keyed by (master_seed, stream_index):
identical keys reproduce identical paths no matter how work is scheduled
across processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NotFiniteSupportError,
    NotPSDError,
    ZeroDriftError,
    ZeroPerpVarianceError,
)

DEFAULT_BROWNIAN_GRID = 2**17  # discretization bias on hull functionals < 1% here


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by (master_seed, stream_index)."""

    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        key = np.array(
            [self.master_seed & 0xFFFFFFFFFFFFFFFF, self.stream_index & 0xFFFFFFFFFFFFFFFF],
            dtype=np.uint64,
        )
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class MomentSummary:
    """Analytic increment moments.

    ``sigma2_mu`` and ``sigma2_perp`` are the variances of the centered
    increment projected on the drift direction and its 90-degree
    counterclockwise rotation; they are None when the drift vanishes, as is
    ``rho_cross`` (the covariance of the two projections).  All second-moment
    fields are None when the model has no finite variance.
    """

    mu: tuple[float, float]
    Sigma: tuple[tuple[float, float], tuple[float, float]] | None
    sigma2: float | None
    sigma2_mu: float | None
    sigma2_perp: float | None
    det_Sigma: float | None
    rho_cross: float | None
    finite_variance: bool

    @property
    def norm_mu(self) -> float:
        return math.hypot(self.mu[0], self.mu[1])

    def sigma_matrix(self) -> np.ndarray:
        if self.Sigma is None:
            raise ValueError("covariance unavailable (infinite variance model)")
        return np.array(self.Sigma, dtype=float)


def _split_moments(mu: np.ndarray, Sigma: np.ndarray) -> MomentSummary:
    sigma2 = float(np.trace(Sigma))
    norm_mu = float(np.hypot(mu[0], mu[1]))
    if norm_mu > 0.0:
        mu_hat = mu / norm_mu
        mu_perp = np.array([-mu_hat[1], mu_hat[0]])
        s_mu = float(mu_hat @ Sigma @ mu_hat)
        s_perp = float(mu_perp @ Sigma @ mu_perp)
        rho = float(mu_hat @ Sigma @ mu_perp)
    else:
        s_mu = s_perp = rho = None
    return MomentSummary(
        mu=(float(mu[0]), float(mu[1])),
        Sigma=((float(Sigma[0, 0]), float(Sigma[0, 1])), (float(Sigma[1, 0]), float(Sigma[1, 1]))),
        sigma2=sigma2,
        sigma2_mu=s_mu,
        sigma2_perp=s_perp,
        det_Sigma=float(np.linalg.det(Sigma)),
        rho_cross=rho,
        finite_variance=True,
    )


def psd_sqrt(cov: np.ndarray) -> np.ndarray:
    """Symmetric PSD square root of a 2x2 covariance, in closed form.

    For S = [[a, b], [b, c]], sqrt(S) = (S + sqrt(det S) I) / t with
    t = sqrt(a + c + 2 sqrt(det S)); the zero matrix maps to itself.

    Raises:
        NotPSDError: if ``cov`` is not symmetric positive semidefinite.
    """
    cov = np.asarray(cov, dtype=float)
    if cov.shape != (2, 2):
        raise NotPSDError(f"expected a 2x2 matrix, got shape {cov.shape}")
    if not np.isfinite(cov).all():
        raise NotPSDError("covariance must be finite")
    scale = max(abs(cov).max(), 1.0)
    if abs(cov[0, 1] - cov[1, 0]) > 1e-12 * scale:
        raise NotPSDError("covariance must be symmetric")
    a, b, c = cov[0, 0], 0.5 * (cov[0, 1] + cov[1, 0]), cov[1, 1]
    det = a * c - b * b
    if a < -1e-12 * scale or c < -1e-12 * scale or det < -1e-12 * scale * scale:
        raise NotPSDError("covariance must be positive semidefinite")
    det = max(det, 0.0)
    s = math.sqrt(det)
    t_sq = max(a + c + 2.0 * s, 0.0)
    if t_sq == 0.0:
        return np.zeros((2, 2))
    t = math.sqrt(t_sq)
    return (np.array([[a + s, b], [b, c + s]])) / t


# ---------------------------------------------------------------------------
# Increment models
# ---------------------------------------------------------------------------


def _as_pair(value) -> tuple[float, float]:
    x, y = value
    return (float(x), float(y))


_LATTICE_STEPS = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
_HEX6_STEPS = np.array(
    [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0], [-1.0, 1.0], [1.0, -1.0]]
)


@dataclass(frozen=True)
class LatticeSRW:
    """Simple random walk on Z^2: steps (+-1, 0), (0, +-1) each with probability 1/4."""

    def moments(self) -> MomentSummary:
        return _split_moments(np.zeros(2), 0.5 * np.eye(2))

    def sample_increments(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return _LATTICE_STEPS[rng.integers(0, 4, size=n)]

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        return _LATTICE_STEPS, np.full(4, 0.25)

    def spec_string(self) -> str:
        return "lattice"


@dataclass(frozen=True)
class Hex6:
    """Six-step lattice walk: (+-1,0), (0,+-1), (-1,1), (1,-1) each with probability 1/6."""

    def moments(self) -> MomentSummary:
        Sigma = np.array([[2.0 / 3.0, -1.0 / 3.0], [-1.0 / 3.0, 2.0 / 3.0]])
        return _split_moments(np.zeros(2), Sigma)

    def sample_increments(self, n: int, rng: np.random.Generator) -> np.ndarray:
        return _HEX6_STEPS[rng.integers(0, 6, size=n)]

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        return _HEX6_STEPS, np.full(6, 1.0 / 6.0)

    def spec_string(self) -> str:
        return "hex6"


@dataclass(frozen=True)
class PearsonRayleigh:
    """Unit-length step in a uniformly random direction, plus a fixed drift."""

    drift: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "drift", _as_pair(self.drift))

    def moments(self) -> MomentSummary:
        # E[cos^2 Theta] = 1/2, so the centered covariance is I/2 regardless of drift.
        return _split_moments(np.asarray(self.drift, dtype=float), 0.5 * np.eye(2))

    def sample_increments(self, n: int, rng: np.random.Generator) -> np.ndarray:
        theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
        out = np.empty((n, 2))
        np.cos(theta, out=out[:, 0])
        np.sin(theta, out=out[:, 1])
        out[:, 0] += self.drift[0]
        out[:, 1] += self.drift[1]
        return out

    def support(self):
        raise NotFiniteSupportError("Pearson-Rayleigh steps have continuous support")

    def spec_string(self) -> str:
        if self.drift == (0.0, 0.0):
            return "pr"
        return f"pr:{self.drift[0]:g},{self.drift[1]:g}"


@dataclass(frozen=True)
class Gaussian:
    """Gaussian increments with arbitrary mean and 2x2 PSD covariance."""

    mean: tuple[float, float] = (0.0, 0.0)
    cov: tuple[tuple[float, float], tuple[float, float]] = ((1.0, 0.0), (0.0, 1.0))
    _sqrt: np.ndarray = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "mean", _as_pair(self.mean))
        cov = np.asarray(self.cov, dtype=float)
        root = psd_sqrt(cov)  # validates symmetry and positive semidefiniteness
        object.__setattr__(
            self, "cov", ((float(cov[0, 0]), float(cov[0, 1])), (float(cov[1, 0]), float(cov[1, 1])))
        )
        object.__setattr__(self, "_sqrt", root)

    def moments(self) -> MomentSummary:
        return _split_moments(np.asarray(self.mean, dtype=float), np.array(self.cov, dtype=float))

    def sample_increments(self, n: int, rng: np.random.Generator) -> np.ndarray:
        z = rng.standard_normal((n, 2))
        return z @ self._sqrt + np.asarray(self.mean, dtype=float)

    def support(self):
        raise NotFiniteSupportError("Gaussian steps have continuous support")

    def spec_string(self) -> str:
        (a, b), (_, c) = self.cov
        mx, my = self.mean
        if (mx, my) == (0.0, 0.0):
            return f"gauss:{a:g},{b:g},{c:g}"
        return f"gauss:{a:g},{b:g},{c:g},{mx:g},{my:g}"


@dataclass(frozen=True)
class SpacetimeBinary:
    """Steps (1, 1) and (1, -1) each with probability 1/2.

    The walk is the space-time diagram of a one-dimensional simple random
    walk; its centered increments are orthogonal to the drift, which is the
    degenerate case where the perimeter variance grows slower than n.
    """

    def moments(self) -> MomentSummary:
        return _split_moments(np.array([1.0, 0.0]), np.diag([0.0, 1.0]))

    def sample_increments(self, n: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty((n, 2))
        out[:, 0] = 1.0
        out[:, 1] = rng.integers(0, 2, size=n) * 2.0 - 1.0
        return out

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array([[1.0, 1.0], [1.0, -1.0]]), np.full(2, 0.5)

    def spec_string(self) -> str:
        return "st-binary"


@dataclass(frozen=True)
class SpacetimeGaussian:
    """Steps (1, xi) with xi standard normal: space-time diagram of a Gaussian walk."""

    def moments(self) -> MomentSummary:
        return _split_moments(np.array([1.0, 0.0]), np.diag([0.0, 1.0]))

    def sample_increments(self, n: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty((n, 2))
        out[:, 0] = 1.0
        out[:, 1] = rng.standard_normal(n)
        return out

    def support(self):
        raise NotFiniteSupportError("space-time Gaussian steps have continuous support")

    def spec_string(self) -> str:
        return "st-gauss"


@dataclass(frozen=True)
class ParetoDirection:
    """Heavy-tailed step: radius (1 - U)^(-1/alpha), direction uniform, plus drift.

    The radius is Pareto(alpha) with minimum 1, so the mean is finite for
    alpha > 1 and the variance only for alpha > 2.  Exploratory model; no
    closed-form hull asymptotics are claimed for it.
    """

    alpha: float = 1.5
    drift: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not self.alpha > 1.0:
            raise ValueError(f"alpha must exceed 1 for a finite mean, got {self.alpha}")
        object.__setattr__(self, "drift", _as_pair(self.drift))

    def moments(self) -> MomentSummary:
        if self.alpha > 2.0:
            er2 = self.alpha / (self.alpha - 2.0)
            return _split_moments(np.asarray(self.drift, dtype=float), 0.5 * er2 * np.eye(2))
        return MomentSummary(
            mu=(float(self.drift[0]), float(self.drift[1])),
            Sigma=None,
            sigma2=None,
            sigma2_mu=None,
            sigma2_perp=None,
            det_Sigma=None,
            rho_cross=None,
            finite_variance=False,
        )

    def sample_increments(self, n: int, rng: np.random.Generator) -> np.ndarray:
        radius = (1.0 - rng.random(n)) ** (-1.0 / self.alpha)
        theta = rng.uniform(0.0, 2.0 * math.pi, size=n)
        out = np.empty((n, 2))
        out[:, 0] = radius * np.cos(theta) + self.drift[0]
        out[:, 1] = radius * np.sin(theta) + self.drift[1]
        return out

    def support(self):
        raise NotFiniteSupportError("Pareto steps have continuous support")

    def spec_string(self) -> str:
        if self.drift == (0.0, 0.0):
            return f"pareto:{self.alpha:g}"
        return f"pareto:{self.alpha:g},{self.drift[0]:g},{self.drift[1]:g}"


IncrementModel = (
    LatticeSRW
    | Hex6
    | PearsonRayleigh
    | Gaussian
    | SpacetimeBinary
    | SpacetimeGaussian
    | ParetoDirection
)


def moments(model) -> MomentSummary:
    """Analytic moments of the increment distribution."""
    return model.moments()


# ---------------------------------------------------------------------------
# Model specification grammar
# ---------------------------------------------------------------------------

MODEL_GRAMMAR = (
    "lattice | hex6 | pr[:dx,dy] | gauss[:s11,s12,s22[,mx,my]] | "
    "st-binary | st-gauss | pareto:alpha[,dx,dy]"
)


def parse_model(spec: str):
    """Parse a model specification string (see MODEL_GRAMMAR)."""
    spec = spec.strip()
    name, _, argstr = spec.partition(":")
    name = name.strip().lower()
    args = [float(tok) for tok in argstr.split(",")] if argstr else []
    if name == "lattice":
        _expect_args(spec, args, (0,))
        return LatticeSRW()
    if name == "hex6":
        _expect_args(spec, args, (0,))
        return Hex6()
    if name == "pr":
        _expect_args(spec, args, (0, 2))
        return PearsonRayleigh(tuple(args)) if args else PearsonRayleigh()
    if name == "gauss":
        _expect_args(spec, args, (0, 3, 5))
        if not args:
            return Gaussian()
        s11, s12, s22 = args[:3]
        mean = tuple(args[3:5]) if len(args) == 5 else (0.0, 0.0)
        return Gaussian(mean=mean, cov=((s11, s12), (s12, s22)))
    if name == "st-binary":
        _expect_args(spec, args, (0,))
        return SpacetimeBinary()
    if name == "st-gauss":
        _expect_args(spec, args, (0,))
        return SpacetimeGaussian()
    if name == "pareto":
        _expect_args(spec, args, (1, 3))
        drift = tuple(args[1:3]) if len(args) == 3 else (0.0, 0.0)
        return ParetoDirection(alpha=args[0], drift=drift)
    raise ValueError(f"unknown model spec {spec!r}; grammar: {MODEL_GRAMMAR}")


def _expect_args(spec, args, allowed):
    if len(args) not in allowed:
        raise ValueError(f"bad argument count in model spec {spec!r}; grammar: {MODEL_GRAMMAR}")


def format_model(model) -> str:
    """Inverse of parse_model: parse_model(format_model(m)) == m."""
    return model.spec_string()


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WalkPath:
    """Positions S_0 = 0, S_1, ..., S_n of a walk, as an (n+1, 2) array."""

    positions: np.ndarray

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 2 or pos.shape[1] != 2 or pos.shape[0] < 1:
            raise ValueError(f"positions must have shape (n+1, 2), got {pos.shape}")
        if pos[0, 0] != 0.0 or pos[0, 1] != 0.0:
            raise ValueError("paths must start at the origin")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def n_steps(self) -> int:
        return len(self.positions) - 1


def _cumsum_path(increments: np.ndarray) -> WalkPath:
    n = len(increments)
    pos = np.empty((n + 1, 2))
    pos[0] = 0.0
    np.cumsum(increments, axis=0, out=pos[1:])
    return WalkPath(pos)


def sample_path(model, n: int, stream: RngStream) -> WalkPath:
    """Walk of n steps under the given model, deterministic in (model, n, stream)."""
    if n < 0:
        raise ValueError(f"n must be nonnegative, got {n}")
    if n == 0:
        return WalkPath(np.zeros((1, 2)))
    return _cumsum_path(model.sample_increments(n, stream.generator()))


def brownian_path(cov, grid_n: int, stream: RngStream) -> WalkPath:
    """Discretized correlated Brownian motion on [0, 1].

    Positions are partial sums of N(0, cov / grid_n) steps, approximating
    sqrt(cov) b(k / grid_n).

    Raises:
        NotPSDError: if ``cov`` is not symmetric positive semidefinite.
    """
    if grid_n < 1:
        raise ValueError(f"grid_n must be >= 1, got {grid_n}")
    root = psd_sqrt(np.asarray(cov, dtype=float)) / math.sqrt(grid_n)
    z = stream.generator().standard_normal((grid_n, 2))
    return _cumsum_path(z @ root)


def bridge_path(grid_n: int, stream: RngStream) -> WalkPath:
    """Standard planar Brownian bridge on [0, 1]: b(t) - t b(1) on a grid."""
    if grid_n < 1:
        raise ValueError(f"grid_n must be >= 1, got {grid_n}")
    z = stream.generator().standard_normal((grid_n, 2)) / math.sqrt(grid_n)
    pos = np.empty((grid_n + 1, 2))
    pos[0] = 0.0
    np.cumsum(z, axis=0, out=pos[1:])
    t = np.arange(grid_n + 1)[:, None] / grid_n
    pos -= t * pos[-1]
    pos[-1] = 0.0
    return WalkPath(pos)


def psi_scaling(p, mu, sigma2_perp: float, n: int):
    """Affine scaling that sends a drifted hull to the space-time Brownian hull.

    Maps x to (x . mu_hat / (n |mu|), x . mu_perp / sqrt(n sigma2_perp)),
    where mu_perp is mu_hat rotated a quarter turn counterclockwise.
    Accepts a single point or an array of points in the trailing axis.

    Raises:
        ZeroDriftError, ZeroPerpVarianceError: on degenerate parameters.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    mu = np.asarray(tuple(mu) if not isinstance(mu, np.ndarray) else mu, dtype=float)
    norm_mu = float(np.hypot(mu[0], mu[1]))
    if norm_mu == 0.0:
        raise ZeroDriftError("psi scaling requires nonzero drift")
    if not sigma2_perp > 0.0:
        raise ZeroPerpVarianceError("psi scaling requires positive orthogonal variance")
    mu_hat = mu / norm_mu
    mu_perp = np.array([-mu_hat[1], mu_hat[0]])
    pts = np.asarray(tuple(p) if not isinstance(p, np.ndarray) else p, dtype=float)
    out = np.stack(
        [
            pts @ mu_hat / (n * norm_mu),
            pts @ mu_perp / math.sqrt(n * sigma2_perp),
        ],
        axis=-1,
    )
    return out


def center_of_mass(path: WalkPath) -> WalkPath:
    """Running centre of mass G_k = (S_1 + ... + S_k) / k, with G_0 = 0."""
    pos = path.positions
    n = len(pos) - 1
    out = np.zeros_like(pos)
    if n >= 1:
        sums = np.cumsum(pos[1:], axis=0)
        out[1:] = sums / np.arange(1, n + 1)[:, None]
    return WalkPath(out)


ALL_MODEL_SPECS = ("lattice", "hex6", "pr", "pr:0.2,0", "gauss", "st-binary", "st-gauss")
