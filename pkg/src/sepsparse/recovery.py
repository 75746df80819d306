"""Sparse recovery experiments with structure-aware CoSaMP.

Signals are k spikes of height +-1 on a uniformly random separated support.
Recovery problems observe ``y = X theta + e`` through a Gaussian design with
entries of variance 1/n. CoSaMP is run with a pluggable projection step:
plain hard thresholding, a separated-support projection, or a block
projection. All projections quantize the squared magnitudes and solve the
integer problem exactly.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .core import InvalidParams, ProjectionInstance, QuantizationConfig, is_feasible, quantize_signal, sample_support


# ---------------------------------------------------------------------------
# instance generation

def derive_k_delta(d: int, alpha: float = 50, beta: float = 5, k: int | None = None) -> tuple[int, int]:
    """k = d / alpha and delta = (d - beta (k + 1)) / k - 1, both floored."""
    if k is None:
        k = int(d // alpha)
    if k < 1:
        raise InvalidParams(f"sparsity k={k} < 1 for d={d}, alpha={alpha}")
    delta = int((d - beta * (k + 1) - k) // k)
    if delta < 1 or not is_feasible(d, k, delta):
        raise InvalidParams(f"derived delta={delta} infeasible for d={d}, k={k}, beta={beta}")
    return k, delta


@dataclass(frozen=True)
class GeneratorParams:
    d: int = 1000
    alpha: float = 50
    beta: float = 5
    sigma: float = 0.1
    seed: int = 0
    spike_values: tuple[float, ...] = (-1.0, 1.0)
    k: int | None = None
    delta: int | None = None

    def resolved(self) -> tuple[int, int]:
        k, delta = derive_k_delta(self.d, self.alpha, self.beta, self.k)
        if self.delta is not None:
            delta = self.delta
            if delta < 1 or not is_feasible(self.d, k, delta):
                raise InvalidParams(f"delta={delta} infeasible for d={self.d}, k={k}")
        return k, delta


@dataclass(frozen=True)
class ModelSpec:
    kind: str  # "standard", "separated" or "blocks"
    k: int
    delta: int = 1
    b: int = 1


@dataclass
class RecoveryProblem:
    design: np.ndarray
    y: np.ndarray
    theta_star: np.ndarray
    noise_sigma: float
    model: ModelSpec
    support: tuple[int, ...] = ()


def _spikes(p: GeneratorParams, rng: np.random.Generator):
    k, delta = p.resolved()
    sup = sample_support(p.d, k, delta, rng)
    theta = np.zeros(p.d)
    idx = np.asarray(sup.indices, dtype=np.int64) - 1
    theta[idx] = rng.choice(np.asarray(p.spike_values, dtype=float), size=k)
    return theta, sup, k, delta


def generate_signal(p: GeneratorParams):
    """Noisy spike train for projection benchmarks.

    Returns ``(x, support, k, delta)``; Gaussian noise with standard deviation
    ``sigma`` is added to every coordinate.
    """
    rng = np.random.default_rng(p.seed)
    theta, sup, k, delta = _spikes(p, rng)
    x = theta + p.sigma * rng.standard_normal(p.d) if p.sigma > 0 else theta
    return x, sup, k, delta


def generate_instance(p: GeneratorParams, n: int, noise_sigma: float | None = None) -> RecoveryProblem:
    """Gaussian-design recovery problem with a separated ground truth."""
    rng = np.random.default_rng(p.seed)
    theta, sup, k, delta = _spikes(p, rng)
    sigma = p.sigma if noise_sigma is None else noise_sigma
    X = rng.standard_normal((n, p.d)) / np.sqrt(n)
    e = sigma * rng.standard_normal(n) if sigma > 0 else np.zeros(n)
    return RecoveryProblem(X, X @ theta + e, theta, sigma, ModelSpec("separated", k, delta), sup.indices)


# ---------------------------------------------------------------------------
# projections

class HardThreshold:
    name = "hard-threshold"

    def budget(self, d: int, k: int) -> int:
        return min(k, d)

    def support(self, x: np.ndarray, k: int) -> np.ndarray:
        k = self.budget(x.size, k)
        # stable order so that ties are reproducible
        order = np.argsort(-np.abs(x), kind="stable")
        return np.sort(order[:k])


class SeparatedProjection:
    """Exact separated projection on quantized squared magnitudes."""

    def __init__(self, delta: int, engine: str = "lassp", gamma: int = 32, seed: int = 0):
        self.delta = delta
        self.engine = engine
        self.cfg = QuantizationConfig(gamma)
        self.rng = np.random.default_rng(seed)
        self.name = f"separated-{engine}"

    def budget(self, d: int, k: int) -> int:
        if k <= 0:
            return 0
        return max(1, min(k, (d - 1) // self.delta + 1))

    def support(self, x: np.ndarray, k: int) -> np.ndarray:
        k = self.budget(x.size, k)
        c = quantize_signal(x, self.cfg)
        sup = solve_separated(c, self.delta, k, self.engine, self.rng)
        return np.asarray(sup.indices, dtype=np.int64) - 1


class BlockProjection:
    """Projection onto k blocks of length b with start gaps >= delta + b - 1."""

    def __init__(self, delta: int, b: int, engine: str = "lassp", gamma: int = 32):
        self.delta = delta
        self.b = b
        self.engine = engine
        self.cfg = QuantizationConfig(gamma)
        self.name = f"blocks-{engine}"

    def budget(self, d: int, k: int) -> int:
        # k counts nonzeros; blocks hold b each
        gap = self.delta + self.b - 1
        blocks = max(1, k // self.b)
        most = (d - self.b) // gap + 1
        return min(blocks, most) * self.b

    def support(self, x: np.ndarray, k: int) -> np.ndarray:
        from .blocks import project_blocks

        k = self.budget(x.size, k)
        c = quantize_signal(x, self.cfg)
        starts, _ = project_blocks(c, self.delta, self.b, k // self.b, engine=self.engine)
        idx = [p - 1 + j for p in starts for j in range(self.b)]
        return np.asarray(sorted(idx), dtype=np.int64)


def solve_separated(c, delta: int, k: int, engine: str, rng=None):
    if engine == "lassp":
        from .lagrangian import lassp
        return lassp(ProjectionInstance(c, k, delta), rng).support
    if engine == "recover":
        from .deterministic import recover
        return recover(c, delta, k)[0]
    if engine in ("dp", "dp_folklore"):
        from .dp import dp_folklore
        return dp_folklore(c, delta, k)[0]
    if engine in ("dp-fast", "dp_improved"):
        from .dp import dp_improved
        return dp_improved(c, delta, k)[0]
    raise ValueError(f"unknown engine {engine!r}")


# ---------------------------------------------------------------------------
# CoSaMP

def cgls(A: np.ndarray, y: np.ndarray, tol: float = 1e-10, max_iter: int = 200):
    """Conjugate gradients on the normal equations A^T A z = A^T y.

    Started from zero, the iterates stay in the row space of A, so a
    rank-deficient system converges to the minimum-norm solution.
    Returns ``(z, iterations, converged)``.
    """
    z = np.zeros(A.shape[1])
    r = y.astype(float).copy()
    s = A.T @ r
    p = s.copy()
    gamma = s @ s
    norm0 = np.sqrt(gamma)
    if norm0 == 0.0:
        return z, 0, True
    for it in range(1, max_iter + 1):
        q = A @ p
        qq = q @ q
        if qq == 0.0:
            return z, it, True
        alpha = gamma / qq
        z += alpha * p
        r -= alpha * q
        s = A.T @ r
        gamma_new = s @ s
        if np.sqrt(gamma_new) <= tol * norm0:
            return z, it, True
        p = s + (gamma_new / gamma) * p
        gamma = gamma_new
    return z, max_iter, False


@dataclass
class CosampDiagnostics:
    residuals: list = field(default_factory=list)
    projection_times: list = field(default_factory=list)
    ls_iterations: list = field(default_factory=list)
    rank_deficient: bool = False
    converged: bool = False
    iterations: int = 0


def merge_support(projector, proxy: np.ndarray, k: int, merge: str = "union") -> np.ndarray:
    """Candidate indices from the proxy.

    ``"union"`` takes a model support, removes it, and takes a second model
    support from what is left, so the result is a union of two model sets.
    ``"budget"`` takes one model support with budget 2k (capped at the largest
    feasible size). For hard thresholding both equal the top 2k entries.
    """
    if merge == "budget":
        return projector.support(proxy, 2 * k)
    if merge != "union":
        raise ValueError(f"unknown merge rule {merge!r}")
    first = projector.support(proxy, k)
    rest = proxy.copy()
    rest[first] = 0.0
    return np.union1d(first, projector.support(rest, k))


def cosamp(
    problem: RecoveryProblem,
    projector,
    max_iters: int = 50,
    tol: float = 1e-8,
    k: int | None = None,
    merge: str = "union",
):
    """Model-based CoSaMP; returns ``(theta_hat, diagnostics)``."""
    X, y = problem.design, problem.y
    n, d = X.shape
    k = problem.model.k * problem.model.b if k is None else k
    theta = np.zeros(d)
    diag = CosampDiagnostics()
    for _ in range(max_iters):
        diag.iterations += 1
        resid = y - X @ theta
        proxy = X.T @ resid
        t0 = time.perf_counter()
        omega = merge_support(projector, proxy, k, merge)
        diag.projection_times.append(time.perf_counter() - t0)
        cand = np.union1d(omega, np.flatnonzero(theta))
        if cand.size > n:
            diag.rank_deficient = True
        z, its, ok = cgls(X[:, cand], y)
        diag.ls_iterations.append(its)
        if not ok:
            diag.rank_deficient = True
        b = np.zeros(d)
        b[cand] = z
        t0 = time.perf_counter()
        keep = projector.support(b, k)
        diag.projection_times.append(time.perf_counter() - t0)
        new = np.zeros(d)
        new[keep] = b[keep]
        diag.residuals.append(float(np.linalg.norm(y - X @ new)))
        step = np.linalg.norm(new - theta)
        scale = np.linalg.norm(theta)
        theta = new
        if step <= tol * scale:
            diag.converged = True
            break
    return theta, diag


def recovery_error(theta_hat, theta_star) -> float:
    a = np.asarray(theta_hat, dtype=float)
    b = np.asarray(theta_star, dtype=float)
    if a.shape != b.shape:
        raise ValueError("length mismatch")
    return float(np.linalg.norm(a - b))


def success_rate(
    n: int,
    trials: int,
    params: GeneratorParams,
    projector_factory,
    threshold: float = 1e-4,
    noise_sigma: float = 0.0,
    max_iters: int = 50,
    merge: str = "union",
) -> float:
    """Fraction of seeded trials whose relative error is at most ``threshold``."""
    wins = 0
    for t in range(trials):
        p = GeneratorParams(**{**params.__dict__, "seed": params.seed + t})
        prob = generate_instance(p, n, noise_sigma)
        theta, _ = cosamp(prob, projector_factory(prob), max_iters=max_iters, merge=merge)
        rel = recovery_error(theta, prob.theta_star) / max(np.linalg.norm(prob.theta_star), 1e-300)
        wins += rel <= threshold
    return wins / trials
