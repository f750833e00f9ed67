"""Monte Carlo engine producing DDIF and EIF distributions from a quantified model.

Each factor's multiplier is treated as a triangular distribution over its
(min, most_likely, max) estimate; a project contributes level/3 of each draw and
contributions add up across the factors of one kind (no interaction terms).

Sampling is counter-based: the uniform variate for (seed, factor, sample index)
is derived by hashing, never by advancing shared generator state. Chunked or
multi-threaded runs therefore produce bit-identical sample vectors.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .diagnostics import ModelValidationError, error, has_errors
from .model import (
    MAX_LEVEL,
    CausalModel,
    Factor,
    FactorKind,
    ProjectCharacterization,
    validate_characterization,
    validate_model,
)

DEFAULT_SAMPLE_COUNT = 10_000
DEFAULT_QUANTILE_LEVELS = (0.05, 0.10, 0.25, 0.50, 0.75, 0.90, 0.95)

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix64(z: int) -> int:
    # splitmix64 finalizer on plain ints (numpy scalars warn on overflow)
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def factor_stream(factor_id: str) -> int:
    """Stable 64-bit stream id for a factor, independent of model ordering."""
    digest = hashlib.blake2b(factor_id.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def counter_uniforms(seed: int, stream: int, start: int, count: int) -> np.ndarray:
    """Uniform [0,1) variates for absolute sample indices start..start+count-1.

    Values depend only on (seed, stream, index), so any partitioning of the
    index range reproduces the same variates.
    """
    key = _mix64(seed ^ _mix64(stream))
    counters = np.arange(start, start + count, dtype=np.uint64)
    z = np.uint64(key) + counters * np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    z = z ^ (z >> np.uint64(31))
    # top 53 bits give a double in [0, 1)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def triangular_inverse_cdf(minimum: float, mode: float, maximum: float, u):
    """Inverse CDF of Triangular(minimum, mode, maximum) at u in [0,1).

    Accepts a scalar or array u; the degenerate minimum == maximum case returns
    the constant.
    """
    if not minimum <= mode <= maximum:
        raise ValueError(f"triangular parameters must satisfy min <= mode <= max, got ({minimum}, {mode}, {maximum})")
    u_arr = np.asarray(u, dtype=np.float64)
    if np.any(u_arr < 0.0) or np.any(u_arr >= 1.0):
        raise ValueError("u must lie in [0, 1)")
    if minimum == maximum:
        out = np.full_like(u_arr, minimum)
        return float(out) if np.isscalar(u) else out
    span = maximum - minimum
    mode_cdf = (mode - minimum) / span
    lower = u_arr < mode_cdf
    out = np.empty_like(u_arr)
    out[lower] = minimum + np.sqrt(u_arr[lower] * span * (mode - minimum))
    out[~lower] = maximum - np.sqrt((1.0 - u_arr[~lower]) * span * (maximum - mode))
    # the sqrt can overshoot the support by one ulp at the edges
    out = np.clip(out, minimum, maximum)
    return float(out) if np.isscalar(u) else out


def sample_triangular(minimum: float, mode: float, maximum: float, u: float) -> float:
    """Single triangular draw via the inverse-CDF transform of u."""
    return triangular_inverse_cdf(minimum, mode, maximum, float(u))


def factor_contribution(factor: Factor, level: int, sampled_multiplier: float) -> float:
    """A factor at the given level contributes level/3 of the sampled multiplier."""
    if factor.multiplier is None:
        raise ValueError(f"factor {factor.id!r} is not quantified")
    if not isinstance(level, int) or isinstance(level, bool) or not 0 <= level <= MAX_LEVEL:
        raise ValueError(f"level must be an integer in 0..{MAX_LEVEL}, got {level!r}")
    return (level / MAX_LEVEL) * sampled_multiplier


@dataclass(frozen=True)
class SimulationConfig:
    seed: int
    sample_count: int = DEFAULT_SAMPLE_COUNT

    def __post_init__(self):
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if not isinstance(self.sample_count, int) or self.sample_count < 1:
            raise ValueError(f"sample_count must be >= 1, got {self.sample_count!r}")


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Monte Carlo sample set with summary statistics recomputable from samples."""

    samples: np.ndarray
    mean: float
    sd: float
    quantiles: dict[float, float] = field(default_factory=dict)

    @classmethod
    def from_samples(
        cls, samples: np.ndarray, quantile_levels: tuple[float, ...] = DEFAULT_QUANTILE_LEVELS
    ) -> "EmpiricalDistribution":
        samples = np.asarray(samples, dtype=np.float64)
        if samples.size == 0:
            raise ValueError("cannot build a distribution from zero samples")
        values = np.quantile(samples, quantile_levels)
        return cls(
            samples=samples,
            mean=float(np.mean(samples)),
            sd=float(np.std(samples)),
            quantiles={float(q): float(v) for q, v in zip(quantile_levels, values)},
        )

    @property
    def sample_count(self) -> int:
        return int(self.samples.size)


def _simulate_chunk(
    factors: list[tuple[Factor, int, int]], seed: int, start: int, count: int
) -> np.ndarray:
    values = np.zeros(count, dtype=np.float64)
    for factor, level, stream in factors:
        m = factor.multiplier
        u = counter_uniforms(seed, stream, start, count)
        draws = triangular_inverse_cdf(m.min, m.most_likely, m.max, u)
        values += (level / MAX_LEVEL) * draws
    return values


def simulate(
    model: CausalModel,
    ch: ProjectCharacterization,
    kind: FactorKind,
    cfg: SimulationConfig,
    *,
    workers: int = 1,
    chunk_size: int | None = None,
    quantile_levels: tuple[float, ...] = DEFAULT_QUANTILE_LEVELS,
) -> EmpiricalDistribution:
    """Simulate the accumulated relative increase (DDIF or EIF) for one project.

    Deterministic for fixed (model, characterization, kind, seed, sample_count):
    chunking and worker count never change the sample vector.
    """
    diagnostics = validate_model(model)
    diagnostics.extend(validate_characterization(model, ch))
    kind_factors = model.factors_of_kind(kind)
    for f in kind_factors:
        if f.multiplier is None:
            diagnostics.append(error("unquantified", f"factor {f.id!r} has no multiplier"))
    if has_errors(diagnostics):
        raise ModelValidationError(diagnostics)

    factors = [(f, ch.levels[f.id], factor_stream(f.id)) for f in kind_factors]
    n = cfg.sample_count
    if chunk_size is None or chunk_size >= n:
        chunks = [(0, n)]
    else:
        chunks = [(s, min(chunk_size, n - s)) for s in range(0, n, chunk_size)]

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _simulate_chunk(factors, cfg.seed, *c), chunks))
    else:
        parts = [_simulate_chunk(factors, cfg.seed, start, count) for start, count in chunks]

    samples = parts[0] if len(parts) == 1 else np.concatenate(parts)
    return EmpiricalDistribution.from_samples(samples, quantile_levels)


def analytic_mean(model: CausalModel, ch: ProjectCharacterization, kind: FactorKind) -> float:
    """Expected value of the simulated sum: sum of (level/3)*(min+mode+max)/3."""
    total = 0.0
    for f in model.factors_of_kind(kind):
        m = f.multiplier
        if m is None:
            raise ValueError(f"factor {f.id!r} is not quantified")
        total += (ch.levels[f.id] / MAX_LEVEL) * (m.min + m.most_likely + m.max) / 3.0
    return total
