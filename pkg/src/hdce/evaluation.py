"""Validation harness: LOOCV, relative-error accuracy, baselines, Wilcoxon test.

Every variant is evaluated on the same leave-one-out folds with the same cached
simulation means, so per-project errors stay paired and the exact two-sided
Wilcoxon signed-rank test applies directly to the MRE differences.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from enum import Enum
from math import sqrt
from typing import Callable, Mapping, Sequence

import numpy as np
from scipy.stats import norm

from .diagnostics import Diagnostic, error
from .model import CausalModel, FactorKind, HistoricalProject
from .simulation import SimulationConfig, simulate

# beyond this many nonzero differences, exact enumeration gives way to the
# normal approximation (2^20 sign patterns is the tractability limit)
EXACT_ENUMERATION_LIMIT = 20
MIN_HISTORY_FOR_LOOCV = 3


class Variant(str, Enum):
    HDCE = "HDCE"
    DF_ONLY = "DF_only"
    DF_PLUS_SIZE = "DF_plus_Size"
    WITHOUT_DDIF = "w/o_DDIF"
    WITHOUT_EIF = "w/o_EIF"
    WITHOUT_SIZE = "w/o_Size"


ALL_VARIANTS = (
    Variant.HDCE,
    Variant.DF_ONLY,
    Variant.DF_PLUS_SIZE,
    Variant.WITHOUT_DDIF,
    Variant.WITHOUT_EIF,
    Variant.WITHOUT_SIZE,
)


@dataclass(frozen=True)
class PredictionRecord:
    project_id: str
    actual: int
    predicted: float
    re: float
    mre: float

    @classmethod
    def from_values(cls, project_id: str, actual: int, predicted: float) -> "PredictionRecord":
        if actual <= 0:
            raise ValueError(f"relative error needs actual > 0, got {actual} for {project_id!r}")
        re = (predicted - actual) / actual
        return cls(project_id=project_id, actual=actual, predicted=predicted, re=re, mre=abs(re))


@dataclass(frozen=True)
class WilcoxonResult:
    p_value: float
    statistic: float
    n_nonzero: int
    method: str
    degenerate: bool = False


@dataclass(frozen=True)
class VariantComparison:
    variant_a: Variant
    variant_b: Variant
    p_value: float
    significant: bool
    method: str


@dataclass(frozen=True)
class ValidationReport:
    variants: tuple[Variant, ...]
    records: dict[Variant, tuple[PredictionRecord, ...]]
    mmre: dict[Variant, float]
    comparisons: tuple[VariantComparison, ...]
    excluded: tuple[Diagnostic, ...]
    alpha: float


def mmre(records: Sequence[PredictionRecord]) -> float:
    """Mean magnitude of relative error."""
    if not records:
        raise ValueError("MMRE of an empty record list is undefined")
    return sum(r.mre for r in records) / len(records)


def _midranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j < len(order) and values[order[j]] == values[order[i]]:
            j += 1
        mid = (i + 1 + j) / 2.0
        for k in range(i, j):
            ranks[order[k]] = mid
        i = j
    return ranks


def _exact_two_sided(ranks: Sequence[float], w_plus: float) -> float:
    # distribution of W+ over all 2^k sign assignments, built by doubling
    sums = np.zeros(1, dtype=np.float64)
    for r in ranks:
        sums = np.concatenate([sums, sums + r])
    total = sums.size
    n_le = int(np.count_nonzero(sums <= w_plus))
    n_ge = int(np.count_nonzero(sums >= w_plus))
    one_sided = min(n_le, n_ge) / total
    return min(1.0, 2.0 * one_sided)


def _normal_two_sided(ranks: Sequence[float], w_plus: float) -> float:
    mu = sum(ranks) / 2.0
    sigma = sqrt(sum(r * r for r in ranks) / 4.0)
    deviation = max(abs(w_plus - mu) - 0.5, 0.0)  # continuity correction
    return min(1.0, 2.0 * float(norm.sf(deviation / sigma)))


def wilcoxon_signed_rank(
    x: Sequence[float], y: Sequence[float], *, exact_limit: int = EXACT_ENUMERATION_LIMIT
) -> WilcoxonResult:
    """Two-sided Wilcoxon signed-rank test on paired samples.

    Zero differences are dropped before ranking, ties get mid-ranks. Up to
    exact_limit nonzero differences the p-value is exact (full enumeration of
    sign assignments); beyond that a normal approximation with continuity
    correction is used. All differences zero yields p = 1 with a degenerate flag.
    """
    if len(x) != len(y):
        raise ValueError(f"paired samples must have equal length, got {len(x)} and {len(y)}")
    if not x:
        raise ValueError("paired samples must be non-empty")
    differences = [float(a) - float(b) for a, b in zip(x, y)]
    nonzero = [d for d in differences if d != 0.0]
    if not nonzero:
        return WilcoxonResult(p_value=1.0, statistic=0.0, n_nonzero=0, method="degenerate", degenerate=True)
    ranks = _midranks([abs(d) for d in nonzero])
    w_plus = sum(r for r, d in zip(ranks, nonzero) if d > 0)
    if len(nonzero) <= exact_limit:
        return WilcoxonResult(_exact_two_sided(ranks, w_plus), w_plus, len(nonzero), "exact")
    return WilcoxonResult(_normal_two_sided(ranks, w_plus), w_plus, len(nonzero), "normal-approximation")


def baseline_df_only(train: Sequence[HistoricalProject]) -> Callable[[HistoricalProject], float]:
    """Constant predictor: the median number of defects found in training."""
    if not train:
        raise ValueError("empty training set")
    constant = statistics.median(p.defects_found for p in train)

    def predict(_target: HistoricalProject) -> float:
        return float(constant)

    return predict


def baseline_df_size(train: Sequence[HistoricalProject]) -> Callable[[HistoricalProject], float]:
    """Median training defect density times the target's size."""
    if not train:
        raise ValueError("empty training set")
    density = statistics.median(p.defects_found / p.size for p in train)

    def predict(target: HistoricalProject) -> float:
        return density * target.size

    return predict


def project_factor_means(
    model: CausalModel,
    projects: Sequence[HistoricalProject],
    cfg: SimulationConfig,
    *,
    workers: int = 1,
) -> dict[str, tuple[float, float]]:
    """One simulation pass per project: map project_id -> (mean DDIF, mean EIF)."""
    means: dict[str, tuple[float, float]] = {}
    for p in projects:
        ddif = simulate(model, p.characterization, FactorKind.DEFECT_CONTENT, cfg, workers=workers)
        eif = simulate(model, p.characterization, FactorKind.EFFECTIVENESS, cfg, workers=workers)
        means[p.project_id] = (ddif.mean, eif.mean)
    return means


def _variant_inputs(
    variant: Variant, project: HistoricalProject, means: Mapping[str, tuple[float, float]]
) -> tuple[float, float, float]:
    """(size, ddif, eif) as seen by the given model variant."""
    ddif, eif = means[project.project_id]
    if variant is Variant.WITHOUT_DDIF:
        ddif = 0.0
    elif variant is Variant.WITHOUT_EIF:
        eif = 0.0
    size = 1.0 if variant is Variant.WITHOUT_SIZE else project.size
    return size, ddif, eif


def _predict_variant(
    variant: Variant,
    train: Sequence[HistoricalProject],
    target: HistoricalProject,
    means: Mapping[str, tuple[float, float]],
) -> float:
    if variant is Variant.DF_ONLY:
        return baseline_df_only(train)(target)
    if variant is Variant.DF_PLUS_SIZE:
        return baseline_df_size(train)(target)
    values = []
    for p in train:
        size, ddif, eif = _variant_inputs(variant, p, means)
        values.append(p.defects_found / (size * (1.0 + ddif) * (1.0 + eif)))
    baseline = statistics.median(values)
    size, ddif, eif = _variant_inputs(variant, target, means)
    return size * (1.0 + ddif) * (1.0 + eif) * baseline


def usable_history(
    historical: Sequence[HistoricalProject],
) -> tuple[list[HistoricalProject], list[Diagnostic]]:
    """Projects with DF > 0, sorted by id; the rest become exclusion diagnostics."""
    usable = []
    excluded = []
    for p in sorted(historical, key=lambda p: p.project_id):
        if p.defects_found is None:
            excluded.append(
                error("no-defect-data", f"project {p.project_id!r} has no defects_found and is excluded")
            )
        elif p.defects_found == 0:
            excluded.append(
                error(
                    "zero-defects",
                    f"project {p.project_id!r} found 0 defects; relative error is undefined, excluded",
                )
            )
        else:
            usable.append(p)
    return usable, excluded


def loocv(
    model: CausalModel,
    historical: Sequence[HistoricalProject],
    variant: Variant,
    cfg: SimulationConfig,
    *,
    means: Mapping[str, tuple[float, float]] | None = None,
    workers: int = 1,
) -> tuple[list[PredictionRecord], list[Diagnostic]]:
    """Leave-one-out records for one variant, ordered by project id.

    Each fold rebuilds the variant's baseline from the remaining projects, so no
    target leaks into its own prediction. Simulation means can be passed in to
    share one pass across variants (the default computes them here).
    """
    usable, excluded = usable_history(historical)
    if len(usable) < MIN_HISTORY_FOR_LOOCV:
        raise ValueError(
            f"leave-one-out needs at least {MIN_HISTORY_FOR_LOOCV} usable projects, got {len(usable)}"
        )
    if means is None:
        means = project_factor_means(model, usable, cfg, workers=workers)
    records = []
    for i, target in enumerate(usable):
        train = usable[:i] + usable[i + 1 :]
        predicted = _predict_variant(variant, train, target, means)
        records.append(PredictionRecord.from_values(target.project_id, target.defects_found, predicted))
    return records, excluded


def compare_variants(
    records_by_variant: Mapping[Variant, Sequence[PredictionRecord]],
    alpha: float = 0.05,
) -> list[VariantComparison]:
    """Pairwise two-sided Wilcoxon tests on paired per-project MREs."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    variants = list(records_by_variant)
    project_sets = {
        v: tuple(r.project_id for r in sorted(records_by_variant[v], key=lambda r: r.project_id))
        for v in variants
    }
    reference = next(iter(project_sets.values()), ())
    for v, ids in project_sets.items():
        if ids != reference:
            raise ValueError(f"variant {v.value} covers a different project set than the others")

    comparisons = []
    for i, a in enumerate(variants):
        for b in variants[i + 1 :]:
            mres_a = [r.mre for r in sorted(records_by_variant[a], key=lambda r: r.project_id)]
            mres_b = [r.mre for r in sorted(records_by_variant[b], key=lambda r: r.project_id)]
            result = wilcoxon_signed_rank(mres_a, mres_b)
            comparisons.append(
                VariantComparison(
                    variant_a=a,
                    variant_b=b,
                    p_value=result.p_value,
                    significant=result.p_value <= alpha,
                    method=result.method,
                )
            )
    return comparisons


def run_validation(
    model: CausalModel,
    historical: Sequence[HistoricalProject],
    cfg: SimulationConfig,
    variants: Sequence[Variant] = ALL_VARIANTS,
    alpha: float = 0.05,
    *,
    workers: int = 1,
) -> ValidationReport:
    """LOOCV over all requested variants with shared simulation means."""
    if not variants:
        raise ValueError("no variants requested")
    usable, excluded = usable_history(historical)
    if len(usable) < MIN_HISTORY_FOR_LOOCV:
        raise ValueError(
            f"leave-one-out needs at least {MIN_HISTORY_FOR_LOOCV} usable projects, got {len(usable)}"
        )
    means = project_factor_means(model, usable, cfg, workers=workers)
    records: dict[Variant, tuple[PredictionRecord, ...]] = {}
    for variant in variants:
        variant_records, _ = loocv(model, usable, variant, cfg, means=means)
        records[variant] = tuple(variant_records)
    return ValidationReport(
        variants=tuple(variants),
        records=records,
        mmre={v: mmre(records[v]) for v in variants},
        comparisons=tuple(compare_variants(records, alpha)),
        excluded=tuple(excluded),
        alpha=alpha,
    )
