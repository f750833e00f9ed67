"""Defect content and effectiveness algebra, baseline estimation, DF prediction.

The core identity: defects found = defect content * effectiveness, with
defect content = size * DD_base * (1 + DDIF) and
effectiveness = Eff_base * (1 + EIF).

Only the product DD_base * Eff_base is estimable from measured data; it is
backed out per historical project and aggregated by the median (robust against
the outliers a small project base cannot absorb).
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .diagnostics import Diagnostic, advisory, warning
from .model import HistoricalProject
from .simulation import EmpiricalDistribution

DEFAULT_PREDICTION_QUANTILES = (0.10, 0.90)
# below this many historical projects the baseline is shaky
RECOMMENDED_MIN_HISTORY = 4


@dataclass(frozen=True)
class BaselineEstimate:
    """Median of the per-project DD_base*Eff_base values (defects per page)."""

    per_project_values: dict[str, float]
    estimate: float


@dataclass(frozen=True)
class DefectsFoundPrediction:
    point: float
    interval: tuple[float, float]
    inputs_digest: dict


def defect_density(defect_content: float, size: float) -> float:
    """Defects per page: content divided by artifact size."""
    if not size > 0:
        raise ValueError(f"size must be > 0, got {size}")
    return defect_content / size


def defect_content(size: float, dd_base: float, ddif: float) -> float:
    """Expected number of defects in the artifact: size * DD_base * (1 + DDIF)."""
    if not size > 0:
        raise ValueError(f"size must be > 0, got {size}")
    if dd_base < 0 or ddif < 0:
        raise ValueError("dd_base and ddif must be non-negative")
    return size * dd_base * (1.0 + ddif)


def effectiveness(eff_base: float, eif: float, diagnostics: list[Diagnostic] | None = None) -> float:
    """Actual effectiveness: Eff_base * (1 + EIF).

    Effectiveness is a found/total ratio, so values above 1 are physically
    impossible; expert multipliers can still overshoot, which yields a warning
    diagnostic rather than an error.
    """
    if not 0.0 <= eff_base <= 1.0:
        raise ValueError(f"eff_base must lie in [0, 1], got {eff_base}")
    if eif < 0:
        raise ValueError(f"eif must be non-negative, got {eif}")
    result = eff_base * (1.0 + eif)
    if result > 1.0 and diagnostics is not None:
        diagnostics.append(
            warning("effectiveness-above-one", f"effectiveness {result:.6g} exceeds 1; the multipliers overshoot")
        )
    return result


def defects_found(defect_content: float, effectiveness: float) -> float:
    """Defects found = defect content * effectiveness."""
    if defect_content < 0 or effectiveness < 0:
        raise ValueError("defect_content and effectiveness must be non-negative")
    return defect_content * effectiveness


def baseline_value(project: HistoricalProject, ddif_point: float, eif_point: float) -> float:
    """Back out DD_base*Eff_base for one project: DF / (Size*(1+DDIF)*(1+EIF))."""
    if project.defects_found is None:
        raise ValueError(f"project {project.project_id!r} has no defects_found record")
    if ddif_point < 0 or eif_point < 0:
        raise ValueError("ddif and eif points must be non-negative")
    return project.defects_found / (project.size * (1.0 + ddif_point) * (1.0 + eif_point))


def estimate_baseline(
    historical: Sequence[HistoricalProject],
    ddif_points: Mapping[str, float],
    eif_points: Mapping[str, float],
    diagnostics: list[Diagnostic] | None = None,
) -> BaselineEstimate:
    """Median of the per-project backed-out values; even counts average the middle two."""
    if not historical:
        raise ValueError("cannot estimate a baseline from an empty history")
    if len(historical) < RECOMMENDED_MIN_HISTORY and diagnostics is not None:
        diagnostics.append(
            advisory(
                "small-history",
                f"baseline rests on {len(historical)} historical projects; "
                f"at least {RECOMMENDED_MIN_HISTORY} are recommended",
            )
        )
    per_project = {
        p.project_id: baseline_value(p, ddif_points[p.project_id], eif_points[p.project_id])
        for p in historical
    }
    return BaselineEstimate(
        per_project_values=dict(sorted(per_project.items())),
        estimate=statistics.median(per_project.values()),
    )


def predict_defects_found(
    size: float,
    ddif: EmpiricalDistribution,
    eif: EmpiricalDistribution,
    baseline: BaselineEstimate,
    quantile_pair: tuple[float, float] = DEFAULT_PREDICTION_QUANTILES,
) -> DefectsFoundPrediction:
    """Point prediction from distribution means plus a quantile interval.

    The interval comes from the per-sample values size*(1+DDIF_s)*(1+EIF_s)*baseline,
    pairing the i-th DDIF draw with the i-th EIF draw.
    """
    if not size > 0:
        raise ValueError(f"size must be > 0, got {size}")
    if ddif.sample_count != eif.sample_count:
        raise ValueError(
            f"sample-count mismatch: ddif has {ddif.sample_count}, eif has {eif.sample_count}"
        )
    low_q, high_q = quantile_pair
    if not 0.0 <= low_q <= high_q <= 1.0:
        raise ValueError(f"quantile pair must satisfy 0 <= low <= high <= 1, got {quantile_pair}")

    point = size * (1.0 + ddif.mean) * (1.0 + eif.mean) * baseline.estimate
    per_sample = size * (1.0 + ddif.samples) * (1.0 + eif.samples) * baseline.estimate
    low, high = np.quantile(per_sample, [low_q, high_q])
    return DefectsFoundPrediction(
        point=point,
        interval=(float(low), float(high)),
        inputs_digest={
            "size": size,
            "ddif_mean": ddif.mean,
            "eif_mean": eif.mean,
            "baseline_estimate": baseline.estimate,
            "sample_count": ddif.sample_count,
            "quantile_pair": (low_q, high_q),
        },
    )
