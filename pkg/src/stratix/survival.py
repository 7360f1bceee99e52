"""Kaplan-Meier product-limit curves, Greenwood variance, log-rank testing.

Tied event and censoring times follow the standard convention: subjects
censored at t stay in the risk set for events at t. Survival probabilities
are accumulated as exact integer ratios and rounded once per step, so the
no-censoring curve coincides bit-for-bit with 1 - ECDF.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ValidationError
from .ingest import ClinicalTable


@dataclass(frozen=True)
class SurvivalCurve:
    label: str
    times: tuple[float, ...]
    n_at_risk: tuple[int, ...]
    events: tuple[int, ...]
    survival: tuple[float, ...]
    variance: tuple[float, ...]
    censor_times: tuple[float, ...]
    n_total: int
    variance_saturated: bool  # a step had d == n; later variances omit it

    def survival_at(self, t: float) -> float:
        s = 1.0
        for step_t, step_s in zip(self.times, self.survival):
            if step_t <= t:
                s = step_s
            else:
                break
        return s


@dataclass(frozen=True)
class LogRankResult:
    labels: tuple[str, ...]
    observed: tuple[float, ...]
    expected: tuple[float, ...]
    statistic: float
    degrees_of_freedom: int
    p_value: float

    def to_payload(self) -> dict:
        return {
            "labels": list(self.labels),
            "observed": list(self.observed),
            "expected": list(self.expected),
            "statistic": self.statistic,
            "degrees_of_freedom": self.degrees_of_freedom,
            "p_value": self.p_value,
        }


def _times_and_status(sample_ids, clinical: ClinicalTable):
    times, status = [], []
    for sid in sample_ids:
        rec = clinical[sid]  # raises on unknown id
        times.append(rec.survival_time)
        status.append(rec.survival_status)
    return times, status


def km_curve(sample_ids, clinical: ClinicalTable, label: str = "") -> SurvivalCurve:
    """Product-limit estimate over the given samples.

    Steps exist only at distinct times with at least one event; S drops by
    the factor (1 - d/n) there. Greenwood variance accumulates
    d / (n (n - d)) per step; a step with d == n would make the sum infinite,
    so it is dropped and flagged instead.
    """
    if not sample_ids:
        raise ValidationError("km_curve needs at least one sample")
    times, status = _times_and_status(sample_ids, clinical)
    order = sorted(range(len(times)), key=lambda i: times[i])
    n = len(times)

    step_times: list[float] = []
    step_n: list[int] = []
    step_d: list[int] = []
    step_s: list[float] = []
    step_var: list[float] = []
    censor_times = sorted(times[i] for i in range(n) if status[i] == 0)

    # exact running product: s = s_num / s_den
    s_num = 1
    s_den = 1
    greenwood = 0.0
    saturated = False
    at_risk = n
    idx = 0
    while idx < n:
        t = times[order[idx]]
        d = 0
        removed = 0
        while idx < n and times[order[idx]] == t:
            if status[order[idx]] == 1:
                d += 1
            removed += 1
            idx += 1
        if d > 0:
            s_num *= at_risk - d
            s_den *= at_risk
            if at_risk - d > 0:
                greenwood += d / (at_risk * (at_risk - d))
            else:
                saturated = True
            s = s_num / s_den
            step_times.append(t)
            step_n.append(at_risk)
            step_d.append(d)
            step_s.append(s)
            step_var.append(s * s * greenwood)
        at_risk -= removed
    return SurvivalCurve(
        label=label,
        times=tuple(step_times),
        n_at_risk=tuple(step_n),
        events=tuple(step_d),
        survival=tuple(step_s),
        variance=tuple(step_var),
        censor_times=tuple(censor_times),
        n_total=n,
        variance_saturated=saturated,
    )


def logrank(groups, clinical: ClinicalTable) -> LogRankResult:
    """Test that the groups' survival curves are identical.

    ``groups`` is a list of (label, sample_ids). Two groups use the
    variance-weighted statistic (O1 - E1)^2 / V with hypergeometric variance;
    more groups use the sum of (O_g - E_g)^2 / E_g. The p-value comes from
    the chi-square upper tail with G - 1 degrees of freedom.
    """
    if len(groups) < 2:
        raise ValidationError("log-rank needs at least 2 groups")
    labels = [label for label, _ in groups]
    member_lists = [list(ids) for _, ids in groups]
    for label, ids in zip(labels, member_lists):
        if not ids:
            raise ValidationError(f"group {label!r} is empty")
    seen: dict[str, str] = {}
    shared = []
    for label, ids in zip(labels, member_lists):
        for sid in ids:
            if sid in seen:
                shared.append(sid)
            else:
                seen[sid] = label
    if shared:
        raise ValidationError(
            "overlapping groups", detail={"sample_ids": sorted(set(shared))}
        )

    g_count = len(groups)
    data = []  # (time, status, group)
    for g, ids in enumerate(member_lists):
        times, status = _times_and_status(ids, clinical)
        data += [(t, s, g) for t, s in zip(times, status)]
    total_events = sum(s for _, s, _ in data)
    if total_events == 0:
        raise ValidationError("no events in any group")

    data.sort(key=lambda row: row[0])
    observed = [0.0] * g_count
    expected = [0.0] * g_count
    at_risk = [0] * g_count
    for _, _, g in data:
        at_risk[g] += 1
    variance = 0.0  # two-group hypergeometric variance over event times
    idx = 0
    n_rows = len(data)
    while idx < n_rows:
        t = data[idx][0]
        d_group = [0] * g_count
        removed = [0] * g_count
        while idx < n_rows and data[idx][0] == t:
            _, s, g = data[idx]
            if s == 1:
                d_group[g] += 1
            removed[g] += 1
            idx += 1
        d = sum(d_group)
        if d > 0:
            n_pool = sum(at_risk)
            for g in range(g_count):
                observed[g] += d_group[g]
                expected[g] += d * (at_risk[g] / n_pool)
            if g_count == 2 and n_pool > 1:
                variance += (d * (n_pool - d) * at_risk[0] * at_risk[1]
                             / (n_pool * n_pool * (n_pool - 1)))
        for g in range(g_count):
            at_risk[g] -= removed[g]

    if all(e == 0 for e in expected):
        raise ValidationError("all expected event counts are zero")
    if g_count == 2:
        diff = observed[0] - expected[0]
        statistic = 0.0 if variance <= 0 else diff * diff / variance
    else:
        statistic = 0.0
        for o, e in zip(observed, expected):
            if e > 0:
                statistic += (o - e) * (o - e) / e
    df = g_count - 1
    return LogRankResult(
        labels=tuple(labels),
        observed=tuple(observed),
        expected=tuple(expected),
        statistic=statistic,
        degrees_of_freedom=df,
        p_value=chi_square_sf(statistic, df),
    )


# ---------------------------------------------------------------------------
# chi-square upper tail via the regularized incomplete gamma function
# ---------------------------------------------------------------------------

_GAMMA_EPS = 1e-16
_GAMMA_MAX_ITER = 10_000


def _gamma_p_series(a: float, x: float) -> float:
    # lower regularized P(a, x); series converges fast for x < a + 1
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_GAMMA_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _GAMMA_EPS:
            break
    log_front = a * math.log(x) - x - math.lgamma(a)
    return total * math.exp(log_front)


def _gamma_q_contfrac(a: float, x: float) -> float:
    # upper regularized Q(a, x) by modified Lentz continued fraction,
    # stable for x >= a + 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _GAMMA_MAX_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _GAMMA_EPS:
            break
    log_front = a * math.log(x) - x - math.lgamma(a)
    return math.exp(log_front) * h


def chi_square_sf(x: float, df: int) -> float:
    """Upper-tail probability of the chi-square distribution."""
    if df < 1 or int(df) != df:
        raise ValidationError(f"df must be a positive integer, got {df!r}")
    if not math.isfinite(x) or x < 0:
        raise ValidationError(f"x must be finite and >= 0, got {x!r}")
    if x == 0.0:
        return 1.0
    a = df / 2.0
    z = x / 2.0
    # exponent underflow: the tail is numerically zero
    if a * math.log(z) - z - math.lgamma(a) < -745.0:
        return 0.0
    if z < a + 1.0:
        return min(1.0, max(0.0, 1.0 - _gamma_p_series(a, z)))
    return min(1.0, max(0.0, _gamma_q_contfrac(a, z)))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def curve_to_csv(curve: SurvivalCurve) -> str:
    """Step table for one curve: time,n_at_risk,events,survival,variance."""
    lines = ["time,n_at_risk,events,survival,variance"]
    for t, n, d, s, v in zip(curve.times, curve.n_at_risk, curve.events,
                             curve.survival, curve.variance):
        lines.append(f"{t!r},{n},{d},{s!r},{v!r}")
    return "\n".join(lines) + "\n"


def curves_to_csv(curves) -> str:
    """Multi-curve variant with a leading group column."""
    lines = ["group,time,n_at_risk,events,survival,variance"]
    for curve in curves:
        for t, n, d, s, v in zip(curve.times, curve.n_at_risk, curve.events,
                                 curve.survival, curve.variance):
            lines.append(f"{curve.label},{t!r},{n},{d},{s!r},{v!r}")
    return "\n".join(lines) + "\n"


def censor_times_csv(curves) -> str:
    if isinstance(curves, SurvivalCurve):
        curves = [curves]
    lines = ["group,time"]
    for curve in curves:
        lines += [f"{curve.label},{t!r}" for t in curve.censor_times]
    return "\n".join(lines) + "\n"


def curve_to_payload(curve: SurvivalCurve) -> dict:
    return {
        "label": curve.label,
        "n_total": curve.n_total,
        "times": list(curve.times),
        "n_at_risk": list(curve.n_at_risk),
        "events": list(curve.events),
        "survival": list(curve.survival),
        "variance": list(curve.variance),
        "censor_times": list(curve.censor_times),
        "variance_saturated": curve.variance_saturated,
    }
