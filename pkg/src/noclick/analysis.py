"""Time-series post-processing: crossings, decay rates, restoration.

Works on sampled asymmetry (or entropy) curves produced by the
simulation layers.  Nothing here touches momentum space; the inputs
are plain (t, value) series plus the protocol parameters they came
from, so the routines are equally usable on engine output, oracle
output, or records read back from CSV.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import OrderingError
from .xy import PairingQuench, relaxation_order

NOISE_FLOOR = 1e-6


@dataclass(frozen=True, eq=False)
class AsymmetrySeries:
    """A sampled curve t -> value for one quench.

    ``params`` keeps the protocol parameter record the curve was
    generated from (used for criterion cross-checks); it may be None
    for curves of unknown origin.
    """

    times: np.ndarray
    values: np.ndarray
    params: object = None
    n: int = 2
    ell: int = 0

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError("times and values must be equal-length vectors")
        if t.size >= 2 and np.min(np.diff(t)) <= 0:
            raise ValueError("times must be strictly increasing")
        if v.size and np.min(v) < -1e-9:
            raise ValueError("asymmetry values must be non-negative")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class CrossingReport:
    """Outcome of comparing two asymmetry curves.

    ``crossed`` is true only for exactly one robust sign change;
    additional crossings land in ``crossing_times`` with verdict
    "mixed".  ``late_lower`` names the series ("first"/"second"/"none")
    that ends below the other; ``criterion_verdict`` says whether that
    matches the slow-mode prediction from the series' own parameters
    ("unavailable" when the parameters do not support the comparison,
    "equal-curves" when the two series never separate).
    """

    crossed: bool
    t_m: float | None
    margin_before: float
    margin_after: float
    criterion_verdict: str
    late_lower: str = "none"
    crossing_times: tuple = field(default_factory=tuple)


def _robust_crossings(times, e, floor):
    """Interpolated zero crossings of e, grazings below floor ignored."""
    idx = np.flatnonzero(np.abs(e) > floor)
    signs = np.sign(e[idx])
    crossings = []
    for j in np.flatnonzero(signs[:-1] != signs[1:]):
        lo, hi = idx[j], idx[j + 1]
        # locate the actual sign flip inside the bracketing interval
        for i in range(lo, hi):
            if e[i] == 0.0:
                crossings.append(float(times[i]))
                break
            if e[i] * e[i + 1] < 0.0:
                frac = e[i] / (e[i] - e[i + 1])
                crossings.append(float(times[i] + frac * (times[i + 1] - times[i])))
                break
    return crossings


def _criterion_verdict(s1, s2, late_lower, n_crossings):
    if n_crossings > 1:
        return "mixed"
    p1, p2 = s1.params, s2.params
    if not (isinstance(p1, PairingQuench) and isinstance(p2, PairingQuench)):
        return "unavailable"
    if p1.gamma != p2.gamma:
        return "unavailable"
    predicted = relaxation_order(p1, p2).verdict
    if predicted == "mixed":
        return "mixed"
    if predicted == "equal":
        return "consistent" if late_lower == "none" else "inconsistent"
    return "consistent" if predicted == late_lower else "inconsistent"


def detect_crossing(s1, s2, noise_floor=NOISE_FLOOR):
    """Locate where the curve that starts higher dips below the other.

    The two series must share the time grid.  Either argument may be
    the initially-higher one; the report's crossing time and margins do
    not depend on the order.  Raises OrderingError when the curves
    start within the noise floor yet separate later, since the notion
    of a crossing is then ill-defined.
    """
    if s1.times.shape != s2.times.shape or not np.array_equal(s1.times, s2.times):
        raise ValueError("series must share an identical time grid")
    d = s1.values - s2.values
    seps = np.abs(d) > noise_floor
    if not np.any(seps):
        return CrossingReport(False, None, 0.0, 0.0, "equal-curves")
    if abs(d[0]) <= noise_floor:
        raise OrderingError("initial ordering is within the noise floor")
    orient = np.sign(d[0])
    e = orient * d
    crossings = _robust_crossings(s1.times, e, noise_floor)
    late_sign = np.sign(e[np.flatnonzero(seps)[-1]])
    if late_sign > 0:
        late_lower = "second" if orient > 0 else "first"
    else:
        late_lower = "first" if orient > 0 else "second"
    crossed = len(crossings) == 1
    margin_before = float(np.max(e)) if crossings else 0.0
    margin_after = float(np.max(-e)) if crossings else 0.0
    verdict = _criterion_verdict(s1, s2, late_lower, len(crossings))
    return CrossingReport(
        crossed=crossed,
        t_m=crossings[0] if crossed else None,
        margin_before=margin_before,
        margin_after=margin_after,
        criterion_verdict=verdict,
        late_lower=late_lower,
        crossing_times=tuple(crossings),
    )


def fit_decay_rate(s, window):
    """Exponential decay rate over a time window, via log-linear fit.

    Returns (rate, r_squared) with rate positive for decay.  All
    samples in the window must be positive; a fit with r^2 < 0.99 emits
    a RuntimeWarning rather than failing, so sweeps over marginal
    windows stay usable.
    """
    t_lo, t_hi = window
    sel = (s.times >= t_lo) & (s.times <= t_hi)
    if np.count_nonzero(sel) < 2:
        raise ValueError("window must contain at least two samples")
    t = s.times[sel]
    v = s.values[sel]
    if np.min(v) <= 0.0:
        raise ValueError("log-linear fit needs positive values in the window")
    logv = np.log(v)
    slope, intercept = np.polyfit(t, logv, 1)
    resid = logv - (slope * t + intercept)
    ss_tot = float(np.sum((logv - np.mean(logv)) ** 2))
    if np.ptp(logv) == 0.0 or ss_tot == 0.0:
        r_squared = 1.0
    else:
        r_squared = 1.0 - float(np.sum(resid**2)) / ss_tot
    if r_squared < 0.99:
        warnings.warn(
            "decay-rate fit has r^2 = %.4f (< 0.99)" % r_squared, RuntimeWarning
        )
    return float(-slope), r_squared


def restoration_verdict(s, tail_fraction=0.2, tol=1e-3):
    """True when the series has relaxed to (near) zero and stays there.

    The tail window is the last ``tail_fraction`` of the covered time
    span; it must hold at least 10 samples.  The verdict requires both
    a tail mean below tol and a non-positive tail slope, so a curve
    still rising through small values is not mistaken for restored.
    """
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError("tail_fraction must lie in (0, 1]")
    t0, t1 = s.times[0], s.times[-1]
    sel = s.times >= t1 - tail_fraction * (t1 - t0)
    if np.count_nonzero(sel) < 10:
        raise ValueError("tail window holds fewer than 10 samples")
    tail_t = s.times[sel]
    tail_v = s.values[sel]
    slope = np.polyfit(tail_t, tail_v, 1)[0] if np.ptp(tail_v) > 0.0 else 0.0
    return bool(np.mean(tail_v) < tol and slope <= 0.0)
