"""Closed-form guarantees for the biased-sampling auction.

The chance that the market fails to dominate the sample is bounded by the
ruin probability of a biased walk that steps backward with probability p and
forward otherwise, starting at zero and absorbing at minus one.  The ruin
probability is q = p/(1-p), the smaller root of the fixed point
q = p + (1-p) q^2; a walk that starts at plus one must ruin twice, giving
q^2.  These yield two per-profile revenue factors,

    r1(p) = p - q^2        (revenue against the benchmark with the top
                            entry removed)
    r2(p) = p + (1-p) p^3  (revenue against the second-highest value,
                            needs at least five agents)

and the combined approximation ratio (r1+r2)/(r1*r2), finite only while
r1 > 0, i.e. p below (3-sqrt(5))/2.  The ratio is about 10.986 at p = 0.26,
where it is minimized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq

# golden-section constants, as in any textbook bracketed search
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def _check_bias(p: float) -> float:
    if not (0.0 < p < 0.5):
        raise ValueError(f"bias must satisfy 0 < p < 0.5, got {p}")
    return float(p)


@dataclass(frozen=True)
class RuinBounds:
    """Walk ruin probability from start 0 (`q`) and from start 1 (`q_conditional`)."""

    q: float
    q_conditional: float


@dataclass(frozen=True)
class ApproxFactors:
    """Per-profile revenue factors and the combined approximation ratio."""

    r1: float
    r2: float
    ratio: float


def ruin_bounds(p: float) -> RuinBounds:
    """Closed-form ruin probabilities q = p/(1-p) and q^2."""
    p = _check_bias(p)
    q = p / (1.0 - p)
    return RuinBounds(q, q * q)


def ruin_probability_finite(p: float, steps: int, start: int = 0) -> float:
    """Exact ruin probability of a finite biased walk, by dynamic program.

    The walk starts at `start` >= 0, steps backward with probability p and
    forward otherwise, and ruins when it reaches minus one within `steps`
    steps.  Non-decreasing in `steps` and bounded by the closed form
    q^(start+1).
    """
    if not (0.0 < p < 1.0):
        raise ValueError(f"step probability must be in (0, 1), got {p}")
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    if start < 0:
        raise ValueError(f"start must be >= 0, got {start}")
    size = start + steps + 2
    probs = [0.0] * size
    probs[start] = 1.0
    ruined = 0.0
    for _ in range(steps):
        nxt = [0.0] * size
        for pos in range(size - 1):
            pr = probs[pos]
            if pr == 0.0:
                continue
            if pos == 0:
                ruined += pr * p
            else:
                nxt[pos - 1] += pr * p
            nxt[pos + 1] += pr * (1.0 - p)
        probs = nxt
    return ruined


def approx_factors(p: float) -> ApproxFactors:
    """Exact factor values; ratio is +inf when r1(p) <= 0 (no guarantee)."""
    p = _check_bias(p)
    q = p / (1.0 - p)
    r1 = p - q * q
    r2 = p + (1.0 - p) * p**3
    ratio = (r1 + r2) / (r1 * r2) if r1 > 0.0 else math.inf
    return ApproxFactors(r1, r2, ratio)


def guarantee_threshold() -> float:
    """The bias where r1 crosses zero, (3-sqrt(5))/2, found numerically."""
    return float(brentq(lambda p: approx_factors(p).r1, 0.05, 0.49, xtol=1e-12))


def _ratio(p: float) -> float:
    return approx_factors(p).ratio


def minimize_ratio(lo: float, hi: float, tol: float = 1e-9) -> tuple[float, float]:
    """Minimize the approximation ratio over [lo, hi] to width `tol`.

    A coarse pre-scan guards the bracketed golden-section search: if the scan
    sees more than one basin the search falls back to a fine grid and only
    then polishes the best cell, since unimodality is assumed, not proven.
    Returns (argmin, ratio at argmin).
    """
    threshold = _INV_PHI2  # r1 > 0 strictly below this bias
    if not (0.0 < lo <= hi < threshold):
        raise ValueError(
            f"need 0 < lo <= hi < {threshold:.6f}, got [{lo}, {hi}]"
        )
    if hi - lo <= tol:
        mid = (lo + hi) / 2.0
        return mid, _ratio(mid)

    coarse = 201
    xs = [lo + (hi - lo) * i / (coarse - 1) for i in range(coarse)]
    ys = [_ratio(x) for x in xs]
    basins = 0
    for i in range(1, coarse - 1):
        if ys[i] <= ys[i - 1] and ys[i] <= ys[i + 1] and (
            ys[i] < ys[i - 1] or ys[i] < ys[i + 1]
        ):
            basins += 1
    best = min(range(coarse), key=lambda i: ys[i])
    if basins > 1:
        fine = 100001
        xs = [lo + (hi - lo) * i / (fine - 1) for i in range(fine)]
        ys = [_ratio(x) for x in xs]
        best = min(range(fine), key=lambda i: ys[i])
    a = xs[best - 1] if best > 0 else xs[0]
    b = xs[best + 1] if best < len(xs) - 1 else xs[-1]

    # golden-section search on the bracketing cell
    c = b - (b - a) * _INV_PHI
    d = a + (b - a) * _INV_PHI
    yc, yd = _ratio(c), _ratio(d)
    while b - a > tol:
        if yc < yd:
            b, d, yd = d, c, yc
            c = b - (b - a) * _INV_PHI
            yc = _ratio(c)
        else:
            a, c, yc = c, d, yd
            d = a + (b - a) * _INV_PHI
            yd = _ratio(d)
    arg = (a + b) / 2.0
    return arg, _ratio(arg)
