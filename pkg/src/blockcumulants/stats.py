"""Estimator spread bounds and the statistical self-test.

For a centered one-dimensional variable with t samples, the standard error
of the order-m moment estimator is below sqrt(M_2m / t) where M_2m is the
order-2m moment. The self-test measures the spread of the estimator over
independent replicate datasets against that bound. Assertions apply a 5x
safety factor so that sampling noise in the measured spread cannot produce
false failures; the raw ratio is always reported.
"""

from __future__ import annotations

import numpy as np

from . import dataio
from .errors import ValidationError

SAFETY_FACTOR = 5.0


def std_bound(m_2m: float, t: int) -> float:
    """Upper bound sqrt(M_2m / t) on the std of an order-m moment estimator."""
    if not np.isfinite(m_2m) or m_2m < 0:
        raise ValidationError(f"M_2m must be finite and >= 0, got {m_2m}")
    if t < 1:
        raise ValidationError(f"t must be >= 1, got {t}")
    return float(np.sqrt(m_2m / t))


def element_std_bound(x_centered: np.ndarray, index, safety: float = SAFETY_FACTOR) -> float:
    """Spread bound for one moment/cumulant element estimate, times safety.

    The estimator of element i averages y_l = prod_k x[l, i_k] over samples,
    so its std is below sqrt(mean(y^2) / t); index is 1-based.
    """
    y = np.ones(x_centered.shape[0])
    for i in index:
        y = y * x_centered[:, i - 1]
    t = x_centered.shape[0]
    return safety * std_bound(float(np.mean(y * y)), t)


def estimator_spread_test(order: int, t: int, replicates: int = 200,
                          distribution: str = "gaussian", seed: int = 0,
                          safety: float = SAFETY_FACTOR) -> dict:
    """Measure the spread of the order-m moment estimator over replicates.

    Draws ``replicates`` independent one-column datasets, estimates the
    central order-m moment of each, and compares the empirical std across
    replicates with the bound computed from the pooled order-2m moment.
    Returns a report with the measured ratio; ``passed`` applies the safety
    factor, ``within_bound`` records the raw comparison.
    """
    if order < 1:
        raise ValidationError(f"order must be >= 1, got {order}")
    if replicates < 2:
        raise ValidationError(f"need at least 2 replicates, got {replicates}")
    estimates = np.empty(replicates)
    m2m_values = np.empty(replicates)
    # fixed unit covariance: replicates must be draws of one distribution
    cov = np.eye(1) if distribution == "gaussian" else None
    for r in range(replicates):
        data = dataio.generate(distribution, 1, t, seed=seed * replicates + r,
                               cov=cov)
        col = data[:, 0]
        col = col - col.mean()
        estimates[r] = np.mean(col**order)
        m2m_values[r] = np.mean(col ** (2 * order))
    bound = std_bound(float(np.mean(m2m_values)), t)
    spread = float(np.std(estimates, ddof=1))
    ratio = spread / bound if bound > 0 else 0.0
    return {
        "order": order,
        "t": t,
        "replicates": replicates,
        "distribution": distribution,
        "seed": seed,
        "empirical_std": spread,
        "bound": bound,
        "ratio": ratio,
        "safety_factor": safety,
        "within_bound": bool(spread < bound),
        "passed": bool(spread < safety * bound),
    }
