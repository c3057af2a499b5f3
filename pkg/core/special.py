"""
Regularized incomplete beta function and its inverse.

The continued fraction follows the classical modified-Lentz evaluation with the
symmetry transformation I_x(a, b) = 1 - I_{1-x}(b, a) applied above the
convergence switch point (a + 1) / (a + b + 2). The inverse is a safeguarded
Newton/bisection hybrid on the CDF value. Both work elementwise on numpy arrays
so the coverage simulator can draw Beta variates by inversion in bulk.
"""

from __future__ import annotations

import numpy as np
from scipy.special import betaln

from config.config import settings
from core.errors import DomainError, NumericalError

_CF_EPS = 1e-15
_FPMIN = 1e-300


def _check_shapes(a: float, b: float) -> None:
    if not (a > 0.0 and b > 0.0) or not np.isfinite(a) or not np.isfinite(b):
        raise DomainError(f"Beta shape parameters must be finite and positive, got a={a}, b={b}")


def _contfrac(a: float, b: float, x: np.ndarray, max_iter: int) -> np.ndarray:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0

    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
    d = 1.0 / d
    h = d.copy()

    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        h = h * d * c

        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _FPMIN, _FPMIN, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _FPMIN, _FPMIN, c)
        d = 1.0 / d
        delta = d * c
        h = h * delta
        if np.all(np.abs(delta - 1.0) < _CF_EPS):
            return h

    raise NumericalError(
        "Incomplete beta continued fraction did not converge",
        {"a": a, "b": b, "iterations": max_iter, "x_max": float(np.max(x))},
    )


def betainc(a: float, b: float, x: float | np.ndarray, *, max_iter: int | None = None) -> float | np.ndarray:
    """Regularized incomplete beta I_x(a, b); scalar in, scalar out."""
    a = float(a)
    b = float(b)
    _check_shapes(a, b)
    max_iter = max_iter or settings.BETA_CONTFRAC_MAX_ITER

    xa = np.asarray(x, dtype=np.float64)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if np.any(np.isnan(xa)):
        raise DomainError("betainc got NaN input")

    out = np.where(xa >= 1.0, 1.0, 0.0)
    inner = (xa > 0.0) & (xa < 1.0)
    if np.any(inner):
        xm = xa[inner]
        log_front = a * np.log(xm) + b * np.log1p(-xm) - betaln(a, b)
        front = np.exp(log_front)
        direct = xm < (a + 1.0) / (a + b + 2.0)
        values = np.empty_like(xm)
        if np.any(direct):
            xd = xm[direct]
            values[direct] = front[direct] * _contfrac(a, b, xd, max_iter) / a
        if np.any(~direct):
            xr = xm[~direct]
            values[~direct] = 1.0 - front[~direct] * _contfrac(b, a, 1.0 - xr, max_iter) / b
        out[inner] = np.clip(values, 0.0, 1.0)

    return float(out[0]) if scalar else out


def beta_pdf(a: float, b: float, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        return np.exp((a - 1.0) * np.log(x) + (b - 1.0) * np.log1p(-x) - betaln(a, b))


def betaincinv(
    a: float,
    b: float,
    q: float | np.ndarray,
    *,
    tol: float | None = None,
    max_iter: int | None = None,
) -> float | np.ndarray:
    """
    Quantile of Beta(a, b): the x with I_x(a, b) = q.

    Each element keeps a bracket [lo, hi] around its root; a Newton step is
    taken when it stays strictly inside the bracket, otherwise the bracket is
    bisected. An element is done once |I_x - q| <= tol or its bracket has shrunk
    to a few ulps. Anything still open after ``max_iter`` rounds raises
    NumericalError with the worst residual.
    """
    a = float(a)
    b = float(b)
    _check_shapes(a, b)
    tol = settings.BETA_QUANTILE_TOL if tol is None else tol
    max_iter = settings.BETA_QUANTILE_MAX_ITER if max_iter is None else max_iter

    qa = np.asarray(q, dtype=np.float64)
    scalar = qa.ndim == 0
    qa = np.atleast_1d(qa)
    if np.any(np.isnan(qa)) or np.any(qa < 0.0) or np.any(qa > 1.0):
        raise DomainError("betaincinv needs probabilities in [0, 1]")

    x = np.where(qa >= 1.0, 1.0, 0.0)
    open_idx = np.flatnonzero((qa > 0.0) & (qa < 1.0))

    target = qa[open_idx]
    lo = np.zeros(open_idx.size)
    hi = np.ones(open_idx.size)
    guess = np.full(open_idx.size, a / (a + b))
    residual = np.full(open_idx.size, np.inf)

    for _ in range(max_iter):
        if open_idx.size == 0:
            break
        residual = betainc(a, b, guess) - target
        converged = np.abs(residual) <= tol
        collapsed = (hi - lo) <= 4.0 * np.spacing(np.maximum(guess, 1e-300))
        done = converged | collapsed
        if np.any(done):
            x[open_idx[done]] = guess[done]
            keep = ~done
            open_idx, target, lo, hi, guess, residual = (
                open_idx[keep], target[keep], lo[keep], hi[keep], guess[keep], residual[keep]
            )
            if open_idx.size == 0:
                break

        lo = np.where(residual < 0.0, guess, lo)
        hi = np.where(residual > 0.0, guess, hi)

        pdf = beta_pdf(a, b, guess)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = guess - residual / pdf
        inside = np.isfinite(newton) & (newton > lo) & (newton < hi)
        guess = np.where(inside, newton, 0.5 * (lo + hi))
    else:
        if open_idx.size:
            worst = int(np.argmax(np.abs(residual))) if residual.size else 0
            raise NumericalError(
                "Beta quantile inversion did not converge",
                {
                    "a": a,
                    "b": b,
                    "q": float(target[worst]),
                    "x": float(guess[worst]),
                    "residual": float(residual[worst]) if residual.size else None,
                    "open": int(open_idx.size),
                    "max_iter": max_iter,
                },
            )

    return float(x[0]) if scalar else x


__all__ = ["betainc", "betaincinv", "beta_pdf"]
