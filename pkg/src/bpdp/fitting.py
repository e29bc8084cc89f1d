"""Asymptotics extraction from computed growth-scale data.

The input is a table of (log2(1/p), log Pi) rows.  The successive fits
peel off the expansion log Pi ~ lambda1 p^-alpha - lambda2 p^-beta:
first (alpha, lambda1) from a log-log regression, then lambda1 with alpha
fixed at 1, then (beta, lambda2) from the residual against the exact
first-order term, then lambda2 with beta fixed at 1/2, then the third
order exponent against the exact first two terms.  A four-point
simultaneous fit solves for all four parameters at once.

All regressions use the last k data points (k = 3 unless noted) and are
deterministic: same input, bit-identical output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

LAMBDA1_F = math.pi ** 2 / 6.0
LAMBDA2_F = math.pi * math.sqrt(2.0 + math.sqrt(2.0))

__all__ = [
    "PiDataset", "linreg",
    "fit_first_order", "fit_first_order_fixed_alpha",
    "fit_second_order", "fit_second_order_fixed_beta",
    "fit_third_order", "fit_four_param", "FitError",
    "LAMBDA1_F", "LAMBDA2_F",
]


class FitError(RuntimeError):
    pass


@dataclass(frozen=True)
class PiDataset:
    """Rows (log2(1/p), log Pi), strictly increasing in both columns."""

    rows: Tuple[Tuple[int, float], ...]

    def __post_init__(self):
        rows = tuple((int(k), float(v)) for k, v in self.rows)
        rows = tuple(sorted(rows))
        object.__setattr__(self, "rows", rows)
        ks = [k for k, _ in rows]
        vs = [v for _, v in rows]
        if len(set(ks)) != len(ks):
            raise ValueError("duplicate abscissae")
        if any(v1 <= v0 for v0, v1 in zip(vs, vs[1:])):
            raise ValueError("log Pi must be strictly increasing")

    @property
    def p(self) -> np.ndarray:
        return np.array([2.0 ** -k for k, _ in self.rows])

    @property
    def log_inv_p(self) -> np.ndarray:
        return np.array([k * math.log(2.0) for k, _ in self.rows])

    @property
    def log_pi(self) -> np.ndarray:
        return np.array([v for _, v in self.rows])


def linreg(points: Sequence[Tuple[float, float]], k_last: int) -> dict:
    """Ordinary least squares over the last k_last points."""
    if k_last < 2:
        raise ValueError("need at least two points")
    if k_last > len(points):
        raise ValueError("k_last exceeds the number of points")
    pts = list(points)[-k_last:]
    x = np.array([a for a, _ in pts])
    y = np.array([b for _, b in pts])
    xbar, ybar = x.mean(), y.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    if sxx == 0.0:
        raise ValueError("degenerate abscissae")
    slope = float(np.sum((x - xbar) * (y - ybar)) / sxx)
    return {"slope": slope, "intercept": ybar - slope * xbar}


def fit_first_order(data: PiDataset, k_last: int = 3) -> dict:
    """Regress log log Pi on log(1/p): slope estimates alpha, the
    exponentiated intercept estimates lambda1."""
    pts = list(zip(data.log_inv_p, np.log(data.log_pi)))
    r = linreg(pts, k_last)
    return {"alpha": r["slope"], "lambda1": math.exp(r["intercept"])}


def fit_first_order_fixed_alpha(data: PiDataset, k_last: int = 3) -> dict:
    """Regress log Pi on 1/p (alpha fixed at 1): slope estimates lambda1."""
    r = linreg(list(zip(1.0 / data.p, data.log_pi)), k_last)
    return {"lambda1": r["slope"]}


def _second_order_residual(data: PiDataset) -> np.ndarray:
    res = LAMBDA1_F / data.p - data.log_pi
    if np.any(res <= 0.0):
        raise FitError("first-order residual not positive")
    return res


def fit_second_order(data: PiDataset, k_last: int = 3) -> dict:
    """Regress log(lambda1/p - log Pi) on log(1/p): slope estimates beta,
    exponentiated intercept estimates lambda2 (alpha = 1, lambda1 = pi^2/6
    assumed exact)."""
    res = _second_order_residual(data)
    r = linreg(list(zip(data.log_inv_p, np.log(res))), k_last)
    return {"beta": r["slope"], "lambda2": math.exp(r["intercept"])}


def fit_second_order_fixed_beta(data: PiDataset, k_last: int = 3) -> dict:
    """Regress (lambda1/p - log Pi) on 1/sqrt(p): slope estimates lambda2."""
    res = _second_order_residual(data)
    r = linreg(list(zip(1.0 / np.sqrt(data.p), res)), k_last)
    return {"lambda2": r["slope"]}


def fit_third_order(data: PiDataset, k_last: int = 3) -> dict:
    """Regress log(log Pi - lambda1/p + lambda2/sqrt(p)) on log(1/p); the
    slope estimates the third-order exponent."""
    res = data.log_pi - LAMBDA1_F / data.p + LAMBDA2_F / np.sqrt(data.p)
    if np.any(res <= 0.0):
        raise FitError("third-order residual not positive")
    r = linreg(list(zip(data.log_inv_p, np.log(res))), k_last)
    return {"exponent": r["slope"], "intercept": r["intercept"]}


def _nelder_mead_2d(fn, x0, tol=1e-12, max_iter=2000):
    # classic simplex on two variables, deterministic
    pts = [np.array(x0, dtype=float)]
    for i in range(2):
        step = np.zeros(2)
        step[i] = 0.05
        pts.append(np.array(x0) + step)
    vals = [fn(pt) for pt in pts]
    for _ in range(max_iter):
        order = np.argsort(vals)
        pts = [pts[i] for i in order]
        vals = [vals[i] for i in order]
        if vals[-1] - vals[0] < tol and vals[0] < math.inf:
            break
        centroid = (pts[0] + pts[1]) / 2.0
        refl = centroid + (centroid - pts[2])
        fr = fn(refl)
        if fr < vals[0]:
            exp_ = centroid + 2.0 * (centroid - pts[2])
            fe = fn(exp_)
            if fe < fr:
                pts[2], vals[2] = exp_, fe
            else:
                pts[2], vals[2] = refl, fr
        elif fr < vals[1]:
            pts[2], vals[2] = refl, fr
        else:
            contr = centroid + 0.5 * (pts[2] - centroid)
            fc = fn(contr)
            if fc < vals[2]:
                pts[2], vals[2] = contr, fc
            else:
                for i in (1, 2):
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
                    vals[i] = fn(pts[i])
    order = np.argsort(vals)
    return pts[order[0]], vals[order[0]]


def fit_four_param(data: PiDataset, k_last: int = 4) -> dict:
    """Solve log Pi = lambda1 p^-alpha - lambda2 p^-beta on the last four
    points.  For fixed (alpha, beta) the system is linear in the lambdas;
    the outer search over (alpha, beta) is a direct simplex seeded at the
    theoretical (1, 1/2), with alpha > beta enforced."""
    if k_last != 4:
        raise ValueError("the four-parameter fit uses exactly four points")
    if len(data.rows) < 4:
        raise FitError("need at least four data points")
    rows = data.rows[-4:]
    x = np.array([2.0 ** k for k, _ in rows])   # 1/p
    y = np.array([v for _, v in rows])

    def lambdas(ab):
        a, b = ab
        design = np.column_stack([x ** a, -(x ** b)])
        sol, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = design @ sol - y
        return sol, float(np.sqrt(np.sum(resid ** 2)))

    def objective(ab):
        a, b = ab
        if not (b < a) or a <= 0.0 or b <= 0.0 or a > 3.0 or b > 3.0:
            return math.inf
        return lambdas(ab)[1]

    best, val = _nelder_mead_2d(objective, (1.0, 0.5))
    if not math.isfinite(val):
        raise FitError("four-parameter solver did not converge")
    (l1, l2), resid = lambdas(best)
    scale = float(np.max(np.abs(y)))
    if resid > 1e-6 * scale:
        raise FitError(f"four-parameter residual too large: {resid:g}")
    return {"alpha": float(best[0]), "lambda1": float(l1),
            "beta": float(best[1]), "lambda2": float(l2),
            "residual": resid}
