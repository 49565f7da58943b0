"""Finite-size scaling fits of failure-rate data and the correctability boundary.

Near the threshold the failure rate is modelled as

    p_fail = a + b * (p_com - p_t) * L ** (1 / nu0)

For fixed (p_t, nu0) the model is linear in (a, b), which is solved in
closed form; the outer two-parameter search is a coarse grid followed by a
Nelder-Mead refinement, so fits are deterministic functions of the data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

#: p_loss at and above which finite-size effects break universal scaling
NON_UNIVERSAL_P_LOSS = 0.425

NU_RANGE = (0.5, 3.0)


class InsufficientDataError(ValueError):
    pass


@dataclass(frozen=True)
class ScalingFit:
    p_loss: float
    p_t: float
    nu0: float
    a: float
    b: float
    residual_ss: float
    converged: bool
    n_points: int = 0
    non_universal: bool = False

    def as_dict(self) -> dict:
        return {"p_loss": self.p_loss, "p_t": self.p_t, "nu0": self.nu0, "a": self.a,
                "b": self.b, "residual_ss": self.residual_ss, "converged": self.converged}


@dataclass(frozen=True)
class BoundaryCurve:
    coefficients: tuple[float, float, float]  # c0 + c1 * p_loss + c2 * p_loss**2
    points: tuple[tuple[float, float], ...]
    intercept: float

    def __call__(self, p_loss):
        c0, c1, c2 = self.coefficients
        p_loss = np.asarray(p_loss, dtype=float)
        return c0 + c1 * p_loss + c2 * p_loss ** 2


def _as_arrays(results):
    p = np.array([r.p_com for r in results], dtype=float)
    L = np.array([r.L for r in results], dtype=float)
    y = np.array([r.p_fail for r in results], dtype=float)
    n = np.array([r.trials for r in results], dtype=float)
    if not (np.all(np.isfinite(y)) and np.all((y >= 0) & (y <= 1)) and np.all(n > 0)):
        raise ValueError("p_fail must lie in [0, 1] with trials > 0 for every row")
    # one-count resolution floor keeps saturated points at finite weight
    se = np.maximum(np.array([r.stderr for r in results], dtype=float), 1.0 / n)
    return p, L, y, se


def _linear_solve(x, y, w):
    sw = w.sum()
    mx = (w * x).sum() / sw
    my = (w * y).sum() / sw
    sxx = (w * (x - mx) ** 2).sum()
    if sxx <= 0:
        return my, 0.0, float((w * (y - my) ** 2).sum())
    b = (w * (x - mx) * (y - my)).sum() / sxx
    a = my - b * mx
    r = y - a - b * x
    return a, b, float((w * r * r).sum())


def _profile(theta, p, L, y, w):
    p_t, nu = theta
    if nu <= 0:
        return math.inf, 0.0, 0.0
    x = (p - p_t) * L ** (1.0 / nu)
    a, b, ss = _linear_solve(x, y, w)
    return ss, a, b


def _fit_core(p, L, y, w, grid=(41, 26)):
    lo, hi = p.min(), p.max()
    best = (math.inf, None)
    for pt in np.linspace(lo, hi, grid[0]):
        for nu in np.linspace(*NU_RANGE, grid[1]):
            ss = _profile((pt, nu), p, L, y, w)[0]
            if ss < best[0]:
                best = (ss, (pt, nu))
    span = max(hi - lo, 1e-6)
    x0 = np.array(best[1])
    # fatol is relative: an absolute 1e-15 is below float resolution once ss >> 1
    res = minimize(lambda t: _profile(t, p, L, y, w)[0], x0, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-12 * max(best[0], 1.0), "maxiter": 4000,
                            "initial_simplex": [x0, x0 + [0.05 * span, 0], x0 + [0, 0.1]]})
    pt, nu = res.x
    ss, a, b = _profile(res.x, p, L, y, w)
    ok = bool(res.success) and nu > 0 and _hessian_ok(res.x, p, L, y, w, span)
    return pt, nu, a, b, ss, ok


def _hessian_ok(theta, p, L, y, w, span):
    h = np.array([1e-4 * span, 1e-4])
    f = lambda t: _profile(t, p, L, y, w)[0]
    H = np.empty((2, 2))
    f0 = f(theta)
    for i in range(2):
        for j in range(2):
            ei = np.eye(2)[i] * h[i]
            ej = np.eye(2)[j] * h[j]
            H[i, j] = (f(theta + ei + ej) - f(theta + ei - ej) - f(theta - ei + ej)
                       + f(theta - ei - ej)) / (4 * h[i] * h[j])
    if not np.all(np.isfinite(H)):
        return False
    ev = np.linalg.eigvalsh((H + H.T) / 2)
    scale = max(abs(f0), 1.0)
    return bool(ev.min() > 1e-12 * scale)


def _check(p, L):
    if np.unique(L).size < 2 or np.unique(p).size < 3:
        raise InsufficientDataError("need at least 2 lattice sizes and 3 distinct p_com values")


def fit_scaling(results, window: float | None = 0.15, max_passes: int = 10) -> ScalingFit:
    """Fit the scaling ansatz to results sharing one p_loss.

    ``results`` are GridResult-like rows exposing ``p_loss``, ``p_com``,
    ``L``, ``trials``, ``p_fail`` and ``stderr``.

    With ``window`` set, the fit is repeated on the points whose failure
    rate lies within ``window`` of the fitted crossing value ``a`` until the
    selection stops changing.
    """
    results = list(results)
    if not results:
        raise InsufficientDataError("no results")
    p_losses = {r.p_loss for r in results}
    if len(p_losses) != 1:
        raise ValueError(f"results span several p_loss values: {sorted(p_losses)}")
    p_loss = p_losses.pop()
    p, L, y, se = _as_arrays(results)
    _check(p, L)
    w = 1.0 / se ** 2
    sel = np.ones(p.size, dtype=bool)
    fit = _fit_core(p, L, y, w)
    for _ in range(max_passes if window is not None else 0):
        new = np.abs(y - fit[2]) <= window
        if np.unique(L[new]).size < 2 or np.unique(p[new]).size < 3 or np.array_equal(new, sel):
            break
        sel = new
        fit = _fit_core(p[sel], L[sel], y[sel], w[sel])
    pt, nu, a, b, ss, ok = fit
    ok = bool(ok and 0 <= pt < 0.5)
    return ScalingFit(p_loss, float(pt), float(nu), float(a), float(b), float(ss), ok,
                      int(sel.sum()), p_loss >= NON_UNIVERSAL_P_LOSS)


def fit_boundary(fits, max_p_loss: float = 0.4) -> BoundaryCurve:
    """Quadratic p_t(p_loss) through converged fits with p_loss <= max_p_loss."""
    use = sorted((f.p_loss, f.p_t) for f in fits if f.converged and f.p_loss <= max_p_loss + 1e-12)
    if len(use) < 3:
        raise InsufficientDataError("need at least 3 converged fits with p_loss <= 0.4")
    xs, ys = np.array(use).T
    c2, c1, c0 = np.polyfit(xs, ys, 2)
    roots = np.roots([c2, c1, c0]) if abs(c2) > 1e-15 else np.array([-c0 / c1])
    real = sorted(r.real for r in roots if abs(r.imag) < 1e-12 and r.real > 0)
    intercept = real[0] if real else float("nan")
    return BoundaryCurve((float(c0), float(c1), float(c2)), tuple(use), float(intercept))
