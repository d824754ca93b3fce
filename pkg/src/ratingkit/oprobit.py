"""Ordered-probit estimation: likelihood, analytic gradient, Newton MLE.

The latent-index model: an observation falls in class k (1..K, lower is
better) when c_{k-1} < x.beta + eps <= c_k with eps standard normal,
c_0 = -inf, c_K = +inf. Binary probit is the K=2 special case with the
single threshold acting as a negated intercept.

Optimization runs in an unconstrained parameterization
theta = (beta, c_1, t_2..t_{K-1}) with c_k = c_{k-1} + exp(t_k), which
keeps thresholds strictly increasing by construction. Standard errors
come from the inverse observed Hessian (finite differences of the
analytic gradient), mapped back to natural units by the delta method.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import scales
from .errors import (
    DimensionMismatch,
    EmptyCategory,
    NotConverged,
    SingularHessian,
)
from .modelspec import Regressor
from .normal import norm_cdf, norm_pdf, norm_ppf, norm_sf

PROB_FLOOR = 1e-300
PROB_CAP = 1.0 - 1e-16          # keeps every class probability inside (0,1)
GRAD_TOL = 1e-8
LNL_REL_TOL = 1e-10
MAX_ITER = 200
PARAM_CAP = 1e4                 # runaway-parameter guard
PERFECT_FIT_TOL = 1e-6          # lnL this close to zero means separation
ARMIJO_SLOPE = 1e-4
ARMIJO_CONTRACTION = 0.5


@dataclass
class OrderedProbitModel:
    beta: np.ndarray
    thresholds: np.ndarray       # strictly increasing, length K-1
    k: int
    scale_kind: scales.ScaleKind | None = None
    agency: scales.Agency | None = None
    columns: tuple = ()          # Regressor descriptors

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=float)
        self.thresholds = np.asarray(self.thresholds, dtype=float)
        if self.thresholds.shape != (self.k - 1,):
            raise DimensionMismatch(
                f"K={self.k} needs {self.k - 1} thresholds, got {self.thresholds.shape}")
        if np.any(np.diff(self.thresholds) <= 0):
            raise DimensionMismatch("thresholds must be strictly increasing")


@dataclass
class FitDiagnostics:
    loglik: float
    loglik_null: float
    pseudo_r2_mcfadden: float
    se: np.ndarray               # beta standard errors
    z: np.ndarray
    stars: list
    threshold_se: np.ndarray
    n_obs: int
    iterations: int
    converged: bool
    n_floored: int = 0


# --- parameterization ---

def pack_parameters(beta, thresholds):
    thresholds = np.asarray(thresholds, dtype=float)
    c1 = thresholds[0]
    t = np.log(np.diff(thresholds))
    return np.concatenate([np.asarray(beta, dtype=float), [c1], t])


def unpack_parameters(theta, p, k):
    beta = theta[:p]
    c = np.empty(k - 1)
    c[0] = theta[p]
    if k > 2:
        c[1:] = np.exp(theta[p + 1:])
        c = np.cumsum(c)
    return beta, c


# --- probabilities ---

def _interval_prob(a, b):
    """P(b < Z <= a) for a >= b, safe for +/-inf bounds and deep tails."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a_fin = np.where(np.isfinite(a), a, 0.0)
    b_fin = np.where(np.isfinite(b), b, 0.0)
    cdf_a = np.where(np.isposinf(a), 1.0, norm_cdf(a_fin))
    cdf_b = np.where(np.isneginf(b), 0.0, norm_cdf(b_fin))
    sf_a = np.where(np.isposinf(a), 0.0, norm_sf(a_fin))
    sf_b = np.where(np.isneginf(b), 1.0, norm_sf(b_fin))
    # when both bounds sit in the upper tail, subtract survival functions
    # to dodge the 1-1 cancellation
    return np.where(b > 0, sf_b - sf_a, cdf_a - cdf_b)


def _bounds(c, y, u, k):
    c_ext = np.concatenate([[-np.inf], c, [np.inf]])
    return c_ext[y] - u, c_ext[y - 1] - u


def _check_design(x, y, k, p_expected=None):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=int)
    if x.ndim != 2 or y.ndim != 1 or x.shape[0] != y.shape[0]:
        raise DimensionMismatch("design matrix and responses do not align")
    if p_expected is not None and x.shape[1] != p_expected:
        raise DimensionMismatch(
            f"design has {x.shape[1]} columns, model expects {p_expected}")
    if np.any(y < 1) or np.any(y > k):
        raise DimensionMismatch(f"responses must lie in 1..{k}")
    return x, y


def log_likelihood_at(theta, x, y, k):
    """Sum of log class probabilities; floored so -inf never appears."""
    p = x.shape[1]
    beta, c = unpack_parameters(theta, p, k)
    u = x @ beta
    a, b = _bounds(c, y, u, k)
    probs = _interval_prob(a, b)
    n_floored = int(np.sum(probs < PROB_FLOOR))
    probs = np.clip(probs, PROB_FLOOR, PROB_CAP)
    return float(np.sum(np.log(probs))), n_floored


def gradient_at(theta, x, y, k):
    """Analytic gradient of the log-likelihood in unconstrained parameters."""
    p = x.shape[1]
    beta, c = unpack_parameters(theta, p, k)
    u = x @ beta
    a, b = _bounds(c, y, u, k)
    probs = np.clip(_interval_prob(a, b), PROB_FLOOR, PROB_CAP)
    pdf_a = np.where(np.isfinite(a), norm_pdf(np.where(np.isfinite(a), a, 0.0)), 0.0)
    pdf_b = np.where(np.isfinite(b), norm_pdf(np.where(np.isfinite(b), b, 0.0)), 0.0)
    # d lnL / du_i
    w = (pdf_b - pdf_a) / probs
    g_beta = x.T @ w
    # d lnL / dc_k: +pdf_a/p for y=k, -pdf_b/p for y=k+1
    g_c = np.zeros(k - 1)
    up = pdf_a / probs
    dn = pdf_b / probs
    for j in range(1, k):
        g_c[j - 1] = np.sum(up[y == j]) - np.sum(dn[y == j + 1])
    # chain rule into (c_1, t_2..t_{K-1})
    g_thr = np.empty(k - 1)
    g_thr[0] = np.sum(g_c)
    if k > 2:
        t = theta[p + 1:]
        # t_j moves every c_k with k >= j
        tail = np.cumsum(g_c[::-1])[::-1]
        g_thr[1:] = np.exp(t) * tail[1:]
    return np.concatenate([g_beta, g_thr])


def log_likelihood(model: OrderedProbitModel, x, y) -> float:
    x, y = _check_design(x, y, model.k, model.beta.shape[0])
    theta = pack_parameters(model.beta, model.thresholds)
    return log_likelihood_at(theta, x, y, model.k)[0]


def gradient(model: OrderedProbitModel, x, y):
    x, y = _check_design(x, y, model.k, model.beta.shape[0])
    theta = pack_parameters(model.beta, model.thresholds)
    return gradient_at(theta, x, y, model.k)


def fd_hessian(theta, x, y, k, h: float = 1e-5):
    """Central finite differences of the analytic gradient, symmetrized."""
    m = theta.shape[0]
    hess = np.empty((m, m))
    for j in range(m):
        step = h * max(1.0, abs(theta[j]))
        tp = theta.copy()
        tm = theta.copy()
        tp[j] += step
        tm[j] -= step
        hess[:, j] = (gradient_at(tp, x, y, k) - gradient_at(tm, x, y, k)) / (2 * step)
    return 0.5 * (hess + hess.T)


# --- fitting ---

def null_log_likelihood(y, k) -> float:
    counts = np.bincount(y, minlength=k + 1)[1:]
    n = counts.sum()
    return float(np.sum(counts * np.log(counts / n)))


def initial_thresholds(y, k):
    counts = np.bincount(y, minlength=k + 1)[1:]
    cum = np.cumsum(counts[:-1]) / counts.sum()
    return np.array([norm_ppf(q) for q in cum])


def fit(x, y, k, scale_kind=None, agency=None, columns=(),
        max_iter: int = MAX_ITER):
    """Maximum-likelihood fit. Returns (OrderedProbitModel, FitDiagnostics).

    Raises EmptyCategory when a class 1..K has no observations,
    NotConverged when the Newton/line-search loop stalls or a parameter
    runs away (probit separation), SingularHessian when standard errors
    cannot be formed.
    """
    x, y = _check_design(x, y, k)
    n, p = x.shape
    counts = np.bincount(y, minlength=k + 1)[1:]
    for j, cnt in enumerate(counts, start=1):
        if cnt == 0:
            raise EmptyCategory(j)
    if n < p + k:
        raise DimensionMismatch(f"need at least {p + k} rows, have {n}")

    theta = pack_parameters(np.zeros(p), initial_thresholds(y, k))
    lnl, _ = log_likelihood_at(theta, x, y, k)
    converged = False
    iterations = 0
    g = gradient_at(theta, x, y, k)
    for iterations in range(1, max_iter + 1):
        if np.max(np.abs(g)) < GRAD_TOL:
            converged = True
            iterations -= 1
            break
        hess = fd_hessian(theta, x, y, k)
        try:
            direction = np.linalg.solve(hess, -g)
        except np.linalg.LinAlgError:
            direction = g.copy()
        if direction @ g <= 0.0:
            direction = g.copy()   # fall back to steepest ascent
        # Armijo backtracking on the log-likelihood
        slope = direction @ g
        alpha = 1.0
        while alpha > 1e-14:
            cand = theta + alpha * direction
            lnl_cand, _ = log_likelihood_at(cand, x, y, k)
            if lnl_cand >= lnl + ARMIJO_SLOPE * alpha * slope:
                break
            alpha *= ARMIJO_CONTRACTION
        else:
            raise NotConverged(iterations, float(np.max(np.abs(g))))
        theta = theta + alpha * direction
        if np.max(np.abs(theta)) > PARAM_CAP:
            raise NotConverged(iterations, float(np.max(np.abs(g))))
        lnl_prev, lnl = lnl, lnl_cand
        g = gradient_at(theta, x, y, k)
        if abs(lnl - lnl_prev) < LNL_REL_TOL * max(1.0, abs(lnl)):
            converged = True
            break
    if not converged:
        raise NotConverged(iterations, float(np.max(np.abs(g))))
    if lnl > -PERFECT_FIT_TOL:
        # every class probability is ~1: perfect prediction, no finite MLE
        raise NotConverged(iterations, float(np.max(np.abs(g))))

    beta, c = unpack_parameters(theta, p, k)
    lnl, n_floored = log_likelihood_at(theta, x, y, k)
    lnl0 = null_log_likelihood(y, k)
    pseudo_r2 = 0.0 if lnl0 == 0.0 else 1.0 - lnl / lnl0
    if abs(pseudo_r2) < 1e-15:
        pseudo_r2 = 0.0

    # observed-information covariance, delta method back to (beta, c)
    hess = fd_hessian(theta, x, y, k)
    try:
        cov_unc = np.linalg.inv(-hess)
    except np.linalg.LinAlgError:
        raise SingularHessian("observed information matrix is singular") from None
    m = p + k - 1
    jac = np.eye(m)
    for row in range(p, m):        # natural c_k rows
        jac[row, p] = 1.0
        for col in range(p + 1, row + 1):
            jac[row, col] = np.exp(theta[col])
    cov_nat = jac @ cov_unc @ jac.T
    variances = np.diag(cov_nat).copy()
    if np.any(variances < 0):
        raise SingularHessian("negative variance from observed information")
    se_all = np.sqrt(variances)
    se = se_all[:p]
    with np.errstate(divide="ignore"):
        z = np.where(se > 0, beta / np.where(se > 0, se, 1.0), np.inf)
    stars = [significance_stars(v) for v in z]

    model = OrderedProbitModel(beta, c, k, scale_kind, agency, tuple(columns))
    diag = FitDiagnostics(
        loglik=lnl,
        loglik_null=lnl0,
        pseudo_r2_mcfadden=pseudo_r2,
        se=se,
        z=z,
        stars=stars,
        threshold_se=se_all[p:],
        n_obs=n,
        iterations=iterations,
        converged=converged,
        n_floored=n_floored,
    )
    return model, diag


def fit_design(design, max_iter: int = MAX_ITER):
    """fit() on a data.DesignMatrix."""
    return fit(design.x, design.y, design.k, design.scale_kind,
               design.agency, design.columns, max_iter=max_iter)


def fit_binary_probit(x, y, **kwargs):
    """Binary probit as the K=2 ordered model (responses coded 1/2)."""
    return fit(x, y, 2, **kwargs)


def significance_stars(z_value: float) -> str:
    """Two-sided stars: *** p<0.01, ** p<0.05, * p<0.10."""
    p = 2.0 * float(norm_sf(abs(z_value)))
    if p < 0.01:
        return "***"
    if p < 0.05:
        return "**"
    if p < 0.10:
        return "*"
    return ""


# --- prediction ---

def class_probabilities(model: OrderedProbitModel, x_row):
    """Per-class probabilities for one regressor row, each inside (0,1)."""
    x_row = np.asarray(x_row, dtype=float)
    if x_row.shape != (model.beta.shape[0],):
        raise DimensionMismatch(
            f"row length {x_row.shape} does not match beta {model.beta.shape}")
    return _probability_matrix(model, x_row[None, :])[0]


def _probability_matrix(model, x):
    u = x @ model.beta
    c_ext = np.concatenate([[-np.inf], model.thresholds, [np.inf]])
    a = c_ext[None, 1:] - u[:, None]
    b = c_ext[None, :-1] - u[:, None]
    return np.clip(_interval_prob(a, b), PROB_FLOOR, PROB_CAP)


def predict_class(model: OrderedProbitModel, x_row) -> int:
    """Most probable class; ties break toward the lower (better) code."""
    probs = class_probabilities(model, x_row)
    return int(np.argmax(probs)) + 1


def predict(model: OrderedProbitModel, x):
    """Vectorized predict_class over the rows of x."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != model.beta.shape[0]:
        raise DimensionMismatch("design does not match model columns")
    probs = _probability_matrix(model, x)
    return np.argmax(probs, axis=1) + 1


# --- artifact serialization ---

def model_to_dict(model: OrderedProbitModel, diag: FitDiagnostics) -> dict:
    return {
        "scale_kind": model.scale_kind.value if model.scale_kind else None,
        "agency": model.agency.value if model.agency else None,
        "columns": [
            {"name": r.source, "transform": r.transform} for r in model.columns
        ],
        "beta": [float(v) for v in model.beta],
        "thresholds": [float(v) for v in model.thresholds],
        "diagnostics": {
            "loglik": diag.loglik,
            "loglik_null": diag.loglik_null,
            "pseudo_r2_mcfadden": diag.pseudo_r2_mcfadden,
            "se": [float(v) for v in diag.se],
            "z": [float(v) for v in diag.z],
            "stars": list(diag.stars),
            "threshold_se": [float(v) for v in diag.threshold_se],
            "n_obs": diag.n_obs,
            "iterations": diag.iterations,
            "converged": diag.converged,
            "n_floored": diag.n_floored,
        },
    }


def model_from_dict(payload: dict):
    columns = tuple(
        Regressor(c["name"], c.get("transform", "identity"))
        for c in payload.get("columns", [])
    )
    thresholds = np.array(payload["thresholds"], dtype=float)
    model = OrderedProbitModel(
        beta=np.array(payload["beta"], dtype=float),
        thresholds=thresholds,
        k=len(thresholds) + 1,
        scale_kind=scales.ScaleKind(payload["scale_kind"]) if payload.get("scale_kind") else None,
        agency=scales.Agency(payload["agency"]) if payload.get("agency") else None,
        columns=columns,
    )
    return model, payload.get("diagnostics", {})


def load_model(path):
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))
