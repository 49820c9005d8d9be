"""Dense reference implementations used only by the tests."""

import numpy as np


def dense_second_difference(n):
    d = np.zeros((n - 2, n))
    for i in range(n - 2):
        d[i, i], d[i, i + 1], d[i, i + 2] = 1.0, -2.0, 1.0
    return d


def dense_penalty(n):
    d = dense_second_difference(n)
    return d.T @ d


def dense_smoother(n, lam):
    return np.linalg.inv(np.eye(n) + lam * dense_penalty(n))


def dense_residual_power(n, lam, m):
    return np.linalg.matrix_power(np.eye(n) - dense_smoother(n, lam), m)


def dense_ic_path(y, lam, m_max):
    y = np.asarray(y, dtype=float)
    n = y.size
    s = dense_smoother(n, lam)
    r = np.eye(n) - s
    c1 = r @ y
    base = c1 @ c1
    tr_r = np.trace(r)
    out, power = [], np.eye(n)
    for _ in range(m_max):
        power = power @ r
        c = power @ y
        out.append(c @ c / base + np.log(n) * np.trace(np.eye(n) - power) / tr_r)
    return np.array(out)


def dense_ols(y, p):
    """Regress y_t on (1, y_{t-1}, ..., y_{t-p}) via the normal equations."""
    y = np.asarray(y, dtype=float)
    rows = [[1.0] + [y[t - j] for j in range(1, p + 1)] for t in range(p, y.size)]
    x = np.array(rows)
    beta = np.linalg.solve(x.T @ x, x.T @ y[p:])
    fitted = np.full(y.size, np.nan)
    fitted[p:] = x @ beta
    return beta, fitted
