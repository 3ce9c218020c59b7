"""Pure NumPy implementations of the numerical kernels.

These mirror ``_kernels.pyx`` one-for-one and are used when the compiled
extension is unavailable (or when ``QCHI2_PURE_PYTHON=1``).
"""

import numpy as np

FAMILY_GENERIC = 0
FAMILY_RUSKAI = 1
FAMILY_WYD = 2
FAMILY_MIN = 3
FAMILY_MAX = 4


def mc_kernel(code, alpha, lam):
    """Morozova-Chentsov matrix ``C[i, j] = c(lam[i], lam[j])`` for a closed-form family."""
    lam = np.ascontiguousarray(lam, dtype=np.float64)
    x = lam[:, None]
    y = lam[None, :]
    if code == FAMILY_RUSKAI:
        return 0.5 * (x ** (alpha - 1.0) * y ** (-alpha) + x ** (-alpha) * y ** (alpha - 1.0))
    if code == FAMILY_WYD:
        return x ** (-alpha) * y ** (-alpha) * (0.5 * (x + y)) ** (2.0 * alpha - 1.0)
    if code == FAMILY_MIN:
        return (x + y) / (2.0 * x * y)
    if code == FAMILY_MAX:
        return 2.0 / (x + y)
    raise ValueError(f"no closed-form kernel for family code {code}")


def hadamard_quadform(c, x):
    """Return ``sum_ij c[i, j] * |x[i, j]|**2``."""
    return float(np.sum(c * (x.real**2 + x.imag**2)))


def weight_log_nodes(t, nodes, weights):
    """Quadrature nodes and kernel-scaled weights for the weight-function integral.

    For each ``t`` the integral over ``lam in [0, 1]`` is mapped to
    ``mu = log(lam + s)`` with ``s = min(t, 1/t)``, which removes the
    boundary layer of width ``s`` near ``lam = 0``.  ``nodes``/``weights``
    are Gauss-Legendre on ``[-1, 1]``.

    Returns ``(lam, kw)`` of shape ``(len(t), len(nodes))`` such that the
    integral of ``kernel(lam, t) * h(lam)`` is ``(kw * h(lam)).sum(axis=1)``.
    """
    t = np.ascontiguousarray(t, dtype=np.float64)[:, None]
    s = np.minimum(t, 1.0 / t)
    a = np.log(s)
    b = np.log1p(s)
    half = 0.5 * (b - a)
    mu = half * nodes[None, :] + 0.5 * (b + a)
    lam = np.clip(np.exp(mu) - s, 0.0, 1.0)
    kernel = (1.0 - lam**2) * (1.0 - t) ** 2 / ((lam + t) * (1.0 + lam * t) * (1.0 + lam) ** 2)
    kw = kernel * half * weights[None, :] * (lam + s)
    return lam, kw


def divided_differences(t, ft, dft):
    """Loewner matrix of first divided differences with ``dft`` on the diagonal."""
    t = np.asarray(t, dtype=np.float64)
    ft = np.asarray(ft, dtype=np.float64)
    dt = t[:, None] - t[None, :]
    df = ft[:, None] - ft[None, :]
    np.fill_diagonal(dt, 1.0)
    out = df / dt
    np.fill_diagonal(out, dft)
    return out
