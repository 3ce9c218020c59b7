"""Monotone metrics and quantum chi-square divergences."""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError
from .linalg import (
    DEFAULT_FLOOR,
    as_density,
    as_hermitian,
    apply_mc_superop,
    mc_eigenbasis,
    superop_matrix,
    vec,
)

IMAG_TOL = 1e-10
SIMPLEX_TOL = 1e-10
PATHS = ("eigenbasis", "oracle", "closed-form")


@dataclass(frozen=True)
class DivergenceValue:
    value: float
    f: str
    n: int
    path: str

    def __float__(self):
        return self.value

    def to_dict(self):
        return {"chi2": self.value, "f": self.f, "path": self.path}


def _real(z, what):
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z.real)):
        raise DomainError(f"{what} has imaginary part {z.imag:.3g}; inputs are not Hermitian")
    return float(z.real)


def metric(func, rho, a, b, floor=DEFAULT_FLOOR):
    """``K_rho(A, B) = Tr A* c(L_rho, R_rho)(B)``."""
    rho = as_density(rho)
    a = as_hermitian(a, "A").data
    b = as_hermitian(b, "B").data
    if a.shape != b.shape:
        raise DomainError("A and B must have the same shape")
    return _real(np.vdot(a, apply_mc_superop(func, rho, b, floor)), "K_rho(A, B)")


def _pair(rho, sigma):
    rho = as_density(rho, "rho")
    sigma = as_density(sigma, "sigma")
    if rho.n != sigma.n:
        raise DomainError(f"dimension mismatch: rho is {rho.n}x{rho.n}, sigma is {sigma.n}x{sigma.n}")
    return rho, sigma


def chi2(func, rho, sigma, path="eigenbasis", floor=DEFAULT_FLOOR):
    """``chi2_f(rho, sigma) = K_sigma(rho - sigma, rho - sigma)``.

    ``path`` selects the evaluation route: ``"eigenbasis"`` (Hadamard
    product in the eigenbasis of ``sigma``), ``"oracle"`` (explicit
    superoperator matrix) or ``"closed-form"`` (Ruskai family only).
    """
    if path == "closed-form":
        if func.family != "ruskai-alpha":
            raise DomainError(f"no closed form for family {func.family!r}")
        out = chi2_alpha_closed(func.alpha, rho, sigma, floor)
        return DivergenceValue(out.value, func.spec, out.n, path)
    rho, sigma = _pair(rho, sigma)
    d = np.asarray(rho.data) - np.asarray(sigma.data)
    if path == "eigenbasis":
        c, u = mc_eigenbasis(func, sigma, floor)
        dt = u.conj().T @ d @ u
        value = kernels.hadamard_quadform(c, dt)
    elif path == "oracle":
        v = vec(d)
        value = _real(np.vdot(v, superop_matrix(func, sigma, floor) @ v), "chi2")
    else:
        raise DomainError(f"unknown evaluation path {path!r}; expected one of {PATHS}")
    return DivergenceValue(float(value), func.spec, sigma.n, path)


def chi2_alpha_closed(alpha, rho, sigma, floor=DEFAULT_FLOOR):
    """``Tr rho sigma^-alpha rho sigma^(alpha-1) - 1`` via the spectrum of ``sigma``."""
    alpha = float(alpha)
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    rho, sigma = _pair(rho, sigma)
    sigma.require_floor(floor, "sigma")
    lam, u = sigma.spectrum.values, sigma.spectrum.vectors
    r = u.conj().T @ np.asarray(rho.data) @ u
    p = (r * lam**-alpha) @ (r * lam ** (alpha - 1.0))
    value = _real(np.trace(p), "chi2_alpha") - 1.0
    return DivergenceValue(value, f"ruskai:{alpha!r}", sigma.n, "closed-form")


def classical_chi2(p, q):
    """Classical ``sum_i (p_i - q_i)**2 / q_i``."""
    p = np.asarray(p, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.ndim != 1 or p.shape != q.shape or p.size == 0:
        raise DomainError("p and q must be non-empty vectors of equal length")
    if np.any(p < 0) or abs(p.sum() - 1.0) > SIMPLEX_TOL:
        raise DomainError("p is not a probability vector")
    if np.any(q <= 0) or abs(q.sum() - 1.0) > SIMPLEX_TOL:
        raise DomainError("q must be a strictly positive probability vector")
    return float(np.sum((p - q) ** 2 / q))
