"""Dense Hermitian linear algebra and the Morozova-Chentsov superoperator.

For a positive definite ``sigma = U diag(lam) U*`` the superoperator
``c(L_sigma, R_sigma)`` acts on a matrix ``A`` as ``U (C * (U* A U)) U*`` with
``C[i, j] = c(lam[i], lam[j])``.  :func:`superop_matrix` builds the same map
as an explicit ``n^2 x n^2`` matrix by an independent route and serves as an
oracle for small ``n``.

Vectorization is column-stacking throughout: ``vec(A) = A.reshape(-1, order="F")``,
so ``vec(X A Y) = (Y.T kron X) vec(A)``, ``L_sigma = I kron sigma`` and
``R_sigma = sigma.T kron I``.
"""

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg

from .errors import DomainError, NumericError, SingularStateError
from .fop import k_value, mc_matrix

HERMITIAN_REJECT_TOL = 1e-8
TRACE_TOL = 1e-10
PSD_TOL = 1e-10
DEFAULT_FLOOR = 1e-10


def _as_square(data, what="matrix"):
    arr = np.asarray(data)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise DomainError(f"{what} must be a non-empty square matrix, got shape {arr.shape}")
    arr = arr.astype(np.complex128)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{what} has non-finite entries")
    return arr


def hermitize(data, what="matrix"):
    """Return ``(A + A*)/2``, rejecting inputs whose asymmetry exceeds 1e-8."""
    arr = _as_square(data, what)
    asym = float(np.max(np.abs(arr - arr.conj().T)))
    if asym > HERMITIAN_REJECT_TOL:
        raise DomainError(f"{what} is not Hermitian (max |A - A*| = {asym:.3g})")
    return 0.5 * (arr + arr.conj().T)


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues and the unitary whose columns are eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        u = self.vectors
        return (u * self.values) @ u.conj().T


class HermitianMatrix:
    """An ``n x n`` complex self-adjoint matrix (symmetrized on construction)."""

    def __init__(self, data, what="matrix"):
        self.data = hermitize(data, what)
        self.data.flags.writeable = False

    @property
    def n(self):
        return self.data.shape[0]

    @cached_property
    def spectrum(self):
        return eigh(self.data)

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class DensityMatrix(HermitianMatrix):
    """Unit-trace positive semidefinite Hermitian matrix."""

    def __init__(self, data, what="density matrix"):
        super().__init__(data, what)
        tr = np.trace(self.data).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise DomainError(f"{what} has trace {tr!r}, expected 1")
        if self.spectrum.values[0] < -PSD_TOL:
            raise DomainError(
                f"{what} is not positive semidefinite "
                f"(min eigenvalue {self.spectrum.values[0]:.3g})"
            )

    @property
    def min_eigenvalue(self):
        return float(self.spectrum.values[0])

    def require_floor(self, floor=DEFAULT_FLOOR, what="state"):
        lo = self.min_eigenvalue
        if lo < floor:
            raise SingularStateError(
                f"{what} is not positive definite: min eigenvalue {lo:.3g} < floor {floor:.3g}",
                lo,
                floor,
            )
        return self


def as_hermitian(obj, what="matrix"):
    return obj if isinstance(obj, HermitianMatrix) else HermitianMatrix(obj, what)


def as_density(obj, what="density matrix"):
    if isinstance(obj, DensityMatrix):
        return obj
    if isinstance(obj, HermitianMatrix):
        obj = obj.data
    return DensityMatrix(obj, what)


def eigh(h):
    """Eigendecomposition of a Hermitian matrix with ascending eigenvalues."""
    data = h.data if isinstance(h, HermitianMatrix) else hermitize(h)
    try:
        values, vectors = np.linalg.eigh(data)
    except np.linalg.LinAlgError as exc:
        norm = float(np.linalg.norm(data))
        raise NumericError(f"eigensolver failed to converge (||H||_F = {norm:.3g})", norm) from exc
    return Spectrum(values, vectors)


def _check_operand(sigma, a):
    a = np.asarray(a.data if isinstance(a, HermitianMatrix) else a, dtype=np.complex128)
    if a.shape != (sigma.n, sigma.n):
        raise DomainError(f"operand has shape {a.shape}, state is {sigma.n}x{sigma.n}")
    return a


def mc_eigenbasis(func, sigma, floor=DEFAULT_FLOOR):
    """``(C, U)`` with ``C[i, j] = c(lam_i, lam_j)`` in the eigenbasis ``U`` of ``sigma``."""
    sigma = as_density(sigma).require_floor(floor)
    spec = sigma.spectrum
    return mc_matrix(func, spec.values), spec.vectors


def apply_mc_superop(func, sigma, a, floor=DEFAULT_FLOOR):
    """Apply ``c(L_sigma, R_sigma)`` to ``a``."""
    sigma = as_density(sigma)
    a = _check_operand(sigma, a)
    c, u = mc_eigenbasis(func, sigma, floor)
    at = u.conj().T @ a @ u
    return u @ (c * at) @ u.conj().T


def vec(a):
    """Column-stacking vectorization."""
    return np.asarray(a).reshape(-1, order="F")


def unvec(v, n):
    return np.asarray(v).reshape((n, n), order="F")


def superop_matrix(func, sigma, floor=DEFAULT_FLOOR):
    """Explicit ``n^2 x n^2`` matrix of ``c(L_sigma, R_sigma)`` (oracle; small ``n``).

    Built without an eigendecomposition of ``sigma``: with ``S = log sigma``
    (Schur-based ``logm``), ``D = log L - log R = I kron S - S.T kron I`` and
    the symmetric kernel ``m(u) = exp(u/2) k(exp(u))`` (``k = 1/f``),

        c(L, R) = P m(D) P,    P = (L R)^(-1/4) = sigma.T^(-1/4) kron sigma^(-1/4).

    Working with log-ratios keeps the small eigenvalues of ``sigma`` at full
    relative precision.
    """
    sigma = as_density(sigma).require_floor(floor)
    s = np.asarray(sigma.data)
    n = sigma.n
    eye = np.eye(n)
    log_s = _herm(scipy.linalg.logm(s))
    d = _herm(np.kron(eye, log_s) - np.kron(log_s.T, eye))
    w, v = np.linalg.eigh(d)
    m = np.exp(0.5 * w) * k_value(func, np.exp(w))
    quarter = _herm(scipy.linalg.expm(-0.25 * log_s))
    p = np.kron(quarter.T, quarter)
    return _herm(p @ ((v * m) @ v.conj().T) @ p)


def _herm(a):
    return 0.5 * (a + a.conj().T)


def superop_apply_dense(func, sigma, a, floor=DEFAULT_FLOOR):
    """``c(L_sigma, R_sigma)(a)`` computed through :func:`superop_matrix`."""
    sigma = as_density(sigma)
    a = _check_operand(sigma, a)
    return unvec(superop_matrix(func, sigma, floor) @ vec(a), sigma.n)


# -- JSON I/O -----------------------------------------------------------------


def matrix_to_json(a):
    a = np.asarray(a.data if isinstance(a, HermitianMatrix) else a, dtype=np.complex128)
    out = {"n": int(a.shape[0]), "re": a.real.tolist()}
    if np.any(a.imag != 0.0):
        out["im"] = a.imag.tolist()
    return out


def matrix_from_json(obj, what="matrix"):
    """Decode ``{"n": int, "re": [[...]], "im": [[...]]}`` (``im`` optional) to an array."""
    if not isinstance(obj, dict) or "n" not in obj or "re" not in obj:
        raise DomainError(f"{what}: expected an object with keys 'n' and 're'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DomainError(f"{what}: 'n' must be a positive integer")
    try:
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj.get("im", np.zeros((n, n))), dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"{what}: entries must be numeric: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise DomainError(f"{what}: 're'/'im' must be {n}x{n}")
    return re + 1j * im


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DomainError(f"{path}: invalid JSON: {exc}") from exc


def load_matrix(path):
    return HermitianMatrix(matrix_from_json(_read_json(path), str(path)), str(path))


def load_density(path):
    """Load and validate (Hermitian, unit trace, PSD) a density matrix file."""
    return DensityMatrix(matrix_from_json(_read_json(path), str(path)), str(path))


def save_matrix(a, path):
    with open(path, "w") as fh:
        json.dump(matrix_to_json(a), fh)
