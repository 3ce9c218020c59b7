"""CPTP maps in Kraus form and contraction checks."""

from dataclasses import dataclass

import numpy as np

from .divergence import chi2, metric
from .errors import DomainError, SingularStateError
from .linalg import DEFAULT_FLOOR, as_density, matrix_from_json, matrix_to_json

TP_TOL = 1e-10
CONTRACTION_TOL = 1e-9


class KrausChannel:
    """``T(X) = sum_i K_i X K_i*`` with ``sum_i K_i* K_i = I`` (checked)."""

    def __init__(self, kraus):
        ops = [np.asarray(k, dtype=np.complex128) for k in kraus]
        if not ops:
            raise DomainError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(k.shape != shape for k in ops):
            raise DomainError("Kraus operators must be matrices of a common shape")
        self.m, self.n = shape
        self.kraus = tuple(ops)
        for k in self.kraus:
            k.flags.writeable = False
        gram = sum(k.conj().T @ k for k in self.kraus)
        err = float(np.max(np.abs(gram - np.eye(self.n))))
        if err > TP_TOL:
            raise DomainError(f"Kraus operators are not trace preserving (|sum K*K - I| = {err:.3g})")

    def __call__(self, x):
        return apply_channel(self, x)

    def __repr__(self):
        return f"KrausChannel(n={self.n}, m={self.m}, rank={len(self.kraus)})"

    def to_json(self):
        return {"n": self.n, "m": self.m, "kraus": [matrix_to_json_rect(k) for k in self.kraus]}

    @classmethod
    def from_json(cls, obj, what="channel"):
        if not isinstance(obj, dict) or not {"n", "m", "kraus"} <= obj.keys():
            raise DomainError(f"{what}: expected keys 'n', 'm', 'kraus'")
        ops = [_rect_from_json(k, obj["m"], obj["n"], f"{what}.kraus[{i}]")
               for i, k in enumerate(obj["kraus"])]
        chan = cls(ops)
        if (chan.n, chan.m) != (obj["n"], obj["m"]):
            raise DomainError(f"{what}: declared dimensions disagree with Kraus shapes")
        return chan


def matrix_to_json_rect(a):
    a = np.asarray(a)
    if a.shape[0] == a.shape[1]:
        return matrix_to_json(a)
    # Rectangular blocks carry only 're'/'im'; the shape comes from the channel's m, n.
    out = {"re": a.real.tolist()}
    if np.any(a.imag != 0.0):
        out["im"] = a.imag.tolist()
    return out


def _rect_from_json(obj, m, n, what):
    if m == n:
        return matrix_from_json(obj, what)
    try:
        re = np.asarray(obj["re"], dtype=np.float64)
        im = np.asarray(obj.get("im", np.zeros((m, n))), dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"{what}: malformed Kraus operator: {exc}") from exc
    if re.shape != (m, n) or im.shape != (m, n):
        raise DomainError(f"{what}: expected shape {m}x{n}")
    return re + 1j * im


def apply_channel(channel, x):
    x = np.asarray(getattr(x, "data", x), dtype=np.complex128)
    if x.shape != (channel.n, channel.n):
        raise DomainError(f"input has shape {x.shape}, channel expects {channel.n}x{channel.n}")
    out = np.zeros((channel.m, channel.m), dtype=np.complex128)
    for k in channel.kraus:
        out += k @ x @ k.conj().T
    return out


def identity_channel(n):
    return KrausChannel([np.eye(n)])


def unitary_channel(u):
    return KrausChannel([u])


def depolarizing_channel(n):
    """Completely depolarizing channel ``X -> Tr(X) I/n`` with ``n^2`` Kraus operators."""
    ops = []
    for i in range(n):
        for j in range(n):
            k = np.zeros((n, n))
            k[i, j] = 1.0 / np.sqrt(n)
            ops.append(k)
    return KrausChannel(ops)


def random_isometry(rows, cols, rng):
    """Haar-random isometry ``rows x cols`` (``rows >= cols``) from complex Gaussian QR."""
    g = (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_channel(n, m, env_dim, seed):
    """Random CPTP map ``M_n -> M_m`` with ``env_dim`` Kraus operators.

    ``seed`` is anything accepted by :func:`numpy.random.default_rng`.
    """
    if min(n, m, env_dim) < 1:
        raise DomainError("n, m and env_dim must be >= 1")
    if m * env_dim < n:
        raise DomainError(f"no isometry from dimension {n} into {m}*{env_dim}")
    rng = np.random.default_rng(seed)
    v = random_isometry(m * env_dim, n, rng)
    return KrausChannel([v[i * m:(i + 1) * m, :] for i in range(env_dim)])


def choi_matrix(channel):
    """Choi matrix ``sum_ij E_ij kron T(E_ij)`` (PSD iff completely positive)."""
    n, m = channel.n, channel.m
    out = np.zeros((n * m, n * m), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            e = np.zeros((n, n))
            e[i, j] = 1.0
            out[i * m:(i + 1) * m, j * m:(j + 1) * m] = apply_channel(channel, e)
    return out


@dataclass(frozen=True)
class ContractionResult:
    """``before - after`` for a divergence or metric pushed through a channel."""

    before: float
    after: float
    tolerance: float

    @property
    def margin(self):
        return self.before - self.after

    @property
    def relative_margin(self):
        scale = self.before if self.before > 0.0 else 1.0
        return self.margin / scale

    @property
    def passed(self):
        return self.relative_margin >= -self.tolerance

    def to_dict(self):
        return {"before": self.before, "after": self.after, "margin": self.margin,
                "pass": self.passed}


def _pushed_state(channel, state, floor, what):
    out = as_density(apply_channel(channel, state), what)
    try:
        return out.require_floor(floor, what)
    except SingularStateError as exc:
        raise SingularStateError(
            f"{exc}; mix the input with white noise, (1-d) sigma + d I/n, before applying the channel",
            exc.min_eigenvalue,
            exc.floor,
        ) from None


def contraction_check(func, channel, rho, sigma, tol=CONTRACTION_TOL, floor=DEFAULT_FLOOR):
    """Compare ``chi2_f(rho, sigma)`` with ``chi2_f(T rho, T sigma)``.

    Passes iff ``before - after >= -tol * before`` (``-tol`` when ``before`` is 0).
    """
    rho = as_density(rho, "rho")
    sigma = as_density(sigma, "sigma").require_floor(floor, "sigma")
    t_sigma = _pushed_state(channel, sigma, floor, "T(sigma)")
    t_rho = as_density(apply_channel(channel, rho), "T(rho)")
    before = chi2(func, rho, sigma, floor=floor).value
    after = chi2(func, t_rho, t_sigma, floor=floor).value
    return ContractionResult(before, after, tol)


def metric_contraction_check(func, channel, rho, a, tol=CONTRACTION_TOL, floor=DEFAULT_FLOOR):
    """General form: ``K_rho(A, A)`` against ``K_{T rho}(T A, T A)`` for Hermitian ``A``."""
    rho = as_density(rho, "rho")
    t_rho = _pushed_state(channel, rho, floor, "T(rho)")
    before = metric(func, rho, a, a, floor)
    ta = apply_channel(channel, a)
    after = metric(func, t_rho, ta, ta, floor)
    return ContractionResult(before, after, tol)
