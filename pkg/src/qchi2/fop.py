"""Standard operator monotone functions and their scalar-level checks.

A *standard* function ``f`` on ``(0, inf)`` is operator monotone, satisfies
``f(t) = t f(1/t)`` and ``f(1) = 1``.  Every such function determines a
Morozova-Chentsov function ``c(x, y) = 1 / (y f(x/y))`` and, through it, a
monotone metric.  This module provides the built-in families, the
construction of ``f`` from a weight function ``h: [0, 1] -> [0, 1]``, and
numerical checks of the defining properties.
"""

import csv
import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from . import kernels
from .errors import DomainError
from .report import ScanReport

DEFAULT_QUAD_NODES = 64
LOEWNER_TOL = 1e-8
BOUNDS_TOL = 1e-10
ORDER_TOL = 1e-12

_FAMILY_CODES = {
    "ruskai-alpha": kernels.FAMILY_RUSKAI,
    "wyd-alpha": kernels.FAMILY_WYD,
    "min-extremal": kernels.FAMILY_MIN,
    "max-extremal": kernels.FAMILY_MAX,
}
FAMILIES = ("ruskai-alpha", "wyd-alpha", "min-extremal", "max-extremal", "from-weight", "custom")


@dataclass(frozen=True)
class WeightFunction:
    """A weight ``h: [0, 1] -> [0, 1]``.

    ``evaluator`` must accept a NumPy array of points in ``[0, 1]`` and
    return an array of the same shape.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    description: str = "custom"
    constant: float | None = None

    def __post_init__(self):
        probe = np.linspace(0.0, 1.0, 101)
        self._checked(probe)

    def __call__(self, lam):
        lam = np.asarray(lam, dtype=np.float64)
        return self._checked(lam)

    def _checked(self, lam):
        values = np.asarray(self.evaluator(lam), dtype=np.float64)
        if values.shape != lam.shape:
            values = np.broadcast_to(values, lam.shape).astype(np.float64)
        if not np.all(np.isfinite(values)):
            raise DomainError(f"weight {self.description!r} is not finite on [0, 1]")
        if values.size and (values.min() < -ORDER_TOL or values.max() > 1.0 + ORDER_TOL):
            raise DomainError(
                f"weight {self.description!r} leaves [0, 1]: "
                f"range [{values.min():.6g}, {values.max():.6g}]"
            )
        return values

    @classmethod
    def const(cls, alpha):
        alpha = _check_alpha(alpha)
        return cls(lambda lam: np.full(np.shape(lam), alpha), f"const:{alpha!r}", constant=alpha)

    @classmethod
    def from_samples(cls, lam, h, description="samples"):
        """Piecewise-linear weight through ``(lam, h)``, values clamped to ``[0, 1]``."""
        lam = np.asarray(lam, dtype=np.float64)
        h = np.asarray(h, dtype=np.float64)
        if lam.ndim != 1 or lam.shape != h.shape or lam.size == 0:
            raise DomainError("weight samples must be two equal-length non-empty columns")
        if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(h))):
            raise DomainError("weight samples must be finite")
        if lam.min() < 0.0 or lam.max() > 1.0:
            raise DomainError("weight sample abscissae must lie in [0, 1]")
        if np.any(np.diff(lam) <= 0):
            raise DomainError("weight sample abscissae must be strictly increasing")
        h = np.clip(h, 0.0, 1.0)
        return cls(lambda x: np.interp(x, lam, h), description)


def load_weight_csv(path):
    """Read a two-column ``lam,h`` CSV file into a :class:`WeightFunction`.

    A non-numeric first row is treated as a header.
    """
    rows = []
    try:
        with open(path, newline="") as fh:
            for k, row in enumerate(csv.reader(fh)):
                row = [c.strip() for c in row if c.strip()]
                if not row or row[0].startswith("#"):
                    continue
                if len(row) != 2:
                    raise DomainError(f"{path}: line {k + 1}: expected 2 columns, got {len(row)}")
                try:
                    rows.append((float(row[0]), float(row[1])))
                except ValueError:
                    if rows or k > 0:
                        raise DomainError(f"{path}: line {k + 1}: non-numeric entry") from None
    except OSError as exc:
        raise DomainError(f"cannot read weight file {path}: {exc}") from exc
    if not rows:
        raise DomainError(f"{path}: no weight samples")
    lam, h = np.array(rows).T
    return WeightFunction.from_samples(lam, h, description=str(path))


@dataclass(frozen=True)
class StandardFunction:
    """An element of the class of standard operator monotone functions.

    ``evaluator`` maps a float64 array of positive reals to ``f`` of the
    same shape.  ``family`` is one of :data:`FAMILIES`; ``alpha`` is the
    family parameter where there is one and ``weight`` the representing
    weight function where it is known.
    """

    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    family: str = "custom"
    alpha: float | None = None
    weight: WeightFunction | None = field(default=None, repr=False)
    name: str = ""

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise DomainError(f"unknown family tag {self.family!r}")

    def __call__(self, t):
        return eval_f(self, t)

    @property
    def kernel_code(self):
        return _FAMILY_CODES.get(self.family, kernels.FAMILY_GENERIC)

    @property
    def spec(self):
        return self.name or self.family


def _check_alpha(alpha):
    alpha = float(alpha)
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(f"alpha must lie in [0, 1], got {alpha!r}")
    return alpha


def _check_positive(t, what="t"):
    arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError(f"{what} must be positive and finite")
    return arr


def _scalar_or_array(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def eval_f(func, t):
    """Evaluate ``func`` at ``t > 0`` (scalar or array)."""
    arr = _check_positive(t)
    return _scalar_or_array(np.asarray(func.evaluator(arr), dtype=np.float64), t)


def k_value(func, t):
    """The decreasing companion ``k(t) = 1 / f(t)``; satisfies ``k(1/t) = t k(t)``."""
    arr = _check_positive(t)
    return _scalar_or_array(1.0 / np.asarray(func.evaluator(arr), dtype=np.float64), t)


def mc_value(func, x, y):
    """Morozova-Chentsov function ``c(x, y) = 1 / (y f(x/y))``.

    The perspective ``y f(x/y)`` is ``1 / mc_value(func, x, y)``.
    """
    xa = _check_positive(x, "x")
    ya = _check_positive(y, "y")
    xa, ya = np.broadcast_arrays(xa, ya)
    out = 1.0 / (ya * np.asarray(func.evaluator(xa / ya), dtype=np.float64))
    return float(out) if out.ndim == 0 else out


def mc_matrix(func, lam):
    """``C[i, j] = c(lam[i], lam[j])`` for an array of positive eigenvalues.

    Closed-form families go through the compiled kernel; anything else is
    evaluated through ``f`` directly.
    """
    lam = _check_positive(lam, "eigenvalues")
    code = func.kernel_code
    if code != kernels.FAMILY_GENERIC:
        return kernels.mc_kernel(code, func.alpha if func.alpha is not None else 0.0, lam)
    x = lam[:, None]
    y = lam[None, :]
    ratio = x / y
    return 1.0 / (y * np.asarray(func.evaluator(ratio), dtype=np.float64))


# -- families -----------------------------------------------------------------


def ruskai_family(alpha):
    """``f(t) = 2 t**alpha / (t**(2 alpha - 1) + 1)``, ``k(t) = (t**-alpha + t**(alpha-1)) / 2``."""
    alpha = _check_alpha(alpha)
    expo = 2.0 * alpha - 1.0

    if expo == 0.0:
        def evaluator(t):
            return np.sqrt(t)
    else:
        def evaluator(t):
            return 2.0 * t**alpha / (t**expo + 1.0)

    return StandardFunction(evaluator, "ruskai-alpha", alpha, None, f"ruskai:{alpha!r}")


def wyd_family(alpha):
    """Constant-weight family ``f(t) = t**alpha ((1 + t)/2)**(1 - 2 alpha)``.

    Its weight function is the constant ``alpha``; ``alpha = 0`` gives the
    largest standard function and ``alpha = 1`` the smallest.
    """
    alpha = _check_alpha(alpha)

    def evaluator(t):
        return t**alpha * (0.5 * (1.0 + t)) ** (1.0 - 2.0 * alpha)

    return StandardFunction(
        evaluator, "wyd-alpha", alpha, WeightFunction.const(alpha), f"wyd:{alpha!r}"
    )


def _min_eval(t):
    return 2.0 * t / (t + 1.0)


def _max_eval(t):
    return 0.5 * (t + 1.0)


def min_extremal():
    """The smallest standard function, ``2t / (t + 1)``."""
    return StandardFunction(_min_eval, "min-extremal", None, WeightFunction.const(1.0), "min")


def max_extremal():
    """The largest standard function, ``(t + 1) / 2``."""
    return StandardFunction(_max_eval, "max-extremal", None, WeightFunction.const(0.0), "max")


def custom(evaluator, name="custom"):
    """Wrap an arbitrary vectorized callable.  No membership checks are made."""
    return StandardFunction(evaluator, "custom", None, None, name)


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def weight_log_integral(h, t, quad_nodes=DEFAULT_QUAD_NODES):
    """``int_0^1 (1-l^2)(1-t)^2 / ((l+t)(1+l t)(1+l)^2) h(l) dl`` for each ``t``.

    Fixed-order Gauss-Legendre in the variable ``log(l + min(t, 1/t))``.
    """
    t = np.asarray(t, dtype=np.float64)
    x, w = _gauss_legendre(int(quad_nodes))
    lam, kw = kernels.weight_log_nodes(t.ravel(), x, w)
    hv = h(lam)
    return np.sum(kw * hv, axis=1).reshape(t.shape)


def from_weight(h, quad_nodes=DEFAULT_QUAD_NODES):
    """Build ``f(t) = (1+t)/2 * exp(-int_0^1 K(l, t) h(l) dl)`` from a weight ``h``."""
    if not isinstance(h, WeightFunction):
        raise DomainError("h must be a WeightFunction")
    quad_nodes = int(quad_nodes)
    if quad_nodes < 16:
        raise DomainError(f"quad_nodes must be >= 16, got {quad_nodes}")

    def evaluator(t):
        t = np.asarray(t, dtype=np.float64)
        return 0.5 * (1.0 + t) * np.exp(-weight_log_integral(h, t, quad_nodes))

    return StandardFunction(evaluator, "from-weight", h.constant, h, f"weight:{h.description}")


def linear_weight():
    """``h(l) = l``; a non-constant weight used by the built-in test set."""
    return WeightFunction(lambda lam: np.array(lam, dtype=np.float64), "linear")


def builtin_functions():
    """The built-in test set: Ruskai and WYD members, both extremes, and ``from_weight(h(l) = l)``."""
    out = [ruskai_family(a) for a in (0.0, 0.25, 0.5, 0.75, 1.0)]
    out += [wyd_family(a) for a in (0.0, 0.5, 1.0)]
    out += [min_extremal(), max_extremal(), from_weight(linear_weight())]
    return out


# -- specifier parsing --------------------------------------------------------


def parse_function_spec(spec):
    """Parse ``ruskai:<a>``, ``wyd:<a>``, ``min``, ``max`` or ``weight:<csv path>``."""
    spec = spec.strip()
    head, _, rest = spec.partition(":")
    head = head.lower()
    try:
        if head == "ruskai" and rest:
            func = ruskai_family(float(rest))
        elif head == "wyd" and rest:
            func = wyd_family(float(rest))
        elif head == "min" and not rest:
            func = min_extremal()
        elif head == "max" and not rest:
            func = max_extremal()
        elif head == "weight" and rest:
            func = from_weight(parse_weight_spec(rest))
        else:
            raise DomainError(f"unrecognized function specifier {spec!r}")
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"bad function specifier {spec!r}: {exc}") from exc
    return StandardFunction(func.evaluator, func.family, func.alpha, func.weight, spec)


def parse_weight_spec(spec):
    """Parse ``const:<a>``, ``linear`` or a path to a two-column CSV file."""
    spec = spec.strip()
    if spec.startswith("const:"):
        try:
            return WeightFunction.const(float(spec[len("const:"):]))
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"bad weight specifier {spec!r}") from exc
    if spec == "linear":
        return linear_weight()
    return load_weight_csv(spec)


# -- structural checks --------------------------------------------------------


def symmetry_check(func, t_samples, tol=BOUNDS_TOL):
    """Margins ``tol * max(1, f(t)) - |f(t) - t f(1/t)|`` normalized by ``max(1, f(t))``."""
    t = _check_positive(np.atleast_1d(t_samples))
    f = np.asarray(func.evaluator(t), dtype=np.float64)
    g = t * np.asarray(func.evaluator(1.0 / t), dtype=np.float64)
    margins = -np.abs(f - g) / np.maximum(1.0, f)
    return ScanReport("symmetry", {"f": func.spec, "samples": int(t.size)}, margins.tolist(), tol)


def bounds_check(func, t_samples, tol=BOUNDS_TOL):
    """Check ``2t/(t+1) <= f(t) <= (t+1)/2`` on the samples.

    The per-sample margin is the smaller of ``f - 2t/(t+1)`` and
    ``(t+1)/2 - f``; both sides are kept in ``per_sample``.
    """
    t = _check_positive(np.atleast_1d(t_samples))
    f = np.asarray(func.evaluator(t), dtype=np.float64)
    lower = f - _min_eval(t)
    upper = _max_eval(t) - f
    return ScanReport(
        "bounds",
        {"f": func.spec, "samples": int(t.size)},
        np.minimum(lower, upper).tolist(),
        tol,
        details={"min_lower": float(lower.min()), "min_upper": float(upper.min())},
        per_sample={"lower": lower.tolist(), "upper": upper.tolist()},
    )


def loewner_matrix(func, nodes):
    """Matrix of divided differences of ``f``; the diagonal is a central difference."""
    t = _check_positive(np.atleast_1d(nodes), "nodes")
    if t.ndim != 1 or t.size < 2:
        raise DomainError("at least two nodes are required")
    if np.unique(t).size != t.size:
        raise DomainError("Loewner nodes must be distinct")
    step = 1e-6 * t
    ft = np.asarray(func.evaluator(t), dtype=np.float64)
    dft = (func.evaluator(t + step) - func.evaluator(t - step)) / (2.0 * step)
    return kernels.divided_differences(t, ft, dft)


def loewner_check(func, nodes, tol=LOEWNER_TOL):
    """Necessary condition for operator monotonicity: the Loewner matrix is PSD."""
    mat = loewner_matrix(func, nodes)
    min_eig = float(np.linalg.eigvalsh(mat)[0])
    return ScanReport(
        "loewner",
        {"f": func.spec, "nodes": [float(v) for v in np.atleast_1d(nodes)]},
        [min_eig],
        tol,
    )


class Order(str, enum.Enum):
    PRECEDES = "precedes"
    SUCCEEDS = "succeeds"
    INCOMPARABLE = "incomparable-on-grid"
    EQUAL = "equal-on-grid"


def weight_order(h1, h2, grid):
    """Compare weights on a grid in ``[0, 1]``.

    ``PRECEDES`` means ``h1 >= h2`` at every grid point, i.e. the function
    built from ``h1`` lies below the one built from ``h2`` in the lattice
    order.  The verdict is relative to the grid only.
    """
    grid = np.atleast_1d(np.asarray(grid, dtype=np.float64))
    if grid.size == 0:
        raise DomainError("grid must be non-empty")
    if grid.min() < 0.0 or grid.max() > 1.0:
        raise DomainError("grid must lie in [0, 1]")
    d = h1(grid) - h2(grid)
    ge = bool(np.all(d >= -ORDER_TOL))
    le = bool(np.all(d <= ORDER_TOL))
    if ge and le:
        return Order.EQUAL
    if ge:
        return Order.PRECEDES
    if le:
        return Order.SUCCEEDS
    return Order.INCOMPARABLE


def weight_meet_join(h1, h2):
    """Lattice meet (pointwise max, the lower function) and join (pointwise min)."""
    meet = WeightFunction(
        lambda lam: np.maximum(h1(lam), h2(lam)),
        f"max({h1.description},{h2.description})",
        h1.constant if h1.constant is not None and h1.constant == h2.constant else None,
    )
    join = WeightFunction(
        lambda lam: np.minimum(h1(lam), h2(lam)),
        f"min({h1.description},{h2.description})",
        meet.constant,
    )
    if h1.constant is not None and h2.constant is not None:
        meet = WeightFunction.const(max(h1.constant, h2.constant))
        join = WeightFunction.const(min(h1.constant, h2.constant))
    return meet, join


def log_grid(lo, hi, num):
    """``num`` log-spaced samples in ``[lo, hi]``."""
    return np.logspace(math.log10(lo), math.log10(hi), num)
