"""Norms of finite distributions in concrete symmetric function spaces.

Supported spaces on [0, 1]: L_p, L_inf, Orlicz spaces with the Luxemburg
norm, Lorentz and Marcinkiewicz spaces built from a concave weight, and
exponential Orlicz spaces ExpL^r (either as an Orlicz norm or through the
extrapolation sup_p ||x||_p / p^(1/r)).  Everything is computed from the
exact distribution, via the decreasing rearrangement where needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .distribution import StepDistribution
from .errors import InvalidArgumentError, NumericFailureError
from .report import timed_report

DEFAULT_TOL = 1e-10
_BRACKET_STEPS = 200
DEFAULT_P_GRID = tuple(float(2**i) for i in range(11))  # 1, 2, 4, ..., 1024


# ---------------------------------------------------------------------------
# Orlicz functions and concave weights
# ---------------------------------------------------------------------------


class OrliczFunction:
    """Convex Orlicz function M with M(0) = 0, plus its inverse.

    Two variants:

    * ``power(p)``: M(u) = u^p, so L_M = L_p isometrically.
    * ``exponential(r, u0)``: M(u) = exp(u^r) - 1 for u >= u0 and the
      chord through the origin below u0.  For r >= 1 the default is
      u0 = 0 (no splice needed).  For r < 1 the raw function is concave
      near 0; the default u0 is the tangency point of the chord, the
      smallest splice that keeps M convex.
    """

    __slots__ = ("kind", "param", "u0", "_slope", "_m_u0")

    def __init__(self, kind, param, u0=0.0):
        self.kind = kind
        self.param = float(param)
        self.u0 = float(u0)
        if self.u0 > 0:
            self._m_u0 = math.expm1(self.u0**self.param)
            self._slope = self._m_u0 / self.u0
        else:
            self._m_u0 = 0.0
            self._slope = 0.0

    @classmethod
    def power(cls, p):
        if p < 1:
            raise InvalidArgumentError(f"power Orlicz function needs p >= 1, got {p}")
        return cls("power", p)

    @classmethod
    def exponential(cls, r, u0=None):
        if r <= 0:
            raise InvalidArgumentError(f"exponential Orlicz function needs r > 0, got {r}")
        if u0 is None:
            u0 = 0.0 if r >= 1 else _tangency_point(r) ** (1.0 / r)
        if u0 < 0:
            raise InvalidArgumentError("splice point u0 must be >= 0")
        return cls("exponential", r, u0)

    def __call__(self, u):
        u = abs(float(u))
        if self.kind == "power":
            return u**self.param
        if u < self.u0:
            return self._slope * u
        try:
            return math.expm1(u**self.param)
        except OverflowError:
            return math.inf

    def apply(self, u):
        """Vectorized evaluation on a non-negative array."""
        u = np.abs(np.asarray(u, dtype=float))
        if self.kind == "power":
            return u**self.param
        with np.errstate(over="ignore"):
            out = np.expm1(u**self.param)
        if self.u0 > 0:
            low = u < self.u0
            out = np.where(low, self._slope * u, out)
        return out

    def inverse(self, v):
        """M^{-1}(v) on [0, inf)."""
        v = float(v)
        if v <= 0:
            return 0.0
        if self.kind == "power":
            return v ** (1.0 / self.param)
        if v < self._m_u0:
            return v / self._slope
        return math.log1p(v) ** (1.0 / self.param)

    def validate(self, grid=None):
        """Spot-check convexity, positivity and M(0) = 0 on a grid."""
        if self(0.0) != 0.0:
            raise InvalidArgumentError("Orlicz function must vanish at 0")
        if grid is None:
            grid = np.concatenate([[0.0], np.geomspace(1e-6, 50.0, 200)])
        vals = self.apply(grid)
        if np.any(vals < 0) or not np.any(vals > 0):
            raise InvalidArgumentError("Orlicz function must be non-negative and not identically 0")
        fin = np.isfinite(vals)
        slopes = np.diff(vals[fin]) / np.diff(grid[fin])
        if np.any(np.diff(slopes) < -1e-9 * np.maximum(slopes[1:], 1.0)):
            raise InvalidArgumentError("Orlicz function fails the convexity spot-check")
        return True


def _tangency_point(r):
    """Positive root x of 1 - exp(-x) = r x (chord-tangency for r < 1)."""
    f = lambda x: 1.0 - math.exp(-x) - r * x
    lo, hi = 1e-12, 1.0
    while f(hi) > 0:
        hi *= 2.0
        if hi > 1e9:  # pragma: no cover - r bounded away from 0 upstream
            raise NumericFailureError("tangency bracketing failed")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class ConcaveWeight:
    """Increasing concave weight phi on (0, 1] with phi(0+) = 0.

    The stock variant is ``log_power(gamma)``: phi(t) = log^{-gamma}(e/t),
    the fundamental function of the exponential-Orlicz scale.  Arbitrary
    rules can be wrapped with :meth:`from_callable`.
    """

    __slots__ = ("kind", "gamma", "_fn", "label")

    def __init__(self, kind, gamma=None, fn=None, label=None):
        self.kind = kind
        self.gamma = gamma
        self._fn = fn
        self.label = label or (f"log_power({gamma})" if kind == "log_power" else "custom")

    @classmethod
    def log_power(cls, gamma):
        if gamma < 0:
            raise InvalidArgumentError(f"log-power weight needs gamma >= 0, got {gamma}")
        return cls("log_power", gamma=float(gamma))

    @classmethod
    def from_callable(cls, fn, label="custom"):
        return cls("custom", fn=fn, label=label)

    def __call__(self, t):
        t = float(t)
        if t <= 0.0:
            return 0.0
        if self.kind == "log_power":
            return math.log(math.e / t) ** (-self.gamma)
        return float(self._fn(t))

    def apply(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "log_power":
            out = np.where(t > 0, np.log(math.e / np.maximum(t, 1e-300)) ** (-self.gamma), 0.0)
            return out
        return np.array([self(x) for x in np.atleast_1d(t)])

    def validate(self, grid=None):
        """Spot-check monotonicity and quasiconcavity (phi(t)/t decreasing)."""
        if grid is None:
            grid = np.geomspace(1e-8, 1.0, 200)
        vals = self.apply(grid)
        if np.any(np.diff(vals) < -1e-12):
            raise InvalidArgumentError("weight fails the monotonicity spot-check")
        ratio = vals / grid
        if np.any(np.diff(ratio) > 1e-9 * ratio[:-1]):
            raise InvalidArgumentError("weight fails the phi(t)/t monotonicity spot-check")
        return True


# ---------------------------------------------------------------------------
# Space descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpaceSpec:
    """Descriptor of one symmetric-space norm."""

    kind: str
    p: float | None = None
    orlicz_fn: OrliczFunction | None = None
    weight: ConcaveWeight | None = None
    r: float | None = None
    method: str = "orlicz-bisection"
    p_grid: tuple = DEFAULT_P_GRID

    @classmethod
    def lp(cls, p):
        if p < 1:
            raise InvalidArgumentError(f"L_p needs p >= 1, got {p}")
        return cls("lp", p=float(p))

    @classmethod
    def linf(cls):
        return cls("linf")

    @classmethod
    def orlicz(cls, fn):
        return cls("orlicz", orlicz_fn=fn)

    @classmethod
    def lorentz(cls, weight):
        return cls("lorentz", weight=weight)

    @classmethod
    def marcinkiewicz(cls, weight):
        return cls("marcinkiewicz", weight=weight)

    @classmethod
    def exp_lr(cls, r, method="orlicz-bisection", p_grid=DEFAULT_P_GRID):
        if r <= 0:
            raise InvalidArgumentError(f"ExpL^r needs r > 0, got {r}")
        if method not in ("orlicz-bisection", "extrapolation"):
            raise InvalidArgumentError(f"unknown ExpL^r method {method!r}")
        return cls("explr", r=float(r), method=method, p_grid=tuple(float(p) for p in p_grid))

    def describe(self):
        if self.kind == "lp":
            return f"L_{self.p:g}"
        if self.kind == "linf":
            return "L_inf"
        if self.kind == "orlicz":
            return f"Orlicz({self.orlicz_fn.kind}:{self.orlicz_fn.param:g})"
        if self.kind in ("lorentz", "marcinkiewicz"):
            return f"{self.kind}({self.weight.label})"
        return f"ExpL^{self.r:g}[{self.method}]"


# ---------------------------------------------------------------------------
# Rearrangement
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RearrangementStep:
    """Decreasing rearrangement of a finite distribution.

    x*(t) equals ``values[i]`` on (breakpoints[i], breakpoints[i+1]];
    values are non-increasing and the last breakpoint is 1.
    """

    breakpoints: np.ndarray  # length K+1, starts at 0.0, ends at 1.0
    values: np.ndarray  # length K, non-increasing, >= 0


def decreasing_rearrangement(dist: StepDistribution) -> RearrangementStep:
    """Sort |values| descending and accumulate weights into plateaus."""
    absdist = dist.abs_distribution()
    vals = absdist.values[::-1].copy()
    wts = absdist.weights[::-1].copy()
    cuts = np.concatenate([[0.0], np.cumsum(wts)])
    cuts[-1] = 1.0  # float dust
    return RearrangementStep(cuts, vals)


# ---------------------------------------------------------------------------
# Norms
# ---------------------------------------------------------------------------


def norm(dist: StepDistribution, space: SpaceSpec, tol: float = DEFAULT_TOL) -> float:
    """Norm of (any function with) the given distribution in the space."""
    if tol <= 0:
        raise InvalidArgumentError("tolerance must be positive")
    if space.kind == "lp":
        return dist.lp_norm(space.p)
    if space.kind == "linf":
        return dist.max_abs()
    if space.kind == "orlicz":
        return luxemburg_norm(dist, space.orlicz_fn, tol)
    if space.kind == "lorentz":
        return _lorentz_norm(dist, space.weight)
    if space.kind == "marcinkiewicz":
        return _marcinkiewicz_norm(dist, space.weight, tol)
    if space.kind == "explr":
        if space.method == "extrapolation":
            return max(dist.lp_norm(p) / p ** (1.0 / space.r) for p in space.p_grid)
        return luxemburg_norm(dist, OrliczFunction.exponential(space.r), tol)
    raise InvalidArgumentError(f"unknown space kind {space.kind!r}")


def luxemburg_norm(dist: StepDistribution, fn: OrliczFunction, tol: float = DEFAULT_TOL) -> float:
    """inf { lam > 0 : sum M(|v_i| / lam) w_i <= 1 } by bracketing + bisection.

    The modular is strictly decreasing in lam for a non-zero distribution,
    so the bracket is found by doubling (or halving) from ||x||_1.
    """
    vals = np.abs(dist.values)
    wts = dist.weights
    if float(vals.max()) == 0.0:
        return 0.0

    def modular(lam):
        return float(np.sum(fn.apply(vals / lam) * wts))

    lam = float(np.sum(vals * wts))
    if lam == 0.0:
        lam = float(vals.max())
    if modular(lam) <= 1.0:
        hi = lam
        lo = lam
        for _ in range(_BRACKET_STEPS):
            lo *= 0.5
            if modular(lo) > 1.0:
                break
            hi = lo
        else:
            raise NumericFailureError("Luxemburg bracketing failed: modular stuck below 1")
    else:
        lo = lam
        hi = lam
        for _ in range(_BRACKET_STEPS):
            hi *= 2.0
            if modular(hi) <= 1.0:
                break
            lo = hi
        else:
            raise NumericFailureError(
                f"Luxemburg bracketing failed after {_BRACKET_STEPS} doublings"
            )
    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        if modular(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def _lorentz_norm(dist, weight):
    """integral of x* d(phi) as a finite Stieltjes sum over the plateaus."""
    rr = decreasing_rearrangement(dist)
    total = 0.0
    prev = 0.0  # phi(0) = 0 by definition of the weight class
    for t, v in zip(rr.breakpoints[1:], rr.values):
        cur = weight(t)
        total += v * (cur - prev)
        prev = cur
    return total


def _marcinkiewicz_norm(dist, weight, tol):
    """sup_t phi(t)/t * integral_0^t x*, maximized per plateau segment.

    On each segment the running integral is affine in t, so the objective
    is smooth but not monotone; each segment gets a coarse scan plus a
    bounded scalar search, and all breakpoints are evaluated exactly.
    """
    rr = decreasing_rearrangement(dist)
    if float(rr.values[0]) == 0.0:
        return 0.0
    best = 0.0
    area = 0.0
    for i, v in enumerate(rr.values):
        t0, t1 = rr.breakpoints[i], rr.breakpoints[i + 1]

        def objective(t, t0=t0, area=area, v=v):
            return weight(t) * (area + v * (t - t0)) / t

        best = max(best, objective(t1))
        if t0 > 0.0:
            best = max(best, objective(t0))
        grid = np.linspace(t0, t1, 34)[1:]
        gv = [objective(t) for t in grid]
        k = int(np.argmax(gv))
        best = max(best, gv[k])
        lo = grid[k - 1] if k > 0 else max(t0, 1e-300)
        hi = grid[k + 1] if k + 1 < len(grid) else t1
        res = optimize.minimize_scalar(
            lambda t: -objective(t),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": max(tol * t1, 1e-15)},
        )
        if res.success:
            best = max(best, -float(res.fun))
        area += v * (t1 - t0)
    return best


def fundamental_function(space: SpaceSpec, t: float, tol: float = DEFAULT_TOL) -> float:
    """Norm of the indicator of a set of measure t in the space."""
    if not 0.0 < t <= 1.0:
        raise InvalidArgumentError(f"measure must lie in (0, 1], got {t}")
    return norm(StepDistribution.indicator(t), space, tol)


# ---------------------------------------------------------------------------
# Coincidence and Fubini certificates
# ---------------------------------------------------------------------------


def coincidence_check(
    fn: OrliczFunction,
    weight: ConcaveWeight,
    eps: float,
    grid: int = 64,
    tol: float = DEFAULT_TOL,
    t_min: float = 1e-8,
):
    """Certificate for the Orlicz/Marcinkiewicz coincidence conditions.

    Reports (i) the range of phi(t) * M^{-1}(1/t) over a log-spaced grid
    (the two-sided equivalence of the fundamental functions) and (ii) a
    numeric verdict on the finiteness of integral_0^1 M(eps / phi(t)) dt,
    computed over geometrically shrinking slabs toward 0 until the tail
    is negligible or clearly fails to decay.
    """
    if eps <= 0:
        raise InvalidArgumentError("eps must be positive")
    if grid < 16:
        raise InvalidArgumentError("ratio grid needs at least 16 points")

    with timed_report(
        "orlicz-marcinkiewicz-coincidence",
        {"eps": eps, "grid": grid, "tol": tol, "t_min": t_min, "weight": weight.label},
    ) as report:
        ts = np.geomspace(t_min, 1.0, grid)
        ratio = np.array([weight(t) * fn.inverse(1.0 / t) for t in ts])
        if not np.all(np.isfinite(ratio)):
            raise NumericFailureError("fundamental-function ratio is non-finite on the grid")
        ratio_min, ratio_max = float(ratio.min()), float(ratio.max())

        def integrand(t):
            return fn(eps / weight(t))

        total = 0.0
        prev_slab = None
        finite = None
        tail = 0.0
        stalls = 0
        hi = 1.0
        for k in range(500):
            lo = hi * 0.5
            mid = integrand(math.sqrt(lo * hi))
            if not math.isfinite(mid):
                if stalls > 0 or (prev_slab is not None and total > 1e6):
                    finite = False  # blow-up while the slabs were already growing
                    break
                raise NumericFailureError(
                    f"integrand is non-finite at an interior point near t={lo:g}"
                )
            slab, _ = integrate.quad(integrand, lo, hi, limit=100)
            total += slab
            if prev_slab is not None:
                if slab >= prev_slab * (1.0 - 1e-9):
                    # the measure halves but the contribution does not decay
                    stalls += 1
                    if stalls >= 3:
                        finite = False
                        break
                else:
                    stalls = 0
                    rho = slab / prev_slab
                    tail = slab * rho / (1.0 - rho)
                    if tail < tol * max(1.0, total):
                        finite = True
                        break
            if total > 1e12:
                finite = False
                break
            prev_slab = slab
            hi = lo
        if finite is None:
            raise NumericFailureError("slab refinement did not settle finiteness")

        report.add("ratio_min", ratio_min, "info")
        report.add("ratio_max", ratio_max, "info")
        report.add(
            "ratio_spread",
            ratio_max / ratio_min if ratio_min > 0 else math.inf,
            "info",
        )
        report.add("ratio_positive", 1.0 if ratio_min > 0 else 0.0, "==", 1.0)
        report.add("integral_estimate", total + (tail if finite else 0.0), "info")
        report.add("integral_finite", 1.0 if finite else 0.0, "==", 1.0)
    return report


def fubini_orlicz_check(z, fn: OrliczFunction, tol: float = DEFAULT_TOL):
    """Check the two-sided Orlicz bound for a kernel on a dyadic product grid.

    For z given cellwise on a (u, t) grid, verifies that the u-average of
    the Orlicz norms of the t-slices is at most twice the maximal Orlicz
    norm of a u-slice.
    """
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        raise InvalidArgumentError("kernel matrix is empty")
    if z.ndim != 2:
        raise InvalidArgumentError("kernel must be a 2-d matrix")
    rows, cols = z.shape
    if rows & (rows - 1) or cols & (cols - 1):
        raise InvalidArgumentError(f"grid dimensions must be powers of two, got {z.shape}")

    with timed_report(
        "fubini-orlicz", {"shape": f"{rows}x{cols}", "orlicz": fn.kind, "tol": tol}
    ) as report:
        wr = np.full(cols, 1.0 / cols)
        wc = np.full(rows, 1.0 / rows)
        lhs = float(
            np.mean([luxemburg_norm(StepDistribution(z[i], wr), fn, tol) for i in range(rows)])
        )
        rhs = 2.0 * max(
            luxemburg_norm(StepDistribution(z[:, j], wc), fn, tol) for j in range(cols)
        )
        report.add("avg_row_norm", lhs, "<=", rhs, tol=1e-12)
        report.add("double_max_col_norm", rhs, "info")
    return report
