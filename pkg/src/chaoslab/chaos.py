"""Quantitative certificates for Rademacher chaos systems.

Khintchine/Szarek moment bounds, moment growth tables, random sign
averages (the RUD functional), sup-norm concentration of randomized
chaos with Bernstein tails, fundamental-function lower bounds, and the
sum-set combinatorics driving asymptotic normality of the normalized
chaos sums.  All checks enumerate exactly and fall back to seeded,
counter-based Monte Carlo only where a cap demands it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .combdim import BlockChoice, gen_triangle
from .distribution import StepDistribution
from .errors import InvalidArgumentError, NumericFailureError, ResourceLimitError
from .parallel import map_chunks
from .report import CertificateReport, timed_report
from .symspace import SpaceSpec, fundamental_function, norm
from .walsh import (
    DEFAULT_BITS_CAP,
    IndexSet,
    MultiIndex,
    SignFunction,
    chaos_sum,
    distribution_exact,
    unit_coefficients,
)

KHINTCHINE_MAX_COEFFS = 20
RUD_EXACT_MAX = 20
_PATTERN_CHUNK = 1 << 14
_SWEEP_BITS_CAP = 28  # pattern bits + configuration bits of one sweep
CLT_PAIR_BUDGET = 10_000_000


@dataclass(frozen=True)
class VerificationParams:
    """Density and unconditionality parameters of one verification setup.

    alpha/beta are the super/sub density exponents, b the exponent of the
    target exponential space, delta the realized exponent log_n |A ∩ B|,
    and rud_constant a candidate for the random-divergence constant.
    """

    d: int
    alpha: float
    beta: float
    b: float
    delta: float = 0.0
    rud_constant: float = 1.0

    def __post_init__(self):
        if not 1 <= self.alpha <= self.beta <= self.d:
            raise InvalidArgumentError("need 1 <= alpha <= beta <= d")
        if not 1 <= self.b <= self.d:
            raise InvalidArgumentError("need 1 <= b <= d")
        if not 0 <= self.delta <= self.d:
            raise InvalidArgumentError("need 0 <= delta <= d")

    @property
    def hypothesis_margin(self):
        """Positive iff the density hypothesis alpha + b/beta > b + 1 holds."""
        return self.alpha + self.b / self.beta - (self.b + 1.0)


def _normal_cdf(x):
    return 0.5 * (1.0 + math.erf(x / math.sqrt(2.0)))


# ---------------------------------------------------------------------------
# Khintchine / moment growth
# ---------------------------------------------------------------------------


def khintchine_check(a, p) -> CertificateReport:
    """Exact p-norm of sum a_j r_j against the two-sided Khintchine bounds.

    Lower bound ||a||_2 / sqrt(2) holds for every p >= 1; the upper bound
    sqrt(max(p, 2)) ||a||_2 combines monotonicity of the moments with the
    sqrt(p) growth of the optimal constants.
    """
    a = [float(x) for x in a]
    if not a:
        raise InvalidArgumentError("coefficient list is empty")
    if len(a) > KHINTCHINE_MAX_COEFFS:
        raise ResourceLimitError(
            f"{len(a)} coefficients exceed the exact enumeration cap of "
            f"{KHINTCHINE_MAX_COEFFS}",
            required=len(a),
            budget=KHINTCHINE_MAX_COEFFS,
        )
    p = float(p)
    if p < 1:
        raise InvalidArgumentError(f"need p >= 1, got {p}")
    with timed_report("khintchine", {"k": len(a), "p": p}) as report:
        f = chaos_sum({(j,): c for j, c in enumerate(a, start=1)})
        value = distribution_exact(f, bits_cap=len(a)).lp_norm(p)
        l2 = math.sqrt(sum(c * c for c in a))
        report.add("norm_l2_coeffs", l2, "info")
        report.add("moment", value, ">=", l2 / math.sqrt(2.0), tol=1e-12)
        report.add("moment_upper", value, "<=", math.sqrt(max(p, 2.0)) * l2, tol=1e-12)
    return report


@dataclass(frozen=True)
class MomentTable:
    """Exact p-norms with the fitted growth exponent of log||f||_p in log p."""

    rows: tuple  # of (p, norm)
    theta: float


def moment_table(f: SignFunction, p_list, bits_cap=DEFAULT_BITS_CAP) -> MomentTable:
    p_list = [float(p) for p in p_list]
    if not p_list or any(p < 1 for p in p_list):
        raise InvalidArgumentError("p_list must be nonempty with all p >= 1")
    dist = distribution_exact(f, bits_cap)
    rows = tuple((p, dist.lp_norm(p)) for p in p_list)
    norms = np.array([r[1] for r in rows])
    if len(rows) < 2 or np.any(norms <= 0):
        theta = 0.0
    else:
        theta = float(np.polyfit(np.log([r[0] for r in rows]), np.log(norms), 1)[0])
    return MomentTable(rows, theta)


def blei_bound_check(
    A: IndexSet, coeffs=None, beta=None, p_list=(1, 2, 4, 8, 16), bits_cap=DEFAULT_BITS_CAP
) -> CertificateReport:
    """Moment ratios ||S||_p / (p^(beta/2) ||a||_2) over a p range.

    The sharp constant in the p^(beta/2) moment bound is not pinned down,
    so the certificate only records the ratios and asserts that their
    maximum is finite and attained at a recorded p.
    """
    if beta is None:
        beta = float(A.order)
    if coeffs is None:
        coeffs = unit_coefficients(A)
    with timed_report(
        "blei-moment-bound", {"size": len(coeffs), "beta": beta, "p_list": tuple(p_list)}
    ) as report:
        f = chaos_sum(coeffs)
        dist = distribution_exact(f, bits_cap)
        l2 = math.sqrt(sum(c * c for c in coeffs.values()))
        best, best_p = -math.inf, None
        for p in p_list:
            p = float(p)
            ratio = dist.lp_norm(p) / (p ** (beta / 2.0) * l2)
            report.add(f"ratio_p{p:g}", ratio, "info")
            if ratio > best:
                best, best_p = ratio, p
        report.add("max_ratio", best, "info")
        report.add("max_ratio_at_p", best_p, "info")
        report.add("max_ratio_finite", 1.0 if math.isfinite(best) else 0.0, "==", 1.0)
    return report


# ---------------------------------------------------------------------------
# Random sign averages (RUD functional)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RudAverage:
    """Sign-averaged norm of a chaos sum versus its deterministic norm."""

    average: float
    deterministic_norm: float
    ratio: float
    stderr: float | None
    mode: str


def rud_average(
    Aprime: IndexSet,
    coeffs=None,
    space: SpaceSpec = None,
    samples=None,
    seed=0,
    bits_cap=DEFAULT_BITS_CAP,
    tol=1e-10,
) -> RudAverage:
    """Average over sign patterns u of || sum_j u_j a_j r_j ||_X.

    Exact mode (samples=None) enumerates all 2^|A'| patterns; Monte Carlo
    mode draws seeded patterns and reports a standard error.  The ratio
    deterministic / average is the empirical divergence constant.
    """
    if space is None:
        raise InvalidArgumentError("a SpaceSpec is required")
    elements = list(Aprime.tuples())
    if not elements:
        raise InvalidArgumentError("index set is empty")
    if coeffs is None:
        coeffs = {t: 1.0 for t in elements}
    else:
        coeffs = {MultiIndex(k): float(v) for k, v in coeffs.items()}
        missing = [t for t in elements if t not in coeffs]
        if missing:
            raise InvalidArgumentError(f"coefficients missing for {len(missing)} elements")
    base = np.array([coeffs[t] for t in elements])
    m = len(elements)

    det = norm(distribution_exact(chaos_sum(coeffs), bits_cap), space, tol)

    def pattern_norm(signs):
        g = SignFunction(dict(zip(elements, base * signs)))
        return norm(distribution_exact(g, bits_cap), space, tol)

    if samples is None:
        if m > RUD_EXACT_MAX:
            raise ResourceLimitError(
                f"exact sign average over 2^{m} patterns exceeds the cap "
                f"2^{RUD_EXACT_MAX}; pass samples= for Monte Carlo",
                required=m,
                budget=RUD_EXACT_MAX,
            )
        total = 0.0
        for pattern in range(1 << m):
            signs = 1.0 - 2.0 * ((pattern >> np.arange(m)) & 1)
            total += pattern_norm(signs)
        avg = total / (1 << m)
        se = None
        mode = "exact"
    else:
        samples = int(samples)
        if samples < 1:
            raise InvalidArgumentError("sample count must be >= 1")
        rng = np.random.Generator(np.random.Philox(key=seed))
        draws = 1.0 - 2.0 * rng.integers(0, 2, size=(samples, m)).astype(float)
        vals = np.array([pattern_norm(draws[i]) for i in range(samples)])
        avg = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(samples)) if samples > 1 else math.inf
        mode = "mc"
    return RudAverage(avg, det, det / avg, se, mode)


# ---------------------------------------------------------------------------
# Concentration of the randomized sup-norm
# ---------------------------------------------------------------------------


def _monomial_config_matrix(elements, support):
    """(2^s, m) matrix of monomial values over all support configurations."""
    pos = {j: b for b, j in enumerate(support)}
    cfg = np.arange(1 << len(support), dtype=np.uint64)
    cols = []
    for t in elements:
        mask = np.uint64(sum(1 << pos[j] for j in t))
        x = cfg & mask
        for s in (32, 16, 8, 4, 2, 1):
            x = x ^ (x >> np.uint64(s))
        cols.append(1.0 - 2.0 * (x & np.uint64(1)).astype(np.float32))
    return np.stack(cols, axis=1)


def sign_concentration_check(A: IndexSet, B: BlockChoice, d=None, threshold=None):
    """Exact exceedance of the randomized sup-norm against Bernstein tails.

    For the chaos over A ∩ B with blocks of size n, computes the fraction
    q of sign patterns whose randomized sum exceeds sqrt(2d) n^((delta+1)/2)
    in sup-norm (delta the realized density exponent), and checks both
    q <= 2 (e/2)^(-dn) and the pointwise tail bound 2 exp(-lambda^2 / 2|A∩B|)
    at every configuration.  ``threshold`` overrides the default lambda.
    """
    if not isinstance(B, BlockChoice):
        B = BlockChoice(B)
    if d is None:
        d = A.order
    if d != A.order or B.order != d:
        raise InvalidArgumentError(
            f"order mismatch: set order {A.order}, blocks {B.order}, d={d}"
        )
    AB = A.block_elements(B)
    m = len(AB)
    if m == 0:
        raise InvalidArgumentError("A does not meet the block product")
    n = B.n
    elements = list(AB.tuples())
    support = sorted({j for t in elements for j in t})
    s = len(support)
    if m > 24 or s > 24 or m + s > _SWEEP_BITS_CAP:
        raise ResourceLimitError(
            f"double enumeration needs {m} pattern bits + {s} configuration bits; "
            f"cap is 24 each and {_SWEEP_BITS_CAP} combined — use smaller blocks",
            required=m + s,
            budget=_SWEEP_BITS_CAP,
        )
    delta = math.log(m) / math.log(n) if n > 1 else 0.0
    lam = math.sqrt(2.0 * d * n * m) if threshold is None else float(threshold)

    with timed_report(
        "sign-concentration",
        {"d": d, "n": n, "intersection": m, "support_bits": s, "threshold": lam},
    ) as report:
        S = _monomial_config_matrix(elements, support)  # (2^s, m)
        n_cfg = S.shape[0]
        # keep each chunk's pattern x configuration block around 64 MB
        chunk = max(1, min(_PATTERN_CHUNK, (1 << 24) // n_cfg))
        starts = list(range(0, 1 << m, chunk))

        def sweep(start):
            stop = min(start + chunk, 1 << m)
            idx = np.arange(start, stop, dtype=np.uint64)
            bits = (idx[:, None] >> np.arange(m, dtype=np.uint64)[None, :]) & np.uint64(1)
            U = (1.0 - 2.0 * bits).astype(np.float32)
            G = np.abs(U @ S.T)
            exceed = G > lam
            return int(np.count_nonzero(exceed.any(axis=1))), exceed.sum(axis=0, dtype=np.int64)

        sup_count = 0
        col_counts = np.zeros(n_cfg, dtype=np.int64)
        for cnt, cols in map_chunks(sweep, starts):
            sup_count += cnt
            col_counts += cols

        patterns = float(1 << m)
        q = sup_count / patterns
        point_bound = 2.0 * math.exp(-(lam**2) / (2.0 * m))
        # union over the at most 2^{dn} sign vectors of the monomial family;
        # at the default threshold this is exactly 2 (e/2)^{-dn}
        q_bound = 2.0 ** (d * n) * point_bound
        report.add("delta", delta, "info")
        report.add("sup_exceedance_fraction", q, "<=", q_bound)
        report.add(
            "pointwise_tail_max", float(col_counts.max()) / patterns, "<=", point_bound
        )
        report.add("pointwise_tail_min", float(col_counts.min()) / patterns, "info")
    return report


def averaged_sup_growth(d, n_list, mc_samples=1000, seed=0):
    """Growth of deterministic / sign-averaged sup-norm over full triangles.

    For each n the chaos runs over the full triangle on {1..n}; the
    deterministic sup-norm is the set size (all monomials are +1 near 0),
    the averaged one is estimated from seeded sign patterns.  The report
    checks that the ratio R(n) increases along n_list within three
    standard errors.
    """
    n_list = [int(n) for n in n_list]
    if len(n_list) < 2 or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise InvalidArgumentError("n_list must be strictly increasing with >= 2 entries")
    if n_list[-1] > 20:
        raise ResourceLimitError(
            f"2^{n_list[-1]} configurations exceed the sweep cap 2^20",
            required=n_list[-1],
            budget=20,
        )
    mc_samples = int(mc_samples)
    if mc_samples < 2:
        raise InvalidArgumentError("need at least 2 samples")

    with timed_report(
        "averaged-sup-growth", {"d": d, "n_list": tuple(n_list), "samples": mc_samples, "seed": seed}
    ) as report:
        ratios = []
        for idx, n in enumerate(n_list):
            A = gen_triangle(d, n)
            elements = list(A.tuples())
            support = sorted({j for t in elements for j in t})
            S = _monomial_config_matrix(elements, support)
            det = float(np.abs(S.sum(axis=1)).max())
            rng = np.random.Generator(np.random.Philox(key=seed, counter=idx << 96))
            U = (1.0 - 2.0 * rng.integers(0, 2, size=(mc_samples, len(elements)))).astype(
                np.float32
            )
            sups = np.abs(U @ S.T).max(axis=1)
            avg = float(sups.mean())
            se = float(sups.std(ddof=1) / math.sqrt(mc_samples))
            R = det / avg
            se_R = det * se / avg**2
            ratios.append((n, R, se_R))
            report.add(f"deterministic_sup_n{n}", det, "info")
            report.add(f"averaged_sup_n{n}", avg, "info")
            report.add(f"ratio_n{n}", R, "info")
            report.add(f"ratio_se_n{n}", se_R, "info")
        for (n0, r0, s0), (n1, r1, s1) in zip(ratios, ratios[1:]):
            report.add(f"ratio_increase_{n0}_to_{n1}", r1 - r0, ">=", 0.0, tol=3.0 * (s0 + s1))
    return report


def lower_bound_check(A: IndexSet, B: BlockChoice, space: SpaceSpec, tol=1e-10, bits_cap=DEFAULT_BITS_CAP):
    """Norm of the block chaos against |A ∩ B| phi_X(2^{-dn}).

    On the cell where every participating Rademacher function is +1 the
    sum takes the value |A ∩ B|, so the norm dominates the indicator bound
    through the fundamental function.
    """
    if not isinstance(B, BlockChoice):
        B = BlockChoice(B)
    if B.order != A.order:
        raise InvalidArgumentError("block order must match the set order")
    AB = A.block_elements(B)
    m = len(AB)
    if m == 0:
        raise InvalidArgumentError("A does not meet the block product")
    d, n = A.order, B.n
    with timed_report(
        "fundamental-lower-bound",
        {"d": d, "n": n, "intersection": m, "space": space.describe()},
    ) as report:
        f = chaos_sum(unit_coefficients(AB))
        lhs = norm(distribution_exact(f, bits_cap), space, tol)
        rhs = m * fundamental_function(space, 2.0 ** (-d * n), tol)
        report.add("chaos_norm", lhs, ">=", rhs, tol=1e-9)
        report.add("indicator_bound", rhs, "info")
    return report


# ---------------------------------------------------------------------------
# Sum-set combinatorics for asymptotic normality
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StarCounts:
    """Per-index incidence counts of A_N: how many elements contain k."""

    counts: np.ndarray  # counts[k-1] = |{t in A_N : k in t}|
    max_count: int
    argmax_k: int
    ratio: float  # max_count / |A_N|


def clt_star(A: IndexSet, N) -> StarCounts:
    """Exact |A*_{N,k}| for all k in [1, N] plus the normalized maximum."""
    N = int(N)
    if N < 3:
        raise InvalidArgumentError(f"need N >= 3, got {N}")
    arr = A.restrict(N).to_array()
    if arr.shape[0] == 0:
        raise InvalidArgumentError(f"A restricted to entries <= {N} is empty")
    counts = np.bincount(arr.ravel(), minlength=N + 1)[1:]
    max_count = int(counts.max())
    argmax_k = int(np.argmax(counts) + 1)
    ratio = max_count / arr.shape[0]
    if A.structure == "sum-set" and max_count > 3 * N:
        raise NumericFailureError(
            f"sum-set incidence bound violated: {max_count} > 3N={3 * N}"
        )  # pragma: no cover - impossible unless the generator is broken
    return StarCounts(counts, max_count, argmax_k, ratio)


def clt_sharp(A: IndexSet, N, budget=CLT_PAIR_BUDGET):
    """Ordered pairs of disjoint-support elements whose entry union recurs.

    A pair (u, v) from A_N with disjoint entry sets qualifies when some
    pair (u1, v1) in A_N has the same 2d-element entry union with
    u1 distinct from both u and v.  Equivalently, the union must be
    decomposable into disjoint element pairs in more than one way.
    """
    N = int(N)
    if A.order < 2:
        raise InvalidArgumentError("sharp pairs need order >= 2")
    arr = A.restrict(N).to_array()
    size = arr.shape[0]
    if size * size > budget:
        raise ResourceLimitError(
            f"{size}^2 element pairs exceed the budget of {budget}",
            required=size * size,
            budget=budget,
        )
    elems = [tuple(int(v) for v in row) for row in arr]
    supports = [frozenset(t) for t in elems]
    groups = {}
    for i in range(size):
        si = supports[i]
        for j in range(i + 1, size):
            if si.isdisjoint(supports[j]):
                key = tuple(sorted(si | supports[j]))
                groups.setdefault(key, []).append((i, j))
    out = []
    for pairs in groups.values():
        if len(pairs) < 2:
            continue
        for i, j in pairs:
            out.append((MultiIndex(elems[i]), MultiIndex(elems[j])))
            out.append((MultiIndex(elems[j]), MultiIndex(elems[i])))
    out.sort()
    return out


def clt_criteria(A: IndexSet, N_list, star_threshold=0.15, sharp_threshold=1e-12):
    """Normality criteria table: incidence and recurring-union ratios per N.

    Passes when both ratio columns are non-increasing along N_list and
    their final values are below the configured thresholds.
    """
    N_list = [int(N) for N in N_list]
    if len(N_list) < 1 or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise InvalidArgumentError("N_list must be strictly increasing")
    with timed_report(
        "clt-criteria",
        {
            "N_list": tuple(N_list),
            "star_threshold": star_threshold,
            "sharp_threshold": sharp_threshold,
        },
    ) as report:
        star_ratios, sharp_ratios = [], []
        for N in N_list:
            card = len(A.restrict(N))
            star = clt_star(A, N)
            sharp = clt_sharp(A, N)
            s_ratio = star.ratio
            sh_ratio = len(sharp) / card**2
            star_ratios.append(s_ratio)
            sharp_ratios.append(sh_ratio)
            report.add(f"card_N{N}", card, "info")
            report.add(f"star_ratio_N{N}", s_ratio, "info")
            report.add(f"sharp_ratio_N{N}", sh_ratio, "info")
        for k in range(1, len(N_list)):
            report.add(
                f"star_nonincreasing_N{N_list[k]}",
                star_ratios[k],
                "<=",
                star_ratios[k - 1],
                tol=1e-12,
            )
            report.add(
                f"sharp_nonincreasing_N{N_list[k]}",
                sharp_ratios[k],
                "<=",
                sharp_ratios[k - 1],
                tol=1e-12,
            )
        report.add("star_ratio_final", star_ratios[-1], "<=", star_threshold)
        report.add("sharp_ratio_final", sharp_ratios[-1], "<=", sharp_threshold)
    return report


@dataclass(frozen=True)
class NormalizedSum:
    """Exact law of the L2-normalized chaos sum with its normal distance."""

    distribution: StepDistribution
    l2_norm: float
    ks_distance: float
    size: int  # |A_N|


def normalized_sum_cdf(A: IndexSet, N, bits_cap=DEFAULT_BITS_CAP) -> NormalizedSum:
    """Distribution of S_N = |A_N|^{-1/2} sum of monomials, and its
    Kolmogorov distance to the standard normal law.

    The distance sup_x |F(x) - Phi(x)| of a step CDF is attained at an
    atom from one side or the other, so both one-sided limits are checked
    at every atom.
    """
    N = int(N)
    arr = A.restrict(N)
    m = len(arr)
    if m == 0:
        raise InvalidArgumentError(f"A restricted to entries <= {N} is empty")
    f = chaos_sum(unit_coefficients(arr)) * (1.0 / math.sqrt(m))
    dist = distribution_exact(f, bits_cap)
    l2 = dist.lp_norm(2)
    F = dist.cdf()
    ks = 0.0
    prev = 0.0
    for x, Fx in zip(dist.values.tolist(), F.tolist()):
        phi = _normal_cdf(x)
        ks = max(ks, abs(Fx - phi), abs(prev - phi))
        prev = Fx
    return NormalizedSum(dist, l2, ks, m)
