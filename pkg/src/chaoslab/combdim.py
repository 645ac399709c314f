"""Block densities and combinatorial dimension of index sets.

The density of an index set A over a block choice (B_1, ..., B_d) of
equal-size integer sets is |A ∩ (B_1 × ... × B_d)|.  Lower bounds of the
form max-density >= c n^alpha (over some blocks, for each n) and upper
bounds <= C n^beta (over all blocks) are what the super-alpha / sub-beta
certificates quantify, and the least-squares growth exponent of the best
counts is the empirical combinatorial dimension.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateFitError, InvalidArgumentError, ResourceLimitError
from .report import timed_report
from .walsh import IndexSet, MultiIndex

EXHAUSTIVE_BUDGET = 1_000_000
STRATEGIES = ("exhaustive", "greedy-swap", "identity-blocks")


@dataclass(frozen=True)
class BlockChoice:
    """d blocks of distinct positive integers, all of one size n."""

    blocks: tuple

    def __init__(self, blocks):
        blocks = tuple(tuple(sorted({int(v) for v in b})) for b in blocks)
        if not blocks:
            raise InvalidArgumentError("block choice needs at least one block")
        n = len(blocks[0])
        if n < 1:
            raise InvalidArgumentError("blocks must be nonempty")
        if any(len(b) != n for b in blocks):
            raise InvalidArgumentError("all blocks must have equal size")
        if any(b[0] < 1 for b in blocks):
            raise InvalidArgumentError("block entries must be positive integers")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def identity(cls, order, n):
        return cls(tuple(tuple(range(1, n + 1)) for _ in range(order)))

    @property
    def order(self):
        return len(self.blocks)

    @property
    def n(self):
        return len(self.blocks[0])

    def __iter__(self):
        return iter(self.blocks)


@dataclass(frozen=True)
class ProfileRow:
    n: int
    best_count: int
    witness: BlockChoice
    strategy: str


@dataclass(frozen=True)
class DensityProfile:
    """Best block counts per n with the fitted growth exponent."""

    rows: tuple
    alpha_hat: float
    r_squared: float


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def gen_triangle(d, max_index):
    """Full triangle: all strictly decreasing d-tuples with entries <= max_index.

    Held implicitly, so huge triangles stay cheap; materialization happens
    only on demand and only when affordably small.
    """
    d, max_index = int(d), int(max_index)
    if d < 1 or max_index < d:
        raise InvalidArgumentError(f"need max_index >= order >= 1, got order={d}, max={max_index}")
    return IndexSet.triangle(d, max_index)


def gen_sum_set(max_entry):
    """The order-3 sum set {(i+j, j, i) : 1 <= i < j, i+j <= max_entry}."""
    N = int(max_entry)
    if N < 3:
        raise InvalidArgumentError(f"sum set needs max entry >= 3, got {N}")
    i, j = np.meshgrid(np.arange(1, N), np.arange(1, N), indexing="ij")
    keep = (i < j) & (i + j <= N)
    ii, jj = i[keep], j[keep]
    rows = np.stack([ii + jj, jj, ii], axis=1)
    return IndexSet(3, array=rows, structure="sum-set")


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------


def density_count(A: IndexSet, blocks) -> int:
    """Exact |A ∩ (B_1 × ... × B_d)|."""
    if isinstance(blocks, BlockChoice):
        blocks = blocks.blocks
    return A.count_block(blocks)


def _union_mask(masks, values):
    m = 0
    for v in values:
        m |= masks.get(v, 0)
    return m


def max_density(A: IndexSet, n, universe, strategy="exhaustive"):
    """Best block density of A at block size n, by the chosen strategy.

    exhaustive      true maximum over all block choices from [1, universe]
                    (budget-limited; ties resolved to the lexicographically
                    smallest witness)
    greedy-swap     local maximum from identity blocks via single-element
                    swaps, first-improvement in a fixed scan order
    identity-blocks the count for B_i = {1, ..., n}
    """
    n, universe = int(n), int(universe)
    if strategy not in STRATEGIES:
        raise InvalidArgumentError(f"unknown strategy {strategy!r}; expected one of {STRATEGIES}")
    if n < 1 or n > universe:
        raise InvalidArgumentError(f"need 1 <= n <= universe, got n={n}, universe={universe}")
    d = A.order

    if strategy == "identity-blocks" or n == universe:
        # n == universe forces B_i = {1..universe} under every strategy
        blocks = BlockChoice.identity(d, n)
        return density_count(A, blocks), blocks

    if strategy == "exhaustive":
        per_coord = math.comb(universe, n)
        cost = per_coord**d
        if cost > EXHAUSTIVE_BUDGET:
            raise ResourceLimitError(
                f"exhaustive search over {cost} block choices exceeds the budget "
                f"of {EXHAUSTIVE_BUDGET}",
                required=cost,
                budget=EXHAUSTIVE_BUDGET,
            )
        # element rows as bitset positions: one AND + popcount per block choice
        arr = A.to_array()
        value_masks = []
        for i in range(d):
            col = arr[:, i]
            masks = {}
            for row, v in enumerate(col.tolist()):
                masks[v] = masks.get(v, 0) | (1 << row)
            value_masks.append(masks)
        candidates = list(itertools.combinations(range(1, universe + 1), n))
        cand_masks = [
            [_union_mask(value_masks[i], c) for c in candidates] for i in range(d)
        ]
        best_count = -1
        best_blocks = None
        # lexicographic iteration: the first maximum seen is the smallest witness
        for idx in itertools.product(range(per_coord), repeat=d):
            m = cand_masks[0][idx[0]]
            for i in range(1, d):
                m &= cand_masks[i][idx[i]]
                if not m:
                    break
            c = m.bit_count()
            if c > best_count:
                best_count = c
                best_blocks = tuple(candidates[k] for k in idx)
        return best_count, BlockChoice(best_blocks)

    # greedy-swap
    blocks = [list(range(1, n + 1)) for _ in range(d)]
    count = density_count(A, blocks)
    improved = True
    while improved:
        improved = False
        for i in range(d):
            here = set(blocks[i])
            for out in sorted(here):
                for cand in range(1, universe + 1):
                    if cand in here:
                        continue
                    trial = sorted(here - {out} | {cand})
                    trial_blocks = blocks[:i] + [trial] + blocks[i + 1 :]
                    c = density_count(A, trial_blocks)
                    if c > count:
                        blocks = trial_blocks
                        count = c
                        improved = True
                        break
                if improved:
                    break
            if improved:
                break
    return count, BlockChoice(tuple(tuple(b) for b in blocks))


def density_certificates(A: IndexSet, alpha, beta, n_list, universe, strategy="exhaustive"):
    """Empirical super-alpha / sub-beta certificate over the tested n range.

    The super-alpha side reports min_n best_count / n^alpha (a lower
    density constant, exact only under exhaustive search); the sub-beta
    side reports max_n best_count / n^beta over the searched blocks
    (a true certificate for exhaustive search, otherwise only refutation
    evidence).  The report labels each side accordingly.
    """
    d = A.order
    if not 1 <= alpha <= beta <= d:
        raise InvalidArgumentError(f"need 1 <= alpha <= beta <= order, got {alpha}, {beta}, {d}")
    n_list = [int(n) for n in n_list]
    if not n_list:
        raise InvalidArgumentError("n_list is empty")
    exact = strategy == "exhaustive"
    with timed_report(
        "density-certificates",
        {
            "alpha": alpha,
            "beta": beta,
            "n_list": tuple(n_list),
            "universe": universe,
            "strategy": strategy,
            "super_side": "exact" if exact else "lower-bound evidence",
            "sub_side": "certificate" if exact else "refutation-only",
        },
    ) as report:
        lower = math.inf
        upper = 0.0
        for n in n_list:
            count, _ = max_density(A, n, universe, strategy)
            report.add(f"count_n{n}", count, "info")
            lower = min(lower, count / n**alpha)
            upper = max(upper, count / n**beta)
        report.add("super_alpha_constant", lower, "info")
        report.add("super_alpha_positive", 1.0 if lower > 0 else 0.0, "==", 1.0)
        report.add("sub_beta_constant", upper, "info")
    return report


def estimate_dimension(A: IndexSet, n_list, universe, strategy="identity-blocks"):
    """Least-squares growth exponent of the best counts against n."""
    n_list = [int(n) for n in n_list]
    if len(n_list) < 3:
        raise InvalidArgumentError("dimension estimation needs at least 3 block sizes")
    rows = []
    for n in n_list:
        if strategy == "identity-blocks":
            # the identity count never needs a block search
            count = A.count_leq(n)
            witness = BlockChoice.identity(A.order, n)
        else:
            count, witness = max_density(A, n, universe, strategy)
        if count == 0:
            raise DegenerateFitError(f"best count at n={n} is zero; log-log fit is degenerate")
        rows.append(ProfileRow(n, int(count), witness, strategy))
    x = np.log([r.n for r in rows])
    y = np.log([r.best_count for r in rows])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot if ss_tot > 0 else 1.0
    return DensityProfile(tuple(rows), float(slope), r2)


# ---------------------------------------------------------------------------
# Text interchange format
# ---------------------------------------------------------------------------


def dump_index_set(A: IndexSet, path):
    """Write one element per line, entries space-separated decreasing."""
    with open(path, "w", encoding="ascii") as fh:
        for t in A.tuples():
            fh.write(" ".join(str(v) for v in t) + "\n")


def load_index_set(path):
    """Parse the text format: '#' comments and blank lines are ignored."""
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                entries = [int(v) for v in line.split()]
            except ValueError as exc:
                raise InvalidArgumentError(f"{path}:{lineno}: not an integer row: {line!r}") from exc
            try:
                rows.append(MultiIndex(entries))
            except InvalidArgumentError as exc:
                raise InvalidArgumentError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise InvalidArgumentError(f"{path}: no elements found")
    return IndexSet.from_tuples(rows)
