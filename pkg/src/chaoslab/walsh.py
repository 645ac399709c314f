"""Rademacher functions and chaos sums on the sign hypercube.

The j-th Rademacher function is the dyadic sign function
``r_j(t) = (-1)^floor(2^j t)`` on [0, 1).  A chaos monomial is a product
of distinct Rademacher functions indexed by a strictly decreasing
multi-index, and finite linear combinations of monomials are represented
as sparse Walsh polynomials over their joint sign configuration space.
All distributions are computed exactly by enumerating that space (fast
Walsh-Hadamard transform), with a seeded counter-based Monte Carlo
fallback for supports beyond the enumeration cap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .distribution import StepDistribution
from .errors import (
    EmptyInputError,
    InvalidArgumentError,
    ResolutionError,
    ResourceLimitError,
)
from .parallel import map_chunks

DEFAULT_BITS_CAP = 24
_DYADIC_CAP = 26  # hard guard on 2^m cell arrays
_MATERIALIZE_CAP = 5_000_000  # rows when materializing an implicit set
_MC_CHUNK = 1 << 16


class MultiIndex(tuple):
    """Strictly decreasing tuple of positive integers (j1 > j2 > ... >= 1)."""

    def __new__(cls, entries):
        if isinstance(entries, (int, np.integer)):
            entries = (entries,)
        t = tuple(int(j) for j in entries)
        if not t:
            raise InvalidArgumentError("multi-index needs at least one entry")
        if t[-1] < 1:
            raise InvalidArgumentError(f"multi-index entries must be >= 1: {t}")
        if any(a <= b for a, b in zip(t, t[1:])):
            raise InvalidArgumentError(f"multi-index entries must strictly decrease: {t}")
        return super().__new__(cls, t)

    @property
    def order(self):
        return len(self)


class IndexSet:
    """Finite set of multi-indices of one order.

    Backed either by an explicit (size, d) integer array with unique,
    lexicographically sorted rows, or implicitly by the full triangle
    {(j1, ..., jd) : J >= j1 > ... > jd >= 1}, which for large J is far
    too big to materialize but still supports exact counting.
    """

    __slots__ = ("order", "_array", "_triangle_max", "structure")

    def __init__(self, order, array=None, triangle_max=None, structure=None):
        if order < 1:
            raise InvalidArgumentError("order must be >= 1")
        self.order = int(order)
        self.structure = structure
        if triangle_max is not None:
            if triangle_max < order:
                raise InvalidArgumentError("triangle max index must be >= order")
            self._triangle_max = int(triangle_max)
            self._array = None
            self.structure = structure or "triangle"
            return
        self._triangle_max = None
        arr = np.asarray(array, dtype=np.int64)
        if arr.size == 0:
            arr = arr.reshape(0, self.order)
        if arr.ndim != 2 or arr.shape[1] != self.order:
            raise InvalidArgumentError("element array must have shape (size, order)")
        if arr.size and (np.any(arr[:, -1] < 1) or np.any(np.diff(arr, axis=1) >= 0)):
            raise InvalidArgumentError("elements must be strictly decreasing positive tuples")
        # canonical order: unique rows, lexicographic over the tuples
        arr = np.unique(arr, axis=0) if arr.size else arr
        self._array = arr
        self._array.setflags(write=False)

    @classmethod
    def from_tuples(cls, tuples, order=None, structure=None):
        elems = [MultiIndex(t) for t in tuples]
        if not elems:
            if order is None:
                raise InvalidArgumentError("order required for an empty index set")
            return cls(order, array=np.empty((0, order), dtype=np.int64), structure=structure)
        d = elems[0].order
        if any(e.order != d for e in elems):
            raise InvalidArgumentError("all elements must share one order")
        if order is not None and order != d:
            raise InvalidArgumentError(f"declared order {order} != element order {d}")
        return cls(d, array=np.array(elems, dtype=np.int64), structure=structure)

    @classmethod
    def triangle(cls, order, max_index):
        return cls(order, triangle_max=max_index)

    @property
    def is_triangle(self):
        return self._triangle_max is not None

    def __len__(self):
        if self.is_triangle:
            return math.comb(self._triangle_max, self.order)
        return int(self._array.shape[0])

    @property
    def max_index(self):
        if self.is_triangle:
            return self._triangle_max
        if self._array.shape[0] == 0:
            return 0
        return int(self._array[:, 0].max())

    def __contains__(self, item):
        try:
            t = MultiIndex(item)
        except InvalidArgumentError:
            return False
        if t.order != self.order:
            return False
        if self.is_triangle:
            return t[0] <= self._triangle_max
        row = np.array(t, dtype=np.int64)
        sub = self._array[self._array[:, 0] == row[0]]
        return bool(sub.size) and bool(np.any(np.all(sub == row, axis=1)))

    def __eq__(self, other):
        if not isinstance(other, IndexSet):
            return NotImplemented
        if self.order != other.order or len(self) != len(other):
            return False
        if self.is_triangle and other.is_triangle:
            return self._triangle_max == other._triangle_max
        return bool(np.array_equal(self.to_array(), other.to_array()))

    def __repr__(self):
        tag = f" {self.structure}" if self.structure else ""
        return f"IndexSet(order={self.order}, size={len(self)}{tag})"

    def to_array(self):
        """Explicit (size, d) row array; materializes an implicit triangle."""
        if not self.is_triangle:
            return self._array
        size = len(self)
        if size > _MATERIALIZE_CAP:
            raise ResourceLimitError(
                f"materializing {size} triangle elements exceeds the cap "
                f"of {_MATERIALIZE_CAP}; work with counts instead",
                required=size,
                budget=_MATERIALIZE_CAP,
            )
        import itertools

        rows = list(itertools.combinations(range(self._triangle_max, 0, -1), self.order))
        rows.reverse()  # combinations of a decreasing range arrive lex-descending
        return np.array(rows, dtype=np.int64).reshape(size, self.order)

    def tuples(self):
        """Iterate elements as MultiIndex values (canonical order)."""
        for row in self.to_array():
            yield MultiIndex(row.tolist())

    def restrict(self, max_entry):
        """Subset of elements with every entry <= max_entry."""
        max_entry = int(max_entry)
        if self.is_triangle:
            m = min(self._triangle_max, max_entry)
            if m < self.order:
                return IndexSet(self.order, array=np.empty((0, self.order), dtype=np.int64))
            return IndexSet.triangle(self.order, m)
        keep = self._array[:, 0] <= max_entry  # leading entry is the max
        return IndexSet(self.order, array=self._array[keep], structure=self.structure)

    def count_leq(self, n):
        """|A restricted to entries <= n| without materializing."""
        n = int(n)
        if self.is_triangle:
            return math.comb(min(n, self._triangle_max), self.order) if n >= self.order else 0
        return int(np.searchsorted(self._array[:, 0], n, side="right"))

    def count_block(self, blocks):
        """Exact |A ∩ (B_1 × ... × B_d)| for per-coordinate blocks."""
        blocks = [frozenset(int(v) for v in b) for b in blocks]
        if len(blocks) != self.order:
            raise InvalidArgumentError(
                f"block choice has {len(blocks)} coordinates, set has order {self.order}"
            )
        if self.is_triangle:
            return _triangle_block_count(self.order, self._triangle_max, blocks)
        if self._array.shape[0] == 0:
            return 0
        mask = np.ones(self._array.shape[0], dtype=bool)
        for i, b in enumerate(blocks):
            mask &= np.isin(self._array[:, i], sorted(b))
            if not mask.any():
                return 0
        return int(mask.sum())

    def block_elements(self, blocks):
        """Explicit IndexSet of the elements counted by :meth:`count_block`."""
        blocks = [frozenset(int(v) for v in b) for b in blocks]
        if len(blocks) != self.order:
            raise InvalidArgumentError(
                f"block choice has {len(blocks)} coordinates, set has order {self.order}"
            )
        if self.is_triangle:
            top = min(self._triangle_max, max((max(b) for b in blocks if b), default=0))
            universe = [sorted(v for v in b if 1 <= v <= top) for b in blocks]
            import itertools

            rows = [
                t
                for t in itertools.product(*universe)
                if all(a > b for a, b in zip(t, t[1:]))
            ]
            return IndexSet.from_tuples(rows, order=self.order)
        mask = np.ones(self._array.shape[0], dtype=bool)
        for i, b in enumerate(blocks):
            mask &= np.isin(self._array[:, i], sorted(b))
        return IndexSet(self.order, array=self._array[mask])


def _triangle_block_count(d, top, blocks):
    """Count strictly decreasing d-tuples with entry i in blocks[i], entries <= top.

    Dynamic program over the value axis: h[i] counts ways to fill
    coordinates i.. using values processed so far (descending positions
    get larger values later, so we sweep v upward and extend at the front).
    """
    sets = [frozenset(v for v in b if 1 <= v <= top) for b in blocks]
    hi = max((max(s) for s in sets if s), default=0)
    h = [0] * (d + 1)
    h[d] = 1
    for v in range(1, hi + 1):
        for i in range(d):  # h[i+1] still holds the value for v-1 here
            if v in sets[i]:
                h[i] += h[i + 1]
    return h[0]


# ---------------------------------------------------------------------------
# Sign functions (sparse Walsh polynomials)
# ---------------------------------------------------------------------------


class SignFunction:
    """Real function of finitely many Rademacher coordinates.

    Stored as a sparse Walsh polynomial: ``terms`` maps each monomial
    (a decreasing tuple of Rademacher indices, () for the constant term)
    to its real coefficient.  The support is the sorted union of all term
    indices; every sign configuration of the support carries probability
    2^-|support|.
    """

    __slots__ = ("terms", "support")

    def __init__(self, terms):
        clean = {}
        for key, coeff in terms.items():
            coeff = float(coeff)
            if coeff == 0.0:
                continue
            key = tuple(sorted({int(j) for j in key}, reverse=True))
            if key and key[-1] < 1:
                raise InvalidArgumentError(f"Rademacher indices must be >= 1: {key}")
            clean[key] = clean.get(key, 0.0) + coeff
        self.terms = {k: c for k, c in clean.items() if c != 0.0}
        self.support = tuple(sorted({j for k in self.terms for j in k}))

    def __repr__(self):
        return f"SignFunction({len(self.terms)} terms, support={self.support})"

    # -- algebra -----------------------------------------------------------

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = SignFunction({(): float(other)})
        if not isinstance(other, SignFunction):
            return NotImplemented
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return SignFunction(terms)

    __radd__ = __add__

    def __neg__(self):
        return SignFunction({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, SignFunction) else -float(other))

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return SignFunction({k: c * float(other) for k, c in self.terms.items()})
        if not isinstance(other, SignFunction):
            return NotImplemented
        # eps_j^2 = 1, so monomials multiply by symmetric difference
        terms = {}
        for ka, ca in self.terms.items():
            sa = frozenset(ka)
            for kb, cb in other.terms.items():
                key = tuple(sorted(sa.symmetric_difference(kb), reverse=True))
                terms[key] = terms.get(key, 0.0) + ca * cb
        return SignFunction(terms)

    __rmul__ = __mul__

    # -- evaluation --------------------------------------------------------

    def value(self, signs):
        """Evaluate at one sign configuration.

        ``signs`` is either a mapping {index: +-1} covering the support or
        a sequence of +-1 aligned with the ascending support.
        """
        if not isinstance(signs, dict):
            seq = list(signs)
            if len(seq) != len(self.support):
                raise InvalidArgumentError(
                    f"expected {len(self.support)} signs for support {self.support}"
                )
            signs = dict(zip(self.support, seq))
        total = 0.0
        for key, coeff in self.terms.items():
            prod = 1
            for j in key:
                s = signs.get(j)
                if s not in (-1, 1):
                    raise InvalidArgumentError(f"sign for index {j} must be +-1, got {s!r}")
                prod *= s
            total += coeff * prod
        return total

    def values(self):
        """Values on all 2^k sign configurations of the support.

        Configuration c assigns eps_{support[b]} = -1 iff bit b of c is set.
        Computed by a fast Walsh-Hadamard transform of the coefficient
        vector, O(k 2^k).
        """
        k = len(self.support)
        if k > _DYADIC_CAP:
            raise ResourceLimitError(
                f"materializing 2^{k} configuration values exceeds the hard cap 2^{_DYADIC_CAP}",
                required=k,
                budget=_DYADIC_CAP,
            )
        pos = {j: b for b, j in enumerate(self.support)}
        coeff = np.zeros(1 << k)
        for key, c in self.terms.items():
            m = 0
            for j in key:
                m |= 1 << pos[j]
            coeff[m] += c
        return _fwht(coeff)

    def second_moment(self):
        """E f^2 = sum of squared Walsh coefficients (orthonormality)."""
        return float(sum(c * c for c in self.terms.values()))


def _fwht(vec):
    """In-place fast Walsh-Hadamard transform, sign (-1)^popcount(c & S)."""
    a = np.array(vec, dtype=float)
    n = a.size
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        top = a[:, 0, :].copy()
        a[:, 0, :] += a[:, 1, :]
        a[:, 1, :] = top - a[:, 1, :]
        a = a.reshape(n)
        h *= 2
    return a


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def rademacher(j):
    """The j-th Rademacher function r_j, j >= 1."""
    j = int(j)
    if j < 1:
        raise InvalidArgumentError(f"Rademacher index must be a positive integer, got {j}")
    return SignFunction({(j,): 1.0})


def chaos_monomial(index):
    """Product of the Rademacher functions named by a decreasing multi-index."""
    return SignFunction({MultiIndex(index): 1.0})


def chaos_sum(coeffs):
    """Linear combination sum_j a_j * r_j over a coefficient map.

    Keys must be multi-indices of one common order (they form an index
    set); mixed-order combinations can be built with SignFunction algebra.
    """
    if not coeffs:
        raise EmptyInputError("coefficient map is empty")
    keys = [MultiIndex(k) for k in coeffs]
    if len({k.order for k in keys}) > 1:
        raise InvalidArgumentError("coefficient map keys must share one order")
    return SignFunction({k: float(c) for k, c in zip(keys, coeffs.values())})


def randomize_signs(coeffs, flips):
    """Chaos sum with each coefficient multiplied by a +-1 flip.

    ``flips`` must assign +-1 to every key of ``coeffs``.
    """
    if not coeffs:
        raise EmptyInputError("coefficient map is empty")
    flipped = {}
    norm_flips = {MultiIndex(k): v for k, v in flips.items()}
    for key, c in coeffs.items():
        key = MultiIndex(key)
        if key not in norm_flips:
            raise InvalidArgumentError(f"missing sign flip for index {tuple(key)}")
        s = norm_flips[key]
        if s not in (-1, 1):
            raise InvalidArgumentError(f"flip for {tuple(key)} must be +-1, got {s!r}")
        flipped[key] = float(c) * s
    return chaos_sum(flipped)


def unit_coefficients(index_set):
    """Coefficient map assigning 1.0 to every element of an index set."""
    return {t: 1.0 for t in index_set.tuples()}


def distribution_exact(f, bits_cap=DEFAULT_BITS_CAP):
    """Exact law of a sign function under the uniform hypercube measure."""
    k = len(f.support)
    if k > bits_cap:
        raise ResourceLimitError(
            f"exact enumeration needs {k} support bits but the cap is {bits_cap}; "
            f"raise bits_cap to at least {k} or sample with distribution_mc",
            required=k,
            budget=bits_cap,
        )
    if k == 0:
        return StepDistribution.point_mass(f.terms.get((), 0.0))
    vals = f.values()
    uniq, counts = np.unique(vals, return_counts=True)
    return StepDistribution(uniq, counts / vals.size)


def distribution_mc(f, samples, seed=0):
    """Empirical law of ``f`` from seeded Monte Carlo over configurations.

    Sampling uses the counter-based Philox generator, one fixed-size chunk
    per counter block, so the result depends only on (samples, seed) and
    not on the worker count.
    """
    samples = int(samples)
    if samples < 1:
        raise InvalidArgumentError("sample count must be >= 1")
    k = len(f.support)
    if k == 0:
        return StepDistribution.point_mass(f.terms.get((), 0.0))
    term_items = list(f.terms.items())
    pos = {j: b for b, j in enumerate(f.support)}

    starts = list(range(0, samples, _MC_CHUNK))

    def run_chunk(start):
        m = min(_MC_CHUNK, samples - start)
        rng = np.random.Generator(np.random.Philox(key=seed, counter=(start // _MC_CHUNK) << 64))
        signs = 1.0 - 2.0 * rng.integers(0, 2, size=(m, k)).astype(np.float64)
        out = np.zeros(m)
        for key, c in term_items:
            if not key:
                out += c
                continue
            prod = signs[:, pos[key[0]]].copy()
            for j in key[1:]:
                prod *= signs[:, pos[j]]
            out += c * prod
        v, n = np.unique(out, return_counts=True)
        return v, n

    counts = {}
    for v, n in map_chunks(run_chunk, starts):
        for value, cnt in zip(v.tolist(), n.tolist()):
            counts[value] = counts.get(value, 0) + cnt
    values = np.array(sorted(counts))
    weights = np.array([counts[v] for v in values.tolist()], dtype=float) / samples
    return StepDistribution(values, weights)


@dataclass(frozen=True)
class DyadicStep:
    """Step function on [0, 1) that is constant on 2^m half-open dyadic cells."""

    resolution: int
    values: np.ndarray

    def histogram(self):
        """Law of the step function under Lebesgue measure."""
        uniq, counts = np.unique(self.values, return_counts=True)
        return StepDistribution(uniq, counts / self.values.size)


def evaluate_dyadic(f, m):
    """Realize ``f`` as a dyadic step function at resolution m >= max support.

    On cell i the j-th Rademacher sign is (-1)^floor(2^j (i + 1/2) 2^-m),
    evaluated in exact integer arithmetic.
    """
    m = int(m)
    top = max(f.support) if f.support else 0
    if m < top:
        raise ResolutionError(
            f"resolution {m} is below the largest Rademacher index {top}"
        )
    if m > _DYADIC_CAP:
        raise ResourceLimitError(
            f"2^{m} dyadic cells exceed the hard cap 2^{_DYADIC_CAP}",
            required=m,
            budget=_DYADIC_CAP,
        )
    cells = np.arange(1 << m, dtype=np.int64)
    if not f.support:
        return DyadicStep(m, np.full(1 << m, f.terms.get((), 0.0)))
    config = np.zeros(1 << m, dtype=np.int64)
    for b, j in enumerate(f.support):
        bit = ((2 * cells + 1) >> (m + 1 - j)) & 1  # parity of floor(2^j (i+1/2) / 2^m)
        config |= bit << b
    vals = f.values()
    out = vals[config]
    out.setflags(write=False)
    return DyadicStep(m, out)
