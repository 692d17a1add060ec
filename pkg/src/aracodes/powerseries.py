"""Truncated power-series arithmetic and degree-distribution containers.

Everything downstream (graph reduction, density-evolution checks, the
construction catalog) is built on two carriers: a truncated real power
series, and a node/edge degree-distribution pair stored in both
perspectives.  Node series use the convention ``coeffs[i]`` = fraction of
nodes with degree ``i`` (so ``coeffs[0] == 0``); edge series use
``coeffs[j]`` = fraction of edges attached to nodes of degree ``j + 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

#: Default truncation depth.  Self-matched tails decay like O(b^k) with
#: b <= 0.99, so depth 512 keeps the dropped mass below 1e-3.
DEFAULT_ORDER = 512


class DegenerateInputError(ValueError):
    """A series that is identically zero (or unusable) where mass is required."""


class InvalidInputError(ValueError):
    """An argument violates a documented precondition."""


class NumericDomainError(ArithmeticError):
    """A transform left its numeric domain (vanishing denominator, lost bracket)."""


class InvalidParameterError(ValueError):
    """A design parameter (p, b, alpha, ...) is outside its admissible range."""


class ValidityError(ValueError):
    """A constructed degree distribution violates non-negativity or a range bound."""


def _as_coeffs(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise InvalidInputError("coefficient array must be one-dimensional and non-empty")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("coefficients must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """A real power series truncated at order M (stores c_0 .. c_M)."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return np.array_equal(self.coeffs, other.coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x):
        """Horner evaluation; accepts scalars or arrays in [0, 1]."""
        x = np.asarray(x, dtype=float)
        result = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            result = result * x + c
        return float(result) if result.ndim == 0 else result

    def truncated(self, order: int) -> "PowerSeries":
        out = np.zeros(order + 1)
        keep = min(order + 1, len(self.coeffs))
        out[:keep] = self.coeffs[:keep]
        return PowerSeries(out)

    def derivative(self) -> "PowerSeries":
        if self.order == 0:
            return PowerSeries([0.0])
        k = np.arange(1, self.order + 1)
        return PowerSeries(self.coeffs[1:] * k)

    def antiderivative(self) -> "PowerSeries":
        k = np.arange(1, self.order + 2)
        return PowerSeries(np.concatenate([[0.0], self.coeffs / k]))

    def deriv_at_one(self) -> float:
        return float(np.dot(np.arange(len(self.coeffs)), self.coeffs))

    # -- ring operations (result order = max of operand orders) --

    def _binary(self, other: "PowerSeries", op) -> "PowerSeries":
        n = max(len(self.coeffs), len(other.coeffs))
        a = np.zeros(n)
        a[: len(self.coeffs)] = self.coeffs
        b = np.zeros(n)
        b[: len(other.coeffs)] = other.coeffs
        return PowerSeries(op(a, b))

    def __add__(self, other):
        if isinstance(other, PowerSeries):
            return self._binary(other, _add)
        a = self.coeffs.copy()
        a[0] += float(other)
        return PowerSeries(a)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, PowerSeries):
            return self._binary(other, _sub)
        return self + (-float(other))

    def __rsub__(self, other):
        return (-1.0) * self + float(other)

    def __mul__(self, other):
        if isinstance(other, PowerSeries):
            n = max(self.order, other.order)
            return PowerSeries(np.convolve(self.coeffs, other.coeffs)[: n + 1])
        return PowerSeries(self.coeffs * float(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PowerSeries):
            n = max(self.order, other.order)
            return self.truncated(n) * reciprocal(other.truncated(n))
        return PowerSeries(self.coeffs / float(other))


def _add(a, b):
    return a + b


def _sub(a, b):
    return a - b


def monomial(degree: int, order: int, scale: float = 1.0) -> PowerSeries:
    c = np.zeros(order + 1)
    c[degree] = scale
    return PowerSeries(c)


def reciprocal(f: PowerSeries) -> PowerSeries:
    """1/f by Newton iteration with precision doubling; requires f(0) != 0."""
    if f.coeffs[0] == 0.0:
        raise DegenerateInputError("cannot invert a series with zero constant term")
    M = f.order
    r = np.array([1.0 / f.coeffs[0]])
    n = 1
    while n <= M:
        n = min(2 * n, M + 1)
        fr = np.convolve(f.coeffs[:n], r)[:n]
        two_minus = -fr
        two_minus[0] += 2.0
        r = np.convolve(r, two_minus)[:n]
    out = np.zeros(M + 1)
    out[: len(r)] = r
    return PowerSeries(out)


def sqrt_series(f: PowerSeries) -> PowerSeries:
    """Square root of a series with positive constant term (Newton iteration)."""
    if f.coeffs[0] <= 0.0:
        raise DegenerateInputError("series square root needs a positive constant term")
    M = f.order
    s = PowerSeries([np.sqrt(f.coeffs[0])])
    n = 1
    while n <= M:
        n = min(2 * n, M + 1)
        fn = f.truncated(n - 1)
        sn = s.truncated(n - 1)
        s = 0.5 * (sn + fn * reciprocal(sn))
    return s.truncated(M)


def binomial_series(alpha: float, order: int) -> PowerSeries:
    """Series of (1 - x)^alpha."""
    c = np.zeros(order + 1)
    c[0] = 1.0
    for k in range(1, order + 1):
        c[k] = -c[k - 1] * (alpha - k + 1) / k
    return PowerSeries(c)


def log1m_series(b: float, order: int) -> PowerSeries:
    """Series of b*x + ln(1 - b*x), which starts at x^2."""
    c = np.zeros(order + 1)
    for j in range(2, order + 1):
        c[j] = -(b ** j) / j
    return PowerSeries(c)


# ---------------------------------------------------------------------------
# degree-distribution layer
# ---------------------------------------------------------------------------

def edge_from_node(node: PowerSeries, exact_mean: Optional[float] = None) -> PowerSeries:
    """Edge-perspective series from a node-perspective one.

    Coefficient k-1 of the result is k * node_k / mean, where mean defaults
    to the truncated sum of k * node_k.  Constructions that know the exact
    (untruncated) mean pass it in so the retained coefficients stay exact.
    """
    k = np.arange(len(node.coeffs))
    weighted = k * node.coeffs
    mean = float(weighted.sum()) if exact_mean is None else float(exact_mean)
    if mean <= 0.0:
        raise DegenerateInputError("node distribution has no edge mass")
    return PowerSeries(weighted[1:] / mean)


def node_from_edge(edge: PowerSeries, exact_integral: Optional[float] = None) -> PowerSeries:
    """Node-perspective series from an edge-perspective one (inverse map)."""
    k = np.arange(1, len(edge.coeffs) + 1)
    weighted = edge.coeffs / k
    total = float(weighted.sum()) if exact_integral is None else float(exact_integral)
    if total <= 0.0:
        raise DegenerateInputError("edge distribution has no mass")
    return PowerSeries(np.concatenate([[0.0], weighted / total]))


def t_operator(f: Callable, tol: float = 1e-15) -> Callable:
    """Matching transform: returns x -> 1 - f^{-1}(1 - x).

    Requires f strictly increasing on [0, 1] with f(0) = 0 and f(1) = 1;
    the endpoints are anchored exactly so that numerically fuzzy values
    there (flat tangents resolve only to sqrt(eps)) cannot leak out.  The
    inverse is computed by bisection, so only pointwise values of f are
    needed.  Applying the operator twice reproduces f.
    """
    f0, f1 = float(f(0.0)), float(f(1.0))
    if abs(f0) > 1e-6 or abs(f1 - 1.0) > 1e-6:
        raise InvalidInputError("function must satisfy f(0) = 0 and f(1) = 1")
    probes = np.linspace(0.0, 1.0, 9)
    values = np.array([float(f(t)) for t in probes])
    if np.any(np.diff(values) <= 0.0):
        raise InvalidInputError("function must be strictly increasing on [0, 1]")

    def inverse(y: float) -> float:
        if y <= 0.0:
            return 0.0
        if y >= 1.0:
            return 1.0
        a, b = 0.0, 1.0
        for _ in range(80):
            m = 0.5 * (a + b)
            if b - a < tol:
                break
            if float(f(m)) < y:
                a = m
            else:
                b = m
        return 0.5 * (a + b)

    def transformed(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(xs)
        for i, xi in enumerate(xs):
            yi = 1.0 - xi
            if yi < -1e-9 or yi > 1.0 + 1e-9:
                raise NumericDomainError(f"target {yi} outside [0, 1]")
            out[i] = 1.0 - inverse(yi)
        return float(out[0]) if np.isscalar(x) or np.ndim(x) == 0 else out

    return transformed


def truncate_check(rho: PowerSeries, max_degree: int) -> PowerSeries:
    """Move edge mass of check degrees above max_degree onto degree 1.

    The input is read as a normalized edge distribution (any mass missing
    from the stored coefficients counts as tail), so the result sums to 1
    exactly and dominates the input pointwise on [0, 1) whenever tail
    mass is present.
    """
    if max_degree < 2:
        raise InvalidParameterError("max_degree must be at least 2")
    out = np.zeros(max_degree)
    keep = min(max_degree, len(rho.coeffs))
    out[:keep] = rho.coeffs[:keep]
    out[0] = 1.0 - float(out[1:].sum())
    return PowerSeries(out)


def truncate_bit(lam: PowerSeries, max_degree: int) -> tuple[PowerSeries, float]:
    """Drop edge mass of bit degrees above max_degree without renormalizing.

    Returns the clipped series and the dropped node-perspective mass (the
    fraction of bit nodes that become pilots in a finite realization).
    """
    if max_degree < 2:
        raise InvalidParameterError("max_degree must be at least 2")
    k = np.arange(1, len(lam.coeffs) + 1)
    node_mass = lam.coeffs / k
    total = float(node_mass.sum())
    if total <= 0.0:
        raise DegenerateInputError("edge distribution has no mass")
    dropped = float(node_mass[max_degree:].sum()) / total
    out = lam.coeffs[:max_degree].copy()
    if len(out) < max_degree:
        out = np.concatenate([out, np.zeros(max_degree - len(out))])
    return PowerSeries(out), dropped


NODE_TOL = 1e-8


@dataclass(frozen=True)
class DegreeDistribution:
    """A degree distribution held in node and edge perspective simultaneously."""

    node: PowerSeries
    edge: PowerSeries
    mean: float  # node-perspective mean degree (exact when known)

    @classmethod
    def from_node(
        cls,
        node: PowerSeries,
        exact_mean: Optional[float] = None,
        allow_degree_one: bool = False,
        check_normalized: bool = True,
    ) -> "DegreeDistribution":
        if abs(node.coeffs[0]) > 1e-14:
            raise InvalidInputError("node distribution must have no degree-0 mass")
        if not allow_degree_one and abs(node.coeffs[1] if node.order >= 1 else 0.0) > 1e-12:
            raise InvalidInputError("degree-1 nodes are not allowed on this side")
        if check_normalized and abs(node(1.0) - 1.0) > 1e-3:
            raise InvalidInputError(f"node distribution sums to {node(1.0)!r}, expected 1")
        mean = float(exact_mean) if exact_mean is not None else node.deriv_at_one()
        return cls(node=node, edge=edge_from_node(node, mean), mean=mean)

    @classmethod
    def from_edge(
        cls,
        edge: PowerSeries,
        exact_integral: Optional[float] = None,
        allow_degree_one: bool = False,
    ) -> "DegreeDistribution":
        if not allow_degree_one and abs(edge.coeffs[0]) > 1e-12:
            raise InvalidInputError("degree-1 edge mass is not allowed on this side")
        if np.any(edge.coeffs < -1e-9):
            raise ValidityError("edge distribution has a negative coefficient")
        node = node_from_edge(edge, exact_integral)
        integral = (
            float(exact_integral)
            if exact_integral is not None
            else float((edge.coeffs / np.arange(1, len(edge.coeffs) + 1)).sum())
        )
        return cls(node=node, edge=edge, mean=1.0 / integral)

    @property
    def order(self) -> int:
        return self.node.order

    def tail_mass(self) -> float:
        """Mass missing from the truncated series (edge perspective dominates)."""
        return max(0.0, 1.0 - float(self.edge.coeffs.sum()), 1.0 - float(self.node.coeffs.sum()))


FAMILIES = ("ARA", "NSIRA", "ALDPC", "LDPC")


@dataclass(frozen=True)
class DegreePair:
    """A matched (bit, check) degree-distribution pair with design metadata.

    ``bit_fns`` / ``check_fns`` optionally hold exact ``(node, edge)``
    evaluators for constructions with closed forms; they are ignored by
    equality and serialization.
    """

    bit: DegreeDistribution
    check: DegreeDistribution
    family: str
    p: float
    b: Optional[float] = None
    label: str = ""
    bit_fns: Optional[tuple[Callable, Callable]] = field(default=None, compare=False, repr=False)
    check_fns: Optional[tuple[Callable, Callable]] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameterError(f"unknown family tag {self.family!r}")
        if not (0.0 < self.p < 1.0):
            raise InvalidParameterError("p must lie in (0, 1)")
        ratio = self.bit.mean / self.check.mean
        if not (np.isfinite(ratio) and ratio > 0.0):
            raise ValidityError("degenerate edge-count ratio")

    # exact node/edge evaluators fall back to truncated-series evaluation
    def bit_node_fn(self) -> Callable:
        return self.bit_fns[0] if self.bit_fns else self.bit.node

    def bit_edge_fn(self) -> Callable:
        return self.bit_fns[1] if self.bit_fns else self.bit.edge

    def check_node_fn(self) -> Callable:
        return self.check_fns[0] if self.check_fns else self.check.node

    def check_edge_fn(self) -> Callable:
        return self.check_fns[1] if self.check_fns else self.check.edge

    def tail_mass(self) -> float:
        return max(self.bit.tail_mass(), self.check.tail_mass())

    def to_json(self) -> str:
        doc = {
            "family": self.family,
            "label": self.label,
            "p": self.p,
            "b": self.b,
            "M": self.bit.order,
            "bit_node": self.bit.node.coeffs.tolist(),
            "check_node": self.check.node.coeffs.tolist(),
            "bit_mean": self.bit.mean,
            "check_mean": self.check.mean,
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "DegreePair":
        doc = json.loads(text)
        bit = DegreeDistribution.from_node(
            PowerSeries(doc["bit_node"]), exact_mean=doc.get("bit_mean"), check_normalized=False
        )
        check = DegreeDistribution.from_node(
            PowerSeries(doc["check_node"]),
            exact_mean=doc.get("check_mean"),
            allow_degree_one=True,
            check_normalized=False,
        )
        return cls(
            bit=bit,
            check=check,
            family=doc["family"],
            p=doc["p"],
            b=doc.get("b"),
            label=doc.get("label", ""),
        )
