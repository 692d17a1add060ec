"""Explicit capacity-achieving degree-distribution families.

Three groups of constructions, all returning :class:`DegreePair` objects
whose design rate equals 1 - p:

* self-matched families built from the rational fixed point
  f(x) = (1-b)x / (1-bx) of the matching transform, with tails decaying
  like b^k (coefficients by series division; the equivalent
  composition-count recursion is kept for cross-checking);
* bit-regular and check-regular families with one side fixed to degree 3,
  where the matched side is extracted from an algebraic cubic;
* a generic numerical solver that recovers the check side from any
  polynomial bit side.

Every pair carries exact closed-form evaluators alongside its truncated
coefficient arrays, so downstream fixed-point checks are not limited by
truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Optional

import numpy as np

from .powerseries import (
    DEFAULT_ORDER,
    DegreeDistribution,
    DegreePair,
    InvalidParameterError,
    PowerSeries,
    ValidityError,
    binomial_series,
    edge_from_node,
    log1m_series,
    monomial,
    reciprocal,
    t_operator,
)
from .tilting import symmetry_swap

EULER_GAMMA = 0.57721566490153286061
#: Critical constant of the head-coefficient sign condition.
C_STAR = (13.0 - np.sqrt(61.0)) / 9.0

#: Negative dust allowed in coefficients produced by alternating sums.
COEFF_TOL = -1e-10


# ---------------------------------------------------------------------------
# Lambert W and the minimal-complexity parameter
# ---------------------------------------------------------------------------

def lambert_w0(x: float) -> float:
    """Principal-branch Lambert W on (-1/e, 0); the w in (-1, 0) with w e^w = x.

    Halley iteration seeded by the branch-point series near -1/e and by
    the defining identity elsewhere.
    """
    x = float(x)
    if not (-np.exp(-1.0) < x < 0.0):
        raise InvalidParameterError("argument must lie in (-1/e, 0)")
    if x < -0.25:
        q = np.sqrt(2.0 * (np.e * x + 1.0))
        w = -1.0 + q - q * q / 3.0 + 11.0 / 72.0 * q ** 3
    else:
        w = x * np.exp(-x)
    for _ in range(50):
        ew = np.exp(w)
        f = w * ew - x
        w1 = w + 1.0
        dw = f / (ew * w1 - (w + 2.0) * f / (2.0 * w1))
        w -= dw
        if abs(dw) <= 1e-16 * (1.0 + abs(w)):
            break
    return float(w)


def solve_b(p: float) -> float:
    """Smallest series parameter b giving valid self-matched distributions at p.

    Solves -b - ln(1-b) = a with a the design constant for the channel;
    minimizing b minimizes complexity and the degree needed for any fixed
    partial-sum target.  Symmetric in p <-> 1-p; minimum near 0.9304 at
    p = 1/2.
    """
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    skew = abs(1.0 - 2.0 * p)
    a = (13.0 + np.sqrt(61.0)) / 12.0 * (1.0 + skew) / (1.0 - skew)
    return lambert_w0(-np.exp(-1.0 - a)) + 1.0


# ---------------------------------------------------------------------------
# composition-count table and self-matched coefficients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CmkTable:
    """Triangular table of ordered-composition sums.

    Entry (m, k) is the sum of 1/(i_1 ... i_m) over ordered tuples of
    integers >= 2 summing to k; it is the coefficient extractor for the
    m-th power of x^2/2 + x^3/3 + x^4/4 + ...  Row 1 is 1/k and entries
    vanish for k < 2m.
    """

    values: np.ndarray  # shape (k_max // 2 + 1, k_max + 1)
    k_max: int

    def c(self, m: int, k: int) -> float:
        if m < 1 or k < 2 * m or k > self.k_max:
            return 0.0
        return float(self.values[m, k])


@lru_cache(maxsize=8)
def _cmk_values(k_max: int) -> np.ndarray:
    m_max = k_max // 2
    table = np.zeros((m_max + 1, k_max + 1))
    ks = np.arange(2, k_max + 1)
    table[1, 2:] = 1.0 / ks
    for m in range(2, m_max + 1):
        prefix = np.cumsum(table[m - 1])
        lo = 2 * (m - 1)
        ks = np.arange(2 * m, k_max + 1)
        # sum of row m-1 over [2(m-1), k-2], via prefix sums
        table[m, 2 * m:] = m / ks * (prefix[ks - 2] - prefix[lo - 1])
    table.flags.writeable = False
    return table


def cmk_table(k_max: int) -> CmkTable:
    if k_max < 2:
        raise InvalidParameterError("k_max must be at least 2")
    return CmkTable(values=_cmk_values(k_max), k_max=k_max)


def _log_weight(b: float) -> float:
    """b + ln(1-b), negative on (0, 1)."""
    return b + np.log1p(-b)


def _alpha(p: float, b: float) -> float:
    return -(1.0 - p) / (p * _log_weight(b))


def self_matched_coeffs_recursion(p: float, b: float, order: int) -> np.ndarray:
    """Node coefficients of the self-matched bit side via the table recursion.

    Exact in exact arithmetic, but the alternating sum cancels like
    b^(-2k) in floating point, so past k of roughly 150 the values
    degrade; :func:`_sm_node_coeffs` (series division) is the stable
    production route and the two are cross-checked in tests.
    """
    table = _cmk_values(max(order, 2))
    a = _alpha(p, b)
    m_max = table.shape[0] - 1
    signs = (-a) ** np.arange(m_max)  # (-1)^{m-1} a^{m-1} for m = 1..m_max
    sums = signs @ table[1:, : order + 1]
    k = np.arange(order + 1)
    coeffs = a / (1.0 - p) * np.power(b, k) * sums
    coeffs[:2] = 0.0
    return coeffs


def _sm_node_coeffs(p: float, b: float, order: int) -> np.ndarray:
    """Node coefficients of the self-matched bit side, by series division.

    Expands N / (p D0 + (1-p) N) with N = bx + ln(1-bx); the reciprocal
    recursion involves only same-scale b^k terms, so no cancellation.
    """
    N = log1m_series(b, order)
    d0 = _log_weight(b)
    L = N / ((1.0 - p) * N + p * d0)
    coeffs = L.coeffs.copy()
    coeffs[:2] = 0.0
    return coeffs


@dataclass(frozen=True)
class AsymptoticParams:
    """Ingredients of the large-degree coefficient approximation."""

    p: float
    b: float
    alpha: float
    d: float
    gamma: float = EULER_GAMMA

    @classmethod
    def from_pb(cls, p: float, b: float) -> "AsymptoticParams":
        a = _alpha(p, b)
        if not (a > 0.0):
            raise InvalidParameterError("alpha must be positive for p, b in (0, 1)")
        return cls(p=p, b=b, alpha=a, d=a / (1.0 - a))


def asymptotic_coeffs(k: int, params: AsymptoticParams, which: str = "L") -> float:
    """Large-degree estimate of a self-matched coefficient.

    The node-side estimate decays like b^k / (k ln^2 k); the edge side
    carries an extra factor k (1-b) / (b^2 p^2).  The check side is the
    bit side with p replaced by 1 - p.
    """
    if k < 2:
        raise InvalidParameterError("asymptotics need k >= 2")
    p, b = params.p, params.b
    if which in ("R", "rho"):
        params = AsymptoticParams.from_pb(1.0 - p, b)
        pp = 1.0 - p
    else:
        pp = p
    a, d, g = params.alpha, params.d, params.gamma
    lead = 1.0 / ((1.0 - a) * (1.0 - pp)) * b ** k / k
    bracket = 1.0 / (1.0 + d * np.log(k)) ** 2 * (1.0 - 2.0 * g / (1.0 + d * np.log(k)))
    node_value = lead * bracket
    if which in ("L", "R"):
        return float(node_value)
    if which in ("lambda", "rho"):
        return float((1.0 - b) * k / (b ** 2 * pp ** 2) * node_value)
    raise InvalidParameterError("which must be 'L', 'R', 'lambda' or 'rho'")


# ---------------------------------------------------------------------------
# validity regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PInterval:
    lo: float
    hi: float

    @property
    def empty(self) -> bool:
        return self.lo > self.hi

    def contains(self, p: float, slack: float = 1e-12) -> bool:
        return (self.lo - slack) <= p <= (self.hi + slack)


def validity_region(family: str, b: float) -> PInterval:
    """Erasure probabilities for which the self-matched family is non-negative.

    Both sides constrain the symmetric family; the one-accumulator
    families each inherit only one of the two bounds.
    """
    if not (0.0 < b < 1.0):
        raise InvalidParameterError("b must lie in (0, 1)")
    d = -C_STAR * _log_weight(b)  # positive, increasing in b
    lo = 1.0 / (1.0 + d)
    if family == "ARA":
        return PInterval(lo, 1.0 - lo)
    if family == "NSIRA":
        return PInterval(0.0, 1.0 - lo)
    if family == "ALDPC":
        return PInterval(lo, 1.0)
    raise InvalidParameterError(f"no validity region for family {family!r}")


def _require_valid(family: str, p: float, b: float) -> None:
    region = validity_region(family, b)
    if region.empty:
        raise ValidityError(
            f"{family} self-matched family is empty at b={b}: need b >= {solve_b(0.5):.6f}"
        )
    if p < region.lo - 1e-12:
        raise ValidityError(
            f"p={p} below the lower bound {region.lo:.6f} of the {family} region at b={b}"
        )
    if p > region.hi + 1e-12:
        raise ValidityError(
            f"p={p} above the upper bound {region.hi:.6f} of the {family} region at b={b}"
        )


def _check_coeffs(coeffs: np.ndarray, what: str) -> None:
    worst = int(np.argmin(coeffs))
    if coeffs[worst] < COEFF_TOL:
        raise ValidityError(f"negative {what} coefficient {coeffs[worst]:.3e} at degree {worst}")


# ---------------------------------------------------------------------------
# self-matched family evaluators
# ---------------------------------------------------------------------------

def _sm_node_fn(p: float, b: float) -> Callable:
    d0 = _log_weight(b)

    def L(x):
        x = np.asarray(x, dtype=float)
        n = b * x + np.log1p(-b * x)
        return n / (p * d0 + (1.0 - p) * n)

    return L


def _sm_edge_fn(p: float, b: float) -> Callable:
    d0 = _log_weight(b)
    mean = -(b ** 2) * p / ((1.0 - b) * d0)

    def lam(x):
        x = np.asarray(x, dtype=float)
        n = b * x + np.log1p(-b * x)
        nprime = -(b ** 2) * x / (1.0 - b * x)
        return nprime * p * d0 / (p * d0 + (1.0 - p) * n) ** 2 / mean

    return lam


def _ratio_node_fn(b: float) -> Callable:
    """(bx + ln(1-bx)) / (b + ln(1-b)) -- the untilted one-accumulator side."""
    d0 = _log_weight(b)

    def f(x):
        x = np.asarray(x, dtype=float)
        return (b * x + np.log1p(-b * x)) / d0

    return f


def _rational_edge_fn(b: float) -> Callable:
    def f(x):
        x = np.asarray(x, dtype=float)
        return (1.0 - b) * x / (1.0 - b * x)

    return f


def _sm_bit_side(p: float, b: float, order: int) -> DegreeDistribution:
    coeffs = _sm_node_coeffs(p, b, order)
    _check_coeffs(coeffs, "bit node")
    mean = -(b ** 2) * p / ((1.0 - b) * _log_weight(b))
    node = PowerSeries(np.maximum(coeffs, 0.0))
    return DegreeDistribution.from_node(node, exact_mean=mean, check_normalized=False)


def _ratio_side(b: float, order: int) -> DegreeDistribution:
    k = np.arange(order + 1, dtype=float)
    d0 = _log_weight(b)
    coeffs = np.zeros(order + 1)
    coeffs[2:] = -np.power(b, k[2:]) / (k[2:] * d0)
    mean = -(b ** 2) / ((1.0 - b) * d0)
    return DegreeDistribution.from_node(PowerSeries(coeffs), exact_mean=mean, check_normalized=False)


def self_matched_ara(p: float, b: Optional[float] = None, order: int = DEFAULT_ORDER) -> DegreePair:
    """Self-matched ARA pair: both reduced sides equal (1-b)x/(1-bx).

    At p = 1/2 the bit and check sides coincide.  Tails decay like b^k,
    so moderate truncation depths capture almost all the mass.
    """
    b = solve_b(p) if b is None else float(b)
    _require_valid("ARA", p, b)
    bit = _sm_bit_side(p, b, order)
    check = _sm_bit_side(1.0 - p, b, order)
    return DegreePair(
        bit=bit,
        check=check,
        family="ARA",
        p=p,
        b=b,
        label="self-matched",
        bit_fns=(_sm_node_fn(p, b), _sm_edge_fn(p, b)),
        check_fns=(_sm_node_fn(1.0 - p, b), _sm_edge_fn(1.0 - p, b)),
    )


def self_matched_nsira(p: float, b: Optional[float] = None, order: int = DEFAULT_ORDER) -> DegreePair:
    """Self-matched NSIRA pair: untilted bit side, shared check side.

    The bit coefficients are proportional to b^i / i and are non-negative
    for every b, so only the check-side bound constrains p.
    """
    b = solve_b(p) if b is None else float(b)
    _require_valid("NSIRA", p, b)
    bit = _ratio_side(b, order)
    check = _sm_bit_side(1.0 - p, b, order)
    return DegreePair(
        bit=bit,
        check=check,
        family="NSIRA",
        p=p,
        b=b,
        label="self-matched",
        bit_fns=(_ratio_node_fn(b), _rational_edge_fn(b)),
        check_fns=(_sm_node_fn(1.0 - p, b), _sm_edge_fn(1.0 - p, b)),
    )


def self_matched_aldpc(p: float, b: Optional[float] = None, order: int = DEFAULT_ORDER) -> DegreePair:
    """Self-matched ALDPC pair: the bit/check mirror of the NSIRA family."""
    b = solve_b(p) if b is None else float(b)
    _require_valid("ALDPC", p, b)
    bit = _sm_bit_side(p, b, order)
    check = _ratio_side(b, order)
    return DegreePair(
        bit=bit,
        check=check,
        family="ALDPC",
        p=p,
        b=b,
        label="self-matched",
        bit_fns=(_sm_node_fn(p, b), _sm_edge_fn(p, b)),
        check_fns=(_ratio_node_fn(b), _rational_edge_fn(b)),
    )


# ---------------------------------------------------------------------------
# the algebraic cubic behind the degree-3-regular families
# ---------------------------------------------------------------------------

def matched_cubic_edge_fn(q: float) -> Callable:
    """Pointwise matched image of the tilted degree-3-regular side.

    The value y(x) satisfies (1-q) t (1-y)^3 + q (1-y) = t with
    t = sqrt(1-x); the unique real root is written with hyperbolic
    functions, which stay stable at both endpoints.
    """

    def f(x):
        scalar = np.ndim(x) == 0
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        t = np.sqrt(np.maximum(1.0 - xs, 0.0))
        out = np.ones_like(t)
        mask = t > 0.0
        ts = t[mask]
        qq = q / ((1.0 - q) * ts)
        arg = np.sqrt(27.0 * (1.0 - q) * ts ** 3 / (4.0 * q ** 3))
        u = 2.0 * np.sqrt(qq / 3.0) * np.sinh(np.arcsinh(arg) / 3.0)
        out[mask] = 1.0 - u
        return float(out[0]) if scalar else out

    return f


def matched_cubic_edge_series(q: float, order: int) -> PowerSeries:
    """Series coefficients of :func:`matched_cubic_edge_fn` by Newton iteration.

    Works in the truncated-series ring on the defining cubic; the root
    through (x, u) = (0, 1) is simple, so the iteration doubles precision.
    """
    t = binomial_series(0.5, order)
    u = PowerSeries([1.0])
    n = 1
    while n <= order:
        n = min(2 * n, order + 1)
        un = u.truncated(n - 1)
        tn = t.truncated(n - 1)
        u2 = un * un
        F = (1.0 - q) * tn * u2 * un + q * un - tn
        Fp = 3.0 * (1.0 - q) * tn * u2 + q
        u = (un - F * reciprocal(Fp)).truncated(n - 1)
    rho = -1.0 * u.truncated(order) + 1.0
    coeffs = rho.coeffs.copy()
    coeffs[0] = 0.0  # exact: the root passes through u(0) = 1
    return PowerSeries(coeffs)


def _cubic_integral_fn(q: float) -> Callable:
    """Closed form of int_0^x of the matched cubic edge function."""
    edge = matched_cubic_edge_fn(q)

    def F(x):
        x = np.asarray(x, dtype=float)
        y = np.asarray(edge(x), dtype=float)
        u = 1.0 - y
        u3 = u ** 3
        return (x - 1.0) * y + q / 3.0 * (1.0 - u3) / (1.0 - (1.0 - q) * u3)

    return F


def _regular_node_fn(degree: int) -> Callable:
    def f(x):
        return np.asarray(x, dtype=float) ** degree

    return f


def _regular_edge_fn(degree: int) -> Callable:
    def f(x):
        return np.asarray(x, dtype=float) ** (degree - 1)

    return f


def bit_regular_check_node_series(p: float, order: int) -> PowerSeries:
    """Ungated check-side node series of the bit-regular pair (any p).

    Negative coefficients appear for p beyond the validity range; the
    non-negativity verifier probes exactly that regime.
    """
    rho_tilde = matched_cubic_edge_series(p, order)
    Q = rho_tilde.antiderivative().truncated(order) * (3.0 / p)
    return Q / (1.0 - p + p * Q)


def bit_regular_ara(p: float, order: int = DEFAULT_ORDER, allow_unproven: bool = False) -> DegreePair:
    """ARA pair with all punctured bits of degree 3.

    The check side is recovered from the matched image of the tilted bit
    side.  Non-negativity is proven for p <= 0.26; numerical evidence
    extends to roughly 0.384, reachable with ``allow_unproven``.
    """
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    limit = 0.384 if allow_unproven else 0.26
    if p > limit + 1e-12:
        raise ValidityError(
            f"p={p} beyond the {'observed' if allow_unproven else 'proven'} bound {limit}"
        )
    R = bit_regular_check_node_series(p, order)
    _check_coeffs(R.coeffs, "check node")
    check_mean = 3.0 * (1.0 - p) / p
    check = DegreeDistribution.from_node(
        PowerSeries(np.maximum(R.coeffs, 0.0)),
        exact_mean=check_mean,
        allow_degree_one=True,
        check_normalized=False,
    )
    bit = DegreeDistribution.from_node(monomial(3, order), exact_mean=3.0)

    cubic = matched_cubic_edge_fn(p)
    integral = _cubic_integral_fn(p)

    def Q_fn(x):
        return 3.0 / p * np.asarray(integral(x), dtype=float)

    def R_fn(x):
        qv = Q_fn(x)
        return qv / (1.0 - p + p * qv)

    def rho_fn(x):
        qv = Q_fn(x)
        return np.asarray(cubic(x), dtype=float) / (1.0 - p + p * qv) ** 2

    return DegreePair(
        bit=bit,
        check=check,
        family="ARA",
        p=p,
        b=None,
        label="bit-regular-3",
        bit_fns=(_regular_node_fn(3), _regular_edge_fn(3)),
        check_fns=(R_fn, rho_fn),
    )


def check_regular_ara(p: float, order: int = DEFAULT_ORDER, allow_unproven: bool = False) -> DegreePair:
    """ARA pair with all checks of degree 3: the swap image of the bit-regular one."""
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    swapped = symmetry_swap(bit_regular_ara(1.0 - p, order, allow_unproven))
    return replace(swapped, label="check-regular-3")


def nsira_check_regular(p: float, order: int = DEFAULT_ORDER) -> DegreePair:
    """NSIRA pair with degree-3 checks; the bit side is the matched cubic.

    Coefficient tails decay like k^{-3/2}, so partial sums converge far
    more slowly than for the self-matched family.
    """
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    q = 1.0 - p
    lam = matched_cubic_edge_series(q, order)
    _check_coeffs(lam.coeffs, "bit edge")
    bit = DegreeDistribution.from_edge(
        PowerSeries(np.maximum(lam.coeffs, 0.0)), exact_integral=q / 3.0
    )
    check = DegreeDistribution.from_node(monomial(3, order), exact_mean=3.0, allow_degree_one=True)

    cubic = matched_cubic_edge_fn(q)
    integral = _cubic_integral_fn(q)

    def L_fn(x):
        return 3.0 / q * np.asarray(integral(x), dtype=float)

    return DegreePair(
        bit=bit,
        check=check,
        family="NSIRA",
        p=p,
        b=None,
        label="check-regular-3",
        bit_fns=(L_fn, cubic),
        check_fns=(_regular_node_fn(3), _regular_edge_fn(3)),
    )


def _accumulated_regular_side(c: float, order: int) -> tuple[DegreeDistribution, Callable, Callable]:
    """Irregular side matched to a degree-3-regular side through one accumulator.

    Edge form (1 - sqrt(1-x)) / (1 - c (1 - G))^2 with
    G = 3x - 2(1 - (1-x)^{3/2}); node form G / (1 - c + c G).  The mean
    equals 3 (1 - c).
    """
    three_half = binomial_series(1.5, order)
    G = 3.0 * monomial(1, order) - 2.0 * (1.0 - three_half)
    node = G / (1.0 - c + c * G)
    coeffs = node.coeffs.copy()
    _check_coeffs(coeffs, "node")
    coeffs[:2] = np.maximum(coeffs[:2], 0.0)
    mean = 3.0 * (1.0 - c)
    dist = DegreeDistribution.from_node(
        PowerSeries(np.maximum(coeffs, 0.0)), exact_mean=mean, check_normalized=False
    )

    def node_fn(x):
        x = np.asarray(x, dtype=float)
        g = 3.0 * x - 2.0 * (1.0 - (1.0 - x) ** 1.5)
        return g / (1.0 - c + c * g)

    def edge_fn(x):
        x = np.asarray(x, dtype=float)
        g = 3.0 * x - 2.0 * (1.0 - (1.0 - x) ** 1.5)
        return (1.0 - np.sqrt(np.maximum(1.0 - x, 0.0))) / (1.0 - c * (1.0 - g)) ** 2

    return dist, node_fn, edge_fn


def nsira_bit_regular(p: float, order: int = DEFAULT_ORDER) -> DegreePair:
    """NSIRA pair with degree-3 bits; valid natively for p <= 1/13."""
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    if p > 1.0 / 13.0 + 1e-12:
        raise ValidityError(f"p={p} beyond 1/13; puncture a lower-p design instead")
    check, node_fn, edge_fn = _accumulated_regular_side(p, order)
    bit = DegreeDistribution.from_node(monomial(3, order), exact_mean=3.0)
    return DegreePair(
        bit=bit,
        check=check,
        family="NSIRA",
        p=p,
        b=None,
        label="bit-regular-3",
        bit_fns=(_regular_node_fn(3), _regular_edge_fn(3)),
        check_fns=(node_fn, edge_fn),
    )


def aldpc_bit_regular(p: float, order: int = DEFAULT_ORDER) -> DegreePair:
    """ALDPC pair with degree-3 bits; non-negative for every p in (0, 1).

    The check side is the matched cubic itself (no accumulator on that
    side), so its node form is the normalized cubic integral.
    """
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    rho = matched_cubic_edge_series(p, order)
    _check_coeffs(rho.coeffs, "check edge")
    check = DegreeDistribution.from_edge(
        PowerSeries(np.maximum(rho.coeffs, 0.0)),
        exact_integral=p / 3.0,
        allow_degree_one=True,
    )
    bit = DegreeDistribution.from_node(monomial(3, order), exact_mean=3.0)

    cubic = matched_cubic_edge_fn(p)
    integral = _cubic_integral_fn(p)

    def R_fn(x):
        return 3.0 / p * np.asarray(integral(x), dtype=float)

    return DegreePair(
        bit=bit,
        check=check,
        family="ALDPC",
        p=p,
        b=None,
        label="bit-regular-3",
        bit_fns=(_regular_node_fn(3), _regular_edge_fn(3)),
        check_fns=(R_fn, cubic),
    )


def aldpc_check_regular(p: float, order: int = DEFAULT_ORDER) -> DegreePair:
    """ALDPC pair with degree-3 checks; valid natively for p >= 12/13."""
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    if p < 12.0 / 13.0 - 1e-12:
        raise ValidityError(f"p={p} below 12/13; puncture a higher-p design instead")
    bit, node_fn, edge_fn = _accumulated_regular_side(1.0 - p, order)
    check = DegreeDistribution.from_node(monomial(3, order), exact_mean=3.0, allow_degree_one=True)
    return DegreePair(
        bit=bit,
        check=check,
        family="ALDPC",
        p=p,
        b=None,
        label="check-regular-3",
        bit_fns=(node_fn, edge_fn),
        check_fns=(_regular_node_fn(3), _regular_edge_fn(3)),
    )


# ---------------------------------------------------------------------------
# generic solve: check side from a polynomial bit side
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckSideSolution:
    """Check side recovered from a bit side: series plus pointwise evaluators."""

    R: PowerSeries
    rho: PowerSeries
    R_fn: Callable
    rho_fn: Callable


def _poly_compose(coeffs: np.ndarray, v: PowerSeries, order: int) -> PowerSeries:
    """Evaluate a polynomial (given by coeffs) at a series argument, Horner-style."""
    acc = PowerSeries(np.zeros(order + 1))
    for c in coeffs[::-1]:
        acc = (acc * v).truncated(order) + float(c)
    return acc


def solve_check_from_bit(L: PowerSeries, p: float, order: int = DEFAULT_ORDER) -> CheckSideSolution:
    """Recover the check side matched to a polynomial bit side at erasure p.

    Pipeline: tilt the bit side, take the matched image of the tilted
    edge function (numerical inversion), integrate it (quadrature for the
    evaluator, term-by-term for the series), and untilt back to the check
    node distribution.  The same routine run at 1 - p solves the bit side
    from a check side.
    """
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    nz = np.nonzero(np.abs(L.coeffs) > 1e-14)[0]
    if len(nz) == 0:
        raise InvalidParameterError("bit side is identically zero")
    deg = int(nz[-1])
    Lc = L.coeffs[: deg + 1]
    mean = float(np.dot(np.arange(deg + 1), Lc))
    lam_c = np.arange(1, deg + 1) * Lc[1:] / mean  # polynomial edge coefficients

    # --- series route: Newton on the cleared matched-image equation ---
    # G(v) = p^2 lam(v) - (1-x) (1 - (1-p) L(v))^2 = 0 with v(0) = 1
    order_x = order
    x_s = monomial(1, order_x)
    v = PowerSeries([1.0])
    n = 1
    while n <= order_x:
        n = min(2 * n, order_x + 1)
        vn = v.truncated(n - 1)
        Lv = _poly_compose(Lc, vn, n - 1)
        lam_v = _poly_compose(lam_c, vn, n - 1)
        one_m = (1.0 - (1.0 - p) * Lv).truncated(n - 1)
        G = (p ** 2) * lam_v - ((1.0 - x_s.truncated(n - 1)) * one_m * one_m).truncated(n - 1)
        # G'(v) = p^2 lam'(v) + 2 (1-x)(1 - (1-p) L(v)) (1-p) lam(v) * mean
        lam_deriv_c = np.arange(1, deg) * lam_c[1:] if deg >= 2 else np.array([0.0])
        lam_dv = _poly_compose(lam_deriv_c, vn, n - 1) if deg >= 2 else PowerSeries([0.0])
        Ld_c = np.arange(1, deg + 1) * Lc[1:]
        Ldv = _poly_compose(Ld_c, vn, n - 1)
        Gp = (p ** 2) * lam_dv + 2.0 * (1.0 - p) * (
            (1.0 - x_s.truncated(n - 1)) * one_m * Ldv
        ).truncated(n - 1)
        v = (vn - G * reciprocal(Gp)).truncated(n - 1)
    rho_tilde = (1.0 - v.truncated(order_x)).truncated(order_x)
    coeffs = rho_tilde.coeffs.copy()
    coeffs[0] = 0.0
    rho_tilde = PowerSeries(coeffs)
    area = p / mean  # exact integral of the tilted edge function on [0, 1]
    Q = rho_tilde.antiderivative().truncated(order_x) * (1.0 / area)
    R = Q / (1.0 - p + p * Q)
    rho = edge_from_node(R, exact_mean=(1.0 - p) * mean / p)

    # --- pointwise route: matched image by bisection, quadrature for Q ---
    L_fn = PowerSeries(Lc)
    lam_fn = PowerSeries(lam_c)

    def lam_tilde(x):
        x = np.asarray(x, dtype=float)
        return (p ** 2) * lam_fn(x) / (1.0 - (1.0 - p) * L_fn(x)) ** 2

    rho_tilde_fn = t_operator(lambda x: float(lam_tilde(x)))
    nodes, weights = np.polynomial.legendre.leggauss(48)

    def integral_to(x: float) -> float:
        # integrate by parts so the quadrature only ever sees the smooth
        # tilted bit side: int_0^x of the matched image equals
        # (x-1) y + int_{1-y}^1 lam_tilde with y the matched image at x
        y = float(rho_tilde_fn(x))
        lo = 1.0 - y
        mid = 0.5 * (lo + 1.0)
        half = 0.5 * (1.0 - lo)
        tail = half * float(np.sum(weights * lam_tilde(mid + half * nodes)))
        return (x - 1.0) * y + tail

    def Q_fn(x):
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.array([integral_to(float(xi)) / area for xi in xs])
        return float(out[0]) if np.ndim(x) == 0 else out

    def R_fn(x):
        qv = np.asarray(Q_fn(x), dtype=float)
        return qv / (1.0 - p + p * qv)

    def rho_fn(x):
        qv = np.asarray(Q_fn(x), dtype=float)
        return np.asarray(rho_tilde_fn(x), dtype=float) / (1.0 - p + p * qv) ** 2

    return CheckSideSolution(R=R, rho=rho, R_fn=R_fn, rho_fn=rho_fn)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

CATALOG: dict[str, Callable[..., DegreePair]] = {
    "self-matched-ara": self_matched_ara,
    "self-matched-nsira": self_matched_nsira,
    "self-matched-aldpc": self_matched_aldpc,
    "bit-regular-ara": bit_regular_ara,
    "check-regular-ara": check_regular_ara,
    "check-regular-nsira": nsira_check_regular,
    "bit-regular-nsira": nsira_bit_regular,
    "bit-regular-aldpc": aldpc_bit_regular,
    "check-regular-aldpc": aldpc_check_regular,
}


def build_catalog_pair(
    name: str,
    p: float,
    b: Optional[float] = None,
    order: int = DEFAULT_ORDER,
    allow_unproven: bool = False,
) -> DegreePair:
    """Build a catalog pair by name; b applies to self-matched families only."""
    if name not in CATALOG:
        raise InvalidParameterError(f"unknown family {name!r}; choices: {sorted(CATALOG)}")
    builder = CATALOG[name]
    if name.startswith("self-matched"):
        return builder(p, b=b, order=order)
    if name in ("bit-regular-ara", "check-regular-ara"):
        return builder(p, order=order, allow_unproven=allow_unproven)
    return builder(p, order=order)
