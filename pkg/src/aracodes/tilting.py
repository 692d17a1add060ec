"""Graph-reduction transforms, density-evolution machinery, and bookkeeping.

Observed channel bits let the accumulator chains be collapsed: known code
bits are absorbed into their neighbouring checks, erased ones merge the
checks; known systematic bits merge neighbouring punctured bits, erased
ones drop out.  What remains is a plain LDPC decoding problem at erasure
probability one, with "tilted" degree distributions.  This module applies
those transforms to series and to evaluators, and provides the fixed-point
residual, stability margins, rate/complexity accounting, the bit/check
symmetry swap, and a truncation-aware threshold search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .powerseries import (
    DegreeDistribution,
    DegreePair,
    InvalidParameterError,
    NumericDomainError,
    PowerSeries,
    DegenerateInputError,
    truncate_bit,
    truncate_check,
)


def _check_p(p: float) -> float:
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("erasure probability must lie in (0, 1)")
    return float(p)


def tilt_node(node: PowerSeries, side: str, p: float) -> PowerSeries:
    """Graph-reduced node distribution.

    Check side: (1-p) R / (1 - p R); bit side: p L / (1 - (1-p) L).
    With p = 0 the check side is untouched, with p = 1 the bit side is.
    """
    if side == "check":
        scale = 1.0 - p
        den = 1.0 - p * node
    elif side == "bit":
        scale = p
        den = 1.0 - (1.0 - p) * node
    else:
        raise InvalidParameterError("side must be 'bit' or 'check'")
    return (scale * node) / den


def untilt_node(tilde: PowerSeries, side: str, p: float) -> PowerSeries:
    """Inverse of :func:`tilt_node`: recovers the pre-reduction node d.d."""
    if side == "check":
        den = (1.0 - p) + p * tilde
    elif side == "bit":
        den = p + (1.0 - p) * tilde
    else:
        raise InvalidParameterError("side must be 'bit' or 'check'")
    if abs(den.coeffs[0]) < 1e-300:
        raise NumericDomainError("untilt denominator vanishes at the origin")
    return tilde / den


def tilt_node_fn(node_fn: Callable, side: str, p: float) -> Callable:
    def f(x):
        v = node_fn(x)
        if side == "check":
            den = 1.0 - p * v
        else:
            den = 1.0 - (1.0 - p) * v
        den = np.asarray(den, dtype=float)
        if np.any(den <= 0.0):
            raise NumericDomainError("tilt denominator not positive on [0, 1]")
        return ((1.0 - p) if side == "check" else p) * v / den

    return f


def tilt_edge_fn(node_fn: Callable, edge_fn: Callable, side: str, p: float) -> Callable:
    def f(x):
        v = node_fn(x)
        if side == "check":
            den = 1.0 - p * v
            scale = (1.0 - p) ** 2
        else:
            den = 1.0 - (1.0 - p) * v
            scale = p ** 2
        den = np.asarray(den, dtype=float)
        if np.any(den <= 0.0):
            raise NumericDomainError("tilt denominator not positive on [0, 1]")
        return scale * edge_fn(x) / den ** 2

    return f


@dataclass(frozen=True)
class TiltedPair:
    """Edge-perspective pair after graph reduction, with evaluators and series."""

    lam_series: PowerSeries
    rho_series: PowerSeries
    lam_fn: Callable
    rho_fn: Callable
    p: float


def tilt_edge(pair: DegreePair, family: Optional[str] = None, p: Optional[float] = None) -> TiltedPair:
    """Family-specific graph reduction of an edge-perspective pair.

    ARA tilts both sides, NSIRA only the check side, ALDPC only the bit
    side, LDPC neither.
    """
    family = family or pair.family
    p = _check_p(pair.p if p is None else p)
    M = max(pair.bit.order, pair.check.order)

    lam_series, lam_fn = pair.bit.edge.truncated(M), pair.bit_edge_fn()
    rho_series, rho_fn = pair.check.edge.truncated(M), pair.check_edge_fn()
    if family in ("ARA", "ALDPC"):
        den = 1.0 - (1.0 - p) * pair.bit.node
        lam_series = ((p ** 2) * pair.bit.edge.truncated(M)) / (den * den)
        lam_series = lam_series.truncated(M)
        lam_fn = tilt_edge_fn(pair.bit_node_fn(), pair.bit_edge_fn(), "bit", p)
    if family in ("ARA", "NSIRA"):
        den = 1.0 - p * pair.check.node
        rho_series = (((1.0 - p) ** 2) * pair.check.edge.truncated(M)) / (den * den)
        rho_series = rho_series.truncated(M)
        rho_fn = tilt_edge_fn(pair.check_node_fn(), pair.check_edge_fn(), "check", p)
    return TiltedPair(lam_series, rho_series, lam_fn, rho_fn, p)


# ---------------------------------------------------------------------------
# density evolution
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DEState:
    """The six erasure-message probabilities of one decoder iteration."""

    x0: float = 1.0
    x1: float = 1.0
    x2: float = 1.0
    x3: float = 1.0
    x4: float = 1.0
    x5: float = 1.0
    iteration: int = 0

    @classmethod
    def uniform(cls, value: float) -> "DEState":
        v = float(value)
        return cls(v, v, v, v, v, v, 0)


def de_iterate(state: DEState, pair: DegreePair, p: float) -> DEState:
    """One sweep of the six-message decoder recursion on the full graph.

    Messages go down through the layers and back up; this is the exact
    per-layer schedule, kept separate from the collapsed fixed-point
    residual so the two can cross-validate each other.
    """
    L = pair.bit_node_fn()
    lam = pair.bit_edge_fn()
    R = pair.check_node_fn()
    rho = pair.check_edge_fn()
    x0 = 1.0 - (1.0 - state.x5) * (1.0 - p)
    x1 = x0 * x0 * float(lam(state.x4))
    x2 = 1.0 - float(R(1.0 - x1)) * (1.0 - state.x3)
    x3 = p * x2
    x4 = 1.0 - (1.0 - x3) ** 2 * float(rho(1.0 - x1))
    x5 = x0 * float(L(x4))
    clip = lambda v: min(max(v, 0.0), 1.0)
    return DEState(clip(x0), clip(x1), clip(x2), clip(x3), clip(x4), clip(x5), state.iteration + 1)


def de_residual(pair: DegreePair, x, family: Optional[str] = None, p: Optional[float] = None):
    """Fixed-point residual LHS(x) - x of the family's DE equation.

    Uses the pair's exact evaluators when present, truncated series
    otherwise.  Zero at every fixed point; negative everywhere on (0, 1)
    means the decoder erasure probability contracts to zero.
    """
    family = family or pair.family
    p = _check_p(pair.p if p is None else p)
    x = np.asarray(x, dtype=float)

    lam = pair.bit_edge_fn()
    L = pair.bit_node_fn()
    rho = pair.check_edge_fn()
    R = pair.check_node_fn()

    y = 1.0 - x
    if family in ("ARA", "NSIRA"):
        inner = ((1.0 - p) / (1.0 - p * np.asarray(R(y), dtype=float))) ** 2 * np.asarray(
            rho(y), dtype=float
        )
    else:
        inner = np.asarray(rho(y), dtype=float)
    arg = 1.0 - inner

    if family in ("ARA", "ALDPC"):
        lhs = (p ** 2) * np.asarray(lam(arg), dtype=float) / (
            1.0 - (1.0 - p) * np.asarray(L(arg), dtype=float)
        ) ** 2
    elif family == "NSIRA":
        lhs = np.asarray(lam(arg), dtype=float)
    else:  # plain LDPC pair at channel erasure p
        lhs = p * np.asarray(lam(arg), dtype=float)
    out = lhs - x
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class StabilityReport:
    stable_at_0: bool
    unstable_at_1: bool
    margin_at_0: float
    margin_at_1: float


def stability(pair: DegreePair, p: Optional[float] = None, marginal_tol: float = 1e-6) -> StabilityReport:
    """Derivative conditions of the fixed points at x = 0 and x = 1.

    The zero fixed point is stable when the derivative there is below one;
    the all-erased fixed point is usefully unstable when its derivative
    exceeds one, which needs degree-2 check mass.  Exactly matched pairs
    have both derivatives equal to one (the map is the identity), so the
    predicates treat values within ``marginal_tol`` of one as holding.
    """
    p = _check_p(pair.p if p is None else p)
    lam2 = float(pair.bit.edge.coeffs[1]) if pair.bit.edge.order >= 1 else 0.0
    rho2 = float(pair.check.edge.coeffs[1]) if pair.check.edge.order >= 1 else 0.0
    lam_deriv1 = pair.bit.edge.deriv_at_one()
    rho_deriv1 = pair.check.edge.deriv_at_one()
    Lp1 = pair.bit.mean
    Rp1 = pair.check.mean
    margin0 = p ** 2 * lam2 * (rho_deriv1 + 2.0 * p * Rp1 / (1.0 - p))
    margin1 = (1.0 - p) ** 2 * rho2 * (lam_deriv1 + 2.0 * (1.0 - p) * Lp1 / p)
    return StabilityReport(
        margin0 < 1.0 + marginal_tol, margin1 > 1.0 - marginal_tol, margin0, margin1
    )


def design_rate(pair: DegreePair, family: Optional[str] = None) -> float:
    """Design rate implied by the edge-count ratio of the two sides."""
    family = family or pair.family
    ratio = pair.bit.mean / pair.check.mean  # punctured-bit edges per check edge
    if not np.isfinite(ratio) or ratio <= 0.0:
        raise DegenerateInputError("edge-count ratio is degenerate")
    if family == "ARA":
        return 1.0 / (1.0 + ratio)
    if family == "NSIRA":
        return 1.0 / ratio
    # ALDPC and plain LDPC: checks constrain the transmitted bits directly
    return 1.0 - ratio


@dataclass(frozen=True)
class ComplexityReport:
    chi_encode: Optional[float]
    chi_decode: float


def complexity(pair: DegreePair, family: Optional[str] = None, p: Optional[float] = None) -> ComplexityReport:
    """Edges per information bit for encoder and decoder.

    ALDPC encoding is graph-dependent (it can be quadratic without
    preprocessing), so only the decoding count is reported there.
    """
    family = family or pair.family
    rate = design_rate(pair, family)
    mean = pair.bit.mean
    if family == "ARA":
        chi = 3.0 + mean + 2.0 * (1.0 - rate) / rate
        return ComplexityReport(chi, chi)
    if family == "NSIRA":
        chi = mean + 2.0 / rate
        return ComplexityReport(chi, chi)
    if family == "ALDPC":
        return ComplexityReport(None, (3.0 + mean) / rate)
    raise InvalidParameterError("no complexity formula for plain LDPC pairs")


_SWAP_FAMILY = {"ARA": "ARA", "NSIRA": "ALDPC", "ALDPC": "NSIRA", "LDPC": "LDPC"}


def symmetry_swap(pair: DegreePair) -> DegreePair:
    """Swap bit and check distributions and map p to 1 - p.

    ARA maps to ARA, NSIRA and ALDPC map to each other.  A pair that
    satisfies its DE fixed-point equation maps to one that satisfies the
    swapped family's equation at the complementary erasure rate.
    """
    return DegreePair(
        bit=pair.check,
        check=pair.bit,
        family=_SWAP_FAMILY[pair.family],
        p=1.0 - pair.p,
        b=pair.b,
        label=pair.label,
        bit_fns=pair.check_fns,
        check_fns=pair.bit_fns,
    )


@dataclass(frozen=True)
class PunctureResult:
    p_eff: float
    complexity_scale: float


def puncture(p: float, alpha: float) -> PunctureResult:
    """Effective channel after transmitting only a fraction alpha of bits."""
    if not (0.0 < alpha <= 1.0):
        raise InvalidParameterError("alpha must lie in (0, 1]")
    _check_p(p)
    return PunctureResult(1.0 - alpha * (1.0 - p), 1.0 / alpha)


def truncate_pair(pair: DegreePair, max_bit: int, max_check: int) -> DegreePair:
    """Finite-maximum-degree version of a pair.

    Check mass above ``max_check`` becomes degree-1 mass (renormalized);
    bit mass above ``max_bit`` is dropped outright, leaving the bit side
    sub-stochastic (those nodes become pilots in a finite realization).
    """
    rho_hat = truncate_check(pair.check.edge, max_check)
    check = DegreeDistribution.from_edge(rho_hat, allow_degree_one=True)
    lam_hat, _pilot = truncate_bit(pair.bit.edge, max_bit)
    node_hat = pair.bit.node.truncated(max_bit)
    bit = DegreeDistribution(node=node_hat, edge=lam_hat, mean=pair.bit.mean)
    return DegreePair(bit=bit, check=check, family=pair.family, p=pair.p, b=pair.b, label=pair.label)


def chop_pair(pair: DegreePair, max_degree: int) -> DegreePair:
    """Plain storage chop of both sides, with no degree-1 compensation.

    Unlike :func:`truncate_pair` this weakens the check side, so the
    decodable region shrinks: its threshold sits strictly below the
    design erasure probability and climbs back as max_degree grows.
    """
    lam_hat, _ = truncate_bit(pair.bit.edge, max_degree)
    rho_hat, _ = truncate_bit(pair.check.edge, max_degree)
    bit = DegreeDistribution(
        node=pair.bit.node.truncated(max_degree), edge=lam_hat, mean=pair.bit.mean
    )
    check = DegreeDistribution(
        node=pair.check.node.truncated(max_degree), edge=rho_hat, mean=pair.check.mean
    )
    return DegreePair(bit=bit, check=check, family=pair.family, p=pair.p, b=pair.b, label=pair.label)


def threshold_search(
    pair: DegreePair,
    family: Optional[str] = None,
    grid_n: int = 1000,
    p_tol: float = 1e-5,
    resid_tol: float = 1e-9,
) -> float:
    """Largest p for which the DE residual stays non-positive on (0, 1].

    Bisection over p; ties break toward the smaller p.  Returns 0.0 when
    even the smallest probed p admits a fixed point in (0, 1].
    """
    family = family or pair.family
    xs = np.linspace(0.0, 1.0, grid_n + 1)[1:]

    def passes(p: float) -> bool:
        return bool(np.max(de_residual(pair, xs, family=family, p=p)) <= resid_tol)

    lo, hi = 1e-4, 1.0 - 1e-4
    if not passes(lo):
        return 0.0
    if passes(hi):
        return hi
    while hi - lo > p_tol:
        mid = 0.5 * (lo + hi)
        if passes(mid):
            lo = mid
        else:
            hi = mid
    return lo
