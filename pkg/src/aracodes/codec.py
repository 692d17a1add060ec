"""Finite-length code realization, encoding, and erasure decoding.

An instance has three bit layers: k systematic bits feeding an
accumulator whose outputs (the punctured bits, never transmitted) connect
through a random socket permutation to parity checks, which feed a second
accumulator producing the transmitted parity bits.  Decoding first
collapses both accumulator chains against the received values (graph
reduction), then peels degree-1 checks, and finally solves the remaining
unknowns against a high-rate random outer code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .powerseries import DegreePair, InvalidParameterError


class ConstructionError(ValueError):
    """Instance quantization could not satisfy the socket-count constraints."""


# ---------------------------------------------------------------------------
# GF(2) linear algebra (dense, uint8 rows)
# ---------------------------------------------------------------------------

def gf2_eliminate(A: np.ndarray, b: np.ndarray) -> tuple[int, list[int], np.ndarray, np.ndarray]:
    """Row-reduce [A | b] over GF(2).

    Returns (rank, pivot column list, reduced A, reduced b).  Rows of A
    are modified on a copy; b likewise.
    """
    A = (np.asarray(A, dtype=np.uint8) & 1).copy()
    b = (np.asarray(b, dtype=np.uint8) & 1).copy()
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        hit = -1
        for rr in range(r, rows):
            if A[rr, c]:
                hit = rr
                break
        if hit < 0:
            continue
        if hit != r:
            A[[r, hit]] = A[[hit, r]]
            b[[r, hit]] = b[[hit, r]]
        mask = A[:, c].astype(bool)
        mask[r] = False
        A[mask] ^= A[r]
        b[mask] ^= b[r]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return r, pivots, A, b


def gf2_solve_unique(A: np.ndarray, b: np.ndarray) -> Optional[np.ndarray]:
    """Solve A x = b over GF(2); returns x iff the solution is unique."""
    rank, pivots, R, rb = gf2_eliminate(A, b)
    if rank < A.shape[1]:
        return None
    if np.any(rb[rank:]):
        return None  # inconsistent; cannot happen for erasure patterns of valid codewords
    x = np.zeros(A.shape[1], dtype=np.uint8)
    x[pivots] = rb[: len(pivots)]
    return x


# ---------------------------------------------------------------------------
# instance construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CodeInstance:
    """A concrete Tanner graph drawn from a degree pair."""

    k: int
    bit_degrees: np.ndarray  # degree of each punctured bit (pilots keep theirs)
    check_degrees: np.ndarray
    edge_targets: np.ndarray  # punctured-bit index per check socket
    check_offsets: np.ndarray  # len(check_degrees) + 1 prefix offsets
    pilot_set: np.ndarray  # sorted punctured-bit indices forced to zero
    outer_P: np.ndarray  # m x (k - m) binary matrix
    family: str
    seed: int
    d_L: int
    d_R: int

    @property
    def n_checks(self) -> int:
        return len(self.check_degrees)

    @property
    def n(self) -> int:
        return self.k + self.n_checks

    @property
    def m_outer(self) -> int:
        return self.outer_P.shape[0]

    @property
    def info_len(self) -> int:
        return self.k - len(self.pilot_set) - self.m_outer

    def descriptor(self) -> str:
        doc = {
            "k": self.k,
            "family": self.family,
            "seed": self.seed,
            "d_L": self.d_L,
            "d_R": self.d_R,
            "check_degrees": self.check_degrees.tolist(),
            "bit_degrees": self.bit_degrees.tolist(),
            "pilots": self.pilot_set.tolist(),
            "outer_shape": list(self.outer_P.shape),
        }
        return json.dumps(doc)


def _largest_remainder(weights: np.ndarray, total: int) -> np.ndarray:
    """Integer counts summing to total, proportional to weights."""
    weights = np.maximum(np.asarray(weights, dtype=float), 0.0)
    if weights.sum() <= 0.0:
        raise ConstructionError("no mass to quantize")
    ideal = weights / weights.sum() * total
    counts = np.floor(ideal).astype(int)
    short = total - int(counts.sum())
    if short > 0:
        order = np.argsort(-(ideal - counts), kind="stable")
        counts[order[:short]] += 1
    return counts


def instantiate(
    pair: DegreePair,
    k: int,
    d_L: int = 64,
    d_R: int = 64,
    m_outer: int = 0,
    seed: int = 0,
) -> CodeInstance:
    """Scale and quantize a degree pair into a concrete graph.

    Node counts come from largest-remainder rounding; checks above d_R are
    clipped to d_R, bits above d_L become pilots (keeping their degree).
    The socket-count mismatch left by independent rounding is repaired on
    the most numerous check degree, with at most one odd-sized check.
    """
    if pair.family != "ARA":
        raise ConstructionError("finite-length realization currently covers ARA graphs only")
    if d_L < 2 or d_R < 2:
        raise InvalidParameterError("d_L and d_R must be at least 2")
    rng = np.random.default_rng(seed)

    bit_fracs = pair.bit.node.coeffs.copy()
    if bit_fracs[:2].sum() > 1e-9:
        raise ConstructionError("bit distribution has degree-0/1 mass")
    bit_counts = _largest_remainder(bit_fracs, k)
    bit_degrees = np.repeat(np.arange(len(bit_counts)), bit_counts)
    bit_degrees = rng.permutation(bit_degrees)

    # pilots must stay clear of the outer-coded tail positions
    pilot_mask = bit_degrees > d_L
    if m_outer > 0:
        tail = np.flatnonzero(pilot_mask[k - m_outer :]) + (k - m_outer)
        front_free = np.flatnonzero(~pilot_mask[: k - m_outer])
        if len(tail) > len(front_free):
            raise ConstructionError("too many pilots to keep the outer-coded tail clear")
        for t, f in zip(tail, front_free[: len(tail)]):
            bit_degrees[t], bit_degrees[f] = bit_degrees[f], bit_degrees[t]
        pilot_mask = bit_degrees > d_L
    pilot_set = np.flatnonzero(pilot_mask)
    n_edges = int(bit_degrees.sum())

    check_fracs = pair.check.node.coeffs.copy()
    mean_check = float(
        np.dot(np.arange(len(check_fracs)), check_fracs) / max(check_fracs.sum(), 1e-300)
    )
    n_checks = max(1, int(round(n_edges / mean_check)))
    check_counts = _largest_remainder(check_fracs, n_checks)
    if len(check_counts) > d_R + 1:
        check_counts[d_R] += int(check_counts[d_R + 1 :].sum())
        check_counts = check_counts[: d_R + 1]
    check_degrees = np.repeat(np.arange(len(check_counts)), check_counts)

    deficit = n_edges - int(check_degrees.sum())
    if len(check_degrees) == 0:
        raise ConstructionError("no check nodes after quantization")
    degrees_present, present_counts = np.unique(check_degrees, return_counts=True)
    d_star = int(degrees_present[np.argmax(present_counts)])
    if deficit > 0:
        extra = [d_star] * (deficit // d_star)
        if deficit % d_star:
            extra.append(deficit % d_star)
        check_degrees = np.concatenate([check_degrees, extra]).astype(int)
    elif deficit < 0:
        remove = (-deficit) // d_star
        leftover = (-deficit) % d_star
        star_idx = np.flatnonzero(check_degrees == d_star)
        if len(star_idx) < remove + (1 if leftover else 0):
            raise ConstructionError("socket repair would exhaust the dominant check degree")
        keep = np.ones(len(check_degrees), dtype=bool)
        keep[star_idx[:remove]] = False
        if leftover:
            check_degrees[star_idx[remove]] = d_star - leftover
        check_degrees = check_degrees[keep]
    check_degrees = rng.permutation(check_degrees)
    if int(check_degrees.sum()) != n_edges:
        raise ConstructionError("socket counts failed to match after repair")

    perm = rng.permutation(n_edges)
    bit_sockets = np.repeat(np.arange(k), bit_degrees)
    edge_targets = bit_sockets[perm]
    check_offsets = np.concatenate([[0], np.cumsum(check_degrees)]).astype(np.int64)

    outer_P = rng.integers(0, 2, size=(m_outer, k - m_outer), dtype=np.uint8)
    for arr in (bit_degrees, check_degrees, edge_targets, check_offsets, pilot_set, outer_P):
        arr.flags.writeable = False
    return CodeInstance(
        k=k,
        bit_degrees=bit_degrees,
        check_degrees=check_degrees.astype(np.int64),
        edge_targets=edge_targets.astype(np.int64),
        check_offsets=check_offsets,
        pilot_set=pilot_set.astype(np.int64),
        outer_P=outer_P,
        family=pair.family,
        seed=seed,
        d_L=d_L,
        d_R=d_R,
    )


# ---------------------------------------------------------------------------
# encoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Codeword:
    u: np.ndarray  # systematic bits
    z: np.ndarray  # parity bits

    @property
    def n(self) -> int:
        return len(self.u) + len(self.z)

    def to_string(self) -> str:
        return "".join(str(int(b)) for b in self.u) + "|" + "".join(str(int(b)) for b in self.z)


def encode(inst: CodeInstance, info: np.ndarray, pilots_zeroed: bool = True) -> Codeword:
    """Systematic encoding: accumulate, permute into checks, accumulate.

    Pilot positions have their systematic bit chosen so the corresponding
    punctured bit is zero; the last m systematic bits force the punctured
    bits to satisfy the outer code.  With ``pilots_zeroed`` off, pilots
    consume info bits like ordinary positions (the decoder must match).
    """
    info = (np.asarray(info, dtype=np.uint8) & 1).astype(np.uint8)
    k, m = inst.k, inst.m_outer
    pilots = inst.pilot_set if pilots_zeroed else np.empty(0, dtype=np.int64)
    expected = k - len(pilots) - m
    if len(info) != expected:
        raise InvalidParameterError(f"expected {expected} info bits, got {len(info)}")

    # punctured-bit prefix within each pilot-delimited segment
    u_work = np.zeros(k, dtype=np.uint8)
    carry_positions = np.ones(k, dtype=bool)
    carry_positions[pilots] = False
    if m:
        carry_positions[k - m :] = False
    u_work[carry_positions] = info
    prefix = np.cumsum(u_work, dtype=np.int64) & 1
    if len(pilots):
        pil_prefix = prefix[pilots]
        idx = np.searchsorted(pilots, np.arange(k), side="right") - 1
        base = np.where(idx >= 0, pil_prefix[np.maximum(idx, 0)], 0)
        v = (prefix ^ base).astype(np.uint8)
    else:
        v = prefix.astype(np.uint8)
    if m:
        v[k - m :] = (inst.outer_P @ v[: k - m]) & 1

    u = v ^ np.concatenate([[0], v[:-1]]).astype(np.uint8)
    w = (
        np.bitwise_xor.reduceat(v[inst.edge_targets], inst.check_offsets[:-1])
        if inst.n_checks
        else np.empty(0, np.uint8)
    )
    z = (np.cumsum(w, dtype=np.int64) & 1).astype(np.uint8)
    return Codeword(u=u, z=z)


def check_codeword(inst: CodeInstance, cw: Codeword, pilots_zeroed: bool = True) -> bool:
    """Exhaustively verify all graph, pilot, and outer-code constraints."""
    v = (np.cumsum(cw.u, dtype=np.int64) & 1).astype(np.uint8)
    w = np.bitwise_xor.reduceat(v[inst.edge_targets], inst.check_offsets[:-1])
    z = (np.cumsum(w, dtype=np.int64) & 1).astype(np.uint8)
    if not np.array_equal(z, cw.z):
        return False
    if pilots_zeroed and len(inst.pilot_set) and np.any(v[inst.pilot_set]):
        return False
    m = inst.m_outer
    if m:
        want = (inst.outer_P @ v[: inst.k - m]) & 1
        if not np.array_equal(v[inst.k - m :], want):
            return False
    return True


@dataclass(frozen=True)
class ReceivedWord:
    """Channel output: -1 marks an erasure, otherwise the bit value."""

    u_vals: np.ndarray  # int8, length k
    z_vals: np.ndarray  # int8, length n_checks

    def to_string(self) -> str:
        sym = {-1: "e", 0: "0", 1: "1"}
        return "".join(sym[int(x)] for x in self.u_vals) + "|" + "".join(
            sym[int(x)] for x in self.z_vals
        )

    @classmethod
    def from_string(cls, text: str) -> "ReceivedWord":
        u_part, z_part = text.split("|")
        conv = lambda ch: -1 if ch == "e" else int(ch)
        return cls(
            u_vals=np.array([conv(c) for c in u_part], dtype=np.int8),
            z_vals=np.array([conv(c) for c in z_part], dtype=np.int8),
        )


# ---------------------------------------------------------------------------
# graph reduction
# ---------------------------------------------------------------------------

@dataclass
class ResidualGraph:
    """Working state of a single decode after collapsing both accumulators.

    Punctured bits merge into equality classes (one per erased systematic
    bit, plus the anchored prefix class); checks merge into groups between
    observed parity bits.  Constraints are kept with running syndromes and
    the xor-of-ids trick for O(1) degree-1 resolution.
    """

    n_classes: int
    cls: np.ndarray  # class id per punctured bit
    off: np.ndarray  # value offset of each bit within its class
    known: np.ndarray  # per class
    vals: np.ndarray  # per class
    grp_syndrome: np.ndarray
    grp_count: np.ndarray  # unknown classes per group (after cancellation)
    grp_xor: np.ndarray  # xor of unknown class ids per group
    grp_classes: np.ndarray  # flat unknown-class lists (post-cancellation)
    grp_offsets: np.ndarray
    class_groups: np.ndarray  # flat group lists per class
    class_offsets: np.ndarray
    merged_degree_sums: np.ndarray  # summed raw check degrees per closed group
    n_unclosed: int


def graph_reduce_instance(
    inst: CodeInstance, rcv: ReceivedWord, pilots_known: bool = True
) -> ResidualGraph:
    """Collapse both accumulator chains against the received word.

    Known parity bits close check groups with a definite syndrome; a
    trailing run of erased parity bits leaves an unclosed group that
    carries no usable constraint and is dropped.  Known systematic bits
    chain punctured bits into affine equality classes; pilots enter as
    known-zero side information regardless of channel erasures.
    """
    k = inst.k
    u_vals, z_vals = rcv.u_vals, rcv.z_vals
    erased_u = u_vals < 0

    cls = np.cumsum(erased_u, dtype=np.int64)
    n_classes = int(cls[-1]) + 1 if k else 1
    u_masked = np.where(erased_u, 0, u_vals).astype(np.uint8)
    prefix = (np.cumsum(u_masked, dtype=np.int64) & 1).astype(np.uint8)
    starts = np.flatnonzero(erased_u)
    base = np.zeros(n_classes, dtype=np.uint8)
    if len(starts):
        base[1:] = prefix[starts]
    off = prefix ^ base[cls]

    known = np.zeros(n_classes, dtype=bool)
    vals = np.zeros(n_classes, dtype=np.uint8)
    known[0] = True  # anchored to the virtual zero state before the first bit
    if pilots_known and len(inst.pilot_set):
        pc = cls[inst.pilot_set]
        known[pc] = True
        vals[pc] = off[inst.pilot_set]

    # check groups between observed parity bits
    observed_z = z_vals >= 0
    n_obs = int(observed_z.sum())
    grp_of_check = np.concatenate([[0], np.cumsum(observed_z, dtype=np.int64)[:-1]])
    n_groups_total = int(grp_of_check[-1]) + 1 if inst.n_checks else 0
    n_unclosed = n_groups_total - n_obs  # 0 or 1

    zo_idx = np.flatnonzero(observed_z)
    zo = z_vals[zo_idx].astype(np.uint8)
    synd_closed = zo ^ np.concatenate([[0], zo[:-1]]).astype(np.uint8)

    sock_grp = np.repeat(grp_of_check, inst.check_degrees)
    sock_cls = cls[inst.edge_targets]
    sock_const = off[inst.edge_targets] ^ (known[sock_cls] * vals[sock_cls]).astype(np.uint8)

    grp_syndrome = np.zeros(n_obs, dtype=np.uint8)
    merged_sums = np.zeros(n_obs, dtype=np.int64)
    if n_obs:
        closed_mask = sock_grp < n_obs
        if np.any(closed_mask):
            cg = sock_grp[closed_mask]
            const_fold = np.zeros(n_obs, dtype=np.int64)
            np.add.at(const_fold, cg, sock_const[closed_mask])
            grp_syndrome = (synd_closed ^ (const_fold & 1)).astype(np.uint8)
        else:
            grp_syndrome = synd_closed
        check_grp = grp_of_check[: inst.n_checks]
        closed_checks = check_grp < n_obs
        np.add.at(merged_sums, check_grp[closed_checks], inst.check_degrees[closed_checks])

    # unknown-class incidence with mod-2 multiplicity cancellation
    if n_obs:
        live = (sock_grp < n_obs) & ~known[sock_cls]
        keys = sock_grp[live] * np.int64(n_classes) + sock_cls[live]
        uniq, counts = np.unique(keys, return_counts=True)
        odd = uniq[counts % 2 == 1]
        e_grp = (odd // n_classes).astype(np.int64)
        e_cls = (odd % n_classes).astype(np.int64)
    else:
        e_grp = np.empty(0, dtype=np.int64)
        e_cls = np.empty(0, dtype=np.int64)

    grp_count = np.zeros(n_obs, dtype=np.int64)
    grp_xor = np.zeros(n_obs, dtype=np.int64)
    np.add.at(grp_count, e_grp, 1)
    np.bitwise_xor.at(grp_xor, e_grp, e_cls)
    grp_offsets = np.concatenate([[0], np.cumsum(grp_count)]).astype(np.int64)
    order = np.argsort(e_grp, kind="stable")
    grp_classes = e_cls[order]

    order_c = np.argsort(e_cls, kind="stable")
    class_counts = np.zeros(n_classes, dtype=np.int64)
    np.add.at(class_counts, e_cls, 1)
    class_offsets = np.concatenate([[0], np.cumsum(class_counts)]).astype(np.int64)
    class_groups = e_grp[order_c]

    return ResidualGraph(
        n_classes=n_classes,
        cls=cls,
        off=off,
        known=known,
        vals=vals,
        grp_syndrome=grp_syndrome,
        grp_count=grp_count,
        grp_xor=grp_xor,
        grp_classes=grp_classes,
        grp_offsets=grp_offsets,
        class_groups=class_groups,
        class_offsets=class_offsets,
        merged_degree_sums=merged_sums,
        n_unclosed=n_unclosed,
    )


# ---------------------------------------------------------------------------
# peeling and outer decoding
# ---------------------------------------------------------------------------

def peel_decode(rg: ResidualGraph) -> int:
    """Resolve degree-1 check groups until none remain; returns resolutions."""
    stack = list(np.flatnonzero(rg.grp_count == 1))
    resolved = 0
    count, xor, synd = rg.grp_count, rg.grp_xor, rg.grp_syndrome
    known, vals = rg.known, rg.vals
    cg, co = rg.class_groups, rg.class_offsets
    while stack:
        g = stack.pop()
        if count[g] != 1:
            continue
        c = int(xor[g])
        if known[c]:
            continue
        value = synd[g]
        known[c] = True
        vals[c] = value
        resolved += 1
        for gg in cg[co[c] : co[c + 1]]:
            count[gg] -= 1
            xor[gg] ^= c
            synd[gg] ^= value
            if count[gg] == 1:
                stack.append(gg)
    return resolved


class _ParityUnionFind:
    """Union-find over unknown classes carrying a parity offset to the root."""

    def __init__(self, ids):
        self.parent = {int(c): int(c) for c in ids}
        self.parity = {int(c): 0 for c in ids}

    def find_with_parity(self, c: int) -> tuple[int, int]:
        root = c
        par = 0
        while self.parent[root] != root:
            par ^= self.parity[root]
            root = self.parent[root]
        # path compression
        node = c
        acc = par
        while self.parent[node] != node:
            nxt = self.parent[node]
            npar = self.parity[node]
            self.parent[node] = root
            self.parity[node] = acc
            acc ^= npar
            node = nxt
        return root, par

    def union(self, a: int, b: int, s: int) -> bool:
        ra, pa = self.find_with_parity(a)
        rb, pb = self.find_with_parity(b)
        if ra == rb:
            return False  # dependent constraint (consistent on the BEC)
        self.parent[ra] = rb
        self.parity[ra] = pa ^ pb ^ s
        return True


def outer_decode(rg: ResidualGraph, inst: CodeInstance) -> bool:
    """Solve the unknowns left after peeling against the outer code.

    Leftover degree-2 groups act as (affine) equalities merging unknowns;
    the outer constraints then form an m x (remaining) binary system that
    succeeds exactly when it has full column rank.  On success the class
    values in ``rg`` are filled in.
    """
    unknown = np.flatnonzero(~rg.known)
    if len(unknown) == 0:
        return True
    m = inst.m_outer
    if m == 0:
        return False

    uf = _ParityUnionFind(unknown)
    for g in np.flatnonzero(rg.grp_count == 2):
        members = [
            int(c)
            for c in rg.grp_classes[rg.grp_offsets[g] : rg.grp_offsets[g + 1]]
            if not rg.known[c]
        ]
        if len(members) == 2:
            uf.union(members[0], members[1], int(rg.grp_syndrome[g]))

    roots = sorted({uf.find_with_parity(int(c))[0] for c in unknown})
    col_of = {r: i for i, r in enumerate(roots)}
    n_cols = len(roots)
    if n_cols > m:
        return False  # rank bound: more merged unknowns than equations

    k = inst.k
    A = np.zeros((m, n_cols), dtype=np.uint8)
    b = np.zeros(m, dtype=np.uint8)
    for r in range(m):
        positions = np.flatnonzero(inst.outer_P[r]).tolist()
        positions.append(k - m + r)
        rhs = 0
        for j in positions:
            c = int(rg.cls[j])
            rhs ^= int(rg.off[j])
            if rg.known[c]:
                rhs ^= int(rg.vals[c])
            else:
                root, par = uf.find_with_parity(c)
                rhs ^= par
                A[r, col_of[root]] ^= 1
        b[r] = rhs

    x = gf2_solve_unique(A, b)
    if x is None:
        return False
    for c in unknown:
        root, par = uf.find_with_parity(int(c))
        rg.vals[c] = x[col_of[root]] ^ par
        rg.known[c] = True
    return True


@dataclass(frozen=True)
class DecodeResult:
    success: bool
    v_vals: np.ndarray  # int8; -1 where unresolved
    unresolved_after_peel: float  # fraction of punctured bits
    rescued_by_outer: bool
    info_bit_failures: int
    info_len: int


def decode(
    inst: CodeInstance, rcv: ReceivedWord, use_outer: bool = True, pilots_known: bool = True
) -> DecodeResult:
    """Full decode: graph reduction, peeling, then the outer-code solve."""
    rg = graph_reduce_instance(inst, rcv, pilots_known=pilots_known)
    peel_decode(rg)
    unresolved = float(np.count_nonzero(~rg.known[rg.cls])) / max(inst.k, 1)
    rescued = False
    if not rg.known.all() and use_outer and inst.m_outer > 0:
        if outer_decode(rg, inst):
            rescued = True
    success = bool(rg.known.all())

    v_known = rg.known[rg.cls]
    v_vals = np.where(v_known, rg.vals[rg.cls] ^ rg.off, -1).astype(np.int8)

    # an info bit is lost when it was erased and its flanking states differ
    k, m = inst.k, inst.m_outer
    erased_u = rcv.u_vals < 0
    prev_known = np.concatenate([[True], v_known[:-1]])
    u_lost = erased_u & ~(v_known & prev_known)
    info_mask = np.ones(k, dtype=bool)
    info_mask[inst.pilot_set] = False
    if m:
        info_mask[k - m :] = False
    failures = int(np.count_nonzero(u_lost & info_mask))
    return DecodeResult(
        success=success,
        v_vals=v_vals,
        unresolved_after_peel=unresolved,
        rescued_by_outer=rescued and success,
        info_bit_failures=failures,
        info_len=inst.info_len,
    )


# ---------------------------------------------------------------------------
# brute-force reference decoder (small instances)
# ---------------------------------------------------------------------------

def ml_reference_decode(
    inst: CodeInstance, rcv: ReceivedWord, pilots_known: bool = True
) -> tuple[bool, Optional[np.ndarray]]:
    """Full GF(2) solve of every constraint; the optimal erasure decoder.

    Returns (unique, v) where unique says the entire state is pinned by
    the received word.  Intended for small k as a correctness oracle.
    """
    k, mc, m = inst.k, inst.n_checks, inst.m_outer
    erased_u = np.flatnonzero(rcv.u_vals < 0)
    erased_z = np.flatnonzero(rcv.z_vals < 0)
    n_vars = k + len(erased_u) + len(erased_z)
    u_col = {int(j): k + i for i, j in enumerate(erased_u)}
    z_col = {int(j): k + len(erased_u) + i for i, j in enumerate(erased_z)}

    rows = []
    rhs = []
    # accumulator: v_j + v_{j-1} + u_j = 0
    for j in range(k):
        row = np.zeros(n_vars, dtype=np.uint8)
        row[j] ^= 1
        if j > 0:
            row[j - 1] ^= 1
        r = 0
        if j in u_col:
            row[u_col[j]] ^= 1
        else:
            r ^= int(rcv.u_vals[j])
        rows.append(row)
        rhs.append(r)
    # checks: sum of socket bits + z_i + z_{i-1} = 0
    for i in range(mc):
        row = np.zeros(n_vars, dtype=np.uint8)
        for t in inst.edge_targets[inst.check_offsets[i] : inst.check_offsets[i + 1]]:
            row[t] ^= 1
        r = 0
        for zi in (i, i - 1):
            if zi < 0:
                continue
            if zi in z_col:
                row[z_col[zi]] ^= 1
            else:
                r ^= int(rcv.z_vals[zi])
        rows.append(row)
        rhs.append(r)
    if pilots_known:
        for j in inst.pilot_set:
            row = np.zeros(n_vars, dtype=np.uint8)
            row[j] = 1
            rows.append(row)
            rhs.append(0)
    for r_out in range(m):
        row = np.zeros(n_vars, dtype=np.uint8)
        row[k - m + r_out] ^= 1
        for i in np.flatnonzero(inst.outer_P[r_out]):
            row[i] ^= 1
        rows.append(row)
        rhs.append(0)

    x = gf2_solve_unique(np.array(rows, dtype=np.uint8), np.array(rhs, dtype=np.uint8))
    if x is None:
        return False, None
    return True, x[:k].astype(np.int8)
