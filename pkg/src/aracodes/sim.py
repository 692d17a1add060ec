"""Binary-erasure-channel Monte Carlo harness.

A sweep builds a degree pair, realizes one finite-length instance, and
runs independent encode/channel/decode trials at each channel erasure
probability.  Everything is deterministic given the config seed: trial
seeds are derived from (seed, point index, trial index), so aggregation
is order-independent and worker counts do not change results.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import codec
from .constructions import build_catalog_pair
from .powerseries import InvalidParameterError, ValidityError

WORKER_ENV = "ARACODES_WORKERS"


@dataclass(frozen=True)
class SimConfig:
    family: str
    p_start: float
    p_stop: float
    p_step: float
    k: int
    trials: int = 1000
    seed: int = 0
    d_L: int = 30
    d_R: int = 30
    m_outer: int = 0
    alpha: float = 1.0
    design_p: Optional[float] = None  # None: redesign the code at every sweep point
    b: Optional[float] = None
    order: int = 256
    use_outer: bool = True
    all_zero: bool = False
    allow_unproven: bool = True
    workers: int = 0  # 0: take the worker-count override from the environment

    def __post_init__(self):
        if self.trials < 1:
            raise InvalidParameterError("trials must be at least 1")
        if not (0.0 < self.p_start < 1.0 and 0.0 < self.p_stop < 1.0):
            raise InvalidParameterError("sweep range must lie in (0, 1)")
        if self.p_step <= 0.0:
            raise InvalidParameterError("p_step must be positive")
        if not (0.0 < self.alpha <= 1.0):
            raise InvalidParameterError("alpha must lie in (0, 1]")

    def p_values(self) -> np.ndarray:
        n = int(np.floor((self.p_stop - self.p_start) / self.p_step + 1e-9)) + 1
        return self.p_start + self.p_step * np.arange(max(n, 0))


@dataclass
class SimResult:
    config: SimConfig
    p_values: list[float] = field(default_factory=list)
    bit_rates: list[float] = field(default_factory=list)
    word_rates: list[float] = field(default_factory=list)
    unresolved_means: list[float] = field(default_factory=list)
    outer_rescue_rates: list[float] = field(default_factory=list)
    trials_run: list[int] = field(default_factory=list)
    skipped: list[bool] = field(default_factory=list)
    wall_time: float = 0.0

    def rows(self) -> list[tuple]:
        return list(
            zip(
                self.p_values,
                self.bit_rates,
                self.word_rates,
                self.unresolved_means,
                self.outer_rescue_rates,
                self.trials_run,
            )
        )

    def word_rate_interval(self, index: int, z: float = 1.96) -> tuple[float, float]:
        """Normal-approximation binomial 95% interval for one sweep point."""
        rate = self.word_rates[index]
        n = max(self.trials_run[index], 1)
        half = z * np.sqrt(max(rate * (1.0 - rate), 0.0) / n)
        return max(0.0, rate - half), min(1.0, rate + half)


def bec_channel(
    cw: codec.Codeword,
    p: float,
    alpha: float = 1.0,
    seed=0,
    puncture_mask: Optional[np.ndarray] = None,
) -> codec.ReceivedWord:
    """Erase each transmitted position independently with probability p.

    Punctured positions (a deterministic 1 - alpha fraction, chosen per
    instance) are erased regardless of the channel draw.
    """
    if not (0.0 < p < 1.0):
        raise InvalidParameterError("p must lie in (0, 1)")
    if not (0.0 < alpha <= 1.0):
        raise InvalidParameterError("alpha must lie in (0, 1]")
    rng = np.random.default_rng(seed)
    n = cw.n
    erased = rng.random(n) < p
    if puncture_mask is not None:
        erased |= puncture_mask
    elif alpha < 1.0:
        erased |= make_puncture_mask(n, alpha, seed)
    k = len(cw.u)
    u_vals = np.where(erased[:k], -1, cw.u).astype(np.int8)
    z_vals = np.where(erased[k:], -1, cw.z).astype(np.int8)
    return codec.ReceivedWord(u_vals=u_vals, z_vals=z_vals)


def make_puncture_mask(n: int, alpha: float, seed) -> np.ndarray:
    """Deterministic never-transmitted position set of size round((1-alpha) n)."""
    rng = np.random.default_rng(seed)
    n_punct = int(round((1.0 - alpha) * n))
    mask = np.zeros(n, dtype=bool)
    mask[rng.choice(n, size=n_punct, replace=False)] = True
    return mask


def _trial_batch(
    inst: codec.CodeInstance,
    cfg: SimConfig,
    p: float,
    p_index: int,
    trial_lo: int,
    trial_hi: int,
    puncture_mask: Optional[np.ndarray],
) -> tuple[int, int, float, int, int]:
    """Run trials [lo, hi); returns (word_fails, rescued, unresolved_sum, bit_fails, info_bits)."""
    word_fails = rescued = bit_fails = info_bits = 0
    unresolved_sum = 0.0
    for t in range(trial_lo, trial_hi):
        ss = np.random.SeedSequence(entropy=cfg.seed, spawn_key=(p_index, t))
        rng = np.random.default_rng(ss)
        if cfg.all_zero:
            info = np.zeros(inst.info_len, dtype=np.uint8)
        else:
            info = rng.integers(0, 2, inst.info_len, dtype=np.uint8)
        cw = codec.encode(inst, info)
        # channel randomness must not depend on the info word or outer setting
        chan_ss = np.random.SeedSequence(entropy=cfg.seed, spawn_key=(p_index, t, 1))
        rcv = bec_channel(cw, p, cfg.alpha, chan_ss, puncture_mask)
        res = codec.decode(inst, rcv, use_outer=cfg.use_outer)
        word_fails += not res.success
        rescued += res.rescued_by_outer
        unresolved_sum += res.unresolved_after_peel
        bit_fails += res.info_bit_failures
        info_bits += res.info_len
    return word_fails, rescued, unresolved_sum, bit_fails, info_bits


def _worker_count(cfg: SimConfig) -> int:
    if cfg.workers > 0:
        return cfg.workers
    env = os.environ.get(WORKER_ENV)
    return max(1, int(env)) if env else 1


def run_sweep(cfg: SimConfig) -> SimResult:
    """Monte Carlo sweep over the configured channel range.

    With ``design_p`` set, one code is built at that design point and the
    channel alone varies; otherwise the code is redesigned at every sweep
    point, and points where the construction is invalid are skipped.
    """
    t_start = time.time()
    result = SimResult(config=cfg)
    workers = _worker_count(cfg)

    fixed_inst = None
    fixed_mask = None
    if cfg.design_p is not None:
        pair = build_catalog_pair(
            cfg.family, cfg.design_p, b=cfg.b, order=cfg.order, allow_unproven=cfg.allow_unproven
        )
        fixed_inst = codec.instantiate(
            pair, cfg.k, d_L=cfg.d_L, d_R=cfg.d_R, m_outer=cfg.m_outer, seed=cfg.seed
        )
        if cfg.alpha < 1.0:
            fixed_mask = make_puncture_mask(fixed_inst.n, cfg.alpha, cfg.seed)

    for p_index, p in enumerate(cfg.p_values()):
        p = float(p)
        if fixed_inst is not None:
            inst, mask = fixed_inst, fixed_mask
        else:
            try:
                pair = build_catalog_pair(
                    cfg.family, p, b=cfg.b, order=cfg.order, allow_unproven=cfg.allow_unproven
                )
                inst = codec.instantiate(
                    pair, cfg.k, d_L=cfg.d_L, d_R=cfg.d_R, m_outer=cfg.m_outer, seed=cfg.seed
                )
            except (ValidityError, codec.ConstructionError):
                result.p_values.append(p)
                result.bit_rates.append(float("nan"))
                result.word_rates.append(float("nan"))
                result.unresolved_means.append(float("nan"))
                result.outer_rescue_rates.append(float("nan"))
                result.trials_run.append(0)
                result.skipped.append(True)
                continue
            mask = make_puncture_mask(inst.n, cfg.alpha, cfg.seed) if cfg.alpha < 1.0 else None

        if workers > 1 and cfg.trials >= 2 * workers:
            bounds = np.linspace(0, cfg.trials, workers + 1).astype(int)
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(
                    pool.map(
                        _trial_batch,
                        [inst] * workers,
                        [cfg] * workers,
                        [p] * workers,
                        [p_index] * workers,
                        bounds[:-1],
                        bounds[1:],
                        [mask] * workers,
                    )
                )
        else:
            parts = [_trial_batch(inst, cfg, p, p_index, 0, cfg.trials, mask)]

        word_fails = sum(x[0] for x in parts)
        rescued = sum(x[1] for x in parts)
        unresolved = sum(x[2] for x in parts)
        bit_fails = sum(x[3] for x in parts)
        info_bits = sum(x[4] for x in parts)
        result.p_values.append(p)
        result.bit_rates.append(bit_fails / max(info_bits, 1))
        result.word_rates.append(word_fails / cfg.trials)
        result.unresolved_means.append(unresolved / cfg.trials)
        result.outer_rescue_rates.append(rescued / cfg.trials)
        result.trials_run.append(cfg.trials)
        result.skipped.append(False)

    result.wall_time = time.time() - t_start
    return result


CSV_HEADER = "p,bit_rate,word_rate,unresolved_mean,outer_rescue_rate,trials"


def emit_csv(result: SimResult, path: str) -> None:
    """One header row plus one row per sweep point."""
    try:
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for row in result.rows():
                fh.write(
                    f"{row[0]:.6g},{row[1]:.8g},{row[2]:.8g},{row[3]:.8g},{row[4]:.8g},{row[5]}\n"
                )
    except OSError as exc:
        raise OSError(f"failed writing sweep CSV to {path!r}: {exc}") from exc


def parse_csv(path: str) -> list[tuple]:
    """Read back rows written by :func:`emit_csv` (numeric round trip)."""
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise ValueError(f"unexpected header {header!r} in {path!r}")
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) != 6:
                continue
            rows.append(
                (
                    float(parts[0]),
                    float(parts[1]),
                    float(parts[2]),
                    float(parts[3]),
                    float(parts[4]),
                    int(parts[5]),
                )
            )
    return rows
