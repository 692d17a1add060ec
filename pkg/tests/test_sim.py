import numpy as np
import pytest

from aracodes import codec
from aracodes.constructions import self_matched_ara
from aracodes.powerseries import InvalidParameterError
from aracodes.sim import SimConfig, bec_channel, emit_csv, make_puncture_mask, parse_csv, run_sweep


def small_config(**overrides):
    base = dict(
        family="self-matched-ara",
        p_start=0.30,
        p_stop=0.40,
        p_step=0.05,
        k=256,
        trials=40,
        seed=7,
        d_L=24,
        d_R=24,
        m_outer=6,
        design_p=0.5,
        order=128,
    )
    base.update(overrides)
    return SimConfig(**base)


class TestChannel:
    def setup_method(self):
        pair = self_matched_ara(0.5, order=128)
        self.inst = codec.instantiate(pair, k=256, d_L=24, d_R=24, seed=0)
        self.cw = codec.encode(self.inst, np.zeros(self.inst.info_len, dtype=np.uint8))

    def test_near_zero_erasure(self):
        rcv = bec_channel(self.cw, 1e-12, 1.0, seed=1)
        assert not np.any(rcv.u_vals < 0) and not np.any(rcv.z_vals < 0)

    def test_empirical_fraction(self):
        pair = self_matched_ara(0.5, order=64)
        inst = codec.instantiate(pair, k=500_000, d_L=30, d_R=30, seed=1)
        cw = codec.Codeword(
            u=np.zeros(inst.k, dtype=np.uint8), z=np.zeros(inst.n_checks, dtype=np.uint8)
        )
        rcv = bec_channel(cw, 0.5, 1.0, seed=2)
        frac = (np.count_nonzero(rcv.u_vals < 0) + np.count_nonzero(rcv.z_vals < 0)) / cw.n
        assert frac == pytest.approx(0.5, abs=0.002)

    def test_puncturing_effective_rate(self):
        cw = codec.Codeword(
            u=np.zeros(500_000, dtype=np.uint8), z=np.zeros(500_000, dtype=np.uint8)
        )
        rcv = bec_channel(cw, 0.4, 0.5, seed=3)
        frac = (np.count_nonzero(rcv.u_vals < 0) + np.count_nonzero(rcv.z_vals < 0)) / cw.n
        assert frac == pytest.approx(1.0 - 0.5 * (1.0 - 0.4), abs=0.002)

    def test_puncture_mask_deterministic(self):
        a = make_puncture_mask(1000, 0.7, seed=4)
        b = make_puncture_mask(1000, 0.7, seed=4)
        assert np.array_equal(a, b)
        assert np.count_nonzero(a) == 300

    def test_bad_parameters(self):
        with pytest.raises(InvalidParameterError):
            bec_channel(self.cw, 0.5, 0.0, seed=0)
        with pytest.raises(InvalidParameterError):
            bec_channel(self.cw, 1.5, 1.0, seed=0)


class TestConfig:
    def test_validation(self):
        with pytest.raises(InvalidParameterError):
            small_config(trials=0)
        with pytest.raises(InvalidParameterError):
            small_config(p_start=0.0)
        with pytest.raises(InvalidParameterError):
            small_config(alpha=1.5)

    def test_p_values(self):
        cfg = small_config()
        assert np.allclose(cfg.p_values(), [0.30, 0.35, 0.40])


class TestSweep:
    def test_deterministic(self):
        a = run_sweep(small_config())
        b = run_sweep(small_config())
        assert a.word_rates == b.word_rates
        assert a.bit_rates == b.bit_rates
        assert a.unresolved_means == b.unresolved_means

    def test_monotone_word_rate(self):
        cfg = small_config(
            p_start=0.30, p_stop=0.55, p_step=0.05, trials=60, k=512, m_outer=8
        )
        res = run_sweep(cfg)
        rates = np.array(res.word_rates)
        sigma = np.sqrt(0.25 / cfg.trials)
        assert np.all(np.diff(rates) >= -2 * sigma)

    def test_outer_dominance_on_matched_seeds(self):
        with_outer = run_sweep(small_config(p_start=0.42, p_stop=0.46, p_step=0.02, trials=50, k=512))
        without = run_sweep(
            small_config(p_start=0.42, p_stop=0.46, p_step=0.02, trials=50, k=512, use_outer=False)
        )
        for w, wo in zip(with_outer.word_rates, without.word_rates):
            assert w <= wo + 1e-12

    def test_super_threshold_point_fails(self):
        res = run_sweep(small_config(p_start=0.58, p_stop=0.58, p_step=0.01, trials=30, k=512))
        assert res.word_rates[0] > 0.9

    def test_skipped_points_when_redesigning(self):
        cfg = SimConfig(
            family="bit-regular-ara",
            p_start=0.30,
            p_stop=0.45,
            p_step=0.05,
            k=128,
            trials=4,
            seed=0,
            d_L=24,
            d_R=24,
            design_p=None,
            order=96,
        )
        res = run_sweep(cfg)
        assert res.skipped[-1]  # beyond the observed validity bound
        assert not res.skipped[0]
        assert np.isnan(res.word_rates[-1])

    def test_block_length_improvement(self):
        base = dict(p_start=0.42, p_stop=0.42, p_step=0.01, trials=60, m_outer=0, d_L=24, d_R=24)
        small = run_sweep(small_config(k=256, **base))
        large = run_sweep(small_config(k=2048, **base))
        sigma = 2.0 * np.sqrt(0.25 / 60)
        assert large.word_rates[0] <= small.word_rates[0] + sigma

    def test_all_zero_flag(self):
        res = run_sweep(small_config(all_zero=True, trials=10))
        assert res.trials_run == [10, 10, 10]

    def test_punctured_sweep_shifts_threshold(self):
        # rate-1/2 design punctured to rate 0.7: effective erasure is
        # 1 - alpha (1-p), so decoding flips near p = 1 - 0.5/alpha = 0.3
        alpha = 5.0 / 7.0
        cfg = small_config(
            p_start=0.15, p_stop=0.40, p_step=0.25, trials=40, k=2048, alpha=alpha, m_outer=10
        )
        res = run_sweep(cfg)
        assert res.word_rates[0] < 0.2
        assert res.word_rates[1] > 0.8

    def test_worker_pool_matches_serial(self):
        cfg = small_config(p_start=0.40, p_stop=0.40, p_step=0.01, trials=24)
        serial = run_sweep(cfg)
        parallel = run_sweep(small_config(p_start=0.40, p_stop=0.40, p_step=0.01, trials=24, workers=2))
        assert serial.word_rates == parallel.word_rates
        assert serial.bit_rates == parallel.bit_rates
        assert serial.outer_rescue_rates == parallel.outer_rescue_rates


class TestCsv:
    def test_round_trip(self, tmp_path):
        res = run_sweep(small_config(trials=8))
        path = tmp_path / "sweep.csv"
        emit_csv(res, str(path))
        rows = parse_csv(str(path))
        assert len(rows) == 3
        for row, expect in zip(rows, res.rows()):
            assert row[0] == pytest.approx(expect[0])
            assert row[2] == pytest.approx(expect[2])
            assert row[5] == expect[5]

    def test_word_rate_interval(self):
        res = run_sweep(small_config(trials=30))
        lo, hi = res.word_rate_interval(0)
        assert 0.0 <= lo <= res.word_rates[0] <= hi <= 1.0

    def test_header_only_for_empty_sweep(self, tmp_path):
        cfg = small_config()
        res = run_sweep(small_config(trials=1, p_start=0.4, p_stop=0.4, p_step=0.1))
        path = tmp_path / "one.csv"
        emit_csv(res, str(path))
        lines = open(path).read().strip().split("\n")
        assert len(lines) == 2

    def test_write_failure_context(self):
        res = run_sweep(small_config(trials=2))
        with pytest.raises(OSError, match="no/such/dir"):
            emit_csv(res, "/no/such/dir/out.csv")
