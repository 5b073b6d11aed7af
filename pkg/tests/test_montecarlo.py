import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coherent_receivers import HomodyneConfig, PnrConfig, SignalAlphabet
from coherent_receivers.exceptions import DomainError, UndefinedRateError
from coherent_receivers.montecarlo import (
    CHUNK_SIZE,
    SWEEP_COLUMNS,
    EmpiricalRates,
    TrialConfig,
    closed_form,
    homodyne_grid_sweep,
    matched_inc_comparison,
    run_trials,
    sweep_operating_curve,
)
from coherent_receivers.pnr import optimize_displacement


def within(emp, closed, k=3.0):
    se_e = math.sqrt(closed.p_error * (1 - closed.p_error) / emp.n_accepted)
    se_i = math.sqrt(closed.p_inconclusive * (1 - closed.p_inconclusive) / emp.n_trials)
    ok_e = abs(emp.p_error_hat - closed.p_error) <= k * se_e + 1e-12
    ok_i = abs(emp.p_inconclusive_hat - closed.p_inconclusive) <= k * se_i + 1e-12
    return ok_e and ok_i


class TestTrialConfig:
    @pytest.mark.parametrize("n", [0, -3, 2.5])
    def test_bad_n_trials(self, alphabet_024, n):
        with pytest.raises(DomainError) as exc:
            TrialConfig(alphabet_024, HomodyneConfig(), n, 1)
        assert exc.value.param == "n_trials"

    def test_bad_receiver(self, alphabet_024):
        with pytest.raises(DomainError):
            TrialConfig(alphabet_024, object(), 10, 1)


class TestEmpiricalRates:
    def test_basic(self):
        e = EmpiricalRates(1000, 800, 40)
        assert e.p_error_hat == 0.05
        assert e.p_inconclusive_hat == pytest.approx(0.2)
        assert e.se_error == pytest.approx(math.sqrt(0.05 * 0.95 / 800))
        assert e.se_inconclusive == pytest.approx(math.sqrt(0.2 * 0.8 / 1000))

    def test_undefined_error_rate(self):
        e = EmpiricalRates(100, 0, 0)
        assert e.p_inconclusive_hat == 1.0
        with pytest.raises(UndefinedRateError):
            e.p_error_hat

    def test_addition_is_exact(self):
        a, b = EmpiricalRates(10, 7, 2), EmpiricalRates(5, 5, 1)
        assert a + b == EmpiricalRates(15, 12, 3) == b + a

    def test_clopper_pearson_for_rare_errors(self):
        lo, hi = EmpiricalRates(10**6, 10**6, 0).error_interval()
        assert lo == 0.0 and 0 < hi < 1e-5
        lo, hi = EmpiricalRates(10**4, 10**4, 3).error_interval(level=0.95)
        # exact binomial limits for 3 of 10^4
        assert lo == pytest.approx(6.1866e-5, rel=1e-3)
        assert hi == pytest.approx(8.7652e-4, rel=1e-3)

    def test_normal_interval(self):
        e = EmpiricalRates(10**4, 10**4, 500)
        lo, hi = e.error_interval()
        assert lo < 0.05 < hi
        assert hi - lo == pytest.approx(2 * 2.9999 * e.se_error, rel=1e-3)


class TestRunTrials:
    def test_coin_flip(self):
        res = run_trials(TrialConfig(SignalAlphabet(0.0), HomodyneConfig(0.0), 10**6, 7))
        assert res.n_accepted == 10**6
        assert abs(res.p_error_hat - 0.5) <= 3 * 0.0005

    def test_kennedy(self, alphabet_024):
        cfg = PnrConfig(displacement_beta=alphabet_024.alpha, threshold_m=0)
        res = run_trials(TrialConfig(alphabet_024, cfg, 10**6, 11))
        expected = math.exp(-0.96) / 2
        assert res.p_inconclusive_hat == 0.0
        assert abs(res.p_error_hat - expected) <= 3 * math.sqrt(expected * (1 - expected) / 10**6)

    @pytest.mark.parametrize("workers", [2, 3, 8])
    def test_worker_count_invariance(self, alphabet_024, workers):
        cfg = TrialConfig(alphabet_024, HomodyneConfig(0.5), 5 * CHUNK_SIZE + 123, 99)
        assert run_trials(cfg, workers=workers) == run_trials(cfg, workers=1)

    def test_same_seed_same_tally(self, alphabet_024):
        cfg = TrialConfig(alphabet_024, PnrConfig(0.9, 1), 70000, 5)
        assert run_trials(cfg) == run_trials(cfg)

    def test_streams_differ(self, alphabet_024):
        a = run_trials(TrialConfig(alphabet_024, HomodyneConfig(0.3), 50000, 5, (0,)))
        b = run_trials(TrialConfig(alphabet_024, HomodyneConfig(0.3), 50000, 5, (1,)))
        assert a != b

    def test_partial_chunk_counts(self, alphabet_024):
        res = run_trials(TrialConfig(alphabet_024, HomodyneConfig(), CHUNK_SIZE + 1, 1))
        assert res.n_trials == CHUNK_SIZE + 1

    @pytest.mark.parametrize("rx", [HomodyneConfig(0.4), PnrConfig(0.8, 2), PnrConfig(0.3, 1, 0.8, 0.01, 0.98)])
    def test_closed_form_agreement(self, rx):
        alphabet = SignalAlphabet.from_mean_photons(0.47)
        res = run_trials(TrialConfig(alphabet, rx, 400000, 3))
        assert within(res, closed_form(alphabet, rx))

    def test_unequal_priors(self):
        alphabet = SignalAlphabet.from_mean_photons(0.5, p1=0.3)
        rx = HomodyneConfig(0.2)
        res = run_trials(TrialConfig(alphabet, rx, 400000, 8))
        assert within(res, closed_form(alphabet, rx))

    def test_eta_corrected_equivalence(self):
        # simulating at eta with amplitude alpha is the eta = 1 curve at eta*alpha^2
        eta = 0.72
        a = SignalAlphabet.from_mean_photons(0.47)
        for rx, rx1 in [(HomodyneConfig(0.5, eta), HomodyneConfig(0.5)),
                        (PnrConfig(0.7, 1, eta), PnrConfig(0.7 * math.sqrt(eta), 1))]:
            lossy = closed_form(a, rx)
            ideal = closed_form(a.attenuated(eta), rx1)
            assert lossy.p_error == pytest.approx(ideal.p_error, rel=1e-12)
            assert lossy.p_inconclusive == pytest.approx(ideal.p_inconclusive, rel=1e-12, abs=1e-15)
            res = run_trials(TrialConfig(a, rx, 300000, 21))
            assert within(res, ideal)


class TestSweeps:
    def test_single_point_equals_run_trials(self, alphabet_024):
        rows = sweep_operating_curve(alphabet_024, HomodyneConfig, [0.5], 20000, 4, stream=(2,))
        direct = run_trials(TrialConfig(alphabet_024, HomodyneConfig(0.5), 20000, 4, (2, 0)))
        assert len(rows) == 1 and rows[0].empirical == direct

    def test_empty_grid(self, alphabet_024):
        with pytest.raises(DomainError):
            sweep_operating_curve(alphabet_024, HomodyneConfig, [], 10, 1)

    def test_record_columns(self, alphabet_024):
        rows = sweep_operating_curve(alphabet_024, HomodyneConfig, [0.0, 1.0], 1000, 1)
        assert tuple(rows[0].as_record()) == SWEEP_COLUMNS

    def test_closed_only(self, alphabet_024):
        rec = sweep_operating_curve(alphabet_024, HomodyneConfig, [0.2], 0, 1)[0].as_record()
        assert math.isnan(rec["p_err_emp"]) and rec["p_err_closed"] > 0

    def test_homodyne_grid_dimensions(self):
        rows = homodyne_grid_sweep(np.linspace(0.05, 1.0, 21), np.linspace(0.0, 1.0, 41), 0, 1)
        assert len(rows) == 861
        assert len({(r.alpha_sq, r.parameter) for r in rows}) == 861

    def test_homodyne_error_decreases_in_threshold(self):
        rows = homodyne_grid_sweep([0.24, 1.0], np.linspace(0.0, 1.0, 41), 0, 1)
        for a2 in (0.24, 1.0):
            errs = [r.closed.p_error for r in rows if r.alpha_sq == pytest.approx(a2)]
            assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_beta_sweep_minima(self, alphabet_024):
        betas = np.linspace(0.0, 2.0, 401)
        best = []
        for m in (0, 1, 2):
            rows = sweep_operating_curve(alphabet_024, lambda b, m=m: PnrConfig(b, m), betas, 0, 1)
            errs = np.array([r.closed.p_error for r in rows])
            k = int(np.argmin(errs))
            assert 0 < k < betas.size - 1
            best.append((betas[k], errs[k]))
        assert best[0][0] < best[1][0] < best[2][0]
        assert best[0][1] > best[1][1] > best[2][1]


class TestMatchedComparison:
    def test_m0_is_deterministic(self, alphabet_024):
        row = matched_inc_comparison(alphabet_024, 0)
        assert row.p_inc == 0.0 and row.threshold_B == 0.0

    @pytest.mark.parametrize("a2", np.linspace(0.05, 2.0, 12))
    def test_m1_beats_homodyne(self, a2):
        row = matched_inc_comparison(SignalAlphabet.from_mean_photons(a2), 1)
        assert row.p_err_pnr < row.p_err_hd
        assert row.p_err_pnr >= row.chefles - 1e-12
        assert row.p_err_hd >= row.chefles - 1e-12

    def test_matched_rates(self, alphabet_024):
        from coherent_receivers import hd_inconclusive

        row = matched_inc_comparison(alphabet_024, 2)
        assert hd_inconclusive(alphabet_024, HomodyneConfig(row.threshold_B)) == pytest.approx(row.p_inc, abs=1e-12)
        assert row.beta_opt == pytest.approx(optimize_displacement(alphabet_024, 2).beta)

    def test_empirical_columns(self, alphabet_024):
        row = matched_inc_comparison(alphabet_024, 1, n_trials=200000, seed=3)
        assert row.empirical_pnr.n_trials == row.empirical_hd.n_trials == 200000
        assert abs(row.empirical_hd.p_inconclusive_hat - row.p_inc) < 4 * row.empirical_hd.se_inconclusive

    def test_needs_signal(self):
        with pytest.raises(DomainError):
            matched_inc_comparison(SignalAlphabet(0.0), 1)

    def test_error_ratio_m0_to_m2(self):
        a = SignalAlphabet.from_mean_photons(0.47)
        ratio = optimize_displacement(a, 0).p_error / optimize_displacement(a, 2).p_error
        assert ratio >= 1.0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3 * CHUNK_SIZE), st.integers(0, 2**63 - 1), st.integers(2, 6))
def test_determinism_property(n, seed, workers):
    cfg = TrialConfig(SignalAlphabet.from_mean_photons(0.3), PnrConfig(0.5, 1), n, seed)
    assert run_trials(cfg, workers) == run_trials(cfg, 1)
