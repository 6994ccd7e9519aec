"""Game reports, interval arithmetic, and the Monte Carlo runners."""

import random

import pytest

from subvertlab import (
    GameReport,
    ParameterError,
    SchemaMismatchError,
    StegoParams,
    advantage_and_ci,
    asa_from_stego,
    constant_guess,
    estimate_unrel,
    estimate_unrel_alg,
    estimate_unrel_stego,
    merge_reports,
    randpad_scheme,
    random_composition,
    random_forger,
    random_guess,
    rejsam_system,
    repeat_attacker,
    replay_forger,
    run_cpa_dist,
    run_sig_forge,
    run_ss_cha_dist,
    search_forger,
    sig_fixture,
    uniform_channel,
    wilson_ci,
)

import oracles


def test_wilson_interval_matches_reference():
    for successes, trials in ((0, 10), (10, 10), (7, 13), (493, 1000), (1, 2)):
        lo, hi = wilson_ci(successes, trials)
        ref_lo, ref_hi = oracles.wilson_reference(successes, trials)
        assert lo == pytest.approx(ref_lo, abs=1e-12)
        assert hi == pytest.approx(ref_hi, abs=1e-12)
        p = successes / trials
        assert 0.0 <= lo <= p + 1e-12 and p - 1e-12 <= hi <= 1.0
    assert wilson_ci(0, 0) == (0.0, 1.0)


def test_advantage_interval_straddle_reading():
    # near one half the interval on p straddles it: lower advantage end is 0
    adv, (lo, hi) = advantage_and_ci(55, 100)
    assert adv == pytest.approx(0.10)
    assert lo == 0.0 and hi > 0.0
    # far from one half it does not
    adv_hi, (lo_hi, _) = advantage_and_ci(90, 100)
    assert adv_hi == pytest.approx(0.80) and lo_hi > 0.0
    # advantage is two-sided: being reliably wrong is also distinguishing
    adv_lo, ci_lo = advantage_and_ci(10, 100)
    assert adv_lo == pytest.approx(adv_hi) and ci_lo == pytest.approx((lo_hi, _))


def test_report_json_roundtrip_and_schema_guard():
    ses = randpad_scheme(r=2, kappa=16, ml=8)
    report = run_cpa_dist(ses, repeat_attacker(), trials=50, seed=1)
    again = GameReport.from_json_dict(report.to_json_dict())
    assert again == report
    assert again.failure_rate == pytest.approx(1.0 - report.p_hat)
    bad = report.to_json_dict() | {"schema": "subvertlab/0"}
    with pytest.raises(SchemaMismatchError):
        GameReport.from_json_dict(bad)


def test_merge_pools_same_configuration_only():
    ses = randpad_scheme(r=2, kappa=16, ml=8)
    a = run_cpa_dist(ses, repeat_attacker(), trials=100, seed=1)
    b = run_cpa_dist(ses, repeat_attacker(), trials=200, seed=2)
    other = run_cpa_dist(ses, random_guess("attacker"), trials=50, seed=3)
    merged = merge_reports([a, b, other])
    assert len(merged) == 2
    pooled = next(m for m in merged if m.config.get("merged_from_seeds") == [1, 2])
    assert pooled.trials == 300
    assert pooled.success_count == a.success_count + b.success_count
    assert pooled.seed is None
    assert pooled.normalized_advantage is not None


def test_runs_are_reproducible_and_job_count_free():
    ses = randpad_scheme(r=2, kappa=16, ml=8)
    steg = rejsam_system(StegoParams(ml=4, s=8, outl=16, kappa=16))
    channel = uniform_channel(8)
    r1 = run_ss_cha_dist(steg, channel, random_guess("warden"), trials=80, seed=4)
    r2 = run_ss_cha_dist(steg, channel, random_guess("warden"), trials=80, seed=4)
    r4 = run_ss_cha_dist(steg, channel, random_guess("warden"), trials=80, seed=4, jobs=4)
    assert r1 == r2 == r4
    other = run_ss_cha_dist(steg, channel, random_guess("warden"), trials=80, seed=5)
    assert other.seed != r1.seed
    with pytest.raises(ParameterError):
        run_cpa_dist(ses, random_guess("attacker"), trials=0, seed=0)


def test_repeat_attacker_hits_the_collision_advantage():
    # two coins bits: a repeated message collides 1/4 of the time under the
    # real scheme and (almost) never under uniform, so the true advantage
    # is 1/4 up to the 2^-cl ideal-world collision term
    ses = randpad_scheme(r=2, kappa=16, ml=8)
    report = run_cpa_dist(ses, repeat_attacker(), trials=3000, seed=7)
    assert report.normalized_advantage == pytest.approx(0.25, abs=0.06)
    assert report.advantage_ci95[0] > 0.0


def test_blind_baselines_are_consistent_with_guessing():
    ses = randpad_scheme(r=2, kappa=16, ml=8)
    for adversary in (constant_guess("attacker"), random_guess("attacker")):
        report = run_cpa_dist(ses, adversary, trials=400, seed=11)
        assert report.advantage_ci95[0] == 0.0


def test_forgery_game_grades_the_three_forgers():
    sig = sig_fixture("coin-extractable", kappa=16, ml=8, coin_bits=8, tag_bits=8)
    found = run_sig_forge(sig, search_forger(budget=2048), trials=30, seed=2)
    assert found.p_hat >= 0.9
    replay = run_sig_forge(sig, replay_forger(), trials=60, seed=2)
    assert replay.p_hat == 0.0  # a queried message never counts
    blind = run_sig_forge(sig, random_forger(), trials=100, seed=2)
    assert blind.p_hat <= 0.05
    assert found.normalized_advantage is None  # forgery is not a guessing game


def test_reliability_estimator_modes():
    ses = randpad_scheme(r=8, kappa=16, ml=8)
    steg = rejsam_system(StegoParams(ml=4, s=16, outl=24, kappa=16))
    asa = asa_from_stego(steg, ses)
    with pytest.raises(ParameterError):
        estimate_unrel(asa, ses, trials=5, seed=0, message_mode="zigzag")

    channel = uniform_channel(16)
    empty = estimate_unrel_stego(steg, channel, trials=40, seed=3)
    walked = estimate_unrel_stego(steg, channel, trials=40, seed=3, history_mode="sampled")
    assert empty.p_hat >= 0.9 and walked.p_hat >= 0.9
    assert empty.config["history_mode"] == "empty"
    assert walked.config["history_mode"] == "sampled"
    with pytest.raises(ParameterError):
        estimate_unrel_stego(steg, channel, trials=5, seed=0, history_mode="hop")


def test_random_compositions_partition_the_total():
    rng = random.Random(9)
    for _ in range(200):
        total = rng.randrange(1, 60)
        parts = random_composition(total, rng)
        assert sum(parts) == total
        assert all(p >= 1 for p in parts)
