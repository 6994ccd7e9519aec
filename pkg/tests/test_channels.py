import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subvertlab import (
    Bits,
    InvalidHistoryError,
    NoExactPmfError,
    alg_from_encryption,
    channel_pmf,
    channel_sample,
    channel_support,
    det_scheme,
    min_entropy_estimate,
    min_entropy_exact,
    rand_alg_channel,
    randpad_scheme,
    ses_channel,
    uniform_channel,
)


def walk(channel, depth, rng):
    h = ()
    for _ in range(depth):
        h = h + (channel_sample(channel, h, rng),)
    return h


def test_uniform_channel_basics():
    ch = uniform_channel(6)
    rng = random.Random(1)
    d = channel_sample(ch, (), rng)
    assert len(d) == 6
    assert channel_pmf(ch, (), d) == Fraction(1, 64)
    assert len(list(channel_support(ch, ()))) == 64
    assert ch.grammar((d, d))
    assert not ch.grammar((Bits.zeros(5),))


def test_ses_channel_grammar_checks_lengths():
    ses = randpad_scheme(4, 16, ml=4)
    ch = ses_channel(ses, 2)
    key, msg, out = Bits.zeros(16), Bits.zeros(4), Bits.zeros(8)
    assert ch.grammar(())
    assert ch.grammar((key,))
    assert ch.grammar((key, msg, msg))
    assert ch.grammar((key, msg, msg, out, out, out))
    assert not ch.grammar((msg,))  # key slot must hold 16 bits
    assert not ch.grammar((key, out))  # message slot must hold 4 bits
    assert not ch.grammar((key, msg, msg, msg))  # third input is an output slot
    with pytest.raises(InvalidHistoryError):
        channel_sample(ch, (msg,), random.Random(0))


def test_ses_channel_output_positions_cycle_through_messages():
    # with ell=2 the outputs encrypt m1, m2, m1, m2, ... under the fixed key
    ses = randpad_scheme(4, 16, ml=4)
    ch = ses_channel(ses, 2)
    rng = random.Random(2)
    k = ses.gen(rng)
    m1, m2 = Bits.random(4, rng), Bits.random(4, rng)
    h = (k, m1, m2)
    for i in range(6):
        want = m1 if i % 2 == 0 else m2
        doc = channel_sample(ch, h, rng)
        assert ses.dec(k, doc) == want
        assert channel_pmf(ch, h, doc) == ses.exact_pmf(k, want, doc)
        h = h + (doc,)


def test_ses_channel_pmf_matches_encryption_exhaustively():
    # every ciphertext in the scheme's support carries the same probability
    # mass in the channel as under Enc(k, .) itself, and nothing else does
    ses = randpad_scheme(4, 8, ml=4)
    ch = ses_channel(ses, 1)
    rng = random.Random(3)
    k, m = ses.gen(rng), Bits.random(4, rng)
    h = (k, m)
    channel_mass = {d: channel_pmf(ch, h, d) for d in channel_support(ch, h)}
    scheme_mass = {}
    for rho in range(16):
        c = ses.enc(k, m, Bits(rho, 4))
        scheme_mass[c] = scheme_mass.get(c, Fraction(0)) + Fraction(1, 16)
    assert channel_mass == scheme_mass
    assert sum(channel_mass.values()) == 1
    # a ciphertext outside the support has zero channel mass
    outside = next(Bits(v, 8) for v in range(256) if Bits(v, 8) not in scheme_mass)
    assert channel_pmf(ch, h, outside) == Fraction(0)


def test_ses_channel_key_and_input_positions_are_uniform():
    ses = randpad_scheme(2, 4, ml=2)
    ch = ses_channel(ses, 1)
    assert channel_pmf(ch, (), Bits.zeros(4)) == Fraction(1, 16)
    assert channel_pmf(ch, (Bits.zeros(4),), Bits.zeros(2)) == Fraction(1, 4)
    assert len(list(channel_support(ch, ()))) == 16


def test_rand_alg_channel_agrees_with_ses_channel():
    ses = randpad_scheme(3, 8, ml=3)
    ch_ses = ses_channel(ses, 2)
    ch_alg = rand_alg_channel(alg_from_encryption(ses), 2)
    rng = random.Random(4)
    h = walk(ch_ses, 4, rng)
    for d in channel_support(ch_ses, h):
        assert channel_pmf(ch_ses, h, d) == channel_pmf(ch_alg, h, d)
    assert ch_alg.descriptor["type"] == "rand-alg"


def test_rand_alg_channel_custom_inputs_have_no_pmf():
    ses = randpad_scheme(3, 8, ml=3)
    ch = rand_alg_channel(alg_from_encryption(ses), 1, input_gen=lambda rng: Bits.zeros(3))
    assert channel_sample(ch, (Bits.zeros(8),), random.Random(0)) == Bits.zeros(3)
    with pytest.raises(NoExactPmfError):
        channel_pmf(ch, (Bits.zeros(8),), Bits.zeros(3))


def test_min_entropy_exact_randpad_equals_pad_bits():
    ses = randpad_scheme(5, 8, ml=4)
    ch = ses_channel(ses, 1)
    rng = random.Random(5)
    h = walk(ch, 2, rng)  # key + one input: next document is an output
    rep = min_entropy_exact(ch, [h])
    assert rep.bits == pytest.approx(5.0)
    assert rep.method == "exact" and rep.histories == 1
    # key position dominates when included: still the flattest is what counts
    rep2 = min_entropy_exact(ch, [(), h])
    assert rep2.bits == pytest.approx(5.0)  # worst case over histories


def test_min_entropy_exact_det_scheme_is_zero():
    ses = det_scheme(8, ml=4)
    ch = ses_channel(ses, 1)
    rng = random.Random(6)
    h = walk(ch, 2, rng)
    assert min_entropy_exact(ch, [h]).bits == pytest.approx(0.0)


def test_min_entropy_estimate_tracks_exact():
    ses = randpad_scheme(6, 8, ml=4)
    ch = ses_channel(ses, 1)
    rng = random.Random(7)
    h = walk(ch, 2, rng)
    rep = min_entropy_estimate(ch, h, 4000, rng)
    assert rep.method == "collision"
    assert abs(rep.bits - 6.0) < 0.35
    with pytest.raises(Exception):
        min_entropy_estimate(ch, h, 1, rng)


def test_min_entropy_estimate_point_mass():
    ses = det_scheme(8, ml=4)
    ch = ses_channel(ses, 1)
    rng = random.Random(8)
    h = walk(ch, 2, rng)
    assert min_entropy_estimate(ch, h, 100, rng).bits == pytest.approx(0.0)


def test_descriptor_carries_shape():
    ses = randpad_scheme(8, 16, ml=8)
    ch = ses_channel(ses, 4)
    d = ch.descriptor
    assert d["ell"] == 4 and d["kappa"] == 16
    assert d["in_bits"] == 8 and d["out_bits"] == 16
    assert d["scheme_id"] == "randpad-8"


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 6))
def test_channel_pmf_sums_to_one_property(r, ml, depth):
    ses = randpad_scheme(r, 4, ml=ml)
    ch = ses_channel(ses, 2)
    rng = random.Random(depth * 100 + r * 10 + ml)
    h = walk(ch, depth, rng)
    total = sum(channel_pmf(ch, h, d) for d in set(channel_support(ch, h)))
    assert total == 1


def test_sampling_respects_pmf():
    # chi-square against the exact pmf at an output position
    ses = randpad_scheme(4, 8, ml=4)
    ch = ses_channel(ses, 1)
    rng = random.Random(9)
    h = walk(ch, 2, rng)
    n = 8000
    counts = {}
    for _ in range(n):
        d = channel_sample(ch, h, rng)
        counts[d] = counts.get(d, 0) + 1
    support = list(set(channel_support(ch, h)))
    stat = 0.0
    for d in support:
        e = float(channel_pmf(ch, h, d)) * n
        stat += (counts.get(d, 0) - e) ** 2 / e
    import oracles

    assert stat < oracles.chi2_quantile_exact(len(support) - 1, 0.9999)
    assert math.isclose(sum(counts.values()), n)
