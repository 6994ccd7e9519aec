"""History-indexed document channels.

A channel assigns to every valid history a distribution over next documents.
Histories here are recognized by pure length/count automata: a key, then a
fixed count of messages, then ciphertexts cycling through those messages.
Every prefix of a valid history is valid, and sampling never needs more than
the published per-role bit lengths.

Channels derived from encryption schemes sample full-history documents by
calling the scheme's own explicit-coin encryptor, so a seed-coupled run of
channel_sample and of direct enc_sample produces identical bits.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .bits import Bits
from .errors import InvalidHistoryError, NoExactPmfError, ParameterError
from .schemes import RandomizedAlgorithm, SymmetricEncryptionScheme

__all__ = [
    "Channel",
    "channel_sample",
    "channel_pmf",
    "channel_support",
    "uniform_channel",
    "ses_channel",
    "rand_alg_channel",
    "MinEntropyReport",
    "min_entropy_exact",
    "min_entropy_estimate",
]

_ENUM_LIMIT = 20


@dataclass(frozen=True)
class Channel:
    descriptor: dict
    max_doc_len: int
    grammar: Callable[[tuple], bool]
    sampler: Callable[[tuple, random.Random], Bits]
    pmf_fn: Callable[[tuple, Bits], Fraction] | None = None
    support_fn: Callable[[tuple], Iterable[Bits]] | None = None


def channel_sample(channel: Channel, history: tuple, rng: random.Random) -> Bits:
    """Draw the next document for a history, validating the history first."""
    if not channel.grammar(history):
        raise InvalidHistoryError(f"history of length {len(history)} rejected by grammar")
    doc = channel.sampler(history, rng)
    if len(doc) > channel.max_doc_len:
        raise InvalidHistoryError("sampler produced an oversized document")
    return doc


def channel_pmf(channel: Channel, history: tuple, doc: Bits) -> Fraction:
    if channel.pmf_fn is None:
        raise NoExactPmfError(f"channel {channel.descriptor.get('type')} has no exact pmf")
    if not channel.grammar(history):
        raise InvalidHistoryError("history rejected by grammar")
    return channel.pmf_fn(history, doc)


def channel_support(channel: Channel, history: tuple) -> Iterable[Bits]:
    if channel.support_fn is None:
        raise NoExactPmfError("channel does not enumerate its support")
    if not channel.grammar(history):
        raise InvalidHistoryError("history rejected by grammar")
    return channel.support_fn(history)


def _all_bits(nbits: int) -> Iterable[Bits]:
    if nbits > _ENUM_LIMIT:
        raise ParameterError(f"cannot enumerate 2^{nbits} documents")
    return (Bits(v, nbits) for v in range(2**nbits))


def uniform_channel(nbits: int) -> Channel:
    """Memoryless channel: every document is a fresh uniform nbits string."""
    if nbits <= 0:
        raise ParameterError("document length must be positive")

    return Channel(
        descriptor={
            "type": "uniform",
            "kappa": None,
            "ell": None,
            "scheme_id": f"uniform-{nbits}",
            "max_doc_len": nbits,
        },
        max_doc_len=nbits,
        grammar=lambda h: all(len(d) == nbits for d in h),
        sampler=lambda h, rng: Bits.random(nbits, rng),
        pmf_fn=lambda h, d: Fraction(1, 2**nbits) if len(d) == nbits else Fraction(0),
        support_fn=lambda h: _all_bits(nbits),
    )


class _CycleShape:
    """Length/count automaton for key || inputs^ell || outputs* histories."""

    def __init__(self, key_bits: int, in_bits: int, out_bits: int, ell: int):
        self.key_bits, self.in_bits, self.out_bits, self.ell = key_bits, in_bits, out_bits, ell

    def accepts(self, h: tuple) -> bool:
        for pos, doc in enumerate(h):
            want = (
                self.key_bits
                if pos == 0
                else self.in_bits
                if pos <= self.ell
                else self.out_bits
            )
            if len(doc) != want:
                return False
        return True

    def role(self, h: tuple) -> tuple[str, int]:
        """Role of the next document: (name, cycle position for outputs)."""
        n = len(h)
        if n == 0:
            return "key", 0
        if n <= self.ell:
            return "input", 0
        return "output", (n - self.ell - 1) % self.ell

    def cycle_input(self, h: tuple) -> Bits:
        _, r = self.role(h)
        return h[1 + r]


def _cycle_channel(
    *,
    ctype: str,
    scheme_id: str,
    key_bits: int,
    in_bits: int,
    out_bits: int,
    ell: int,
    key_sampler: Callable[[random.Random], Bits],
    input_sampler: Callable[[random.Random], Bits],
    input_uniform: bool,
    output_sampler: Callable[[Bits, Bits, random.Random], Bits],
    output_pmf: Callable[[Bits, Bits, Bits], Fraction] | None,
    output_support: Callable[[Bits, Bits], Iterable[Bits]] | None,
) -> Channel:
    if ell <= 0:
        raise ParameterError("ell must be positive")
    shape = _CycleShape(key_bits, in_bits, out_bits, ell)

    def sampler(h: tuple, rng: random.Random) -> Bits:
        role, _ = shape.role(h)
        if role == "key":
            return key_sampler(rng)
        if role == "input":
            return input_sampler(rng)
        return output_sampler(h[0], shape.cycle_input(h), rng)

    def pmf(h: tuple, d: Bits) -> Fraction:
        role, _ = shape.role(h)
        if role == "key":
            # toy fixtures draw keys uniformly; exact pmf leans on that
            return Fraction(1, 2**key_bits) if len(d) == key_bits else Fraction(0)
        if role == "input":
            if not input_uniform:
                raise NoExactPmfError("custom input generator has no declared pmf")
            return Fraction(1, 2**in_bits) if len(d) == in_bits else Fraction(0)
        if output_pmf is None:
            raise NoExactPmfError("scheme does not expose an exact ciphertext pmf")
        return output_pmf(h[0], shape.cycle_input(h), d) if len(d) == out_bits else Fraction(0)

    def support(h: tuple) -> Iterable[Bits]:
        role, _ = shape.role(h)
        if role == "key":
            return _all_bits(key_bits)
        if role == "input":
            if not input_uniform:
                raise NoExactPmfError("custom input generator has no declared support")
            return _all_bits(in_bits)
        if output_support is None:
            raise NoExactPmfError("scheme does not enumerate ciphertext support")
        return output_support(h[0], shape.cycle_input(h))

    return Channel(
        descriptor={
            "type": ctype,
            "kappa": key_bits,
            "ell": ell,
            "in_bits": in_bits,
            "out_bits": out_bits,
            "scheme_id": scheme_id,
            "max_doc_len": max(key_bits, in_bits, out_bits),
        },
        max_doc_len=max(key_bits, in_bits, out_bits),
        grammar=shape.accepts,
        sampler=sampler,
        pmf_fn=pmf,
        support_fn=support,
    )


def ses_channel(ses: SymmetricEncryptionScheme, ell: int) -> Channel:
    """Channel of an encryption session: key, ell messages, then ciphertexts.

    With r ciphertexts already present, the next document is a fresh
    encryption of message (r mod ell)+1 under the session key.
    """
    return _cycle_channel(
        ctype="ses",
        scheme_id=ses.scheme_id,
        key_bits=ses.key_bits,
        in_bits=ses.ml,
        out_bits=ses.cl,
        ell=ell,
        key_sampler=ses.gen,
        input_sampler=lambda rng: Bits.random(ses.ml, rng),
        input_uniform=True,
        output_sampler=ses.enc_sample,
        output_pmf=ses.exact_pmf,
        output_support=ses.ciphertext_support,
    )


def rand_alg_channel(
    alg: RandomizedAlgorithm,
    ell: int,
    input_gen: Callable[[random.Random], Bits] | None = None,
) -> Channel:
    """Channel of a randomized algorithm run: secret, ell inputs, then outputs."""

    def output_support(s: Bits, x: Bits) -> Iterable[Bits]:
        if alg.coin_bits > _ENUM_LIMIT:
            raise ParameterError("coin space too large to enumerate")
        seen = set()
        for rho in range(2**alg.coin_bits):
            y = alg.run(s, x, Bits(rho, alg.coin_bits))
            if y not in seen:
                seen.add(y)
                yield y

    return _cycle_channel(
        ctype="rand-alg",
        scheme_id=alg.alg_id,
        key_bits=alg.secret_bits,
        in_bits=alg.input_bits,
        out_bits=alg.output_bits,
        ell=ell,
        key_sampler=alg.secret_gen,
        input_sampler=input_gen or alg.input_gen,
        input_uniform=input_gen is None,
        output_sampler=alg.run_sample,
        output_pmf=alg.exact_pmf,
        output_support=output_support,
    )


@dataclass(frozen=True)
class MinEntropyReport:
    bits: float
    method: str
    sample_count: int
    histories: int

    def to_json_dict(self) -> dict:
        return {
            "bits": self.bits,
            "method": self.method,
            "sample_count": self.sample_count,
            "histories": self.histories,
        }


def _neg_log2(q: Fraction) -> float:
    return math.log2(q.denominator) - math.log2(q.numerator)


def min_entropy_exact(channel: Channel, histories: Iterable[tuple]) -> MinEntropyReport:
    """Exact min-entropy: min over histories of -log2 of the largest pmf value."""
    worst = None
    count = 0
    for h in histories:
        count += 1
        peak = max(channel_pmf(channel, h, d) for d in channel_support(channel, h))
        if worst is None or peak > worst:
            worst = peak
    if worst is None:
        raise ParameterError("need at least one history")
    return MinEntropyReport(bits=_neg_log2(worst), method="exact", sample_count=0, histories=count)


def min_entropy_estimate(
    channel: Channel, history: tuple, samples: int, rng: random.Random
) -> MinEntropyReport:
    """Collision-entropy estimate from empirical collision frequency.

    Reports -log2 of the pairwise collision rate among `samples` draws
    (a Renyi-2 estimate; it upper-bounds min-entropy, and matches it for
    flat distributions). Infinite when no collision is observed.
    """
    if samples < 2:
        raise ParameterError("need at least two samples")
    counts: dict[Bits, int] = {}
    for _ in range(samples):
        d = channel_sample(channel, history, rng)
        counts[d] = counts.get(d, 0) + 1
    pairs = sum(n * (n - 1) // 2 for n in counts.values())
    total = samples * (samples - 1) // 2
    bits = float("inf") if pairs == 0 else -math.log2(pairs / total)
    return MinEntropyReport(bits=bits, method="collision", sample_count=samples, histories=1)
