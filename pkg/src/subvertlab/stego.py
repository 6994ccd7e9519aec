"""Rejection-sampling steganography.

The encoder embeds a hidden message into ordinary channel documents without
modifying them: it keeps drawing documents until the keyed marking function
maps one to a (value, slot) pair that agrees with the hidden message, then
emits that document (after s failed draws it emits the next draw regardless).
The decoder re-marks each received document and fills slots, last write wins;
it needs no history and no knowledge of where the documents came from.

Coverage of all slots is a coupon-collector event, so the output length for
an ml-bit message grows like ml ln ml; the block variant embeds several bits
per document at the cost of a longer rejection phase.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .bits import Bits
from .channels import Channel, channel_sample
from .errors import ParameterError, ScheduleError, WrongDocumentCountError
from .prf import Prf, is_power_of_two, prf_split_block

__all__ = [
    "StegoParams",
    "StegoSystem",
    "default_beta",
    "outl_for",
    "rejsam_system",
    "rejsam_decode",
    "encode_step",
    "encode_all",
    "encode_schedule",
]


def default_beta(ml: int) -> float:
    """Slack making the coupon miss probability exp(-beta) negligible-ish."""
    if ml < 1:
        raise ParameterError("ml must be at least 1")
    return ml - math.log(ml)


def outl_for(ml: int, beta: float | None = None, block_bits: int = 1) -> int:
    """Documents needed to cover a pool of ceil(ml/block_bits) slots.

    ceil(pool * (ln pool + beta)); beta defaults to default_beta(ml).
    Rounded before the ceiling so exact-integer boundaries (e.g. ml=16,
    default beta -> exactly 256) are not bumped by float noise.
    """
    if beta is None:
        beta = default_beta(ml)
    pool = -(-ml // block_bits)
    raw = pool * (math.log(pool) + beta)
    if raw <= 0:
        raise ParameterError("outl_for parameters yield a non-positive length")
    return math.ceil(round(raw, 9))


@dataclass(frozen=True)
class StegoParams:
    """Embedding parameters. ml must be a power of two (slot uniformity)."""

    ml: int
    s: int
    outl: int
    kappa: int = 128
    beta: float | None = None
    block_bits: int = 1
    doc_bits: int | None = None  # declared document length, None = any

    def __post_init__(self):
        if not is_power_of_two(self.ml):
            raise ParameterError("ml must be a power of two")
        if self.s < 1:
            raise ParameterError("cutoff s must be at least 1")
        if self.outl < 1:
            raise ParameterError("outl must be at least 1")
        if self.block_bits < 1 or self.block_bits > self.ml:
            raise ParameterError("block_bits must be in 1..ml")
        if self.kappa < 1:
            raise ParameterError("kappa must be positive")

    @property
    def n_slots(self) -> int:
        return -(-self.ml // self.block_bits)

    @property
    def padded_ml(self) -> int:
        return self.n_slots * self.block_bits

    def to_json_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "ml": self.ml,
            "s": self.s,
            "beta": self.beta,
            "block_bits": self.block_bits,
            "outl": self.outl,
        }


@dataclass(frozen=True)
class StegoSystem:
    """Keyed (gen, enc, dec) triple over a document channel.

    enc emits one document per call: enc(ak, am, history, sigma, draw=..., rng=...)
    -> (document, sigma). `draw` samples the channel at the current history;
    `rng` is the encoder's private randomness (the rejection sampler needs
    only `draw`). State sigma is passed through so stateless systems stay
    visibly stateless. dec(ak, docs) -> recovered message or None.
    """

    system_id: str
    params: StegoParams
    gen: Callable[[random.Random], Bits]
    enc: Callable[..., tuple[Bits, object]]
    dec: Callable[[Bits, Sequence[Bits]], Bits | None]
    prf: Prf | None = None
    # histories where the encoder provably emits the channel's own next-doc
    # distribution, drawing from the rng it is handed (lets game runners and
    # reduction adapters share one public stream there)
    transparent_at: Callable[[tuple], bool] | None = None

    def describe(self) -> dict:
        return {"system": self.system_id, **self.params.to_json_dict()}


def _pad_message(params: StegoParams, am: Bits) -> Bits:
    if len(am) != params.ml:
        raise ParameterError(f"hidden message must have {params.ml} bits")
    return am + Bits.zeros(params.padded_ml - params.ml)


def _slot_value(params: StegoParams, am_padded: Bits, j: int) -> Bits:
    return am_padded[j * params.block_bits : (j + 1) * params.block_bits]


def encode_step(
    prf: Prf, params: StegoParams, ak: Bits, am: Bits, draw: Callable[[], Bits]
) -> Bits:
    """One emission: first draw whose mark agrees with the message, else the
    (s+1)-th draw unconditionally."""
    am_padded = _pad_message(params, am)
    for _ in range(params.s):
        doc = draw()
        value, j = prf_split_block(prf, ak, doc, params.block_bits, params.n_slots)
        if j is not None and _slot_value(params, am_padded, j) == value:
            return doc
    return draw()


def rejsam_decode(
    prf: Prf, params: StegoParams, ak: Bits, docs: Sequence[Bits]
) -> Bits | None:
    if len(docs) != params.outl:
        raise WrongDocumentCountError(f"expected {params.outl} documents, got {len(docs)}")
    slots: list[Bits | None] = [None] * params.n_slots
    for doc in docs:
        value, j = prf_split_block(prf, ak, doc, params.block_bits, params.n_slots)
        if j is not None:
            slots[j] = value  # last write wins
    if any(v is None for v in slots):
        return None
    return Bits.join(slots)[: params.ml]  # type: ignore[arg-type]


def rejsam_system(params: StegoParams, prf: Prf | None = None) -> StegoSystem:
    prf = prf or Prf(params.kappa)
    if prf.key_bits != params.kappa:
        raise ParameterError("PRF key length must match kappa")

    def enc(ak, am, history, sigma, *, draw, rng=None):
        return encode_step(prf, params, ak, am, draw), sigma

    def dec(ak, docs):
        return rejsam_decode(prf, params, ak, docs)

    return StegoSystem(
        system_id="rejsam",
        params=params,
        gen=lambda rng: Bits.random(params.kappa, rng),
        enc=enc,
        dec=dec,
        prf=prf,
    )


def encode_all(
    steg: StegoSystem,
    ak: Bits,
    am: Bits,
    history: tuple,
    channel: Channel,
    rng: random.Random,
    count: int | None = None,
    sigma: object = None,
) -> list[Bits]:
    """Run `count` (default outl) encode steps, threading sigma and extending
    the history with each emitted document."""
    docs: list[Bits] = []
    h = tuple(history)
    for _ in range(params_count(steg, count)):
        doc, sigma = steg.enc(
            ak,
            am,
            h,
            sigma,
            draw=lambda: channel_sample(channel, h, rng),
            rng=rng,
        )
        docs.append(doc)
        h = h + (doc,)
    return docs


def params_count(steg: StegoSystem, count: int | None) -> int:
    return steg.params.outl if count is None else count


def encode_schedule(
    steg: StegoSystem,
    ak: Bits,
    am: Bits,
    schedule: Sequence[int],
    channel: Channel,
    rng: random.Random,
    history: tuple = (),
) -> list[Bits]:
    """Restart-tolerant encoding: one continuous document stream whose state
    is wiped at every segment boundary. Segment lengths must be positive and
    sum to outl; the history keeps growing across segments, so only encoders
    that can restart from the history alone survive this."""
    if any(n <= 0 for n in schedule):
        raise ScheduleError("segment lengths must be positive")
    total = sum(schedule)
    if total != steg.params.outl:
        raise ScheduleError(f"segment lengths sum to {total}, expected {steg.params.outl}")
    docs: list[Bits] = []
    h = tuple(history)
    for n in schedule:
        segment = encode_all(steg, ak, am, h, channel, rng, count=n, sigma=None)
        docs.extend(segment)
        h = h + tuple(segment)
    return docs
