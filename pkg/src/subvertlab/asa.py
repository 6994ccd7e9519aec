"""Substitution attacks built from the embedding layer.

A substitution attack replaces an encryption routine with a subverted one
that leaks a hidden message through ordinary-looking ciphertexts; the
extractor recovers the message from the ciphertext stream alone, using the
attacker key. The constructions here are stateless: the state argument is
passed through untouched, so a reboot can never desynchronize them.

asa_from_stego turns any stegosystem into such an attack by answering the
encoder's channel queries with fresh encryptions of the current message.
universal_asa is the same construction against an oracle-only host: the
attack sees nothing but published lengths and an explicit-coin encryption
oracle, and every emitted ciphertext is one the oracle produced (the
transcript makes that checkable).
"""

from __future__ import annotations

import random
import statistics
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .bits import Bits
from .errors import (
    LengthMismatchError,
    ParameterError,
    UniversalityViolation,
    WrongDocumentCountError,
)
from .schemes import RandomizedAlgorithm, SymmetricEncryptionScheme
from .stego import StegoSystem, encode_step
from .prf import prf_split_block

__all__ = [
    "SubstitutionAttack",
    "AlgSubstitutionAttack",
    "OracleQuery",
    "OracleTranscript",
    "UniversalHost",
    "asa_from_stego",
    "asa_enc_all",
    "alg_enc_all",
    "universal_asa",
    "generic_asa_against_alg",
    "query_count",
    "QueryCountEstimate",
    "transcript_json_lines",
    "watchdog_to_warden",
]


@dataclass(frozen=True)
class SubstitutionAttack:
    """Attack triple against an encryption scheme.

    enc(ak, am, k, m, sigma, rng[, transcript]) -> (ciphertext, sigma);
    ext(ak, ciphertexts) -> hidden message or None. host_params records the
    published lengths of the scheme the attack was built for.
    """

    attack_id: str
    ml: int
    outl: int
    key_bits: int
    host_params: dict
    gen: Callable[[random.Random], Bits]
    enc: Callable[..., tuple[Bits, object]]
    ext: Callable[[Bits, Sequence[Bits]], Bits | None]
    supports_transcript: bool = False

    def describe(self) -> dict:
        return {
            "attack": self.attack_id,
            "ml": self.ml,
            "outl": self.outl,
            "host": self.host_params,
        }


@dataclass(frozen=True)
class AlgSubstitutionAttack:
    """Attack triple against a general randomized algorithm.

    enc(ak, am, s, x, sigma, rng) -> (output, sigma); the extractor works
    from outputs alone, without the inputs x_i.
    """

    attack_id: str
    ml: int
    outl: int
    alg: RandomizedAlgorithm
    gen: Callable[[random.Random], Bits]
    enc: Callable[..., tuple[Bits, object]]
    ext: Callable[[Bits, Sequence[Bits]], Bits | None]

    def describe(self) -> dict:
        return {
            "attack": self.attack_id,
            "ml": self.ml,
            "outl": self.outl,
            "host": {"alg_id": self.alg.alg_id, "output_bits": self.alg.output_bits},
        }


def asa_from_stego(steg: StegoSystem, ses: SymmetricEncryptionScheme) -> SubstitutionAttack:
    """Subvert `ses` with the encoder of `steg`.

    Each call embeds into the session view key || m^ell (ell = steg.outl),
    answering every channel query of the encoder with a fresh Enc(k, m).
    A seed-coupled run of this enc and of the plain stego encoder on the
    scheme's channel is bit-identical.
    """
    if steg.params.doc_bits is not None and steg.params.doc_bits != ses.cl:
        raise LengthMismatchError(
            f"stego documents are {steg.params.doc_bits} bits but ciphertexts are {ses.cl}"
        )
    ell = steg.params.outl

    def enc(ak, am, k, m, sigma, rng):
        history = (k,) + (m,) * ell
        return steg.enc(ak, am, history, sigma, draw=lambda: ses.enc_sample(k, m, rng), rng=rng)

    return SubstitutionAttack(
        attack_id=f"rejsam-asa:{ses.scheme_id}",
        ml=steg.params.ml,
        outl=ell,
        key_bits=steg.params.kappa,
        host_params=ses.params_dict(),
        gen=steg.gen,
        enc=enc,
        ext=steg.dec,
    )


def asa_enc_all(
    asa: SubstitutionAttack,
    ak: Bits,
    am: Bits,
    k: Bits,
    messages: Sequence[Bits],
    rng: random.Random,
    sigma: object = None,
    transcript: "OracleTranscript | None" = None,
) -> list[Bits]:
    """Threaded-state driver: one subverted ciphertext per message."""
    if len(messages) != asa.outl:
        raise WrongDocumentCountError(f"expected {asa.outl} messages, got {len(messages)}")
    out = []
    for m in messages:
        if transcript is not None and asa.supports_transcript:
            c, sigma = asa.enc(ak, am, k, m, sigma, rng, transcript=transcript)
        else:
            c, sigma = asa.enc(ak, am, k, m, sigma, rng)
        out.append(c)
    return out


def alg_enc_all(
    attack: AlgSubstitutionAttack,
    ak: Bits,
    am: Bits,
    s: Bits,
    inputs: Sequence[Bits],
    rng: random.Random,
    sigma: object = None,
) -> list[Bits]:
    if len(inputs) != attack.outl:
        raise WrongDocumentCountError(f"expected {attack.outl} inputs, got {len(inputs)}")
    out = []
    for x in inputs:
        y, sigma = attack.enc(ak, am, s, x, sigma, rng)
        out.append(y)
    return out


# --- universal (oracle-only) attacks ---------------------------------------


@dataclass(frozen=True)
class OracleQuery:
    k: Bits
    m: Bits
    coins: Bits
    c: Bits


@dataclass
class OracleTranscript:
    """Every oracle invocation an attack made, in order."""

    queries: list[OracleQuery] = field(default_factory=list)

    def record(self, k: Bits, m: Bits, coins: Bits, c: Bits) -> None:
        self.queries.append(OracleQuery(k, m, coins, c))

    @property
    def count(self) -> int:
        return len(self.queries)

    def ciphertexts(self) -> set[Bits]:
        return {q.c for q in self.queries}


def transcript_json_lines(transcript: OracleTranscript, trial: int) -> list[dict]:
    return [
        {
            "trial": trial,
            "query_index": i,
            "k_hex": q.k.hex(),
            "m_hex": q.m.hex(),
            "coins_hex": q.coins.hex(),
            "c_hex": q.c.hex(),
        }
        for i, q in enumerate(transcript.queries)
    ]


class UniversalHost:
    """Oracle-only view of an encryption scheme.

    Exposes exactly (ml, cl, coin_bits) and the explicit-coin oracle; any
    other attribute access raises and is counted, which is how tests assert
    that universal attacks never peek past the interface.
    """

    _ALLOWED = ("ml", "cl", "coin_bits", "oracle", "forbidden_accesses")

    def __init__(self, ses: SymmetricEncryptionScheme):
        self.ml = ses.ml
        self.cl = ses.cl
        self.coin_bits = ses.coin_bits
        self.oracle = ses.enc
        self.forbidden_accesses = 0

    def __getattr__(self, name):  # normal lookups never reach here
        self.__dict__["forbidden_accesses"] = self.__dict__.get("forbidden_accesses", 0) + 1
        raise UniversalityViolation(f"universal attack touched host field {name!r}")


def universal_asa(steg: StegoSystem, host: UniversalHost) -> SubstitutionAttack:
    """Rejection-sampling attack with oracle-only host access.

    Every document the encoder inspects is an oracle answer on fresh uniform
    coins; passing a transcript to enc records each invocation, including the
    over-cutoff draw.
    """

    def enc(ak, am, k, m, sigma, rng, transcript: OracleTranscript | None = None):
        def draw() -> Bits:
            coins = Bits.random(host.coin_bits, rng)
            c = host.oracle(k, m, coins)
            if transcript is not None:
                transcript.record(k, m, coins, c)
            return c

        return steg.enc(ak, am, (), sigma, draw=draw, rng=rng)

    return SubstitutionAttack(
        attack_id="universal-rejsam",
        ml=steg.params.ml,
        outl=steg.params.outl,
        key_bits=steg.params.kappa,
        host_params={"ml": host.ml, "cl": host.cl, "r": host.coin_bits},
        gen=steg.gen,
        enc=enc,
        ext=steg.dec,
        supports_transcript=True,
    )


def generic_asa_against_alg(
    steg: StegoSystem,
    alg: RandomizedAlgorithm,
    demo_force_embed: bool = False,
) -> AlgSubstitutionAttack:
    """Subvert any randomized algorithm by rejection-sampling its outputs.

    demo_force_embed is a labeled demonstration mode for deterministic hosts:
    when the cutoff passes without a match it fabricates an off-support
    output that marks correctly, trading detectability for reliability
    (exactly the trade a repeat watchdog then measures). Default off.
    """
    params = steg.params

    def force_embed(ak: Bits, am: Bits, rng: random.Random) -> Bits:
        from .stego import _pad_message, _slot_value  # demo path only

        am_padded = _pad_message(params, am)
        prf = _steg_prf(steg)
        for _ in range(65536):
            doc = Bits.random(alg.output_bits, rng)
            value, j = prf_split_block(prf, ak, doc, params.block_bits, params.n_slots)
            if j is not None and _slot_value(params, am_padded, j) == value:
                return doc
        raise ParameterError("could not fabricate a marking document")

    def enc(ak, am, s, x, sigma, rng):
        doc, sigma = steg.enc(
            ak, am, (), sigma, draw=lambda: alg.run_sample(s, x, rng), rng=rng
        )
        if demo_force_embed:
            prf = _steg_prf(steg)
            from .stego import _pad_message, _slot_value

            value, j = prf_split_block(prf, ak, doc, params.block_bits, params.n_slots)
            if j is None or _slot_value(params, _pad_message(params, am), j) != value:
                doc = force_embed(ak, am, rng)
        return doc, sigma

    return AlgSubstitutionAttack(
        attack_id=f"rejsam-asa:{alg.alg_id}" + ("+force-embed" if demo_force_embed else ""),
        ml=params.ml,
        outl=params.outl,
        alg=alg,
        gen=steg.gen,
        enc=enc,
        ext=steg.dec,
    )


def _steg_prf(steg: StegoSystem):
    if steg.prf is None:
        raise ParameterError("stego system does not publish its mark function")
    return steg.prf


@dataclass(frozen=True)
class QueryCountEstimate:
    mean: float
    ci95: tuple[float, float]
    trials: int
    seed: int


def query_count(
    asa: SubstitutionAttack, trials: int, seed: int, host_key_bits: int | None = None
) -> QueryCountEstimate:
    """Measured expected oracle calls per subverted ciphertext.

    Counts every oracle invocation, including the final over-cutoff draw.
    Only transcript-supporting attacks can be measured. host_key_bits sets
    the experiment's key length when the host never published one.
    """
    if not asa.supports_transcript:
        raise ParameterError("attack does not expose oracle transcripts")
    from .rng import substream

    key_bits = host_key_bits or asa.host_params.get("kappa")
    if not key_bits:
        raise ParameterError("host key length unknown; pass host_key_bits")
    counts = []
    for i in range(trials):
        rng = substream(seed, i, "query-count")
        ak = asa.gen(rng)
        am = Bits.random(asa.ml, rng)
        k = Bits.random(key_bits, rng)
        m = Bits.random(asa.host_params["ml"], rng)
        transcript = OracleTranscript()
        asa.enc(ak, am, k, m, None, rng, transcript=transcript)
        counts.append(transcript.count)
    mean = statistics.fmean(counts)
    if trials > 1:
        half = 1.959963984540054 * statistics.stdev(counts) / trials**0.5
    else:
        half = float("inf")
    return QueryCountEstimate(mean=mean, ci95=(mean - half, mean + half), trials=trials, seed=seed)


def watchdog_to_warden(watchdog, ses: SymmetricEncryptionScheme, ell: int):
    """Reduction adapter: an attack watchdog replayed as a channel warden.

    The warden forwards each watchdog challenge (am, k, m, sigma) as the
    channel challenge (am, k || m^ell, sigma); with coupled seeds the
    watchdog sees the identical transcript in both games, so decisions
    match trial for trial.
    """
    from .games import Adversary

    class _View:
        def __init__(self, parent):
            self._parent = parent
            self.scheme = ses
            self.asa_ml = parent.stego_ml
            self.asa_outl = parent.stego_outl
            self.sim_rng = parent.sim_rng

        def ch(self, am, k, m, sigma):
            return self._parent.ch(am, (k,) + (m,) * ell, sigma)

    def strategy(oracles, rng):
        return watchdog.strategy(_View(oracles), rng)

    return Adversary(
        kind="warden",
        name=f"wrapped:{watchdog.name}",
        description=f"attack watchdog {watchdog.name} replayed against the channel game",
        strategy=strategy,
    )
