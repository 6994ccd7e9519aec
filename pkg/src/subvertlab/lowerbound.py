"""Rate versus forgeability: the signed-family experiment.

A signed family couples an encryption scheme to a signature scheme: each
output is a ciphertext plus a signature on it, under a signing key fixed
when the family is built. Any substitution attack on the family that leaks
more than it could have gathered from its own oracle calls must be emitting
signed pairs the oracle never produced, i.e. forgeries. phi() is the
counting bound for "could have gathered": with outl outputs assembled from
outl*query oracle answers, a hidden message of ml bits is recoverable from
oracle material alone with probability at most 2^(outl*log2(outl*query) - ml).

rate_report() runs all four measured legs (detectability, unreliability,
the counting bound, forgery rate) and assembles the lower-bound inequality
empirically. fabricating_asa() is the attack that makes it bite: one output
carrying a 64-bit message, signed by brute verifier search.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .asa import AlgSubstitutionAttack, universal_asa
from .bits import Bits
from .errors import LengthMismatchError, ParameterError, WrongDocumentCountError
from .games import Adversary, estimate_unrel_alg, run_rasa_dist, run_sig_forge
from .schemes import (
    RandomizedAlgorithm,
    SignatureScheme,
    SymmetricEncryptionScheme,
    _keystream,
)
from .stego import StegoSystem

__all__ = [
    "SignedFamily",
    "make_signed_family",
    "PhiReport",
    "phi",
    "fabricating_asa",
    "forger_from_universal_asa",
    "forger_from_fabricating_asa",
    "rate_report",
]


@dataclass(frozen=True)
class SignedFamily:
    """Encrypt-then-sign under a keypair fixed at construction."""

    ses: SymmetricEncryptionScheme
    sig: SignatureScheme
    pk: Bits
    sk: Bits
    alg: RandomizedAlgorithm


def make_signed_family(
    ses: SymmetricEncryptionScheme, sig: SignatureScheme, rng: random.Random
) -> SignedFamily:
    """Couple `ses` and `sig` into one randomized algorithm.

    The signing keypair is drawn here, once: the family's secret is only the
    encryption key, so the same keypair backs reliability runs, watchdog
    runs, and the forgery game the construction reduces to. The signature
    scheme must sign ciphertext-length messages.
    """
    if sig.ml != ses.cl:
        raise LengthMismatchError(
            f"signature scheme signs {sig.ml}-bit messages but ciphertexts are {ses.cl} bits"
        )
    sk, pk = sig.gen(rng)

    def run(k: Bits, m: Bits, coins: Bits) -> Bits:
        c = ses.enc(k, m, coins[: ses.coin_bits])
        return c + sig.sign(sk, c, coins[ses.coin_bits :])

    alg = RandomizedAlgorithm(
        alg_id=f"signed:{ses.scheme_id}+{sig.scheme_id}",
        secret_bits=ses.key_bits,
        input_bits=ses.ml,
        output_bits=ses.cl + sig.sigl,
        coin_bits=ses.coin_bits + sig.coin_bits,
        secret_gen=ses.gen,
        run=run,
    )
    return SignedFamily(ses=ses, sig=sig, pk=pk, sk=sk, alg=alg)


@dataclass(frozen=True)
class PhiReport:
    """Log-domain counting bound; trivial means the bound says nothing."""

    ml: int
    outl: int
    query: float
    log2_phi: float
    phi: float
    trivial: bool

    def to_json_dict(self) -> dict:
        return {
            "ml": self.ml,
            "outl": self.outl,
            "query": self.query,
            "log2_phi": self.log2_phi,
            "phi": self.phi,
            "trivial": self.trivial,
        }


def phi(ml: int, outl: int, query: float) -> PhiReport:
    """Chance that oracle material alone pins down an ml-bit hidden message."""
    if outl < 1 or query < 1:
        raise ParameterError("need outl >= 1 and query >= 1")
    if ml < 0:
        raise ParameterError("ml must be nonnegative")
    log2_phi = outl * math.log2(outl * query) - ml
    if log2_phi >= 1024:
        value = math.inf
    elif log2_phi <= -1074:
        value = 0.0
    else:
        value = 2.0**log2_phi
    return PhiReport(
        ml=ml, outl=outl, query=query, log2_phi=log2_phi, phi=value, trivial=log2_phi >= 0
    )


def fabricating_asa(
    family: SignedFamily, ml: int = 64, decoys: int = 4, budget: int = 4096
) -> AlgSubstitutionAttack:
    """One-output attack that leaks ml bits by inventing a signed pair.

    The emitted document is rho || (am xor pad(ak, rho)) with a signature
    found by random search against the public verifier; the decoy oracle
    calls only shape the query count. When the search budget runs out
    (strong tags), it falls back to an honest oracle answer, losing the
    message instead of emitting an invalid document.
    """
    ses, sig = family.ses, family.sig
    prefix = ses.cl - ml
    if prefix < 0:
        raise ParameterError("hidden message longer than a ciphertext")
    total_len = ses.cl + sig.sigl

    def gen(rng: random.Random) -> Bits:
        return Bits.random(128, rng)

    def enc(ak, am, s, x, sigma, rng):
        if len(am) != ml:
            raise LengthMismatchError(f"hidden message must be {ml} bits")
        last = None
        for _ in range(decoys):
            last = family.alg.run_sample(s, x, rng)
        rho = Bits.random(prefix, rng)
        c_star = rho + (am ^ _keystream(ak, b"fabricate", rho, ml))
        for _ in range(budget):
            cand = Bits.random(sig.sigl, rng)
            if sig.vrfy(family.pk, c_star, cand):
                return c_star + cand, sigma
        return last, sigma

    def ext(ak, docs):
        if len(docs) != 1:
            raise WrongDocumentCountError(f"expected 1 document, got {len(docs)}")
        d = docs[0]
        if len(d) != total_len:
            return None
        rho = d[:prefix]
        return d[prefix : prefix + ml] ^ _keystream(ak, b"fabricate", rho, ml)

    return AlgSubstitutionAttack(
        attack_id=f"fabricating:{family.alg.alg_id}",
        ml=ml,
        outl=1,
        alg=family.alg,
        gen=gen,
        enc=enc,
        ext=ext,
    )


class _SimSignedHost:
    """Host view a forger hands to a universal attack: encrypt, then ask the
    game's signing oracle for the tag."""

    def __init__(self, ses: SymmetricEncryptionScheme, sigl: int, sign):
        self.ml = ses.ml
        self.cl = ses.cl + sigl
        self.coin_bits = ses.coin_bits
        self._ses, self._sign = ses, sign

    def oracle(self, k: Bits, m: Bits, coins: Bits) -> Bits:
        c = self._ses.enc(k, m, coins)
        return c + self._sign(c)


def forger_from_universal_asa(
    steg: StegoSystem, ses: SymmetricEncryptionScheme, sig: SignatureScheme
) -> Adversary:
    """Run a universal attack against the signed family inside the forgery game.

    Every ciphertext the attack inspects is signed by the game's oracle, so
    an attack that only ever emits oracle answers can never win: its output
    message is always on the queried list. Only a fabricating attack gets
    past this forger's own bookkeeping.
    """
    if sig.ml != ses.cl:
        raise LengthMismatchError("signature scheme must sign ciphertext-length messages")

    def strategy(view, rng: random.Random):
        host = _SimSignedHost(ses, sig.sigl, view.sign)
        attack = universal_asa(steg, host)
        ak = attack.gen(rng)
        am = Bits.random(attack.ml, rng)
        k = Bits.random(ses.key_bits, rng)
        m = Bits.random(ses.ml, rng)
        doc, _ = attack.enc(ak, am, k, m, None, rng)
        return doc[: ses.cl], doc[ses.cl :]

    return Adversary(
        kind="forger",
        name="universal-attack",
        description="first subverted output of a universal attack on the signed family",
        strategy=strategy,
    )


def forger_from_fabricating_asa(
    ses: SymmetricEncryptionScheme,
    sig: SignatureScheme,
    ml: int = 64,
    decoys: int = 4,
    budget: int = 4096,
) -> Adversary:
    """The fabricating attack replayed inside the forgery game."""
    if sig.ml != ses.cl:
        raise LengthMismatchError("signature scheme must sign ciphertext-length messages")
    prefix = ses.cl - ml
    if prefix < 0:
        raise ParameterError("hidden message longer than a ciphertext")

    def strategy(view, rng: random.Random):
        ak = Bits.random(128, rng)
        am = Bits.random(ml, rng)
        k = Bits.random(ses.key_bits, rng)
        x = Bits.random(ses.ml, rng)
        last = None
        for _ in range(decoys):
            c = ses.enc_sample(k, x, rng)
            last = (c, view.sign(c))
        rho = Bits.random(prefix, rng)
        c_star = rho + (am ^ _keystream(ak, b"fabricate", rho, ml))
        for _ in range(budget):
            cand = Bits.random(sig.sigl, rng)
            if view.vrfy(view.pk, c_star, cand):
                return c_star, cand
        return last

    return Adversary(
        kind="forger",
        name=f"fabricating-{ml}",
        description="forges by verifier search on a fabricated ciphertext",
        strategy=strategy,
    )


def rate_report(
    family: SignedFamily,
    attack: AlgSubstitutionAttack,
    query: float,
    forger: Adversary,
    trials: int,
    seed: int,
    watchdogs: list[Adversary] | None = None,
    jobs: int = 1,
) -> dict:
    """Assemble the rate lower-bound inequality from measured legs.

    forger_bound = 1 - insec_hat - unrel_hat - phi - 3*SE, floored at zero;
    a sound attack/forger pairing should show forger_success_hat >= bound.
    insec_hat is the worst normalized advantage over the watchdogs.
    """
    if watchdogs is None:
        from .adversaries import default_watchdogs

        watchdogs = default_watchdogs()

    insec_hat, se_insec = 0.0, 0.0
    insec_by_watchdog = {}
    for w in watchdogs:
        rep = run_rasa_dist(attack, family.alg, w, trials, seed, jobs=jobs)
        insec_by_watchdog[w.name] = rep.normalized_advantage
        if rep.normalized_advantage >= insec_hat:
            insec_hat = rep.normalized_advantage
            lo, hi = rep.advantage_ci95
            se_insec = (hi - lo) / (2 * 1.959963984540054)

    unrel_rep = estimate_unrel_alg(attack, family.alg, trials, seed, jobs=jobs)
    unrel_hat = unrel_rep.failure_rate
    lo, hi = unrel_rep.ci95
    se_unrel = (hi - lo) / (2 * 1.959963984540054)

    phi_rep = phi(attack.ml, attack.outl, query)
    slack = 3.0 * math.sqrt(se_insec**2 + se_unrel**2)
    bound = max(0.0, 1.0 - insec_hat - unrel_hat - phi_rep.phi - slack)

    forge_rep = run_sig_forge(family.sig, forger, trials, seed, jobs=jobs)

    return {
        "schema": "subvertlab/1",
        "game": "rate-lower-bound",
        "ml": attack.ml,
        "outl": attack.outl,
        "bits_per_ciphertext": attack.ml / attack.outl,
        "log2_phi": phi_rep.log2_phi,
        "insec_hat": insec_hat,
        "unrel_hat": unrel_hat,
        "forger_bound": bound,
        "forger_success_hat": forge_rep.p_hat,
        "query": query,
        "trials": trials,
        "seed": seed,
        "insec_by_watchdog": insec_by_watchdog,
    }
