"""Built-in adversaries for the games.

All of these are deliberately small-budget: a handful of oracle queries,
decision rules a reviewer can check by hand. They are meant to put honest
floors under "looks indistinguishable at desk scale" claims, and to light
up brightly on the fixtures that are supposed to be detectable (repeated
ciphertexts under a deterministic scheme, fabricated documents from a
forced-embedding attack).

Guess conventions: distinguishers return 0 for "the subverted / embedded /
real-encryption world" and 1 for the ideal or honest world. The repeat
rules key on output collisions, whose direction targets randomized hosts;
reports carry the normalized advantage |2p - 1|, so a rule that fires with
the opposite sign on some fixture still measures the same distinguishing
power.
"""

from __future__ import annotations

import math
import random
from statistics import NormalDist

from .bits import Bits
from .errors import ParameterError
from .games import Adversary
from .prf import is_power_of_two

__all__ = [
    "chi2_quantile",
    "constant_guess",
    "random_guess",
    "repeat_attacker",
    "chi2_attacker",
    "repeat_watchdog",
    "chi2_watchdog",
    "repeat_warden",
    "chi2_warden",
    "replay_forger",
    "random_forger",
    "search_forger",
    "default_attackers",
    "default_watchdogs",
    "default_wardens",
]


def chi2_quantile(df: int, q: float = 0.95) -> float:
    """Chi-square quantile via the Wilson-Hilferty cube approximation."""
    if df < 1:
        raise ParameterError("df must be at least 1")
    z = NormalDist().inv_cdf(q)
    return df * (1.0 - 2.0 / (9.0 * df) + z * math.sqrt(2.0 / (9.0 * df))) ** 3


def constant_guess(kind: str = "watchdog", guess: int = 1) -> Adversary:
    """Ignores its oracles entirely; the exact-zero-advantage baseline."""
    return Adversary(
        kind=kind,
        name=f"constant-{guess}",
        description="always returns the same guess",
        strategy=lambda view, rng: guess,
    )


def random_guess(kind: str = "watchdog") -> Adversary:
    return Adversary(
        kind=kind,
        name="coin-flip",
        description="guesses by a fair coin, advantage zero in expectation",
        strategy=lambda view, rng: rng.randrange(2),
    )


def _collision_guess(outputs) -> int:
    # collisions point at real/subverted worlds (guess 0) for randomized hosts
    return 0 if len(set(outputs)) < len(outputs) else 1


def repeat_attacker(queries: int = 2) -> Adversary:
    """Asks for the same message twice; equal ciphertexts scream "real"."""

    def strategy(view, rng: random.Random) -> int:
        m = Bits.random(view.scheme.ml, rng)
        return _collision_guess([view.enc(m) for _ in range(queries)])

    return Adversary(
        kind="attacker",
        name=f"repeat-{queries}",
        description="re-encrypts one message and looks for colliding ciphertexts",
        strategy=strategy,
    )


def chi2_attacker(queries: int = 16, bins: int = 4) -> Adversary:
    """Chi-square test on the leading ciphertext bits against uniform."""
    threshold = chi2_quantile(bins - 1)

    def strategy(view, rng: random.Random) -> int:
        cs = [view.enc(Bits.random(view.scheme.ml, rng)) for _ in range(queries)]
        return _chi2_guess(cs, bins, threshold)

    return Adversary(
        kind="attacker",
        name=f"chi2-{queries}x{bins}",
        description="frequency test on leading ciphertext bits",
        strategy=strategy,
    )


def _chi2_guess(outputs, bins: int, threshold: float) -> int:
    if not is_power_of_two(bins):
        raise ParameterError("bins must be a power of two")
    nbits = bins.bit_length() - 1
    if any(len(c) < nbits for c in outputs):
        raise ParameterError("documents shorter than the binning prefix")
    counts = [0] * bins
    for c in outputs:
        counts[c[:nbits].uint] += 1
    expected = len(outputs) / bins
    stat = sum((n - expected) ** 2 / expected for n in counts)
    return 0 if stat > threshold else 1


def repeat_watchdog(queries: int = 2) -> Adversary:
    """Repeats one challenge input; works against encryption and algorithm hosts."""

    def strategy(view, rng: random.Random) -> int:
        am = Bits.random(view.asa_ml, rng)
        sigma = None
        outputs = []
        if hasattr(view, "scheme"):
            k = view.scheme.gen(rng)
            m = Bits.random(view.scheme.ml, rng)
            for _ in range(queries):
                c, sigma = view.ch(am, k, m, sigma)
                outputs.append(c)
        else:
            s = view.alg.secret_gen(rng)
            x = view.alg.input_gen(rng)
            for _ in range(queries):
                y, sigma = view.ch(am, s, x, sigma)
                outputs.append(y)
        return _collision_guess(outputs)

    return Adversary(
        kind="watchdog",
        name=f"repeat-{queries}",
        description="repeats one (key, message) challenge and compares outputs",
        strategy=strategy,
    )


def chi2_watchdog(queries: int = 16, bins: int = 4) -> Adversary:
    """Bins the leading output bits over fresh challenge messages."""
    threshold = chi2_quantile(bins - 1)

    def strategy(view, rng: random.Random) -> int:
        am = Bits.random(view.asa_ml, rng)
        sigma = None
        outputs = []
        if hasattr(view, "scheme"):
            k = view.scheme.gen(rng)
            for _ in range(queries):
                c, sigma = view.ch(am, k, Bits.random(view.scheme.ml, rng), sigma)
                outputs.append(c)
        else:
            s = view.alg.secret_gen(rng)
            for _ in range(queries):
                y, sigma = view.ch(am, s, view.alg.input_gen(rng), sigma)
                outputs.append(y)
        return _chi2_guess(outputs, bins, threshold)

    return Adversary(
        kind="watchdog",
        name=f"chi2-{queries}x{bins}",
        description="frequency test on leading bits of challenge outputs",
        strategy=strategy,
    )


def _crafted_full_history(view, rng: random.Random) -> tuple:
    desc = view.channel.descriptor
    ell = desc.get("ell")
    if ell is None:
        return ()
    key = Bits.random(desc["kappa"], rng)
    msg = Bits.random(desc["in_bits"], rng)
    return (key,) + (msg,) * ell


def repeat_warden(queries: int = 2) -> Adversary:
    """Challenges one full history repeatedly and compares the documents."""

    def strategy(view, rng: random.Random) -> int:
        am = Bits.random(view.stego_ml, rng)
        h = _crafted_full_history(view, rng)
        sigma = None
        docs = []
        for _ in range(queries):
            d, sigma = view.ch(am, h, sigma)
            docs.append(d)
        return _collision_guess(docs)

    return Adversary(
        kind="warden",
        name=f"repeat-{queries}",
        description="repeats one history challenge and compares documents",
        strategy=strategy,
    )


def chi2_warden(queries: int = 16, bins: int = 4) -> Adversary:
    """Bins leading document bits at one full history."""
    threshold = chi2_quantile(bins - 1)

    def strategy(view, rng: random.Random) -> int:
        am = Bits.random(view.stego_ml, rng)
        h = _crafted_full_history(view, rng)
        sigma = None
        docs = []
        for _ in range(queries):
            d, sigma = view.ch(am, h, sigma)
            docs.append(d)
        return _chi2_guess(docs, bins, threshold)

    return Adversary(
        kind="warden",
        name=f"chi2-{queries}x{bins}",
        description="frequency test on leading document bits at one history",
        strategy=strategy,
    )


def replay_forger() -> Adversary:
    """Replays a queried message; never a valid forgery, the zero baseline."""

    def strategy(view, rng: random.Random):
        m = Bits.random(view.params["ml"], rng)
        return m, view.sign(m)

    return Adversary(
        kind="forger",
        name="replay",
        description="outputs a signature obtained from the signing oracle",
        strategy=strategy,
    )


def random_forger() -> Adversary:
    """Guesses a signature blind; succeeds at the tag-guessing floor."""

    def strategy(view, rng: random.Random):
        m = Bits.random(view.params["ml"], rng)
        sigl = view.params["r"] + view.params["t"]
        return m, Bits.random(sigl, rng)

    return Adversary(
        kind="forger",
        name="random-guess",
        description="outputs a uniformly random signature on a fresh message",
        strategy=strategy,
    )


def search_forger(budget: int = 512) -> Adversary:
    """Tries random signatures against the public verifier within a budget."""

    def strategy(view, rng: random.Random):
        m = Bits.random(view.params["ml"], rng)
        sigl = view.params["r"] + view.params["t"]
        for _ in range(budget):
            cand = Bits.random(sigl, rng)
            if view.vrfy(view.pk, m, cand):
                return m, cand
        return None

    return Adversary(
        kind="forger",
        name=f"search-{budget}",
        description="random-search forgery using the public verifier",
        strategy=strategy,
    )


def default_attackers() -> list[Adversary]:
    return [constant_guess("attacker"), repeat_attacker(), chi2_attacker()]


def default_watchdogs() -> list[Adversary]:
    return [constant_guess("watchdog"), repeat_watchdog(), chi2_watchdog()]


def default_wardens() -> list[Adversary]:
    return [constant_guess("warden"), repeat_warden(), chi2_warden()]
