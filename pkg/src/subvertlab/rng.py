"""Deterministic splittable randomness.

Every experiment derives named substreams from (seed, path...) via SHA-256,
so trials are independent of execution order and reproducible byte-for-byte.
"""

from __future__ import annotations

import hashlib
import random

__all__ = ["substream", "TrialStreams"]


def substream(seed: int, *path: int | str) -> random.Random:
    """Independent PRNG stream for a (seed, path) label."""
    tag = repr((int(seed),) + tuple(path)).encode()
    digest = hashlib.sha256(tag).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


class TrialStreams:
    """Named randomness streams for one game trial.

    Streams are memoized so repeated lookups continue the same sequence.
    Labels used by the games: "ak", "b", "adv", "oracle" (private to the
    game) and ("sim", name) for service draws whose values are handed to
    the adversary anyway; adapters that simulate one game inside another
    re-derive the sim streams to reproduce transcripts exactly.
    """

    def __init__(self, seed: int, trial: int):
        self.seed = int(seed)
        self.trial = int(trial)
        self._streams: dict[tuple, random.Random] = {}

    def get(self, *path: int | str) -> random.Random:
        if path not in self._streams:
            self._streams[path] = substream(self.seed, self.trial, *path)
        return self._streams[path]

    def sim(self, name: str) -> random.Random:
        return self.get("sim", name)
