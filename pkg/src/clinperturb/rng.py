"""Seed derivation and the deterministic RNG used by the perturbation engine.

Per-(sample, method) seeding makes corpus perturbation independent of batch
order, worker count, and platform: the same (global seed, sample id, method)
always yields the same draw sequence.
"""

from __future__ import annotations

MASK64 = (1 << 64) - 1

FNV_OFFSET = 14695981039346656037
FNV_PRIME = 1099511628211

_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def fnv1a64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & MASK64
    return h


def derive_seed(global_seed: int, sample_id: str, method: str) -> int:
    """Seed for one (sample, method) run: FNV-1a over the 0x1F-joined fields."""
    payload = b"\x1f".join(
        [str(global_seed).encode("utf-8"), sample_id.encode("utf-8"), method.encode("utf-8")]
    )
    return fnv1a64(payload)


class SplitMix64:
    """SplitMix64 generator with unbiased bounded draws via rejection."""

    def __init__(self, seed: int):
        self._state = seed & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & MASK64
        return z ^ (z >> 31)

    def randbelow(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled so no modulo bias."""
        if n <= 0:
            raise ValueError("randbelow requires n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def choice(self, items):
        if not items:
            raise ValueError("choice on empty sequence")
        return items[self.randbelow(len(items))]

    def coin(self) -> bool:
        return self.randbelow(2) == 1

    def shuffled(self, items):
        """Fisher-Yates permuted copy."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.randbelow(i + 1)
            out[i], out[j] = out[j], out[i]
        return out

    def nonidentity_permutation(self, n: int) -> list[int]:
        """Uniform draw over the non-identity permutations of range(n)."""
        if n < 2:
            raise ValueError("need n >= 2 for a non-identity permutation")
        ident = list(range(n))
        while True:
            perm = self.shuffled(ident)
            if perm != ident:
                return perm
