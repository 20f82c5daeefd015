"""Portable seedable random number streams.

A Lehmer-style multiplicative congruential generator modulo 2**31 - 1,
with disjoint substreams obtained by jumping the generator ahead a fixed
number of steps per stream id.  Normal deviates come from the
Beasley-Springer-Moro rational approximation of the inverse normal CDF,
so exactly one uniform is consumed per normal and every sequence is
bit-reproducible across platforms.
"""

from __future__ import annotations

import math

from .errors import InvalidArgumentError

DEFAULT_MODULUS = 2147483647  # 2**31 - 1, prime
DEFAULT_MULTIPLIER = 630360016
STREAM_JUMP = 100000  # generator steps separating consecutive stream ids

# Beasley-Springer-Moro coefficients (central rational part and tail series).
_BSM_A = (2.50662823884, -18.61500062529, 41.39119773534, -25.44106049637)
_BSM_B = (-8.47351093090, 23.08336743743, -21.06224101826, 3.13082909833)
_BSM_C = (
    0.3374754822726147,
    0.9761690190917186,
    0.1607979714918209,
    0.0276438810333863,
    0.0038405729373609,
    0.0003951896511919,
    0.0000321767881768,
    0.0000002888167364,
    0.0000003960315187,
)


def inverse_normal_cdf(u: float) -> float:
    """Standard normal quantile, |error| < 1e-7 on (0, 1)."""
    y = u - 0.5
    if abs(y) < 0.42:
        r = y * y
        num = y * (((_BSM_A[3] * r + _BSM_A[2]) * r + _BSM_A[1]) * r + _BSM_A[0])
        den = (((_BSM_B[3] * r + _BSM_B[2]) * r + _BSM_B[1]) * r + _BSM_B[0]) * r + 1.0
        return num / den
    r = u if u < 0.5 else 1.0 - u
    s = math.log(-math.log(r))
    x = _BSM_C[0]
    t = 1.0
    for c in _BSM_C[1:]:
        t *= s
        x += c * t
    return -x if u < 0.5 else x


class RandomStream:
    """Single-owner mutable stream of uniform / normal deviates.

    Streams created from the same ``(seed, stream_id)`` are identical.
    Consecutive stream ids start ``STREAM_JUMP`` generator steps apart, so
    they are disjoint as long as no stream draws more than that.
    """

    __slots__ = ("seed", "stream_id", "multiplier", "modulus", "state")

    def __init__(
        self,
        seed: int,
        stream_id: int = 0,
        multiplier: int = DEFAULT_MULTIPLIER,
        modulus: int = DEFAULT_MODULUS,
    ):
        if not 1 <= seed <= modulus - 1:
            raise InvalidArgumentError(
                f"seed must be in [1, {modulus - 1}], got {seed}"
            )
        if stream_id < 0:
            raise InvalidArgumentError(f"stream_id must be >= 0, got {stream_id}")
        self.seed = seed
        self.stream_id = stream_id
        self.multiplier = multiplier
        self.modulus = modulus
        # Jump-ahead: state after k*STREAM_JUMP steps is A^(k*J) * seed mod m.
        self.state = pow(multiplier, stream_id * STREAM_JUMP, modulus) * seed % modulus

    def next_uniform(self) -> float:
        """Next uniform deviate, strictly inside (0, 1)."""
        self.state = self.multiplier * self.state % self.modulus
        return self.state / self.modulus

    def next_normal(self) -> float:
        """Next standard normal deviate; consumes exactly one uniform."""
        return inverse_normal_cdf(self.next_uniform())

    def substream(self, offset: int) -> "RandomStream":
        """Fresh stream ``offset`` ids past this one (same seed and constants)."""
        return RandomStream(
            self.seed, self.stream_id + offset, self.multiplier, self.modulus
        )

    def __repr__(self):
        return (
            f"RandomStream(seed={self.seed}, stream_id={self.stream_id}, "
            f"state={self.state})"
        )


def new_stream(seed: int, stream_id: int = 0, **kwargs) -> RandomStream:
    """Create a stream whose state is a pure function of (seed, stream_id)."""
    return RandomStream(seed, stream_id, **kwargs)
