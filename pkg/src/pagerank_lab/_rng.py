"""Counter-based SplitMix64 random streams.

Every random number in the package is ``mix64(key + GAMMA * (counter + 1))``
where ``key`` is derived from a user seed and a path of stream labels
(graph generation, walker index, replicate, ...). The output depends only
on ``(seed, path, counter)``, never on call order or thread scheduling, and
uses nothing but 64-bit integer arithmetic, so sequences are identical on
every platform.

``mix64`` is the SplitMix64 finalizer (Steele, Lea & Flood 2014, constants
from Vigna's reference implementation). Uniform doubles take the top 53
bits. The numpy and numba versions below must stay bit-identical; the test
suite checks this.
"""
import struct

import numpy as np
from numba import njit

GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_MASK = (1 << 64) - 1
_INV53 = 1.0 / (1 << 53)

# Stream labels; part of the on-disk determinism contract, never renumber.
STREAM_GRAPH = 1
STREAM_WALKER = 2
STREAM_ENSEMBLE = 3
STREAM_SWEEP = 4
STREAM_COORDINATE = 5
STREAM_SYNTHETIC = 6


def mix64_int(z):
    z &= _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def _label(x):
    if isinstance(x, float):
        return struct.unpack("<Q", struct.pack("<d", x))[0]
    x = int(x)
    if x < 0:
        x &= _MASK
    return x


def derive_key(seed, *path):
    """Key of the stream addressed by ``seed`` and the labels in ``path``.

    Labels may be ints (negative ones are taken mod 2**64) or floats
    (hashed by their IEEE-754 bit pattern).
    """
    h = mix64_int(_label(seed) ^ 0x5851F42D4C957F2D)
    for p in path:
        h = mix64_int(h ^ mix64_int((_label(p) + GAMMA) & _MASK))
    return h


def _mix64_array(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def uint64s(key, counters):
    counters = np.asarray(counters, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(key) + np.uint64(GAMMA) * (counters + np.uint64(1))
        return _mix64_array(z)


def uniforms(key, counters):
    """Doubles in [0, 1) for each counter of stream ``key``."""
    return (uint64s(key, counters) >> np.uint64(11)).astype(np.float64) * _INV53


def uniform_int(key, counter, high):
    """Integer in [0, high) from one draw of stream ``key``."""
    u = float(uniforms(key, [counter])[0])
    return min(int(u * high), high - 1)


@njit(cache=True)
def nb_mix64(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def nb_uniform(key, counter):
    z = key + np.uint64(GAMMA) * (counter + np.uint64(1))
    return float(nb_mix64(z) >> np.uint64(11)) * _INV53


@njit(cache=True)
def nb_walker_key(base, walker):
    # Same derivation as derive_key(seed, ..., walker) for the last label.
    return nb_mix64(base ^ nb_mix64(np.uint64(walker) + np.uint64(GAMMA)))
