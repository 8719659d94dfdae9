"""Standalone MurmurHash3 x86_32 used to freeze expected digests in tests.

Kept independent of the C++ implementation; run it directly to regenerate
the constants in tests/unit/test_edge_hash.cpp.
"""
import struct


def rotl32(x, r):
    return ((x << r) | (x >> (32 - r))) & 0xFFFFFFFF


def murmur3_32(data: bytes, seed: int) -> int:
    c1, c2 = 0xCC9E2D51, 0x1B873593
    h = seed & 0xFFFFFFFF
    nblocks = len(data) // 4
    for i in range(nblocks):
        (k,) = struct.unpack_from("<I", data, 4 * i)
        k = (k * c1) & 0xFFFFFFFF
        k = rotl32(k, 15)
        k = (k * c2) & 0xFFFFFFFF
        h ^= k
        h = rotl32(h, 13)
        h = (h * 5 + 0xE6546B64) & 0xFFFFFFFF
    tail = data[4 * nblocks:]
    k = 0
    if len(tail) == 3:
        k ^= tail[2] << 16
    if len(tail) >= 2:
        k ^= tail[1] << 8
    if len(tail) >= 1:
        k ^= tail[0]
        k = (k * c1) & 0xFFFFFFFF
        k = rotl32(k, 15)
        k = (k * c2) & 0xFFFFFFFF
        h ^= k
    h ^= len(data)
    h ^= h >> 16
    h = (h * 0x85EBCA6B) & 0xFFFFFFFF
    h ^= h >> 13
    h = (h * 0xC2B2AE35) & 0xFFFFFFFF
    h ^= h >> 16
    return h


def edge_hash(u: int, v: int) -> int:
    a, b = min(u, v), max(u, v)
    return murmur3_32(struct.pack("<II", a, b), 0) & 0x7FFFFFFF


if __name__ == "__main__":
    # Published vectors for the reference algorithm.
    assert murmur3_32(b"", 0) == 0
    assert murmur3_32(b"", 1) == 0x514E28B7
    assert murmur3_32(b"", 0xFFFFFFFF) == 0x81F16F39
    assert murmur3_32(b"test", 0) == 0xBA6BD213
    assert murmur3_32(b"Hello, world!", 0x9747B28C) == 0x24884CBA
    assert murmur3_32(b"The quick brown fox jumps over the lazy dog", 0x9747B28C) == 0x2FA826CD
    for key, seed in [(b"", 0), (b"test", 0), (b"abc", 0), (b"abcd", 42), (b"Hello, world!", 0x9747B28C)]:
        print(key, seed, hex(murmur3_32(key, seed)))
    for u, v in [(0, 1), (3, 7), (1, 2), (0, 2), (2, 3)]:
        print("edge", u, v, edge_hash(u, v))
    acc = 0
    for u in range(64):
        for v in range(u + 1, 64):
            acc = (acc * 31 + edge_hash(u, v)) & 0xFFFFFFFFFFFFFFFF
    print("fold64", acc)
    print("big", edge_hash(2147483646, 123456789), edge_hash(65536, 65537))
