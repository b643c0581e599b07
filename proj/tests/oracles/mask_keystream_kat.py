#!/usr/bin/env python3
"""AES-128-CTR keystream vectors from the cryptography package.

usage: mask_keystream_kat.py <out json>

Counter block: 4 zero bytes, SSRC (big endian), 48-bit packet index (big
endian), 2 zero bytes.
"""
import json
import sys

from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes


def ks(key, ssrc, index, n):
    iv = bytes(4) + ssrc.to_bytes(4, "big") + index.to_bytes(6, "big") + bytes(2)
    enc = Cipher(algorithms.AES(key), modes.CTR(iv)).encryptor()
    return enc.update(bytes(n)) + enc.finalize()


cases = [
    (bytes(range(16)), 0x2F6A11C4, 0, 160),
    (bytes.fromhex("00112233445566778899aabbccddeeff"), 0xDEADBEEF, 0x1FFFF, 80),
    (bytes([0xFF] * 16), 0xFFFFFFFF, (1 << 48) - 1, 33),
]
out = [{"key": k.hex(), "ssrc": s, "index": i, "keystream": ks(k, s, i, n).hex()} for k, s, i, n in cases]
with open(sys.argv[1], "w") as f:
    json.dump(out, f, indent=1)
