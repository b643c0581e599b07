#!/usr/bin/env python3
"""UDP checksums over IPv4 pseudo-header + datagram, straight from RFC 768.

usage: udp_checksum_vectors.py <out json>
"""
import json
import random
import struct
import sys


def ip(s):
    a, b, c, d = (int(x) for x in s.split("."))
    return bytes([a, b, c, d])


def csum(src, dst, sport, dport, body):
    length = 8 + len(body)
    data = ip(src) + ip(dst) + bytes([0, 17]) + struct.pack(">H", length)
    data += struct.pack(">HHHH", sport, dport, length, 0) + body
    if len(data) % 2:
        data += b"\0"
    total = sum(struct.unpack(f">{len(data) // 2}H", data))
    while total >> 16:
        total = (total & 0xFFFF) + (total >> 16)
    c = ~total & 0xFFFF
    return 0xFFFF if c == 0 else c


def rtp(pt, seq, ts, ssrc, payload):
    return struct.pack(">BBHII", 0x80, pt, seq, ts, ssrc) + payload


def main():
    rnd = random.Random(1603)
    vectors = []
    cases = [
        ("10.0.1.10", "10.0.2.20", 5004, 5006, rtp(0, 1, 160, 0x11223344, bytes(160))),
        ("10.0.1.10", "10.0.2.20", 5004, 5006, rtp(0, 65535, 4294967200, 0xDEADBEEF, bytes([0xFF] * 160))),
        ("192.168.7.1", "172.16.0.9", 40000, 16384,
         rtp(8, 777, 99999, 0x01020304, bytes(rnd.randrange(256) for _ in range(160)))),
        ("127.0.0.1", "127.0.0.1", 1, 65535, rtp(96, 2, 3, 4, bytes(rnd.randrange(256) for _ in range(33)))),
        ("255.255.255.255", "0.0.0.0", 65535, 65535, rtp(127, 0, 0, 0, b"")),
    ]
    # a datagram whose sum complements to zero, so it must be sent as 0xFFFF
    body = rtp(0, 5, 800, 0x55AA55AA, bytes(158))
    for fix in range(65536):
        candidate = body + struct.pack(">H", fix)
        if csum("10.9.8.7", "10.6.5.4", 5004, 5006, candidate) == 0xFFFF:
            length = 8 + len(candidate)
            data = ip("10.9.8.7") + ip("10.6.5.4") + bytes([0, 17]) + struct.pack(">H", length)
            data += struct.pack(">HHHH", 5004, 5006, length, 0) + candidate
            total = sum(struct.unpack(f">{len(data) // 2}H", data))
            while total >> 16:
                total = (total & 0xFFFF) + (total >> 16)
            if total == 0xFFFF:
                cases.append(("10.9.8.7", "10.6.5.4", 5004, 5006, candidate))
                break
    for src, dst, sport, dport, dgram in cases:
        vectors.append({"src": src, "dst": dst, "sport": sport, "dport": dport,
                        "rtp_hex": dgram.hex(), "checksum": csum(src, dst, sport, dport, dgram)})
    with open(sys.argv[1], "w") as f:
        json.dump(vectors, f, indent=1)


if __name__ == "__main__":
    main()
