#!/usr/bin/env python3
"""WAV files written by the standard library's wave module.

usage: wav_fixtures.py <out dir>

  ramp1603.wav     8 kHz mono 16-bit, sample i = 20*i - 16000, 1603 samples
  stereo.wav       8 kHz, 2 channels
  rate16k.wav      16 kHz mono
  width8.wav       8 kHz mono, 8-bit
"""
import os
import struct
import sys
import wave


def write(path, channels, rate, width, frames):
    with wave.open(path, "wb") as w:
        w.setnchannels(channels)
        w.setsampwidth(width)
        w.setframerate(rate)
        w.writeframes(frames)


def main():
    out = sys.argv[1]
    os.makedirs(out, exist_ok=True)
    ramp = [20 * i - 16000 for i in range(1603)]
    write(os.path.join(out, "ramp1603.wav"), 1, 8000, 2, struct.pack(f"<{len(ramp)}h", *ramp))
    write(os.path.join(out, "stereo.wav"), 2, 8000, 2, struct.pack("<320h", *range(320)))
    write(os.path.join(out, "rate16k.wav"), 1, 16000, 2, struct.pack("<320h", *range(320)))
    write(os.path.join(out, "width8.wav"), 1, 8000, 1, bytes(range(160)))


if __name__ == "__main__":
    main()
