#include "transteg/g726.hpp"

#include <cstdlib>
#include <string>

#include "transteg/error.hpp"

namespace transteg::codec {

namespace {

constexpr std::int16_t kPower2[15] = {1,     2,     4,     8,     0x10,
                                      0x20,  0x40,  0x80,  0x100, 0x200,
                                      0x400, 0x800, 0x1000, 0x2000, 0x4000};

// 32 kbit/s tables.
constexpr std::int16_t kQuantTable[7] = {-124, 80, 178, 246, 300, 349, 400};
constexpr std::int16_t kDqlnTable[16] = {-2048, 4,   135, 213, 273, 323,
                                         373,   425, 425, 373, 323, 273,
                                         213,   135, 4,   -2048};
constexpr std::int16_t kWiTable[16] = {-12, 18,  41,  64,  112, 198, 355, 1122,
                                       1122, 355, 198, 112, 64,  41,  18,  -12};
constexpr std::int16_t kFiTable[16] = {0,     0,     0,     0x200, 0x200, 0x200,
                                       0x600, 0xE00, 0xE00, 0x600, 0x200, 0x200,
                                       0x200, 0,     0,     0};

// Index of the first table entry strictly greater than val.
int quan(int val, const std::int16_t* table, int size) {
  int i = 0;
  for (; i < size; ++i) {
    if (val < table[i]) break;
  }
  return i;
}

// Multiplies a predictor coefficient by a floating-format signal value.
int fmult(int an, int srn) {
  const int anmag = (an > 0) ? an : ((-an) & 0x1FFF);
  const int anexp = quan(anmag, kPower2, 15) - 6;
  const int anmant = (anmag == 0) ? 32
                     : (anexp >= 0) ? anmag >> anexp
                                    : anmag << -anexp;
  const int wanexp = anexp + ((srn >> 6) & 0xF) - 13;
  const int wanmant = (anmant * (srn & 077) + 0x30) >> 4;
  const int retval = (wanexp >= 0) ? ((wanmant << wanexp) & 0x7FFF)
                                   : (wanmant >> -wanexp);
  return ((an ^ srn) < 0) ? -retval : retval;
}

int quantize(int d, int y) {
  const int dqm = static_cast<std::int16_t>(std::abs(d));
  const int exp = quan(dqm >> 1, kPower2, 15);
  const int mant = ((dqm << 7) >> exp) & 0x7F;
  const int dl = (exp << 7) + mant;
  const int dln = static_cast<std::int16_t>(dl - (y >> 2));
  const int i = quan(dln, kQuantTable, 7);
  if (d < 0) return 15 - i;
  if (i == 0) return 15;
  return i;
}

int reconstruct(bool sign, int dqln, int y) {
  const int dql = dqln + (y >> 2);
  if (dql < 0) return sign ? -0x8000 : 0;
  const int dex = (dql >> 7) & 15;
  const int dqt = 128 + (dql & 127);
  const int dq = (dqt << 7) >> (14 - dex);
  return sign ? (dq - 0x8000) : dq;
}

// Signed float format: 4-bit exponent, 6-bit mantissa, sign folded in as
// a 0x400 offset.
std::int16_t to_float(int mag, bool negative) {
  if (mag == 0) return static_cast<std::int16_t>(negative ? 0xFC20 : 0x20);
  const int exp = quan(mag, kPower2, 15);
  const int v = (exp << 6) + ((mag << 6) >> exp);
  return static_cast<std::int16_t>(negative ? v - 0x400 : v);
}

}  // namespace

AdpcmState::AdpcmState()
    : yl_(34816), yu_(544), dms_(0), dml_(0), ap_(0), td_(0) {
  sr_.fill(32);
  dq_.fill(32);
}

int AdpcmState::predictor_zero() const {
  int sezi = 0;
  for (int i = 0; i < 6; ++i) sezi += fmult(b_[i] >> 2, dq_[i]);
  return sezi;
}

int AdpcmState::predictor_pole() const {
  return fmult(a_[1] >> 2, sr_[1]) + fmult(a_[0] >> 2, sr_[0]);
}

int AdpcmState::step_size() const {
  if (ap_ >= 256) return yu_;
  int y = static_cast<int>(yl_ >> 6);
  const int dif = yu_ - y;
  const int al = ap_ >> 2;
  if (dif > 0) {
    y += (dif * al) >> 6;
  } else if (dif < 0) {
    y += (dif * al + 0x3F) >> 6;
  }
  return y;
}

void AdpcmState::update(int y, int wi, int fi, int dq, int sr, int dqsez) {
  const int pk0 = (dqsez < 0) ? 1 : 0;
  const int mag = dq & 0x7FFF;

  // TRANS: tone/transition detector
  int tr = 0;
  if (td_ != 0) {
    const int ylint = static_cast<int>(yl_ >> 15);
    const int ylfrac = static_cast<int>(yl_ >> 10) & 0x1F;
    const int thr1 = (32 + ylfrac) << ylint;
    const int thr2 = (ylint > 9) ? 31 << 10 : thr1;
    const int dqthr = (thr2 + (thr2 >> 1)) >> 1;
    tr = (mag <= dqthr) ? 0 : 1;
  }

  // FUNCTW, FILTD, LIMB
  yu_ = y + ((wi - y) >> 5);
  if (yu_ < 544) {
    yu_ = 544;
  } else if (yu_ > 5120) {
    yu_ = 5120;
  }
  // FILTE
  yl_ += yu_ + ((-yl_) >> 6);

  int a2p = 0;
  if (tr == 1) {
    a_.fill(0);
    b_.fill(0);
  } else {
    const int pks1 = pk0 ^ pk_[0];

    // UPA2
    a2p = a_[1] - (a_[1] >> 7);
    if (dqsez != 0) {
      const int fa1 = pks1 ? a_[0] : -a_[0];
      if (fa1 < -8191) {
        a2p -= 0x100;
      } else if (fa1 > 8191) {
        a2p += 0xFF;
      } else {
        a2p += fa1 >> 5;
      }

      if (pk0 ^ pk_[1]) {
        // LIMC
        if (a2p <= -12160) {
          a2p = -12288;
        } else if (a2p >= 12416) {
          a2p = 12288;
        } else {
          a2p -= 0x80;
        }
      } else if (a2p <= -12416) {
        a2p = -12288;
      } else if (a2p >= 12160) {
        a2p = 12288;
      } else {
        a2p += 0x80;
      }
    }
    a_[1] = a2p;

    // UPA1
    a_[0] -= a_[0] >> 8;
    if (dqsez != 0) a_[0] += pks1 == 0 ? 192 : -192;

    // LIMD
    const int a1ul = 15360 - a2p;
    if (a_[0] < -a1ul) {
      a_[0] = -a1ul;
    } else if (a_[0] > a1ul) {
      a_[0] = a1ul;
    }

    // UPB
    for (int i = 0; i < 6; ++i) {
      b_[i] -= b_[i] >> 8;
      if (mag != 0) b_[i] += ((dq ^ dq_[i]) >= 0) ? 128 : -128;
    }
  }

  for (int i = 5; i > 0; --i) dq_[i] = dq_[i - 1];
  // FLOAT A
  dq_[0] = to_float(mag, dq < 0);

  // FLOAT B
  sr_[1] = sr_[0];
  if (sr > -32768) {
    sr_[0] = to_float(std::abs(sr), sr < 0);
  } else {
    sr_[0] = static_cast<std::int16_t>(0xFC20);
  }

  // DELAY A
  pk_[1] = pk_[0];
  pk_[0] = pk0;

  // TONE
  if (tr == 1) {
    td_ = 0;
  } else if (a2p < -11776) {
    td_ = 1;
  } else {
    td_ = 0;
  }

  // FILTA, FILTB, SUBTC, FILTC
  dms_ += (fi - dms_) >> 5;
  dml_ += (((fi << 2) - dml_) >> 7);

  if (tr == 1) {
    ap_ = 256;
  } else if (y < 1536) {
    ap_ += (0x200 - ap_) >> 4;
  } else if (td_ == 1) {
    ap_ += (0x200 - ap_) >> 4;
  } else if (std::abs((dms_ << 2) - dml_) >= (dml_ >> 3)) {
    ap_ += (0x200 - ap_) >> 4;
  } else {
    ap_ += (-ap_) >> 4;
  }
}

// Intermediate signals are 16-bit in the reference implementation and wrap
// on overflow; the narrowing casts below keep extreme inputs bit-exact.
int AdpcmState::encode(std::int16_t sample) {
  const int sl = sample >> 2;  // 14-bit dynamic range

  const int sezi = static_cast<std::int16_t>(predictor_zero());
  const int sei = static_cast<std::int16_t>(sezi + predictor_pole());
  const int se = sei >> 1;
  const int d = static_cast<std::int16_t>(sl - se);

  const int y = step_size();
  const int i = quantize(d, y);
  const int dq = reconstruct((i & 0x08) != 0, kDqlnTable[i], y);
  const int sr = static_cast<std::int16_t>((dq < 0) ? se - (dq & 0x3FFF) : se + dq);
  const int dqsez = static_cast<std::int16_t>(sr + (sezi >> 1) - se);

  update(y, kWiTable[i] << 5, kFiTable[i], dq, sr, dqsez);
  return i;
}

std::int16_t AdpcmState::decode(int code) {
  const int i = code & 0x0F;

  const int sezi = static_cast<std::int16_t>(predictor_zero());
  const int sei = static_cast<std::int16_t>(sezi + predictor_pole());
  const int se = sei >> 1;

  const int y = step_size();
  const int dq = reconstruct((i & 0x08) != 0, kDqlnTable[i], y);
  const int sr = static_cast<std::int16_t>((dq < 0) ? se - (dq & 0x3FFF) : se + dq);
  const int dqsez = static_cast<std::int16_t>(sr + (sezi >> 1) - se);

  update(y, kWiTable[i] << 5, kFiTable[i], dq, sr, dqsez);

  return static_cast<std::int16_t>(sr * 4);
}

Bytes g726_encode(const audio::PcmFrame& frame, AdpcmState& state) {
  Bytes out(kG726FrameBytes);
  for (std::size_t k = 0; k < kG726FrameBytes; ++k) {
    const int lo = state.encode(frame[2 * k]);
    const int hi = state.encode(frame[2 * k + 1]);
    out[k] = static_cast<std::uint8_t>(lo | (hi << 4));
  }
  return out;
}

audio::PcmFrame g726_decode(ByteView payload, AdpcmState& state) {
  if (payload.size() != kG726FrameBytes) {
    throw Error(ErrorKind::format, "G.726-32 payload must be 80 bytes, got " +
                                       std::to_string(payload.size()));
  }
  audio::PcmFrame frame;
  for (std::size_t k = 0; k < kG726FrameBytes; ++k) {
    frame[2 * k] = state.decode(payload[k] & 0x0F);
    frame[2 * k + 1] = state.decode(payload[k] >> 4);
  }
  return frame;
}

}  // namespace transteg::codec
