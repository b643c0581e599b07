#pragma once

#include <array>
#include <cstdint>

#include "transteg/audio_io.hpp"
#include "transteg/bytes.hpp"

namespace transteg::codec {

/// G.726 32 kbit/s ADPCM predictor and quantizer adaptation state, laid out
/// after the CCITT reference block structure. A default-constructed state is
/// the recommendation's reset state.
class AdpcmState {
 public:
  AdpcmState();

  /// 16-bit linear in, 4-bit code out (low nibble).
  int encode(std::int16_t sample);
  /// 4-bit code in, 16-bit linear out.
  std::int16_t decode(int code);

  friend bool operator==(const AdpcmState&, const AdpcmState&) = default;

 private:
  int predictor_zero() const;
  int predictor_pole() const;
  int step_size() const;
  void update(int y, int wi, int fi, int dq, int sr, int dqsez);

  long yl_;   // locked (steady state) step size multiplier
  int yu_;    // unlocked (non-steady state) step size multiplier
  int dms_;   // short term energy estimate
  int dml_;   // long term energy estimate
  int ap_;    // linear weighting coefficient of yl and yu
  std::array<int, 2> a_{};   // pole coefficients
  std::array<int, 6> b_{};   // zero coefficients
  std::array<int, 2> pk_{};  // signs of previous partial reconstructions
  std::array<std::int16_t, 6> dq_{};  // quantized differences, float format
  std::array<std::int16_t, 2> sr_{};  // reconstructed signal, float format
  int td_;    // tone detect
};

inline constexpr std::size_t kG726FrameBytes = 80;

/// 160 samples -> 80 bytes. The first sample of each pair goes in the low
/// nibble (RFC 3551 packing).
Bytes g726_encode(const audio::PcmFrame& frame, AdpcmState& state);

/// Throws unless the payload is exactly 80 bytes.
audio::PcmFrame g726_decode(ByteView payload, AdpcmState& state);

}  // namespace transteg::codec
