#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "transteg/bytes.hpp"

namespace transteg {

enum class Compression : std::uint8_t { none = 0, deflate = 1 };

/// Wire header at the start of every steganogram channel:
/// u32 length (LE), u8 compression, u8 version, u16 reserved. `length`
/// counts the bytes that follow the header, after compression.
struct ChannelHeader {
  std::uint32_t length = 0;
  Compression compression = Compression::none;
  std::uint8_t version = 1;
  std::uint16_t reserved = 0;
};

inline constexpr std::size_t kChannelHeaderSize = 8;
inline constexpr std::uint8_t kChannelVersion = 1;

Bytes encode_header(const ChannelHeader& header);
/// nullopt unless version, reserved and compression fields are all valid.
std::optional<ChannelHeader> decode_header(ByteView bytes);

/// Header followed by `data`, deflated first when asked.
Bytes frame_steganogram(ByteView data, Compression compression);

/// Inverse of frame_steganogram on a complete framed buffer.
Bytes unframe_steganogram(ByteView framed);

Bytes deflate_bytes(ByteView data);
Bytes inflate_bytes(ByteView data);

/// One direction of a steganogram channel. The embedding side hands out the
/// framed stream chunk by chunk and pads with keyed filler once it runs
/// out; the extracting side reassembles chunks and stops at the declared
/// length.
class StegoChannel {
 public:
  enum class Direction { embed, extract };
  enum class Status { pending, complete, invalid };

  static StegoChannel for_embedding(Bytes framed, std::uint64_t filler_seed);
  static StegoChannel for_extraction();

  Direction direction() const { return direction_; }

  /// Embed side: exactly `capacity` bytes, channel data first then filler.
  Bytes next_chunk(std::size_t capacity);

  /// Extract side: returns the part of `region` that belongs to the channel
  /// (header and body), dropping filler past the declared length.
  Bytes accept_chunk(ByteView region);

  Status status() const;
  /// Bytes of the framed stream handed out or accepted so far.
  std::size_t cursor() const { return cursor_; }
  /// Header plus body length; known on the extract side once the header
  /// has arrived.
  std::optional<std::size_t> total_length() const;
  std::optional<ChannelHeader> header() const { return header_; }
  bool exhausted() const;

  /// The complete framed buffer (embed: as given, extract: as received).
  const Bytes& framed() const { return framed_; }
  /// Decompressed steganogram; extract side, complete channels only.
  Bytes payload() const;

 private:
  Direction direction_ = Direction::embed;
  Bytes framed_;
  std::size_t cursor_ = 0;
  std::optional<ChannelHeader> header_;
  bool invalid_ = false;
  std::mt19937_64 filler_;
};

}  // namespace transteg
