#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "transteg/audio_io.hpp"
#include "transteg/codec.hpp"
#include "transteg/masking.hpp"
#include "transteg/rtp.hpp"
#include "transteg/stego_channel.hpp"

namespace transteg {

/// An overt codec and the covert codec whose payloads hide inside it.
struct CodecPair {
  codec::CodecSpec overt;
  codec::CodecSpec covert;

  /// Stego bytes per packet.
  std::size_t capacity_bytes() const {
    return overt.bytes_per_frame - covert.bytes_per_frame;
  }
};

/// Agreed overt -> covert mapping. Throws "no mapping" for unregistered
/// overt codecs.
codec::CodecSpec covert_map(const codec::CodecSpec& overt);

/// Overt codec with its mapped covert partner.
CodecPair pair_for(const codec::CodecSpec& overt);
/// Explicit pair; rejects pairs with no spare capacity.
CodecPair make_pair(const codec::CodecSpec& overt,
                    const codec::CodecSpec& covert);

/// Steganographic bandwidth in bit/s: payload size difference (bytes, as
/// bits) times packet rate.
std::uint64_t steg_bandwidth(std::size_t overt_payload_bytes,
                             std::size_t covert_payload_bytes,
                             std::uint32_t packets_per_second);
std::uint64_t steg_bandwidth(const CodecPair& pair,
                             std::uint32_t packets_per_second);

/// Hidden bytes moved in `seconds` at `bits_per_second`.
std::uint64_t steg_total_bytes(std::uint64_t bits_per_second,
                               std::uint64_t seconds);

/// Packets needed to smuggle a framed key blob through the stego region.
struct BootstrapPlan {
  std::size_t packets = 0;
  Bytes framed_key;
};

/// Per-direction, per-node TranSteg state. Owned by one stage, used
/// sequentially.
struct StreamState {
  CodecPair codec_pair;
  codec::TranscodeState adpcm;
  StegoChannel stego;
  std::optional<MaskKey> mask_key{};
  std::uint64_t packet_index = 0;
  std::size_t bootstrap_remaining = 0;

  /// The session uses SRTP-like masking: packets carry masked payloads once
  /// the bootstrap packets have passed.
  bool masked_session = false;
  /// Channel carrying the session key during bootstrap.
  std::optional<StegoChannel> key_channel{};
  Bytes session_key{};
  std::uint64_t filler_seed = 0;
  PacketIndexer indexer{};
  codec::DynamicPtMap dynamic_pts{};

  /// Embedding-side state. `framed` comes from frame_steganogram. A
  /// session key enables masking after a key-smuggling bootstrap.
  static StreamState embedder(const CodecPair& pair, Bytes framed,
                              std::uint64_t filler_seed,
                              std::optional<Bytes> session_key = {});

  /// Extracting (or restoring) state. In a masked session the key is
  /// learned from the bootstrap packets.
  static StreamState extractor(const CodecPair& pair, bool masked_session);

  bool in_bootstrap() const;
};

/// Plans the bootstrap for `session_key` on `state`'s codec pair and arms
/// the embedder with it. Needs at least 16 key bytes; the first 16 become
/// the masking key.
BootstrapPlan bootstrap_keys(StreamState& state, ByteView session_key);

/// Intermediate embedder: transcodes the overt payload to the covert codec
/// and appends the next stego chunk. Header fields, PT and payload length
/// are unchanged.
rtp::RtpPacket embed(const rtp::RtpPacket& packet, StreamState& state);

/// Endpoint embedder: encodes voice straight with the covert codec.
/// `header` supplies sequence, timestamp, SSRC and marker; PT and length
/// are set to the overt codec's.
rtp::RtpPacket embed_direct(const audio::PcmFrame& voice,
                            const rtp::RtpPacket& header, StreamState& state);

struct Extracted {
  Bytes voice;  // covert-codec payload, PS_c bytes
  Bytes chunk;  // steganogram bytes, filler dropped
  bool bootstrap = false;  // chunk carried key material
};

Extracted extract(const rtp::RtpPacket& packet, StreamState& state);

/// Steganogram receiver on an intermediate node: extracts, then rewrites
/// the whole payload with covert->overt transcoded voice.
rtp::RtpPacket restore(const rtp::RtpPacket& packet, StreamState& state);

enum class Role {
  s1_sender,              // endpoint SS, direct covert encoding
  s1_receiver,            // endpoint SR, extracts and decodes covert voice
  intermediate_embedder,  // SS on a forwarding node
  intermediate_restorer,  // SR on a forwarding node
};

std::string_view role_name(Role role);

struct RoleInput {
  rtp::RtpPacket packet;
  std::optional<audio::PcmFrame> voice;  // s1_sender only
};

struct RoleOutput {
  std::optional<rtp::RtpPacket> packet;  // absent at receivers
  std::optional<audio::PcmFrame> voice;  // s1_receiver only
  Bytes chunk;
  int transcodes = 0;
};

RoleOutput role_step(Role role, const RoleInput& input, StreamState& state);

}  // namespace transteg
