#include "transteg/transteg.hpp"

#include <algorithm>
#include <string>

#include "transteg/error.hpp"

namespace transteg {

using codec::CodecId;
using codec::CodecSpec;

CodecSpec covert_map(const CodecSpec& overt) {
  switch (overt.id) {
    case CodecId::g711_mu:
    case CodecId::g711_a:
      return codec::g726_32();
    default:
      throw Error(ErrorKind::usage,
                  "no mapping for overt codec " + codec::codec_name(overt.id));
  }
}

CodecPair make_pair(const CodecSpec& overt, const CodecSpec& covert) {
  if (covert.bytes_per_frame >= overt.bytes_per_frame) {
    throw Error(ErrorKind::usage, "capacity 0: " + codec::codec_name(covert.id) +
                                      " is not smaller than " +
                                      codec::codec_name(overt.id));
  }
  const CodecSpec mapped = covert_map(overt);
  if (mapped.id != covert.id) {
    throw Error(ErrorKind::usage, "no mapping " + codec::codec_name(overt.id) +
                                      " -> " + codec::codec_name(covert.id));
  }
  return {overt, covert};
}

CodecPair pair_for(const CodecSpec& overt) {
  return make_pair(overt, covert_map(overt));
}

std::uint64_t steg_bandwidth(std::size_t overt_payload_bytes,
                             std::size_t covert_payload_bytes,
                             std::uint32_t packets_per_second) {
  if (packets_per_second == 0) {
    throw Error(ErrorKind::usage, "packets per second must be positive");
  }
  if (covert_payload_bytes >= overt_payload_bytes) return 0;
  return static_cast<std::uint64_t>(overt_payload_bytes - covert_payload_bytes) *
         8u * packets_per_second;
}

std::uint64_t steg_bandwidth(const CodecPair& pair,
                             std::uint32_t packets_per_second) {
  return steg_bandwidth(pair.overt.bytes_per_frame, pair.covert.bytes_per_frame,
                        packets_per_second);
}

std::uint64_t steg_total_bytes(std::uint64_t bits_per_second,
                               std::uint64_t seconds) {
  return bits_per_second * seconds / 8;
}

StreamState StreamState::embedder(const CodecPair& pair, Bytes framed,
                                  std::uint64_t filler_seed,
                                  std::optional<Bytes> session_key) {
  StreamState s{pair, {}, StegoChannel::for_embedding(std::move(framed), filler_seed)};
  s.filler_seed = filler_seed;
  if (session_key) bootstrap_keys(s, *session_key);
  return s;
}

StreamState StreamState::extractor(const CodecPair& pair, bool masked_session) {
  StreamState s{pair, {}, StegoChannel::for_extraction()};
  s.masked_session = masked_session;
  if (masked_session) s.key_channel = StegoChannel::for_extraction();
  return s;
}

bool StreamState::in_bootstrap() const {
  return masked_session && (bootstrap_remaining > 0 || !mask_key);
}

BootstrapPlan bootstrap_keys(StreamState& state, ByteView session_key) {
  const std::size_t cap = state.codec_pair.capacity_bytes();
  if (cap == 0) throw Error(ErrorKind::usage, "capacity zero: cannot bootstrap");
  if (session_key.size() < 16) {
    throw Error(ErrorKind::usage, "session key needs at least 16 bytes");
  }
  BootstrapPlan plan;
  plan.framed_key = frame_steganogram(session_key, Compression::none);
  plan.packets = (plan.framed_key.size() + cap - 1) / cap;

  state.masked_session = true;
  state.session_key.assign(session_key.begin(), session_key.end());
  MaskKey key;
  std::copy_n(session_key.begin(), key.size(), key.begin());
  state.mask_key = key;
  state.bootstrap_remaining = plan.packets;
  // The key channel's filler must not repeat the steganogram filler.
  state.key_channel = StegoChannel::for_embedding(
      plan.framed_key, state.filler_seed ^ 0x9E3779B97F4A7C15ull);
  return plan;
}

namespace {

void check_overt(const rtp::RtpPacket& packet, const StreamState& state) {
  const auto& overt = state.codec_pair.overt;
  if (packet.payload.size() != overt.bytes_per_frame) {
    throw Error(ErrorKind::invariant,
                "payload length mismatch: " +
                    std::to_string(packet.payload.size()) + " bytes, " +
                    codec::codec_name(overt.id) + " needs " +
                    std::to_string(overt.bytes_per_frame));
  }
}

void check_pt(const rtp::RtpPacket& packet, const StreamState& state) {
  const CodecSpec found = codec::codec_lookup(packet.payload_type, state.dynamic_pts);
  if (found.id != state.codec_pair.overt.id) {
    throw Error(ErrorKind::invariant,
                "PT/codec mismatch: PT " + std::to_string(packet.payload_type) +
                    " is " + codec::codec_name(found.id) + ", stream overt codec is " +
                    codec::codec_name(state.codec_pair.overt.id));
  }
}

void require_direction(const StreamState& state, StegoChannel::Direction d) {
  if (state.stego.direction() != d) {
    throw Error(ErrorKind::invariant,
                d == StegoChannel::Direction::embed
                    ? "role/packet mismatch: state is not an embedder"
                    : "role/packet mismatch: state is not an extractor");
  }
}

// Covert voice + next chunk, masked when the session is past bootstrap.
Bytes assemble(Bytes voice, StreamState& state, bool boot, std::uint32_t ssrc,
               std::uint64_t index) {
  const std::size_t cap = state.codec_pair.capacity_bytes();
  const Bytes chunk = boot ? state.key_channel->next_chunk(cap)
                           : state.stego.next_chunk(cap);
  voice.insert(voice.end(), chunk.begin(), chunk.end());
  if (state.masked_session && !boot) {
    mask_in_place(voice, *state.mask_key, ssrc, index);
  }
  if (boot) --state.bootstrap_remaining;
  ++state.packet_index;
  return voice;
}

struct ExtractStep {
  Extracted out;
  std::uint64_t index = 0;
};

ExtractStep extract_impl(const rtp::RtpPacket& packet, StreamState& state) {
  require_direction(state, StegoChannel::Direction::extract);
  check_overt(packet, state);
  ExtractStep step;
  step.index = state.indexer.next(packet.sequence_number);
  const bool boot = state.in_bootstrap();

  Bytes payload = packet.payload;
  if (state.masked_session && !boot) {
    mask_in_place(payload, *state.mask_key, packet.ssrc, step.index);
  }
  const std::size_t split = state.codec_pair.covert.bytes_per_frame;
  const ByteView region = ByteView(payload).subspan(split);
  step.out.voice.assign(payload.begin(), payload.begin() + static_cast<std::ptrdiff_t>(split));

  if (boot) {
    step.out.bootstrap = true;
    step.out.chunk = state.key_channel->accept_chunk(region);
    const auto st = state.key_channel->status();
    if (st == StegoChannel::Status::invalid) {
      throw Error(ErrorKind::invariant, "bootstrap packet carries no key header");
    }
    if (st == StegoChannel::Status::complete) {
      state.session_key = state.key_channel->payload();
      if (state.session_key.size() < 16) {
        throw Error(ErrorKind::invariant, "smuggled session key shorter than 16 bytes");
      }
      MaskKey key;
      std::copy_n(state.session_key.begin(), key.size(), key.begin());
      state.mask_key = key;
      state.bootstrap_remaining = 0;
    }
  } else {
    step.out.chunk = state.stego.accept_chunk(region);
  }
  return step;
}

struct RestoreStep {
  rtp::RtpPacket packet;
  Bytes chunk;
};

RestoreStep restore_impl(const rtp::RtpPacket& packet, StreamState& state) {
  const bool boot = state.in_bootstrap();
  ExtractStep step = extract_impl(packet, state);
  RestoreStep r{packet, std::move(step.out.chunk)};
  r.packet.payload = codec::transcode(step.out.voice, state.codec_pair.covert,
                                      state.codec_pair.overt, state.adpcm);
  if (state.masked_session && !boot) {
    mask_in_place(r.packet.payload, *state.mask_key, packet.ssrc, step.index);
  }
  ++state.packet_index;
  return r;
}

}  // namespace

rtp::RtpPacket embed(const rtp::RtpPacket& packet, StreamState& state) {
  require_direction(state, StegoChannel::Direction::embed);
  check_overt(packet, state);
  check_pt(packet, state);
  const std::uint64_t index = state.indexer.next(packet.sequence_number);
  const bool boot = state.in_bootstrap();

  Bytes overt_payload = packet.payload;
  // Past bootstrap the overt sender's payloads arrive masked.
  if (state.masked_session && !boot) {
    mask_in_place(overt_payload, *state.mask_key, packet.ssrc, index);
  }
  Bytes voice = codec::transcode(overt_payload, state.codec_pair.overt,
                                 state.codec_pair.covert, state.adpcm);
  rtp::RtpPacket out = packet;
  out.payload = assemble(std::move(voice), state, boot, packet.ssrc, index);
  return out;
}

rtp::RtpPacket embed_direct(const audio::PcmFrame& voice,
                            const rtp::RtpPacket& header, StreamState& state) {
  require_direction(state, StegoChannel::Direction::embed);
  const std::uint64_t index = state.indexer.next(header.sequence_number);
  const bool boot = state.in_bootstrap();

  rtp::RtpPacket out = header;
  out.payload_type = static_cast<std::uint8_t>(state.codec_pair.overt.payload_type);
  out.payload = assemble(
      codec::encode_frame(voice, state.codec_pair.covert, state.adpcm), state,
      boot, header.ssrc, index);
  return out;
}

Extracted extract(const rtp::RtpPacket& packet, StreamState& state) {
  ExtractStep step = extract_impl(packet, state);
  ++state.packet_index;
  return std::move(step.out);
}

rtp::RtpPacket restore(const rtp::RtpPacket& packet, StreamState& state) {
  return restore_impl(packet, state).packet;
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::s1_sender: return "sender-embedder";
    case Role::s1_receiver: return "receiver-extractor";
    case Role::intermediate_embedder: return "intermediate-embedder";
    case Role::intermediate_restorer: return "intermediate-restorer";
  }
  return "?";
}

RoleOutput role_step(Role role, const RoleInput& input, StreamState& state) {
  if (input.voice.has_value() != (role == Role::s1_sender)) {
    throw Error(ErrorKind::invariant,
                "role/packet mismatch: " + std::string(role_name(role)) +
                    (role == Role::s1_sender ? " needs a voice frame"
                                             : " takes packets only"));
  }
  RoleOutput out;
  switch (role) {
    case Role::s1_sender:
      out.packet = embed_direct(*input.voice, input.packet, state);
      break;
    case Role::s1_receiver: {
      Extracted ex = extract(input.packet, state);
      out.voice = codec::decode_payload(ex.voice, state.codec_pair.covert, state.adpcm);
      out.chunk = std::move(ex.chunk);
      break;
    }
    case Role::intermediate_embedder:
      out.packet = embed(input.packet, state);
      out.transcodes = 1;
      break;
    case Role::intermediate_restorer: {
      RestoreStep r = restore_impl(input.packet, state);
      out.packet = std::move(r.packet);
      out.chunk = std::move(r.chunk);
      out.transcodes = 1;
      break;
    }
  }
  return out;
}

}  // namespace transteg
