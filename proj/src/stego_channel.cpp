#include "transteg/stego_channel.hpp"

#include <zlib.h>

#include <algorithm>

#include "transteg/error.hpp"

namespace transteg {

Bytes encode_header(const ChannelHeader& h) {
  Bytes out;
  le::put32(out, h.length);
  out.push_back(static_cast<std::uint8_t>(h.compression));
  out.push_back(h.version);
  le::put16(out, h.reserved);
  return out;
}

std::optional<ChannelHeader> decode_header(ByteView b) {
  if (b.size() < kChannelHeaderSize) return std::nullopt;
  ChannelHeader h;
  h.length = le::get32(b, 0);
  const std::uint8_t comp = b[4];
  h.version = b[5];
  h.reserved = le::get16(b, 6);
  if (comp > 1 || h.version != kChannelVersion || h.reserved != 0) {
    return std::nullopt;
  }
  h.compression = static_cast<Compression>(comp);
  return h;
}

Bytes deflate_bytes(ByteView data) {
  z_stream zs{};
  // Raw deflate, the codec inside zip containers.
  if (deflateInit2(&zs, Z_BEST_COMPRESSION, Z_DEFLATED, -15, 9,
                   Z_DEFAULT_STRATEGY) != Z_OK) {
    throw Error(ErrorKind::invariant, "deflateInit2 failed");
  }
  Bytes out(deflateBound(&zs, static_cast<uLong>(data.size())));
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&zs, Z_FINISH);
  out.resize(zs.total_out);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error(ErrorKind::invariant, "deflate failed");
  return out;
}

Bytes inflate_bytes(ByteView data) {
  z_stream zs{};
  if (inflateInit2(&zs, -15) != Z_OK) {
    throw Error(ErrorKind::invariant, "inflateInit2 failed");
  }
  zs.next_in = const_cast<Bytef*>(data.data());
  zs.avail_in = static_cast<uInt>(data.size());
  Bytes out;
  std::uint8_t buf[1 << 16];
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = buf;
    zs.avail_out = sizeof buf;
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error(ErrorKind::format, "corrupt deflate stream in steganogram");
    }
    out.insert(out.end(), buf, buf + (sizeof buf - zs.avail_out));
    if (rc == Z_OK && zs.avail_in == 0 && zs.avail_out != 0) {
      inflateEnd(&zs);
      throw Error(ErrorKind::format, "truncated deflate stream in steganogram");
    }
  }
  inflateEnd(&zs);
  return out;
}

Bytes frame_steganogram(ByteView data, Compression compression) {
  Bytes body = compression == Compression::deflate
                   ? deflate_bytes(data)
                   : Bytes(data.begin(), data.end());
  if (body.size() > 0xFFFFFFFFu) {
    throw Error(ErrorKind::invariant, "steganogram exceeds 4 GiB");
  }
  ChannelHeader h;
  h.length = static_cast<std::uint32_t>(body.size());
  h.compression = compression;
  Bytes out = encode_header(h);
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Bytes unframe_steganogram(ByteView framed) {
  const auto h = decode_header(framed);
  if (!h) throw Error(ErrorKind::format, "no framed steganogram (bad header)");
  if (framed.size() < kChannelHeaderSize + h->length) {
    throw Error(ErrorKind::format, "steganogram shorter than declared length");
  }
  const ByteView body = framed.subspan(kChannelHeaderSize, h->length);
  if (h->compression == Compression::deflate) return inflate_bytes(body);
  return Bytes(body.begin(), body.end());
}

StegoChannel StegoChannel::for_embedding(Bytes framed,
                                         std::uint64_t filler_seed) {
  StegoChannel c;
  c.direction_ = Direction::embed;
  c.header_ = decode_header(framed);
  if (!c.header_ || framed.size() != kChannelHeaderSize + c.header_->length) {
    throw Error(ErrorKind::invariant, "embedding channel needs a framed steganogram");
  }
  c.framed_ = std::move(framed);
  c.filler_.seed(filler_seed);
  return c;
}

StegoChannel StegoChannel::for_extraction() {
  StegoChannel c;
  c.direction_ = Direction::extract;
  return c;
}

Bytes StegoChannel::next_chunk(std::size_t capacity) {
  if (direction_ != Direction::embed) {
    throw Error(ErrorKind::invariant, "next_chunk on an extracting channel");
  }
  Bytes out;
  out.reserve(capacity);
  const std::size_t take = std::min(capacity, framed_.size() - cursor_);
  out.insert(out.end(), framed_.begin() + static_cast<std::ptrdiff_t>(cursor_),
             framed_.begin() + static_cast<std::ptrdiff_t>(cursor_ + take));
  cursor_ += take;
  while (out.size() < capacity) {
    std::uint64_t word = filler_();
    for (int i = 0; i < 8 && out.size() < capacity; ++i, word >>= 8) {
      out.push_back(static_cast<std::uint8_t>(word));
    }
  }
  return out;
}

Bytes StegoChannel::accept_chunk(ByteView region) {
  if (direction_ != Direction::extract) {
    throw Error(ErrorKind::invariant, "accept_chunk on an embedding channel");
  }
  if (invalid_) return {};

  Bytes taken;
  std::size_t pos = 0;
  if (!header_) {
    const std::size_t need = kChannelHeaderSize - framed_.size();
    const std::size_t n = std::min(need, region.size());
    framed_.insert(framed_.end(), region.begin(), region.begin() + static_cast<std::ptrdiff_t>(n));
    taken.insert(taken.end(), region.begin(), region.begin() + static_cast<std::ptrdiff_t>(n));
    pos = n;
    cursor_ += n;
    if (framed_.size() < kChannelHeaderSize) return taken;
    header_ = decode_header(framed_);
    if (!header_) {
      invalid_ = true;
      return {};
    }
  }
  const std::size_t total = kChannelHeaderSize + header_->length;
  const std::size_t n = std::min(total - framed_.size(), region.size() - pos);
  const auto first = region.begin() + static_cast<std::ptrdiff_t>(pos);
  framed_.insert(framed_.end(), first, first + static_cast<std::ptrdiff_t>(n));
  taken.insert(taken.end(), first, first + static_cast<std::ptrdiff_t>(n));
  cursor_ += n;
  return taken;
}

StegoChannel::Status StegoChannel::status() const {
  if (invalid_) return Status::invalid;
  if (direction_ == Direction::embed) {
    return exhausted() ? Status::complete : Status::pending;
  }
  if (header_ && framed_.size() == kChannelHeaderSize + header_->length) {
    return Status::complete;
  }
  return Status::pending;
}

std::optional<std::size_t> StegoChannel::total_length() const {
  if (!header_) return std::nullopt;
  return kChannelHeaderSize + header_->length;
}

bool StegoChannel::exhausted() const {
  return direction_ == Direction::embed && cursor_ >= framed_.size();
}

Bytes StegoChannel::payload() const {
  if (status() != Status::complete) {
    throw Error(ErrorKind::invariant, "steganogram channel incomplete");
  }
  return unframe_steganogram(framed_);
}

}  // namespace transteg
