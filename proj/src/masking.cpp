#include "transteg/masking.hpp"

#include <openssl/evp.h>

#include <memory>

#include "transteg/error.hpp"

namespace transteg {

Bytes keystream(const MaskKey& key, std::uint32_t ssrc, std::uint64_t index,
                std::size_t length) {
  std::array<std::uint8_t, 16> iv{};
  for (int i = 0; i < 4; ++i) iv[4 + i] = static_cast<std::uint8_t>(ssrc >> (24 - 8 * i));
  for (int i = 0; i < 6; ++i) iv[8 + i] = static_cast<std::uint8_t>(index >> (40 - 8 * i));

  std::unique_ptr<EVP_CIPHER_CTX, decltype(&EVP_CIPHER_CTX_free)> ctx(
      EVP_CIPHER_CTX_new(), &EVP_CIPHER_CTX_free);
  if (!ctx || EVP_EncryptInit_ex(ctx.get(), EVP_aes_128_ctr(), nullptr,
                                 key.data(), iv.data()) != 1) {
    throw Error(ErrorKind::invariant, "AES-CTR initialisation failed");
  }
  Bytes zeros(length, 0);
  Bytes out(length + 16);
  int produced = 0;
  if (EVP_EncryptUpdate(ctx.get(), out.data(), &produced, zeros.data(),
                        static_cast<int>(length)) != 1) {
    throw Error(ErrorKind::invariant, "AES-CTR keystream failed");
  }
  out.resize(static_cast<std::size_t>(produced));
  return out;
}

void mask_in_place(std::span<std::uint8_t> region, const MaskKey& key,
                   std::uint32_t ssrc, std::uint64_t index) {
  const Bytes ks = keystream(key, ssrc, index, region.size());
  for (std::size_t i = 0; i < region.size(); ++i) region[i] ^= ks[i];
}

Bytes mask(ByteView region, const MaskKey& key, std::uint32_t ssrc,
           std::uint64_t index) {
  Bytes out(region.begin(), region.end());
  mask_in_place(out, key, ssrc, index);
  return out;
}

std::uint64_t PacketIndexer::next(std::uint16_t seq) {
  if (started_ && seq < last_ && last_ - seq > 0x8000) ++rollovers_;
  started_ = true;
  last_ = seq;
  return (rollovers_ << 16) | seq;
}

}  // namespace transteg
