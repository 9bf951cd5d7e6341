#include "threatwatch/ioc/uuid.hpp"

#include <openssl/evp.h>

#include <memory>

#include "threatwatch/common/error.hpp"

namespace threatwatch::ioc {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Uuid parse_uuid(std::string_view text) {
  if (text.size() != 36) throw ParseError("uuid must be 36 characters: " + std::string(text));
  Uuid out{};
  std::size_t byte = 0;
  for (std::size_t i = 0; i < text.size();) {
    if (i == 8 || i == 13 || i == 18 || i == 23) {
      if (text[i] != '-') throw ParseError("malformed uuid: " + std::string(text));
      ++i;
      continue;
    }
    int hi = hex_value(text[i]), lo = hex_value(text[i + 1]);
    if (hi < 0 || lo < 0) throw ParseError("malformed uuid: " + std::string(text));
    out[byte++] = static_cast<std::uint8_t>(hi * 16 + lo);
    i += 2;
  }
  return out;
}

std::string format_uuid(const Uuid& id) {
  static const char digits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < id.size(); ++i) {
    if (i == 4 || i == 6 || i == 8 || i == 10) out += '-';
    out += digits[id[i] >> 4];
    out += digits[id[i] & 15];
  }
  return out;
}

Uuid uuid_v5(const Uuid& name_space, std::string_view name) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha1(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), name_space.data(), name_space.size()) != 1 ||
      EVP_DigestUpdate(ctx.get(), name.data(), name.size()) != 1 || EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw Error("SHA-1 digest failed");
  Uuid out{};
  std::copy(digest, digest + 16, out.begin());
  out[6] = static_cast<std::uint8_t>((out[6] & 0x0f) | 0x50);
  out[8] = static_cast<std::uint8_t>((out[8] & 0x3f) | 0x80);
  return out;
}

const Uuid& threatwatch_namespace() {
  // uuid5(NAMESPACE_URL, "https://threatwatch.invalid/ioc")
  static const Uuid ns = parse_uuid("7428bab4-8400-56ef-be97-6f347d0f3b48");
  return ns;
}

}  // namespace threatwatch::ioc
