#include "threatwatch/features/hashing.hpp"

#include "threatwatch/common/error.hpp"

namespace threatwatch::features {

std::uint32_t fnv1a32(std::string_view token, std::uint32_t seed) {
  std::uint32_t h = kFnvOffsetBasis ^ seed;
  for (unsigned char b : token) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

std::uint32_t hash_token(std::string_view token, std::uint32_t dimension, std::uint32_t seed) {
  if (token.empty()) throw InvalidArgument("cannot hash an empty token");
  if (dimension == 0) throw InvalidArgument("dimension must be positive");
  return fnv1a32(token, seed) % dimension;
}

}  // namespace threatwatch::features
