#pragma once

#include <cstdint>
#include <string_view>

namespace threatwatch::features {

inline constexpr std::uint32_t kFnvOffsetBasis = 2166136261u;
inline constexpr std::uint32_t kFnvPrime = 16777619u;
inline constexpr std::uint32_t kDefaultHashSeed = 0;

/// 32-bit FNV-1a over the token bytes, with the offset basis XORed by `seed`:
///   h = 2166136261 ^ seed; for each byte b: h = (h ^ b) * 16777619 (mod 2^32)
std::uint32_t fnv1a32(std::string_view token, std::uint32_t seed = kDefaultHashSeed);

/// fnv1a32(token, seed) % dimension. Throws InvalidArgument for an empty
/// token or a zero dimension.
std::uint32_t hash_token(std::string_view token, std::uint32_t dimension, std::uint32_t seed = kDefaultHashSeed);

}  // namespace threatwatch::features
