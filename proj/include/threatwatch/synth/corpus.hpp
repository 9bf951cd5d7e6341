#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "threatwatch/classify/example.hpp"

namespace threatwatch::synth {

struct LabeledTokens {
  std::vector<std::vector<std::string>> tokens;
  std::vector<classify::Label> labels;
};

/// Two-topic corpus: every document draws `signal_words` tokens from its own
/// class vocabulary and `noise_words` from a shared one. Class vocabularies
/// are disjoint, so more signal tokens mean a wider TF-IDF margin.
LabeledTokens separable_corpus(std::size_t n, std::size_t signal_words, std::size_t noise_words, std::uint64_t seed);

}  // namespace threatwatch::synth
