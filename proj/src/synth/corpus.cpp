#include "threatwatch/synth/corpus.hpp"

#include "threatwatch/common/random.hpp"

namespace threatwatch::synth {
namespace {

std::vector<std::string> vocabulary(const std::string& prefix, std::size_t n) {
  static const char* syllables[] = {"ka", "lo", "mi", "ne", "ru", "sa", "ti", "vo", "ze", "qu"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string w = prefix;
    for (std::size_t k = i + 1; k > 0; k /= 10) w += syllables[k % 10];
    out.push_back(w);
  }
  return out;
}

}  // namespace

LabeledTokens separable_corpus(std::size_t n, std::size_t signal_words, std::size_t noise_words, std::uint64_t seed) {
  const auto pos = vocabulary("pos", 40), neg = vocabulary("neg", 40), noise = vocabulary("com", 200);
  Rng rng(seed);
  LabeledTokens out;
  for (std::size_t d = 0; d < n; ++d) {
    auto label = d % 2 == 0 ? classify::Label::Positive : classify::Label::Negative;
    const auto& own = label == classify::Label::Positive ? pos : neg;
    std::vector<std::string> doc;
    for (std::size_t i = 0; i < signal_words; ++i) doc.push_back(own[rng.index(own.size())]);
    for (std::size_t i = 0; i < noise_words; ++i) doc.push_back(noise[rng.index(noise.size())]);
    rng.shuffle(std::span<std::string>(doc));
    out.tokens.push_back(std::move(doc));
    out.labels.push_back(label);
  }
  return out;
}

}  // namespace threatwatch::synth
