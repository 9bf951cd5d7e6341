#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "threatwatch/common/time.hpp"
#include "threatwatch/corpus/post.hpp"

namespace threatwatch::synth {

/// Pronounceable pseudo-word number `i` with the given prefix. Distinct `i`
/// give distinct words; output is lowercase a-z only.
std::string pseudo_word(const std::string& prefix, std::size_t i);

/// Token sets for the re-clustering comparison: `threads` groups of
/// `per_thread` near-duplicates plus `singletons` unrelated posts.
struct ThreadCorpus {
  std::vector<std::vector<std::string>> docs;
  /// Thread index per doc, -1 for singletons.
  std::vector<int> thread;
};

ThreadCorpus thread_corpus(std::size_t threads, std::size_t per_thread, std::size_t singletons, std::uint64_t seed);

struct SyntheticPost {
  corpus::Post post;
  bool relevant = false;
  /// Generating topic; empty for noise.
  std::string topic;
};

struct StreamOptions {
  std::size_t posts = 1000;
  /// Near-verbatim copies per threat.
  std::size_t redundancy = 5;
  double noise_fraction = 0.5;
  Timestamp start{};
  int days = 30;
  std::uint64_t seed = 1;
};

/// Security threats about the bundled assets, each repeated `redundancy`
/// times within a day, mixed with irrelevant posts: asset chatter, asset
/// chatter in security vocabulary (which the keyword baseline keeps) and
/// off-topic text, a third each. Sorted by timestamp.
std::vector<SyntheticPost> redundancy_stream(const StreamOptions& options);

/// One topic per entry of `lifetimes`, posting at most `max_gap_days` apart
/// from its start until exactly `lifetime` days later. Topics start one
/// after another with their windows apart by more than `spacing_days`.
std::vector<SyntheticPost> lifetime_stream(std::span<const int> lifetimes, Timestamp start, int max_gap_days,
                                           int spacing_days, std::uint64_t seed);

/// Writes one post per line.
void write_jsonl(std::ostream& out, std::span<const SyntheticPost> posts);

}  // namespace threatwatch::synth
