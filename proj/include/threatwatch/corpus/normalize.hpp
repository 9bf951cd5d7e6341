#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "threatwatch/corpus/post.hpp"
#include "threatwatch/corpus/stopwords.hpp"

namespace threatwatch::corpus {

struct NormalizeOptions {
  /// Drop whole "#tag" tokens instead of keeping the tag word. Off by default.
  bool drop_hashtags = false;
};

/// Normalizes free text into lowercase [a-z]+ tokens. Steps, in order:
///   1. ASCII lowercase;
///   2. drop hyperlinks (whitespace tokens starting with "http://",
///      "https://" or "www." once leading punctuation is ignored);
///   3. drop stopwords (compared with leading/trailing punctuation ignored);
///   4. spell out every maximal digit run, turn each '.' with non-space
///      characters on both sides into "dot" and each '-' into "hyphen";
///   5. delete every remaining character outside [a-z ];
///   6. split on whitespace.
std::vector<std::string> normalize_text(std::string_view text, const StopwordList& stopwords,
                                        const NormalizeOptions& options = {});

NormalizedPost normalize(const Post& post, const StopwordList& stopwords, const NormalizeOptions& options = {});

/// Sorted distinct copy of `tokens`.
std::vector<std::string> distinct_sorted(std::vector<std::string> tokens);

}  // namespace threatwatch::corpus
