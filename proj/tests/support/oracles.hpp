#pragma once

// Independent reference computations used only by the tests. They are
// written for obviousness, not speed, and share no code with the library.

#include <set>
#include <string>
#include <vector>

namespace threatwatch::testing {

using WordSet = std::set<std::string>;

/// |intersection of all sets| / min |set|, by literal set intersection.
double brute_wts(const std::vector<WordSet>& members);

/// |A ∩ B| / |A ∪ B| over two word unions.
double brute_jaccard(const WordSet& a, const WordSet& b);

/// Whole-word phrase search via std::regex with explicit boundary classes.
bool regex_contains_phrase(const std::string& text, const std::string& phrase);

/// Minimum SSE over every assignment of `points` to k non-empty groups
/// (exhaustive; keep |points| ≤ 10).
double exhaustive_min_sse(const std::vector<std::vector<double>>& points, int k);

/// SSE of a fixed assignment with centers at group means.
double sse_of(const std::vector<std::vector<double>>& points, const std::vector<int>& assignment);

}  // namespace threatwatch::testing
