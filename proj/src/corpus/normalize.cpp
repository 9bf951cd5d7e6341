#include "threatwatch/corpus/normalize.hpp"

#include <algorithm>

#include "threatwatch/common/text_io.hpp"
#include "threatwatch/corpus/number_words.hpp"

namespace threatwatch::corpus {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::string_view strip_punct(std::string_view token) {
  std::size_t a = 0, b = token.size();
  while (a < b && !is_alnum(token[a])) ++a;
  while (b > a && !is_alnum(token[b - 1])) --b;
  return token.substr(a, b - a);
}

bool is_hyperlink(std::string_view token) {
  std::size_t a = 0;
  while (a < token.size() && !is_alnum(token[a])) ++a;
  auto rest = token.substr(a);
  return rest.starts_with("http://") || rest.starts_with("https://") || rest.starts_with("www.");
}

}  // namespace

std::vector<std::string> normalize_text(std::string_view text, const StopwordList& stopwords,
                                        const NormalizeOptions& options) {
  const std::string lowered = to_lower_ascii(text);

  // Steps 2-3 operate on whitespace tokens; survivors are re-joined with single spaces.
  std::string kept;
  for (auto token : split_ws(lowered)) {
    if (is_hyperlink(token)) continue;
    if (options.drop_hashtags && token.front() == '#') continue;
    auto bare = strip_punct(token);
    if (!bare.empty() && stopwords.contains(bare)) continue;
    if (!kept.empty()) kept += ' ';
    kept += token;
  }

  // Steps 4-5 in one left-to-right pass.
  std::string spelled;
  spelled.reserve(kept.size() * 2);
  for (std::size_t i = 0; i < kept.size();) {
    char c = kept[i];
    if (is_digit(c)) {
      std::size_t j = i;
      while (j < kept.size() && is_digit(kept[j])) ++j;
      spelled += ' ';
      spelled += verbalize_number(std::string_view(kept).substr(i, j - i));
      spelled += ' ';
      i = j;
      continue;
    }
    if (c == '.') {
      bool between = i > 0 && i + 1 < kept.size() && kept[i - 1] != ' ' && kept[i + 1] != ' ';
      if (between) spelled += " dot ";
    } else if (c == '-') {
      spelled += " hyphen ";
    } else if ((c >= 'a' && c <= 'z') || c == ' ') {
      spelled += c;
    }
    ++i;
  }

  std::vector<std::string> tokens;
  for (auto t : split_ws(spelled)) tokens.emplace_back(t);
  return tokens;
}

std::vector<std::string> distinct_sorted(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

NormalizedPost normalize(const Post& post, const StopwordList& stopwords, const NormalizeOptions& options) {
  NormalizedPost out;
  out.post_id = post.id;
  out.original_text = post.text;
  out.tokens = normalize_text(post.text, stopwords, options);
  out.token_set = distinct_sorted(out.tokens);
  return out;
}

}  // namespace threatwatch::corpus
