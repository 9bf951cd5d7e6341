#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "threatwatch/common/error.hpp"
#include "threatwatch/common/random.hpp"
#include "threatwatch/corpus/normalize.hpp"
#include "threatwatch/filter/keywords.hpp"

using namespace threatwatch;
using namespace threatwatch::filter;

namespace {

corpus::NormalizedPost doc(const std::string& id, std::vector<std::string> tokens) {
  corpus::NormalizedPost p;
  p.post_id = id;
  p.tokens = tokens;
  p.token_set = corpus::distinct_sorted(std::move(tokens));
  return p;
}

}  // namespace

TEST_CASE("asset filter on the hypothetical infrastructure") {
  auto assets = AssetKeywordSet::bundled();
  CHECK(asset_filter("High - USN-3016-1 - Linux kernel vulnerabilities", assets));
  CHECK(matched_assets("High - USN-3016-1 - Linux kernel vulnerabilities", assets) ==
        std::vector<std::string>{"linux"});
  CHECK(asset_filter("New Internet Explorer zero-day", assets));
  CHECK_FALSE(asset_filter("Ubuntu desktop release notes", assets));
}

TEST_CASE("asset filter uses whole-word boundaries") {
  CHECK_FALSE(asset_filter("glass windows for sale", AssetKeywordSet({"microsoft windows"})));
  AssetKeywordSet edge({"edge"});
  CHECK(asset_filter("Microsoft Edge update", edge));
  CHECK_FALSE(asset_filter("edgecase bug", edge));
  CHECK(asset_filter("bug in edge.", edge));
  CHECK(asset_filter("EDGE", edge));
  CHECK_FALSE(asset_filter("", edge));
}

TEST_CASE("asset keyword set validation") {
  CHECK_THROWS_AS(AssetKeywordSet({}), InvalidArgument);
  CHECK_THROWS_AS(AssetKeywordSet({"  ", ""}), InvalidArgument);
  AssetKeywordSet s({" Linux ", "linux", "Oracle"});
  CHECK(s.keywords() == std::vector<std::string>{"linux", "oracle"});
}

namespace {

std::string random_phrase(Rng& rng) {
  static const std::vector<std::string> words = {"edge", "linux", "ms", "chrome", "wp", "os", "a1", "x"};
  std::string out = words[rng.index(words.size())];
  if (rng.index(3) == 0) out += " " + words[rng.index(words.size())];
  return out;
}

std::string random_text(Rng& rng) {
  static const std::vector<std::string> pieces = {"edge", "Edge", "linux", "LINUX", "ms", "chrome", "wp", "os",
                                                  "a1",   "x",    "-",     ".",     "_",  "9",      "é",  "edgecase",
                                                  "xms",  "wp2"};
  std::string out;
  std::size_t n = rng.index(10);
  for (std::size_t i = 0; i < n; ++i) {
    out += pieces[rng.index(pieces.size())];
    if (rng.index(3) != 0) out += rng.index(2) ? " " : ",";
  }
  return out;
}

}  // namespace

TEST_CASE("property: asset filter agrees with a regex word-boundary oracle") {
  Rng rng(7);
  for (int trial = 0; trial < 3000; ++trial) {
    auto text = random_text(rng);
    auto phrase = random_phrase(rng);
    CAPTURE(text);
    CAPTURE(phrase);
    CHECK(asset_filter(text, AssetKeywordSet({phrase})) == testing::regex_contains_phrase(text, phrase));
  }
}

TEST_CASE("property: asset filter distributes over keyword-set union") {
  Rng rng(8);
  for (int trial = 0; trial < 1000; ++trial) {
    auto text = random_text(rng);
    std::vector<std::string> a = {random_phrase(rng), random_phrase(rng)};
    std::vector<std::string> b = {random_phrase(rng)};
    std::vector<std::string> both = a;
    both.insert(both.end(), b.begin(), b.end());
    CHECK(asset_filter(text, AssetKeywordSet(both)) ==
          (asset_filter(text, AssetKeywordSet(a)) || asset_filter(text, AssetKeywordSet(b))));
  }
}

TEST_CASE("baseline filter examples") {
  auto assets = AssetKeywordSet::bundled();
  auto sec = SecurityKeywordSet::bundled();
  CHECK(sec.keywords.size() == 43);
  CHECK(sec.rho == doctest::Approx(0.2));
  CHECK(baseline_filter("Cisco denial of service advisory", assets, sec));
  CHECK_FALSE(baseline_filter("Cisco launches new office", assets, sec));
  CHECK(baseline_filter("linux kernel overflow exploit", assets, sec));
  CHECK_FALSE(baseline_filter("buffer overflow exploit in a toaster", assets, sec));
  CHECK_THROWS_AS(baseline_filter("cisco exploit", assets, SecurityKeywordSet{}), InvalidArgument);
}

TEST_CASE("property: baseline agrees with a keyword scan oracle and implies asset filter") {
  auto assets = AssetKeywordSet::bundled();
  auto sec = SecurityKeywordSet::bundled();
  std::vector<std::string> vocab(sec.keywords.begin(), sec.keywords.end());
  for (const auto& a : assets.keywords()) vocab.push_back(a);
  for (const char* w : {"the", "new", "release", "crossover", "rooted", "hacker", "ms-isac", "(cve)"}) vocab.push_back(w);
  Rng rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    std::string text;
    for (std::size_t i = 0, n = rng.index(6); i < n; ++i) text += vocab[rng.index(vocab.size())] + " ";
    bool oracle_asset = false, oracle_sec = false;
    for (const auto& a : assets.keywords()) oracle_asset |= testing::regex_contains_phrase(text, a);
    for (const auto& w : sec.keywords) oracle_sec |= testing::regex_contains_phrase(text, w);
    CAPTURE(text);
    bool base = baseline_filter(text, assets, sec);
    CHECK(base == (oracle_asset && oracle_sec));
    if (base) CHECK(asset_filter(text, assets));
  }
}

TEST_CASE("derive_security_keywords") {
  CHECK_THROWS_WITH_AS(derive_security_keywords({}, 0.2, {}), "no training documents", InvalidArgument);

  std::vector<corpus::NormalizedPost> one = {doc("1", {"cisco", "exploit"})};
  CHECK(derive_security_keywords(one, 0.0, {}).keywords.empty());

  // Hand-computed weights, idf = ln((3 + 1) / (df + 1)):
  //   a: df 3 -> 0; b: df 2 -> ln(4/3) = 0.288; c, d: df 1 -> ln 2 = 0.693;
  //   e: df 1 with tf 2 -> 2 ln 2 = 1.386
  std::vector<corpus::NormalizedPost> toy = {doc("1", {"a", "b", "c"}), doc("2", {"a", "b", "d"}),
                                             doc("3", {"a", "e", "e"})};
  using S = std::set<std::string>;
  CHECK(derive_security_keywords(toy, 0.2, {}).keywords == S{"a"});
  CHECK(derive_security_keywords(toy, 0.5, {}).keywords == S{"a", "b"});
  CHECK(derive_security_keywords(toy, 1.0, {}).keywords == S{"a", "b", "c", "d"});
  CHECK(derive_security_keywords(toy, 1.5, {}).keywords == S{"a", "b", "c", "d", "e"});
  CHECK(derive_security_keywords(toy, 1.0, {"b"}).keywords == S{"a", "c", "d"});
  CHECK(derive_security_keywords(toy, 0.2881, {}).keywords == S{"a", "b"});
  CHECK(derive_security_keywords(toy, 0.2876, {}).keywords == S{"a"});
}

TEST_CASE("property: derive_security_keywords is monotone in rho") {
  Rng rng(10);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "h"};
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<corpus::NormalizedPost> docs;
    for (std::size_t d = 0, n = 1 + rng.index(6); d < n; ++d) {
      std::vector<std::string> tokens;
      for (std::size_t i = 0, m = 1 + rng.index(6); i < m; ++i) tokens.push_back(vocab[rng.index(vocab.size())]);
      docs.push_back(doc(std::to_string(d), tokens));
    }
    double r1 = rng.uniform(0, 2), r2 = rng.uniform(0, 2);
    if (r1 > r2) std::swap(r1, r2);
    auto small = derive_security_keywords(docs, r1, {"h"}).keywords;
    auto large = derive_security_keywords(docs, r2, {"h"}).keywords;
    CHECK(std::includes(large.begin(), large.end(), small.begin(), small.end()));
  }
}

TEST_CASE("security keyword file round trip keeps rho") {
  SecurityKeywordSet s{{"exploit", "overflow"}, 0.25};
  auto path = std::filesystem::temp_directory_path() / "tw_seckw_test.txt";
  s.save(path);
  auto back = SecurityKeywordSet::load(path);
  CHECK(back.keywords == s.keywords);
  CHECK(back.rho == doctest::Approx(0.25));
  std::filesystem::remove(path);
}
