#include <doctest.h>

#include <sstream>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/random.hpp"
#include "threatwatch/common/time.hpp"
#include "threatwatch/corpus/normalize.hpp"
#include "threatwatch/corpus/number_words.hpp"

using namespace threatwatch;
using namespace threatwatch::corpus;

namespace {

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string norm(std::string_view text) { return join(normalize_text(text, StopwordList::bundled())); }

}  // namespace

TEST_CASE("worked example from the oracle advisory tweet") {
  Post p{"1", "oracle", parse_rfc3339("2016-06-10T08:15:00Z"),
         "#Oracle #Linux 6 / 7 : Unbreakable Enterprise kernel (ELSA-2016-3573) https://t.co/vLTel8NodG"};
  auto n = normalize(p, StopwordList::bundled());
  CHECK(join(n.tokens) ==
        "oracle linux six seven unbreakable enterprise kernel elsa hyphen two thousand and sixteen hyphen "
        "three thousand five hundred and seventy three");
  CHECK_FALSE(n.dropped());
  CHECK(n.original_text == p.text);
  CHECK(n.post_id == "1");
}

TEST_CASE("CVE identifier is spelled out") {
  CHECK(norm("CVE-2016-3427 fixed") ==
        "cve hyphen two thousand and sixteen hyphen three thousand four hundred and twenty seven fixed");
}

TEST_CASE("empty and all-stopword posts are dropped") {
  auto empty = normalize(Post{"e", "a", {}, ""}, StopwordList::bundled());
  CHECK(empty.tokens.empty());
  CHECK(empty.dropped());
  auto stop = normalize(Post{"s", "a", {}, "the of and https://t.co/x"}, StopwordList::bundled());
  CHECK(stop.dropped());
}

TEST_CASE("dots between characters and hyphens") {
  CHECK(norm("version 1.2 released") == "version one dot two released");
  CHECK(norm("end of sentence. next") == "end sentence next");
  CHECK(norm("zero-day") == "zero hyphen day");
}

TEST_CASE("hyperlinks are removed before punctuation is destroyed") {
  CHECK(norm("patch (https://example.com/a-b.html) today") == "patch today");
  CHECK(norm("see www.example.com today") == "see today");
  CHECK(norm("see http://x.y/z") == "see");
}

TEST_CASE("hashtag handling") {
  CHECK(norm("#0day #Exploit") == "zero day exploit");
  NormalizeOptions opts;
  opts.drop_hashtags = true;
  CHECK(join(normalize_text("#0day #Exploit for cisco", StopwordList::bundled(), opts)) == "cisco");
}

// Values produced by num2words (lang="en_GB") and frozen here.
TEST_CASE("verbalize_number matches the reference verbalizer") {
  const std::vector<std::pair<std::string, std::string>> table = {
      {"0", "zero"},
      {"2", "two"},
      {"13", "thirteen"},
      {"21", "twenty one"},
      {"100", "one hundred"},
      {"101", "one hundred and one"},
      {"110", "one hundred and ten"},
      {"509", "five hundred and nine"},
      {"999", "nine hundred and ninety nine"},
      {"1000", "one thousand"},
      {"1001", "one thousand and one"},
      {"1010", "one thousand and ten"},
      {"1100", "one thousand one hundred"},
      {"1999", "one thousand nine hundred and ninety nine"},
      {"2016", "two thousand and sixteen"},
      {"3016", "three thousand and sixteen"},
      {"3427", "three thousand four hundred and twenty seven"},
      {"3573", "three thousand five hundred and seventy three"},
      {"12345", "twelve thousand three hundred and forty five"},
      {"100001", "one hundred thousand and one"},
      {"100100", "one hundred thousand one hundred"},
      {"101000", "one hundred and one thousand"},
      {"123456", "one hundred and twenty three thousand four hundred and fifty six"},
      {"1000001", "one million and one"},
      {"1000010", "one million and ten"},
      {"1000100", "one million one hundred"},
      {"1001000", "one million one thousand"},
      {"1100000", "one million one hundred thousand"},
      {"1234567", "one million two hundred and thirty four thousand five hundred and sixty seven"},
      {"900000090", "nine hundred million and ninety"},
      {"987654321",
       "nine hundred and eighty seven million six hundred and fifty four thousand three hundred and twenty one"},
  };
  for (const auto& [digits, words] : table) {
    CAPTURE(digits);
    CHECK(verbalize_number(digits) == words);
  }
}

TEST_CASE("verbalize_number long scale and digit-by-digit reading") {
  CHECK(verbalize_number("007") == "zero zero seven");
  CHECK(verbalize_number("00") == "zero zero");
  CHECK(verbalize_number("1000000000") == "one thousand million");
  CHECK(verbalize_number("1000000000000") == "one billion");
  CHECK(verbalize_number(std::string(37, '1')) == join(std::vector<std::string>(37, "one")));
  CHECK_THROWS_AS(verbalize_number(""), InvalidArgument);
  CHECK_THROWS_AS(verbalize_number("12a"), InvalidArgument);
}

namespace {

std::string random_text(Rng& rng) {
  static const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 .-#:/()!?@_'\"\t";
  static const std::vector<std::string> urls = {"https://t.co/AbC12", "http://example.org/x-y.z",
                                                "www.cisco.com/security", "(https://a.b/c)"};
  std::string out;
  std::size_t words = rng.index(12);
  for (std::size_t w = 0; w < words; ++w) {
    if (rng.index(5) == 0) {
      out += urls[rng.index(urls.size())];
    } else {
      std::size_t len = 1 + rng.index(8);
      for (std::size_t i = 0; i < len; ++i) out += alphabet[rng.index(alphabet.size())];
      if (rng.index(10) == 0) out += "\xc3\xa9";  // non-ASCII bytes are deleted
    }
    out += ' ';
  }
  return out;
}

bool contains_link_word(const std::string& text) {
  auto lowered = text;
  for (auto& c : lowered) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  for (const char* bad : {"http", "www", "tco", "t.co"}) {
    if (lowered.find(bad) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("property: alphabet, determinism, idempotence, no link fragments") {
  const auto& stop = StopwordList::bundled();
  const StopwordList none;
  Rng rng(20240611);
  for (int trial = 0; trial < 2000; ++trial) {
    auto text = random_text(rng);
    auto tokens = normalize_text(text, stop);
    CAPTURE(text);
    for (const auto& t : tokens) {
      REQUIRE_FALSE(t.empty());
      for (char c : t) REQUIRE((c >= 'a' && c <= 'z'));
    }
    CHECK(normalize_text(text, stop) == tokens);
    CHECK(normalize_text(join(tokens), none) == tokens);

    // Link fragments can only come from the URLs when the surrounding words
    // never spell them out themselves.
    bool clean = true;
    std::istringstream words(text);
    for (std::string w; words >> w;) {
      bool is_url = w.find("://") != std::string::npos || w.rfind("www.", 0) == 0;
      if (!is_url && contains_link_word(w)) clean = false;
    }
    if (clean) {
      for (const auto& t : tokens) {
        CHECK(t != "http");
        CHECK(t != "https");
        CHECK(t != "tco");
        CHECK_FALSE(t.starts_with("www"));
      }
    }
  }
}

TEST_CASE("stopword list is lowercase and of documented size") {
  const auto& stop = StopwordList::bundled();
  CHECK(stop.size() >= 120);
  CHECK(stop.size() <= 180);
  for (const auto& w : stop.words()) {
    for (char c : w) CHECK_FALSE((c >= 'A' && c <= 'Z'));
  }
  CHECK(stop.contains("the"));
  CHECK(stop.contains("and"));  // removed before numbers are spelled out
  auto custom = StopwordList({"Foo", "BAR"});
  CHECK(custom.contains("foo"));
  CHECK(custom.contains("bar"));
}

TEST_CASE("post JSONL parsing reports bad lines and continues") {
  std::istringstream in(
      "{\"id\":\"a\",\"author\":\"x\",\"timestamp\":\"2016-06-10T08:15:00Z\",\"text\":\"hello\"}\n"
      "\n"
      "not json\n"
      "{\"id\":\"b\",\"timestamp\":\"2016-06-10T09:15:00+01:00\",\"text\":\"\"}\n"
      "{\"id\":\"c\",\"author\":\"x\",\"timestamp\":\"yesterday\",\"text\":\"t\"}\n");
  std::vector<Post> posts;
  std::vector<std::size_t> bad;
  read_posts_jsonl(
      in, [&](Post p) { posts.push_back(std::move(p)); }, [&](const JsonlError& e) { bad.push_back(e.line_number); });
  REQUIRE(posts.size() == 2);
  CHECK(posts[0].id == "a");
  CHECK(posts[1].timestamp == parse_rfc3339("2016-06-10T08:15:00Z"));
  CHECK(bad == std::vector<std::size_t>{3, 5});
  CHECK(post_from_json(to_json(posts[0])) == posts[0]);
}

TEST_CASE("RFC 3339 round trip") {
  auto ts = parse_rfc3339("2016-02-29T23:59:59.250Z");
  CHECK(format_rfc3339(ts) == "2016-02-29T23:59:59.250Z");
  CHECK(format_rfc3339(parse_rfc3339("2016-06-10T08:15:00Z")) == "2016-06-10T08:15:00Z");
  CHECK(format_date(parse_rfc3339("2016-06-10T23:30:00-02:00")) == "2016-06-11");
  CHECK_THROWS_AS(parse_rfc3339("2016-13-01T00:00:00Z"), ParseError);
  CHECK_THROWS_AS(parse_rfc3339("2016-06-10 08:15"), ParseError);
}
