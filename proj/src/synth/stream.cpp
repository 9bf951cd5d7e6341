#include "threatwatch/synth/stream.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/random.hpp"

namespace threatwatch::synth {
namespace {

const std::vector<std::string> kAssets = {"Cisco ASA",  "Oracle Linux",   "Linux kernel",      "WordPress",
                                          "Joomla",     "Google Chrome",  "Firefox",           "Microsoft Edge",
                                          "Internet Explorer", "Microsoft Windows", "Oracle Database", "Cisco IOS"};

const std::vector<std::string> kThreatPhrases = {
    "Denial of Service Vulnerability", "remote code execution flaw",   "SQL injection exploit",
    "buffer overflow vulnerability",   "privilege escalation bug",     "cross site scripting vulnerability",
    "information disclosure leak",     "security bypass vulnerability", "memory corruption exploit"};

const std::vector<std::string> kPrefixes = {"", "Bugtraq:", "#infosec", "Alert:", "#security"};
const std::vector<std::string> kSuffixes = {"", "#vulnerability", "#cybersecurity", "#patch", ""};

const std::vector<std::string> kChatter = {"conference keynote announced", "quarterly earnings call",
                                           "launches shiny feature",       "hiring event downtown",
                                           "celebrates anniversary party", "user group meetup"};

// Irrelevant, yet every entry holds a security keyword, so the keyword
// baseline keeps these posts.
const std::vector<std::string> kSecurityChatter = {"security conference tickets on sale", "hiring security engineers",
                                                   "admin training webinar",            "cyber awareness month party",
                                                   "security team bowling night",       "threat hunting book club"};

const std::vector<std::string> kOffTopic = {"football match tonight", "great coffee morning", "weekend hiking trip",
                                            "movie night popcorn",    "cooking pasta recipe", "concert tickets sold"};

std::string short_link(Rng& rng) {
  static const char alphabet[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string s = "https://t.co/";
  for (int i = 0; i < 10; ++i) s += alphabet[rng.index(sizeof(alphabet) - 1)];
  return s;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

Timestamp plus_seconds(Timestamp t, double s) {
  return t + std::chrono::duration_cast<Duration>(std::chrono::duration<double>(s));
}

void assign_ids(std::vector<SyntheticPost>& posts) {
  std::stable_sort(posts.begin(), posts.end(),
                   [](const SyntheticPost& a, const SyntheticPost& b) { return a.post.timestamp < b.post.timestamp; });
  char buf[32];
  for (std::size_t i = 0; i < posts.size(); ++i) {
    std::snprintf(buf, sizeof buf, "p%06zu", i + 1);
    posts[i].post.id = buf;
  }
}

}  // namespace

std::string pseudo_word(const std::string& prefix, std::size_t i) {
  static const char consonants[] = "bdfgklmnprstvz";
  static const char vowels[] = "aeiou";
  std::string w = prefix;
  // Three fixed syllables keep words long enough to avoid stopwords.
  for (int s = 0; s < 3; ++s) {
    w += consonants[i % 14];
    i /= 14;
    w += vowels[i % 5];
    i /= 5;
  }
  for (; i > 0; i /= 14) w += consonants[i % 14];
  return w;
}

ThreadCorpus thread_corpus(std::size_t threads, std::size_t per_thread, std::size_t singletons, std::uint64_t seed) {
  Rng rng(seed);
  ThreadCorpus out;
  std::size_t next = 0;
  const std::vector<std::string> shared = {"security", "advisory", "update", "alert", "patch", "release"};
  for (std::size_t t = 0; t < threads; ++t) {
    std::vector<std::string> core;
    for (int i = 0; i < 6; ++i) core.push_back(pseudo_word("", next++));
    for (std::size_t p = 0; p < per_thread; ++p) {
      auto doc = core;
      // Near-duplicates: up to two extra words, one of them possibly shared chatter.
      for (std::size_t extra = rng.index(3); extra > 0; --extra)
        doc.push_back(rng.uniform01() < 0.5 ? shared[rng.index(shared.size())] : pseudo_word("x", next++));
      out.docs.push_back(std::move(doc));
      out.thread.push_back(static_cast<int>(t));
    }
  }
  for (std::size_t s = 0; s < singletons; ++s) {
    std::vector<std::string> doc;
    for (int i = 0; i < 5; ++i) doc.push_back(pseudo_word("s", next++));
    doc.push_back(shared[rng.index(shared.size())]);
    out.docs.push_back(std::move(doc));
    out.thread.push_back(-1);
  }
  return out;
}

std::vector<SyntheticPost> redundancy_stream(const StreamOptions& o) {
  if (o.redundancy == 0 || o.days <= 0 || o.noise_fraction < 0.0 || o.noise_fraction > 1.0)
    throw InvalidArgument("invalid stream options");
  Rng rng(o.seed);
  const auto relevant_target = static_cast<std::size_t>(static_cast<double>(o.posts) * (1.0 - o.noise_fraction) + 0.5);
  const std::size_t threats = relevant_target / o.redundancy;
  const double span = 86400.0 * o.days;
  std::vector<SyntheticPost> out;
  std::size_t next_word = 0;
  for (std::size_t t = 0; t < threats; ++t) {
    const auto& asset = kAssets[rng.index(kAssets.size())];
    std::vector<std::string> detail;
    for (int i = 0; i < 4; ++i) detail.push_back(pseudo_word("", next_word++));
    const auto& phrase = kThreatPhrases[rng.index(kThreatPhrases.size())];
    const std::string base = join({asset, join(detail), phrase});
    const double first = rng.uniform(0.0, span - 86400.0);
    for (std::size_t c = 0; c < o.redundancy; ++c) {
      SyntheticPost p;
      p.relevant = true;
      p.topic = "threat-" + std::to_string(t);
      p.post.author = "feed" + std::to_string(rng.index(40));
      p.post.text = join({kPrefixes[rng.index(kPrefixes.size())], base, short_link(rng), kSuffixes[rng.index(kSuffixes.size())]});
      p.post.timestamp = plus_seconds(o.start, c == 0 ? first : first + rng.uniform(0.0, 86400.0));
      out.push_back(std::move(p));
    }
  }
  for (std::size_t n = out.size(); n < o.posts; ++n) {
    SyntheticPost p;
    p.post.author = "acct" + std::to_string(rng.index(200));
    std::vector<std::string> detail = {pseudo_word("n", next_word++), pseudo_word("n", next_word++)};
    const double kind = rng.uniform01();
    if (kind < 1.0 / 3.0) {
      p.post.text = join({kAssets[rng.index(kAssets.size())], join(detail), kChatter[rng.index(kChatter.size())]});
    } else if (kind < 2.0 / 3.0) {
      p.post.text =
          join({kAssets[rng.index(kAssets.size())], join(detail), kSecurityChatter[rng.index(kSecurityChatter.size())]});
    } else {
      p.post.text = join({join(detail), kOffTopic[rng.index(kOffTopic.size())]});
    }
    p.post.timestamp = plus_seconds(o.start, rng.uniform(0.0, span));
    out.push_back(std::move(p));
  }
  assign_ids(out);
  return out;
}

std::vector<SyntheticPost> lifetime_stream(std::span<const int> lifetimes, Timestamp start, int max_gap_days,
                                           int spacing_days, std::uint64_t seed) {
  if (max_gap_days <= 0) throw InvalidArgument("max_gap_days must be positive");
  Rng rng(seed);
  std::vector<SyntheticPost> out;
  std::size_t next_word = 0;
  double topic_start = 0.0;
  for (std::size_t t = 0; t < lifetimes.size(); ++t) {
    const int life = lifetimes[t];
    if (life < 0) throw InvalidArgument("negative lifetime");
    std::vector<std::string> words;
    for (int i = 0; i < 5; ++i) words.push_back(pseudo_word("", next_word++));
    const std::string text = join({kAssets[t % kAssets.size()], join(words), kThreatPhrases[t % kThreatPhrases.size()]});
    std::vector<double> offsets = {0.0};
    for (double d = max_gap_days; d < life; d += max_gap_days) offsets.push_back(d);
    if (life > 0) offsets.push_back(life);
    for (double d : offsets) {
      SyntheticPost p;
      p.relevant = true;
      p.topic = "topic-" + std::to_string(t);
      p.post.author = "feed" + std::to_string(rng.index(10));
      p.post.text = text + " " + short_link(rng);
      // A few seconds of jitter keep the post order stable without changing day counts.
      p.post.timestamp = plus_seconds(start, 86400.0 * (topic_start + d) + rng.uniform(0.0, 60.0));
      out.push_back(std::move(p));
    }
    topic_start += 1.0 + spacing_days;
  }
  assign_ids(out);
  return out;
}

void write_jsonl(std::ostream& out, std::span<const SyntheticPost> posts) {
  for (const auto& p : posts) out << corpus::to_json(p.post).dump() << '\n';
}

}  // namespace threatwatch::synth
