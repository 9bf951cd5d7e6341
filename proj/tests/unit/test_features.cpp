#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "threatwatch/common/error.hpp"
#include "threatwatch/common/random.hpp"
#include "threatwatch/features/tfidf.hpp"

using namespace threatwatch;
using namespace threatwatch::features;

using Tokens = std::vector<std::string>;

TEST_CASE("FNV-1a reference vectors") {
  // Published test vectors for 32-bit FNV-1a.
  CHECK(fnv1a32("") == 0x811c9dc5u);
  CHECK(fnv1a32("a") == 0xe40c292cu);
  CHECK(fnv1a32("foobar") == 0xbf9cf968u);
}

TEST_CASE("hash_token basics") {
  CHECK(hash_token("linux", 3000) == hash_token("linux", 3000));
  CHECK(hash_token("linux", 3000) < 3000);
  CHECK(hash_token("linux", 1) == 0);
  CHECK(hash_token("kernel", 1) == 0);
  CHECK(hash_token("linux", 3000, 1) != hash_token("linux", 3000, 0));
  CHECK_THROWS_AS(hash_token("", 10), InvalidArgument);
  CHECK_THROWS_AS(hash_token("a", 0), InvalidArgument);
}

TEST_CASE("hash_token spreads random words over 3000 buckets") {
  Rng rng(3000);
  std::vector<int> load(3000, 0);
  for (int i = 0; i < 10000; ++i) {
    std::string w;
    for (std::size_t n = 3 + rng.index(8), k = 0; k < n; ++k) w += static_cast<char>('a' + rng.index(26));
    ++load[hash_token(w, 3000)];
  }
  double mean = 10000.0 / 3000.0;
  CHECK(*std::max_element(load.begin(), load.end()) <= 4.0 * mean);
}

TEST_CASE("fit on a single document gives unit idf on occupied buckets") {
  std::vector<Tokens> docs = {{"oracle", "linux", "kernel"}};
  auto m = TfIdfModel::fit(std::span<const Tokens>(docs), 3000);
  CHECK(m.doc_count() == 1);
  for (const auto& t : docs[0]) CHECK(m.idf()[hash_token(t, 3000)] == doctest::Approx(1.0));
  // Unoccupied buckets: ln(2 / 1) + 1.
  std::size_t unused = 0;
  while (unused == hash_token("oracle", 3000) || unused == hash_token("linux", 3000) ||
         unused == hash_token("kernel", 3000))
    ++unused;
  CHECK(m.idf()[unused] == doctest::Approx(std::log(2.0) + 1.0));
}

TEST_CASE("fit idf on four documents and transform") {
  std::vector<Tokens> docs = {{"linux", "kernel"}, {"linux"}, {"linux", "patch"}, {"linux", "update"}};
  auto m = TfIdfModel::fit(std::span<const Tokens>(docs), 3000);
  auto bl = hash_token("linux", 3000), bk = hash_token("kernel", 3000);
  REQUIRE(bl != bk);
  for (auto other : {"patch", "update"}) REQUIRE(hash_token(other, 3000) != bk);
  CHECK(m.idf()[bl] == doctest::Approx(1.0));
  CHECK(m.idf()[bk] == doctest::Approx(std::log(5.0 / 2.0) + 1.0));
  CHECK(m.idf()[bk] == doctest::Approx(1.916).epsilon(1e-3));

  Tokens post = {"linux", "linux", "kernel"};
  auto v = m.transform(post);
  CHECK(v.dimension() == 3000);
  CHECK(v.nnz() == 2);
  CHECK(v[bl] == doctest::Approx(2.0));
  CHECK(v[bk] == doctest::Approx(1.916).epsilon(1e-3));
  CHECK(v.dense().size() == 3000);
}

TEST_CASE("transform edge cases") {
  std::vector<Tokens> docs = {{"a"}};
  auto m = TfIdfModel::fit(std::span<const Tokens>(docs), 50);
  auto zero = m.transform(Tokens{});
  CHECK(zero.nnz() == 0);
  CHECK(zero.dimension() == 50);
  auto unit = m.transform(Tokens{"a"});
  CHECK(unit.nnz() == 1);
  CHECK(unit[hash_token("a", 50)] == 1.0);

  // Collisions accumulate: at dimension 1 every token lands in bucket 0.
  auto collapsed = TfIdfModel::fit(std::span<const Tokens>(docs), 1);
  CHECK(collapsed.transform(Tokens{"x", "y", "z"})[0] == doctest::Approx(3.0));

  CHECK_THROWS_AS(TfIdfModel::fit(std::span<const Tokens>{}, 10), InvalidArgument);
  CHECK_THROWS_AS(TfIdfModel().transform(Tokens{"a"}), InvalidArgument);
}

TEST_CASE("property: tf linearity and non-negativity") {
  Rng rng(11);
  std::vector<Tokens> docs;
  const Tokens vocab = {"cisco", "dos", "linux", "kernel", "exploit", "sql", "xss", "patch", "oracle"};
  for (int d = 0; d < 30; ++d) {
    Tokens t;
    for (std::size_t i = 0, n = 1 + rng.index(6); i < n; ++i) t.push_back(vocab[rng.index(vocab.size())]);
    docs.push_back(t);
  }
  auto m = TfIdfModel::fit(std::span<const Tokens>(docs), 64);
  for (const auto& w : m.idf()) CHECK(w >= 0.0);
  for (const auto& d : docs) {
    Tokens twice = d;
    twice.insert(twice.end(), d.begin(), d.end());
    auto v1 = m.transform(d), v2 = m.transform(twice);
    REQUIRE(v1.nnz() == v2.nnz());
    for (std::size_t k = 0; k < v1.nnz(); ++k) {
      CHECK(v1.entries()[k].first == v2.entries()[k].first);
      CHECK(v2.entries()[k].second == doctest::Approx(2.0 * v1.entries()[k].second));
      CHECK(v1.entries()[k].second > 0.0);
    }
    CHECK(m.transform(d) == v1);
  }
}

TEST_CASE("model persistence round trip") {
  std::vector<Tokens> docs = {{"a", "b"}, {"b", "c"}};
  auto m = TfIdfModel::fit(std::span<const Tokens>(docs), 16, 5);
  auto path = std::filesystem::temp_directory_path() / "tw_tfidf_test.json";
  m.save(path);
  auto back = TfIdfModel::load(path);
  CHECK(back == m);
  CHECK(back.hash_seed() == 5);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(TfIdfModel::from_json({{"format", "other"}}), ParseError);
}

TEST_CASE("sparse vector arithmetic matches dense arithmetic") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(20, 0.0), b(20, 0.0);
    for (int i = 0; i < 6; ++i) a[rng.index(20)] = rng.uniform(0, 3);
    for (int i = 0; i < 6; ++i) b[rng.index(20)] = rng.uniform(0, 3);
    auto va = FeatureVector::from_dense(a), vb = FeatureVector::from_dense(b);
    double dot = 0, dist = 0, nb = 0;
    for (int i = 0; i < 20; ++i) {
      dot += a[i] * b[i];
      dist += (a[i] - b[i]) * (a[i] - b[i]);
      nb += b[i] * b[i];
    }
    CHECK(va.dot(b) == doctest::Approx(dot));
    CHECK(va.squared_distance(vb) == doctest::Approx(dist));
    CHECK(va.squared_distance(b, nb) == doctest::Approx(dist));
    CHECK(va.dense() == a);
    CHECK(feature_vector_from_json(to_json(va)) == va);
  }
  CHECK_THROWS_AS(FeatureVector(3, {{5, 1.0}}), InvalidArgument);
  FeatureVector merged(4, {{2, 1.0}, {0, 2.0}, {2, 0.5}});
  CHECK(merged.entries() == std::vector<FeatureVector::Entry>{{0, 2.0}, {2, 1.5}});
}
