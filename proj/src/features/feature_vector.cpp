#include "threatwatch/features/feature_vector.hpp"

#include <algorithm>

#include "threatwatch/common/error.hpp"

namespace threatwatch::features {

FeatureVector::FeatureVector(std::uint32_t dimension, std::vector<Entry> entries) : dimension_(dimension) {
  std::stable_sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (const auto& [i, v] : entries) {
    if (i >= dimension) throw InvalidArgument("feature index out of range");
    if (!entries_.empty() && entries_.back().first == i) {
      entries_.back().second += v;
    } else {
      entries_.emplace_back(i, v);
    }
  }
  std::erase_if(entries_, [](const Entry& e) { return e.second == 0.0; });
}

FeatureVector FeatureVector::from_dense(std::span<const double> values) {
  FeatureVector out(static_cast<std::uint32_t>(values.size()));
  for (std::uint32_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0) out.entries_.emplace_back(i, values[i]);
  }
  return out;
}

double FeatureVector::operator[](std::uint32_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const Entry& e, std::uint32_t i) { return e.first < i; });
  return it != entries_.end() && it->first == index ? it->second : 0.0;
}

std::vector<double> FeatureVector::dense() const {
  std::vector<double> out(dimension_, 0.0);
  for (const auto& [i, v] : entries_) out[i] = v;
  return out;
}

double FeatureVector::dot(std::span<const double> dense) const {
  if (dense.size() != dimension_) throw InvalidArgument("dimension mismatch");
  double s = 0.0;
  for (const auto& [i, v] : entries_) s += v * dense[i];
  return s;
}

double FeatureVector::squared_norm() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.second * e.second;
  return s;
}

double FeatureVector::squared_distance(std::span<const double> dense, double dense_squared_norm) const {
  // |x - c|^2 = |c|^2 + sum over nonzeros of (x_i - c_i)^2 - c_i^2
  double s = dense_squared_norm;
  for (const auto& [i, v] : entries_) {
    double d = v - dense[i];
    s += d * d - dense[i] * dense[i];
  }
  return std::max(s, 0.0);
}

double FeatureVector::squared_distance(const FeatureVector& other) const {
  if (other.dimension_ != dimension_) throw InvalidArgument("dimension mismatch");
  double s = 0.0;
  auto a = entries_.begin(), b = other.entries_.begin();
  while (a != entries_.end() || b != other.entries_.end()) {
    double d;
    if (b == other.entries_.end() || (a != entries_.end() && a->first < b->first)) {
      d = (a++)->second;
    } else if (a == entries_.end() || b->first < a->first) {
      d = (b++)->second;
    } else {
      d = (a++)->second - (b++)->second;
    }
    s += d * d;
  }
  return s;
}

void FeatureVector::add_to(std::span<double> dense, double scale) const {
  if (dense.size() != dimension_) throw InvalidArgument("dimension mismatch");
  for (const auto& [i, v] : entries_) dense[i] += scale * v;
}

nlohmann::json to_json(const FeatureVector& v) {
  nlohmann::json idx = nlohmann::json::array(), val = nlohmann::json::array();
  for (const auto& [i, x] : v.entries()) {
    idx.push_back(i);
    val.push_back(x);
  }
  return {{"dim", v.dimension()}, {"idx", idx}, {"val", val}};
}

FeatureVector feature_vector_from_json(const nlohmann::json& j) {
  try {
    auto idx = j.at("idx").get<std::vector<std::uint32_t>>();
    auto val = j.at("val").get<std::vector<double>>();
    if (idx.size() != val.size()) throw ParseError("feature vector idx/val length mismatch");
    std::vector<FeatureVector::Entry> entries;
    for (std::size_t k = 0; k < idx.size(); ++k) entries.emplace_back(idx[k], val[k]);
    return FeatureVector(j.at("dim").get<std::uint32_t>(), std::move(entries));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad feature vector: ") + e.what());
  }
}

}  // namespace threatwatch::features
