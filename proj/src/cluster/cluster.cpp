#include "threatwatch/cluster/cluster.hpp"

#include <algorithm>
#include <iterator>

#include "threatwatch/common/error.hpp"

namespace threatwatch::cluster {
namespace {

std::size_t intersection_size(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::size_t n = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

bool earlier(const ClusteredPost& a, const ClusteredPost& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  return a.post_id < b.post_id;
}

Cluster::Cluster(ClusterId id, std::vector<PostPtr> members) : id_(id), members_(std::move(members)) {
  if (members_.empty()) throw InvalidArgument("a cluster needs at least one member");
  refresh();
}

void Cluster::add(PostPtr post) {
  members_.push_back(std::move(post));
  refresh();
}

void Cluster::refresh() {
  const auto dim = members_.front()->vector.dimension();
  shared_words_ = members_.front()->token_set;
  word_union_.clear();
  min_words_ = members_.front()->token_set.size();
  created_at_ = last_update_ = members_.front()->timestamp;
  std::vector<features::FeatureVector::Entry> sum;
  for (const auto& m : members_) {
    if (m->token_set.empty()) throw InvalidArgument("cluster members need a non-empty word set");
    if (m->vector.dimension() != dim) throw InvalidArgument("cluster members have mixed dimensions");
    std::vector<std::string> next;
    std::set_intersection(shared_words_.begin(), shared_words_.end(), m->token_set.begin(), m->token_set.end(),
                          std::back_inserter(next));
    shared_words_ = std::move(next);
    std::vector<std::string> uni;
    std::set_union(word_union_.begin(), word_union_.end(), m->token_set.begin(), m->token_set.end(),
                   std::back_inserter(uni));
    word_union_ = std::move(uni);
    min_words_ = std::min(min_words_, m->token_set.size());
    created_at_ = std::min(created_at_, m->timestamp);
    last_update_ = std::max(last_update_, m->timestamp);
    sum.insert(sum.end(), m->vector.entries().begin(), m->vector.entries().end());
  }
  const double n = static_cast<double>(members_.size());
  for (auto& e : sum) e.second /= n;
  centroid_ = features::FeatureVector(dim, std::move(sum));

  exemplar_ = nullptr;
  double best = 0.0;
  for (const auto& m : members_) {
    double d = m->vector.squared_distance(centroid_);
    if (!exemplar_ || d < best || (d == best && earlier(*m, *exemplar_))) {
      exemplar_ = m;
      best = d;
    }
  }
}

double Cluster::wts() const { return static_cast<double>(shared_words_.size()) / static_cast<double>(min_words_); }

double Cluster::wts_with(const ClusteredPost& post) const {
  if (post.token_set.empty()) throw InvalidArgument("post has an empty word set");
  const auto shared = intersection_size(shared_words_, post.token_set);
  return static_cast<double>(shared) / static_cast<double>(std::min(min_words_, post.token_set.size()));
}

}  // namespace threatwatch::cluster
