#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "threatwatch/common/time.hpp"
#include "threatwatch/features/feature_vector.hpp"

namespace threatwatch::cluster {

/// A relevant post as seen by the clustering engine.
struct ClusteredPost {
  std::string post_id;
  /// Sorted distinct normalized words; never empty.
  std::vector<std::string> token_set;
  features::FeatureVector vector;
  Timestamp timestamp{};
  std::string original_text;
};

using PostPtr = std::shared_ptr<const ClusteredPost>;
using ClusterId = std::uint64_t;

/// Posts ordered by (timestamp, post_id).
bool earlier(const ClusteredPost& a, const ClusteredPost& b);

/// A non-empty set of posts with cached summaries that are refreshed on
/// every membership change:
///   shared_words  intersection of member token sets
///   word_union    union of member token sets
///   centroid      mean member vector
///   exemplar      member nearest the centroid; ties go to the earlier
///                 timestamp, then the smaller post id
class Cluster {
 public:
  /// Throws InvalidArgument for an empty member list or an empty token set.
  Cluster(ClusterId id, std::vector<PostPtr> members);

  void add(PostPtr post);

  ClusterId id() const { return id_; }
  const std::vector<PostPtr>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<std::string>& shared_words() const { return shared_words_; }
  const std::vector<std::string>& word_union() const { return word_union_; }
  std::size_t min_member_words() const { return min_words_; }
  const features::FeatureVector& centroid() const { return centroid_; }
  const PostPtr& exemplar() const { return exemplar_; }
  Timestamp created_at() const { return created_at_; }
  Timestamp last_update() const { return last_update_; }

  /// |shared_words| / min member word count.
  double wts() const;
  /// WTS the cluster would have after adding `post`.
  double wts_with(const ClusteredPost& post) const;

 private:
  void refresh();

  ClusterId id_;
  std::vector<PostPtr> members_;
  std::vector<std::string> shared_words_;
  std::vector<std::string> word_union_;
  std::size_t min_words_ = 0;
  features::FeatureVector centroid_;
  PostPtr exemplar_;
  Timestamp created_at_{};
  Timestamp last_update_{};
};

}  // namespace threatwatch::cluster
