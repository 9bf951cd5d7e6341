#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "threatwatch/cluster/cluster.hpp"

namespace threatwatch::cluster {

/// Within-cluster threat similarity of a group of word sets:
/// |∩ sets| / min |set|. Each set must be sorted, distinct and non-empty.
/// Throws InvalidArgument for an empty group or an empty set.
double wts(std::span<const std::vector<std::string>> word_sets);
double wts(const Cluster& c);

/// Jaccard index of the two clusters' word unions.
double jaccard(const Cluster& a, const Cluster& b);
double jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// Mean WTS over clusters; nullopt for none.
std::optional<double> mean_wts(std::span<const Cluster* const> clusters);
/// Largest Jaccard index over all cluster pairs; 0 with fewer than two.
double max_pairwise_jaccard(std::span<const Cluster* const> clusters);

}  // namespace threatwatch::cluster
