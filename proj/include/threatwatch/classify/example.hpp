#pragma once

#include <span>
#include <string>
#include <string_view>

#include "threatwatch/features/feature_vector.hpp"

namespace threatwatch::classify {

enum class Label { Negative = 0, Positive = 1 };

inline int sign_of(Label l) { return l == Label::Positive ? 1 : -1; }
std::string_view to_string(Label l);
/// Accepts "positive"/"relevant"/"1" and "negative"/"irrelevant"/"0".
Label label_from_string(std::string_view s);

struct LabeledExample {
  features::FeatureVector vector;
  Label label = Label::Negative;
  std::string post_id;
};

/// Throws InvalidArgument("degenerate training set") unless both labels occur,
/// and InvalidArgument on mixed dimensions. Returns the common dimension.
std::uint32_t check_training_set(std::span<const LabeledExample> data);

}  // namespace threatwatch::classify
