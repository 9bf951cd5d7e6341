#pragma once

#include <string>
#include <string_view>

namespace threatwatch::corpus {

/// Spells a digit run as lowercase English words, British style:
/// "2016" -> "two thousand and sixteen". Uses the long scale
/// (10^9 = "one thousand million", 10^12 = "one billion"). Runs with a
/// leading zero, and runs longer than 36 digits, are read digit by digit
/// ("007" -> "zero zero seven").
///
/// Precondition: `digits` is non-empty and contains only '0'-'9'.
std::string verbalize_number(std::string_view digits);

}  // namespace threatwatch::corpus
