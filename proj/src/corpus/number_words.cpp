#include "threatwatch/corpus/number_words.hpp"

#include <array>
#include <vector>

#include "threatwatch/common/error.hpp"

namespace threatwatch::corpus {
namespace {

constexpr std::array<std::string_view, 20> kUnits = {
    "zero",    "one",     "two",       "three",    "four",     "five",    "six",
    "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
    "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
constexpr std::array<std::string_view, 10> kTens = {"",      "",      "twenty",  "thirty", "forty",
                                                    "fifty", "sixty", "seventy", "eighty", "ninety"};
// Scale word for each six-digit block above the first.
constexpr std::array<std::string_view, 6> kLongScale = {"",         "million",     "billion",
                                                        "trillion", "quadrillion", "quintillion"};
constexpr std::size_t kMaxDigits = 6 * kLongScale.size();

void append(std::string& out, std::string_view word) {
  if (!out.empty()) out += ' ';
  out += word;
}

void below_hundred(std::string& out, int n) {
  if (n < 20) {
    append(out, kUnits[n]);
  } else {
    append(out, kTens[n / 10]);
    if (n % 10 != 0) append(out, kUnits[n % 10]);
  }
}

// 1..999, with "and" between hundreds and a non-zero remainder.
void below_thousand(std::string& out, int n) {
  if (n >= 100) {
    append(out, kUnits[n / 100]);
    append(out, "hundred");
    if (n % 100 != 0) {
      append(out, "and");
      below_hundred(out, n % 100);
    }
  } else {
    below_hundred(out, n);
  }
}

// 1..999999. `and_before_small` adds "and" ahead of a trailing 1..99 group
// when something larger precedes it anywhere in the number.
void below_million(std::string& out, int n, bool and_before_small) {
  int thousands = n / 1000;
  int rest = n % 1000;
  if (thousands > 0) {
    below_thousand(out, thousands);
    append(out, "thousand");
  }
  if (rest > 0) {
    if (rest < 100 && (thousands > 0 || and_before_small)) append(out, "and");
    below_thousand(out, rest);
  }
}

std::string digit_by_digit(std::string_view digits) {
  std::string out;
  for (char c : digits) append(out, kUnits[c - '0']);
  return out;
}

}  // namespace

std::string verbalize_number(std::string_view digits) {
  if (digits.empty()) throw InvalidArgument("verbalize_number: empty digit run");
  for (char c : digits) {
    if (c < '0' || c > '9') throw InvalidArgument("verbalize_number: non-digit input");
  }
  if (digits.size() > 1 && digits.front() == '0') return digit_by_digit(digits);
  if (digits.size() > kMaxDigits) return digit_by_digit(digits);
  if (digits == "0") return "zero";

  // Split into six-digit blocks, most significant first.
  std::vector<int> blocks;
  std::size_t head = digits.size() % 6;
  if (head == 0) head = 6;
  for (std::size_t pos = 0; pos < digits.size(); pos += (pos == 0 ? head : 6)) {
    std::size_t len = pos == 0 ? head : 6;
    int value = 0;
    for (char c : digits.substr(pos, len)) value = value * 10 + (c - '0');
    blocks.push_back(value);
  }

  std::string out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    int value = blocks[i];
    if (value == 0) continue;
    std::size_t scale = blocks.size() - 1 - i;
    bool last = scale == 0;
    below_million(out, value, last && !out.empty());
    if (!last) append(out, kLongScale[scale]);
  }
  return out;
}

}  // namespace threatwatch::corpus
