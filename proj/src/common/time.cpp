#include "threatwatch/common/time.hpp"

#include <cstdio>

#include "threatwatch/common/error.hpp"

namespace threatwatch {
namespace {

int read_digits(std::string_view text, std::size_t& pos, std::size_t count) {
  if (pos + count > text.size()) throw ParseError("truncated timestamp: " + std::string(text));
  int value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    char c = text[pos + i];
    if (c < '0' || c > '9') throw ParseError("bad digit in timestamp: " + std::string(text));
    value = value * 10 + (c - '0');
  }
  pos += count;
  return value;
}

void expect(std::string_view text, std::size_t& pos, char want) {
  if (pos >= text.size() || text[pos] != want) {
    throw ParseError("malformed timestamp: " + std::string(text));
  }
  ++pos;
}

}  // namespace

Timestamp parse_rfc3339(std::string_view text) {
  using namespace std::chrono;
  std::size_t pos = 0;
  int y = read_digits(text, pos, 4);
  expect(text, pos, '-');
  int mo = read_digits(text, pos, 2);
  expect(text, pos, '-');
  int d = read_digits(text, pos, 2);
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != 't' && text[pos] != ' ')) {
    throw ParseError("malformed timestamp: " + std::string(text));
  }
  ++pos;
  int h = read_digits(text, pos, 2);
  expect(text, pos, ':');
  int mi = read_digits(text, pos, 2);
  expect(text, pos, ':');
  int s = read_digits(text, pos, 2);

  int millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int scale = 100;
    std::size_t digits = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      if (scale > 0) millis += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
      ++digits;
    }
    if (digits == 0) throw ParseError("empty fraction in timestamp: " + std::string(text));
  }

  minutes offset{0};
  if (pos >= text.size()) throw ParseError("timestamp lacks zone offset: " + std::string(text));
  if (text[pos] == 'Z' || text[pos] == 'z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    int sign = text[pos] == '-' ? -1 : 1;
    ++pos;
    int oh = read_digits(text, pos, 2);
    expect(text, pos, ':');
    int om = read_digits(text, pos, 2);
    offset = minutes{sign * (oh * 60 + om)};
  } else {
    throw ParseError("malformed zone in timestamp: " + std::string(text));
  }
  if (pos != text.size()) throw ParseError("trailing characters in timestamp: " + std::string(text));

  year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw ParseError("out-of-range timestamp: " + std::string(text));
  }
  auto local = sys_days{ymd} + hours{h} + minutes{mi} + seconds{s} + milliseconds{millis};
  return time_point_cast<milliseconds>(local - offset);
}

std::string format_rfc3339(Timestamp ts) {
  using namespace std::chrono;
  auto day = floor<std::chrono::days>(ts);
  year_month_day ymd{day};
  hh_mm_ss tod{ts - day};
  char buf[40];
  int ms = static_cast<int>(tod.subseconds().count());
  if (ms != 0) {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()), ms);
  } else {
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                  static_cast<int>(tod.seconds().count()));
  }
  return buf;
}

std::string format_date(Timestamp ts) {
  using namespace std::chrono;
  year_month_day ymd{floor<std::chrono::days>(ts)};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::chrono::sys_days utc_day(Timestamp ts) { return std::chrono::floor<std::chrono::days>(ts); }

}  // namespace threatwatch
