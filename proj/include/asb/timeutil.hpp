#ifndef ASB_TIMEUTIL_HPP_
#define ASB_TIMEUTIL_HPP_

#include <array>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace asb::timeutil {

// Proleptic Gregorian day count relative to 1970-01-01 (H. Hinnant's algorithm).
constexpr std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

struct Civil {
  std::int64_t year;
  unsigned month;
  unsigned day;
};

constexpr Civil civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return {y + (m <= 2), m, d};
}

constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  return a / b - ((a % b != 0) && ((a < 0) != (b < 0)));
}

namespace detail {

inline bool read_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  auto r = std::from_chars(s.data() + pos, s.data() + pos + len, out);
  return r.ec == std::errc{};
}

inline bool valid_date(int y, int m, int d) {
  if (m < 1 || m > 12 || d < 1) return false;
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  int limit = kDays[static_cast<std::size_t>(m - 1)];
  if (m == 2 && ((y % 4 == 0 && y % 100 != 0) || y % 400 == 0)) limit = 29;
  return d <= limit;
}

inline std::optional<std::int64_t> compose(int y, int mo, int d, int h, int mi, int s,
                                           std::int64_t offset_seconds) {
  if (!valid_date(y, mo, d) || h > 23 || mi > 59 || s > 60) return std::nullopt;
  const std::int64_t days = days_from_civil(y, static_cast<unsigned>(mo), static_cast<unsigned>(d));
  return days * 86400 + h * 3600 + mi * 60 + s - offset_seconds;
}

// "+HH:MM", "+HHMM", "Z"; returns consumed length or 0 on failure.
inline std::size_t parse_offset(std::string_view s, std::size_t pos, std::int64_t& offset) {
  if (pos >= s.size()) return 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    offset = 0;
    return 1;
  }
  if (s[pos] != '+' && s[pos] != '-') return 0;
  int hh = 0;
  int mm = 0;
  if (!read_int(s, pos + 1, 2, hh)) return 0;
  std::size_t len = 3;
  if (pos + 3 < s.size() && s[pos + 3] == ':') {
    if (!read_int(s, pos + 4, 2, mm)) return 0;
    len = 6;
  } else if (read_int(s, pos + 3, 2, mm)) {
    len = 5;
  }
  if (hh > 23 || mm > 59) return 0;
  offset = (hh * 3600 + mm * 60) * (s[pos] == '-' ? -1 : 1);
  return len;
}

inline std::optional<std::int64_t> parse_iso(std::string_view s) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (!read_int(s, 0, 4, y) || s.size() < 10 || s[4] != '-' || !read_int(s, 5, 2, mo) ||
      s[7] != '-' || !read_int(s, 8, 2, d)) {
    return std::nullopt;
  }
  if (s.size() == 10) return compose(y, mo, d, 0, 0, 0, 0);
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
  if (!read_int(s, 11, 2, h) || s.size() < 16 || s[13] != ':' || !read_int(s, 14, 2, mi)) {
    return std::nullopt;
  }
  std::size_t pos = 16;
  if (pos < s.size() && s[pos] == ':') {
    if (!read_int(s, 17, 2, sec)) return std::nullopt;
    pos = 19;
    if (pos < s.size() && (s[pos] == '.' || s[pos] == ',')) {
      ++pos;
      const std::size_t start = pos;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
      if (pos == start) return std::nullopt;
    }
  }
  std::int64_t offset = 0;
  if (pos < s.size()) {
    const std::size_t used = parse_offset(s, pos, offset);
    if (used == 0 || pos + used != s.size()) return std::nullopt;
  }
  return compose(y, mo, d, h, mi, sec, offset);
}

// Twitter v1.1 style: "Tue Mar 17 12:34:56 +0000 2020".
inline std::optional<std::int64_t> parse_twitter(std::string_view s) {
  static constexpr std::array<std::string_view, 12> kMonths = {
      "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
  if (s.size() != 30 || s[3] != ' ' || s[7] != ' ' || s[10] != ' ' || s[19] != ' ' ||
      s[25] != ' ' || s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  int mo = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (s.substr(4, 3) == kMonths[i]) mo = static_cast<int>(i) + 1;
  }
  int y = 0, d = 0, h = 0, mi = 0, sec = 0;
  if (mo == 0 || !read_int(s, 8, 2, d) || !read_int(s, 11, 2, h) || !read_int(s, 14, 2, mi) ||
      !read_int(s, 17, 2, sec) || !read_int(s, 26, 4, y)) {
    return std::nullopt;
  }
  std::int64_t offset = 0;
  if (parse_offset(s, 20, offset) != 5) return std::nullopt;
  return compose(y, mo, d, h, mi, sec, offset);
}

}  // namespace detail

/// Parses ISO-8601 (date, date-time, optional fraction and offset) or the
/// classic Twitter `created_at` format into UTC epoch seconds.
inline std::optional<std::int64_t> parse_timestamp(std::string_view s) {
  if (auto t = detail::parse_iso(s)) return t;
  return detail::parse_twitter(s);
}

/// "YYYY-MM-DDTHH:MM:SSZ"
inline std::string format_timestamp(std::int64_t epoch_seconds) {
  const std::int64_t days = floor_div(epoch_seconds, 86400);
  const std::int64_t rem = epoch_seconds - days * 86400;
  const Civil c = civil_from_days(days);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<long long>(c.year), c.month, c.day, static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
  return buf;
}

/// UTC calendar day, "YYYY-MM-DD".
inline std::string format_date(std::int64_t epoch_seconds) {
  return format_timestamp(epoch_seconds).substr(0, 10);
}

inline std::int64_t utc_day(std::int64_t epoch_seconds) { return floor_div(epoch_seconds, 86400); }

}  // namespace asb::timeutil

#endif  // ASB_TIMEUTIL_HPP_
