#include "hybridcast/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "hybridcast/errors.hpp"

namespace hybridcast {
namespace {

int read_fixed(std::string_view text, std::size_t pos, std::size_t width, std::string_view what) {
  if (pos + width > text.size()) {
    throw DataError("truncated " + std::string(what) + " in '" + std::string(text) + "'");
  }
  int value = 0;
  const char* first = text.data() + pos;
  const char* last = first + width;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw DataError("bad " + std::string(what) + " in '" + std::string(text) + "'");
  }
  return value;
}

void expect_char(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw DataError("malformed date/time '" + std::string(text) + "'");
  }
}

Date make_date(int y, int m, int d, std::string_view text) {
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                                        std::chrono::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) {
    throw DataError("invalid calendar date '" + std::string(text) + "'");
  }
  return Date{ymd};
}

}  // namespace

Date parse_date(std::string_view text) {
  if (text.size() != 10) {
    throw DataError("expected YYYY-MM-DD, got '" + std::string(text) + "'");
  }
  const int y = read_fixed(text, 0, 4, "year");
  expect_char(text, 4, '-');
  const int m = read_fixed(text, 5, 2, "month");
  expect_char(text, 7, '-');
  const int d = read_fixed(text, 8, 2, "day");
  return make_date(y, m, d, text);
}

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  if (text.size() < 10) {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
  const Date date = parse_date(text.substr(0, 10));
  if (text.size() == 10) {
    return Timestamp{date};
  }
  if (text[10] != 'T' && text[10] != ' ') {
    throw DataError("malformed timestamp '" + std::string(text) + "'");
  }
  const int hh = read_fixed(text, 11, 2, "hour");
  expect_char(text, 13, ':');
  const int mm = read_fixed(text, 14, 2, "minute");
  std::size_t pos = 16;
  int ss = 0;
  if (pos < text.size() && text[pos] == ':') {
    ss = read_fixed(text, pos + 1, 2, "second");
    pos += 3;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
  }
  if (hh > 23 || mm > 59 || ss > 60) {
    throw DataError("time out of range in '" + std::string(text) + "'");
  }
  seconds offset{0};
  if (pos < text.size()) {
    const char zone = text[pos];
    if (zone == 'Z' || zone == 'z') {
      ++pos;
    } else if (zone == '+' || zone == '-') {
      const int oh = read_fixed(text, pos + 1, 2, "zone hour");
      std::size_t next = pos + 3;
      int om = 0;
      if (next < text.size() && text[next] == ':') ++next;
      if (next < text.size()) {
        om = read_fixed(text, next, 2, "zone minute");
        next += 2;
      }
      offset = hours{oh} + minutes{om};
      if (zone == '-') offset = -offset;
      pos = next;
    }
  }
  if (pos != text.size()) {
    throw DataError("trailing characters in timestamp '" + std::string(text) + "'");
  }
  return Timestamp{date} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const Date date = day_of(ts);
  const hh_mm_ss<seconds> tod{ts - Timestamp{date}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02dZ", static_cast<int>(tod.hours().count()),
                static_cast<int>(tod.minutes().count()), static_cast<int>(tod.seconds().count()));
  return format_date(date) + buf;
}

}  // namespace hybridcast
