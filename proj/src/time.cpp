#include "sfqsim/time.hpp"

#include <cctype>
#include <stdexcept>

namespace sfqsim {

SimTime scale_percent(SimTime t, int percent) {
  const std::int64_t num = t.fs * (100 + percent);
  const std::int64_t half = num >= 0 ? 50 : -50;
  return SimTime{(num + half) / 100};
}

SimTime scale_ceil(SimTime t, std::int64_t num, std::int64_t den) {
  const std::int64_t p = t.fs * num;
  return SimTime{(p + den - 1) / den};
}

SimTime parse_ps(std::string_view text) {
  auto fail = [&] { throw std::invalid_argument("invalid picosecond value '" + std::string(text) + "'"); };
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t end = text.size();
  while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  text = text.substr(i, end - i);
  if (text.empty()) fail();

  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::int64_t whole = 0;
  bool any_digit = false;
  for (; pos < text.size() && text[pos] != '.'; ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(text[pos]))) fail();
    whole = whole * 10 + (text[pos] - '0');
    if (whole > 9'000'000'000'000) fail();
    any_digit = true;
  }
  std::int64_t frac = 0;
  int frac_digits = 0;
  if (pos < text.size()) {
    ++pos;  // '.'
    for (; pos < text.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(text[pos]))) fail();
      if (frac_digits == 3) {
        if (text[pos] != '0') {
          throw std::invalid_argument("picosecond value '" + std::string(text) +
                                      "' is finer than 1 fs");
        }
        continue;
      }
      frac = frac * 10 + (text[pos] - '0');
      ++frac_digits;
      any_digit = true;
    }
  }
  if (!any_digit) fail();
  while (frac_digits < 3) {
    frac *= 10;
    ++frac_digits;
  }
  const std::int64_t fs = whole * 1000 + frac;
  return SimTime{negative ? -fs : fs};
}

std::string format_ps(SimTime t) {
  std::int64_t v = t.fs;
  std::string sign;
  if (v < 0) {
    sign = "-";
    v = -v;
  }
  std::string out = sign + std::to_string(v / 1000);
  std::int64_t frac = v % 1000;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 3 - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += "." + digits;
  }
  return out;
}

}  // namespace sfqsim
