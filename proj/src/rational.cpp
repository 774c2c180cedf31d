#include "pdl/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <limits>

#include "pdl/error.hpp"

namespace pdl {

namespace {

std::int64_t checked_mul10(std::int64_t v, std::string_view text) {
  if (v > std::numeric_limits<std::int64_t>::max() / 10) {
    throw Error("number out of range: '" + std::string(text) + "'");
  }
  return v * 10;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view original = text;
  auto fail = [&]() -> Rational { throw Error("invalid number: '" + std::string(original) + "'"); };
  if (text.empty()) return fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const Rational num = parse_rational(text.substr(0, slash));
    const Rational den = parse_rational(text.substr(slash + 1));
    if (den.numerator() == 0) return fail();
    return num / den;
  }

  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool digits = false;
  bool fraction = false;
  std::size_t i = 0;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      num = checked_mul10(num, original) + (c - '0');
      if (fraction) den = checked_mul10(den, original);
      digits = true;
    } else if (c == '.' && !fraction) {
      fraction = true;
    } else {
      break;
    }
  }
  if (!digits) return fail();
  Rational value(num, den);
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return fail();
    ++i;
    bool neg_exp = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
      neg_exp = text[i] == '-';
      ++i;
    }
    if (i == text.size()) return fail();
    int exponent = 0;
    for (; i < text.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail();
      exponent = exponent * 10 + (text[i] - '0');
      if (exponent > 18) return fail();
    }
    std::int64_t scale = 1;
    for (int k = 0; k < exponent; ++k) scale *= 10;
    value = neg_exp ? value / scale : value * scale;
  }
  return negative ? -value : value;
}

std::string format_fixed(const Rational& value, int digits) {
  std::int64_t scale = 1;
  for (int k = 0; k < digits; ++k) scale *= 10;
  const bool negative = value.numerator() < 0;
  const Rational mag = negative ? -value : value;
  // Round half away from zero on the scaled magnitude.
  const Rational scaled = mag * scale;
  std::int64_t whole = scaled.numerator() / scaled.denominator();
  const Rational rest = scaled - whole;
  if (rest * 2 >= Rational(1)) ++whole;
  std::string int_part = std::to_string(whole / scale);
  std::string frac_part = std::to_string(whole % scale);
  while (static_cast<int>(frac_part.size()) < digits) frac_part.insert(frac_part.begin(), '0');
  std::string out = (negative && whole != 0 ? "-" : "") + int_part;
  if (digits > 0) out += "." + frac_part;
  return out;
}

std::string format_percent(const Rational& value) { return format_fixed(value * 100, 2); }

}  // namespace pdl
