#include "bifix/rational.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace bifix {

std::string format_rational(const Rational& x) {
  std::ostringstream os;
  os << numerator(x);
  if (denominator(x) != 1) os << "/" << denominator(x);
  return os.str();
}

Rational rational_from_string(const std::string& text) {
  const auto bad = [&] {
    return std::invalid_argument("not a rational literal: '" + text + "'");
  };
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' '; }), s.end());
  if (s.empty()) throw bad();

  if (auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num = s.substr(0, slash);
    const std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty()) throw bad();
    try {
      BigInt n(num), d(den);
      if (d == 0) throw bad();
      return Rational(n, d);
    } catch (const std::exception&) {
      throw bad();
    }
  }

  // Decimal: [sign] digits [. digits] [e exponent]
  std::size_t pos = 0;
  bool negative = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    negative = (s[pos] == '-');
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool any = false;
  for (; pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])); ++pos) {
    digits += s[pos];
    any = true;
  }
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    for (; pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])); ++pos) {
      digits += s[pos];
      ++frac_digits;
      any = true;
    }
  }
  if (!any) throw bad();
  long exponent = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    bool exp_neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      exp_neg = (s[pos] == '-');
      ++pos;
    }
    if (pos == s.size()) throw bad();
    long e = 0;
    for (; pos < s.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(s[pos]))) throw bad();
      if (e > 100000) throw bad();
      e = e * 10 + (s[pos] - '0');
    }
    exponent = exp_neg ? -e : e;
  }
  if (pos != s.size()) throw bad();

  BigInt mantissa(digits.empty() ? "0" : digits);
  if (negative) mantissa = -mantissa;
  const long ten_power = exponent - frac_digits;
  Rational value(mantissa);
  if (ten_power > 0) {
    value *= Rational(pow(BigInt(10), static_cast<unsigned>(ten_power)));
  } else if (ten_power < 0) {
    value /= Rational(pow(BigInt(10), static_cast<unsigned>(-ten_power)));
  }
  return value;
}

}  // namespace bifix
