#include "causalkit/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace causalkit {

namespace {

bool is_integer_token(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(text)) {
      throw std::invalid_argument("malformed rational '" + text + "'");
    }
    return Rational(BigInt(text));
  }
  const std::string num = text.substr(0, slash);
  const std::string den = text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den)) {
    throw std::invalid_argument("malformed rational '" + text + "'");
  }
  const BigInt d(den);
  if (d == 0) {
    throw std::invalid_argument("zero denominator in '" + text + "'");
  }
  return Rational(BigInt(num), d);
}

std::string format_fraction(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

std::string format_number(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return format_fraction(r);
}

}  // namespace causalkit
