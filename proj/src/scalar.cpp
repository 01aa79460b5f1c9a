#include "cubelam/scalar.hpp"

#include <cctype>

namespace cubelam {

std::string to_string(const Rational& q) { return q.str(); }

namespace {

bool valid_integer(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

boost::multiprecision::mpz_int parse_integer(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  return boost::multiprecision::mpz_int(std::string(s));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den[0] == '-' || den[0] == '+') {
    throw InputError("malformed rational \"" + std::string(text) + "\" (expected \"p/q\")");
  }
  const auto d = parse_integer(den);
  if (d == 0) throw InputError("zero denominator in \"" + std::string(text) + "\"");
  return Rational(parse_integer(num), d);
}

Rational floor(const Rational& q) {
  using boost::multiprecision::mpz_int;
  const mpz_int n = numerator(q);
  const mpz_int d = denominator(q);
  mpz_int f = n / d;  // truncates toward zero
  if (n < 0 && f * d != n) f -= 1;
  return Rational(f);
}

}  // namespace cubelam
