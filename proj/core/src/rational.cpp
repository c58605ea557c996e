#include "apxgroups/rational.hpp"

#include <cctype>

namespace apx {

namespace {

bool is_integer_literal(const std::string& s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  if (text.empty()) throw InputError("empty rational literal");
  auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::string num = text.substr(0, slash);
    std::string den = text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den))
      throw InputError("bad rational literal: " + text);
    BigInt d(den);
    if (d == 0) throw InputError("zero denominator: " + text);
    return Rational(BigInt(num), d);
  }
  auto dot = text.find('.');
  if (dot != std::string::npos) {
    std::string whole = text.substr(0, dot);
    std::string frac = text.substr(dot + 1);
    if (whole.empty() || whole == "-" || whole == "+") whole += "0";
    if (!is_integer_literal(whole) || frac.empty() ||
        !is_integer_literal(frac) || frac[0] == '-' || frac[0] == '+')
      throw InputError("bad decimal literal: " + text);
    BigInt scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    BigInt w(whole);
    BigInt f(frac);
    bool neg = text[0] == '-';
    BigInt p = w * scale + (neg ? -f : f);
    return Rational(p, scale);
  }
  if (!is_integer_literal(text)) throw InputError("bad rational literal: " + text);
  return Rational(BigInt(text));
}

std::string format_rational(const Rational& r) {
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string decimal_approx(const Rational& r, int digits) {
  BigInt num = numerator(r);
  BigInt den = denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt whole = num / den;
  BigInt rem = num % den;
  std::string out = (neg ? "-" : "") + whole.str();
  if (digits > 0) {
    out += '.';
    for (int i = 0; i < digits; ++i) {
      rem *= 10;
      out += BigInt(rem / den).str();
      rem %= den;
    }
  }
  return out;
}

Rational rational_pow(const Rational& r, unsigned k) {
  Rational acc = 1;
  Rational base = r;
  while (k > 0) {
    if (k & 1u) acc *= base;
    base *= base;
    k >>= 1u;
  }
  return acc;
}

}  // namespace apx
