#include "spantri/exact.hpp"

#include <cctype>

#include "spantri/errors.hpp"

namespace spantri {

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt pow_big(const BigInt& base, unsigned exp) {
  BigInt r = 1, b = base;
  while (exp) {
    if (exp & 1u) r *= b;
    b *= b;
    exp >>= 1u;
  }
  return r;
}

Rational pow_rat(const Rational& base, unsigned exp) {
  return Rational(pow_big(numerator(base), exp), pow_big(denominator(base), exp));
}

Rational parse_rational(const std::string& text) {
  auto bad = [&] { return ParameterError("cannot parse rational '" + text + "'"); };
  if (text.empty()) throw bad();
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) throw bad();
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw bad();
    for (std::size_t j = i; j < s.size(); ++j) {
      if (!std::isdigit(static_cast<unsigned char>(s[j]))) throw bad();
    }
    return BigInt(s[0] == '+' ? s.substr(1) : s);
  };
  if (auto slash = text.find('/'); slash != std::string::npos) {
    BigInt den = parse_int(text.substr(slash + 1));
    if (den == 0) throw bad();
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const std::string whole = text.substr(0, dot);
    const std::string frac = text.substr(dot + 1);
    if (frac.empty()) throw bad();
    const bool negative = !whole.empty() && whole[0] == '-';
    BigInt scale = pow_big(10, static_cast<unsigned>(frac.size()));
    BigInt w = (whole.empty() || whole == "-" || whole == "+") ? BigInt(0) : parse_int(whole);
    BigInt f = parse_int(frac);
    BigInt num = abs(w) * scale + f;
    return Rational(negative ? BigInt(-num) : num, scale);
  }
  return Rational(parse_int(text));
}

std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace spantri
