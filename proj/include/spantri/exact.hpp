#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace spantri {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational ratio(std::int64_t num, std::int64_t den) { return Rational(num, den); }

BigInt factorial(unsigned n);
BigInt binomial(unsigned n, unsigned k);
BigInt pow_big(const BigInt& base, unsigned exp);
Rational pow_rat(const Rational& base, unsigned exp);

/// Rigorous bracket for Euler's number: E_LOW/E_DEN < e < E_HIGH/E_DEN.
inline constexpr std::int64_t kEulerDen = 1'000'000'000;
inline constexpr std::int64_t kEulerLow = 2'718'281'828;
inline constexpr std::int64_t kEulerHigh = 2'718'281'829;

/// Parses "p/q", "p" or a finite decimal such as "2.5" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);
double to_double(const Rational& r);

}  // namespace spantri
