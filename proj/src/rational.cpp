#include "bhlab/rational.hpp"

#include "bhlab/errors.hpp"

#include <cmath>
#include <cstdint>

namespace bhlab {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::not_a_prime_power: return "NotAPrimePower";
    case Errc::size_cap_exceeded: return "SizeCapExceeded";
    case Errc::cap_exceeded: return "CapExceeded";
    case Errc::invalid_params: return "InvalidParams";
    case Errc::degenerate_modulus: return "DegenerateModulus";
    case Errc::characteristic_too_small: return "CharacteristicTooSmall";
    case Errc::non_prime_field_unsupported: return "NonPrimeFieldUnsupported";
    case Errc::zero_target: return "ZeroTarget";
    case Errc::not_a_generator: return "NotAGenerator";
    case Errc::invalid_distribution: return "InvalidDistribution";
    case Errc::empty_family: return "EmptyFamily";
    case Errc::infeasible: return "Infeasible";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

namespace {

// x = top * 2^shift with top holding the leading 63 bits.
std::pair<std::uint64_t, long> split_top(const BigInt& x) {
  const long msb = static_cast<long>(boost::multiprecision::msb(x));
  if (msb < 63) return {static_cast<std::uint64_t>(x), 0};
  const long shift = msb - 62;
  return {static_cast<std::uint64_t>(x >> shift), shift};
}

}  // namespace

double log2(const BigInt& x) {
  if (x <= 0) throw Error(Errc::invalid_params, "log2 of a non-positive integer");
  auto [top, shift] = split_top(x);
  return std::log2(static_cast<double>(top)) + static_cast<double>(shift);
}

double log2(const Rational& x) {
  if (x <= 0) throw Error(Errc::invalid_params, "log2 of a non-positive rational");
  auto [nt, ns] = split_top(boost::multiprecision::numerator(x));
  auto [dt, ds] = split_top(boost::multiprecision::denominator(x));
  return std::log2(static_cast<double>(nt) / static_cast<double>(dt)) + static_cast<double>(ns - ds);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent) {
    if (exponent & 1u) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

Rational parse_rational(std::string_view text) {
  auto digits = [&](std::string_view s) {
    if (s.empty()) throw Error(Errc::parse_error, "empty number in '" + std::string(text) + "'");
    for (char c : s)
      if (c < '0' || c > '9') throw Error(Errc::parse_error, "bad number '" + std::string(text) + "'");
    return BigInt(std::string(s));
  };
  bool negative = false;
  std::string_view s = text;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  Rational r;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt den = digits(s.substr(slash + 1));
    if (den == 0) throw Error(Errc::parse_error, "zero denominator in '" + std::string(text) + "'");
    r = Rational(digits(s.substr(0, slash)), den);
  } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto ip = s.substr(0, dot);
    auto fp = s.substr(dot + 1);
    BigInt whole = ip.empty() ? BigInt(0) : digits(ip);
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(fp.size()));
    r = Rational(whole * scale + (fp.empty() ? BigInt(0) : digits(fp)), scale);
  } else {
    r = Rational(digits(s));
  }
  return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& x) {
  return boost::multiprecision::numerator(x).str() + "/" + boost::multiprecision::denominator(x).str();
}

ExactProbability::ExactProbability(Rational value) : value_(std::move(value)) {
  if (value_ < 0 || value_ > 1) throw Error(Errc::invalid_params, "probability outside [0,1]: " + to_string(value_));
}

BigInt ExactProbability::numerator() const { return boost::multiprecision::numerator(value_); }
BigInt ExactProbability::denominator() const { return boost::multiprecision::denominator(value_); }
double ExactProbability::to_double() const { return bhlab::to_double(value_); }
double ExactProbability::log2() const { return bhlab::log2(value_); }
std::string ExactProbability::str() const { return to_string(value_); }

}  // namespace bhlab
