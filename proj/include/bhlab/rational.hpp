#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <string>
#include <string_view>

namespace bhlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

double log2(const BigInt& x);
double log2(const Rational& x);
double to_double(const Rational& x);

BigInt binomial(unsigned n, unsigned k);
Rational pow(const Rational& base, unsigned exponent);

/// Accepts "a/b", integers and plain decimals such as "0.75".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& x);

/// Reduced rational in [0,1].
class ExactProbability {
 public:
  ExactProbability() = default;
  explicit ExactProbability(Rational value);

  const Rational& value() const { return value_; }
  BigInt numerator() const;
  BigInt denominator() const;
  double to_double() const;
  double log2() const;
  std::string str() const;

  friend bool operator==(const ExactProbability& a, const ExactProbability& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExactProbability& a, const ExactProbability& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Rational value_{0};
};

}  // namespace bhlab
