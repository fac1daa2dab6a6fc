#pragma once

#include "bhlab/caps.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace bhlab {

struct PrimePower {
  std::uint64_t p;
  int e;
};

/// Throws NotAPrimePower for q < 2 or q with two distinct prime factors.
PrimePower factor_prime_power(std::uint64_t q);
std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t m);
bool is_prime(std::uint64_t n);

/// Multiplies with overflow and cap checks; throws SizeCapExceeded beyond `cap`.
std::uint64_t checked_power(std::uint64_t q, int h, std::uint64_t cap);

class FieldElement;

/// GF(p^e) as GF(p)[x]/(f), f the lexicographically least monic irreducible of degree e.
class FiniteField : public std::enable_shared_from_this<FiniteField> {
 public:
  FiniteField(std::uint64_t p, int e, std::vector<std::uint64_t> modulus);

  std::uint64_t characteristic() const { return p_; }
  int degree() const { return e_; }
  std::uint64_t order() const { return q_; }
  /// Coefficients c_0..c_e, c_e = 1.
  const std::vector<std::uint64_t>& modulus() const { return modulus_; }
  bool is_prime_field() const { return e_ == 1; }

  FieldElement zero() const;
  FieldElement one() const;
  /// Element sum c_i x^i with index = sum c_i p^i.
  FieldElement element(std::uint64_t index) const;
  FieldElement element(std::vector<std::uint64_t> coefficients) const;

  bool operator==(const FiniteField& other) const {
    return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
  }

 private:
  std::uint64_t p_;
  int e_;
  std::uint64_t q_;
  std::vector<std::uint64_t> modulus_;
};

using FieldPtr = std::shared_ptr<const FiniteField>;

FieldPtr make_field(std::uint64_t q, const Caps& caps = {});

class FieldElement {
 public:
  FieldElement(FieldPtr field, std::vector<std::uint64_t> coefficients);

  const FieldPtr& field() const { return field_; }
  const std::vector<std::uint64_t>& coefficients() const { return c_; }
  std::uint64_t index() const;
  bool is_zero() const;
  bool is_one() const;

  FieldElement operator+(const FieldElement& o) const;
  FieldElement operator-(const FieldElement& o) const;
  FieldElement operator-() const;
  FieldElement operator*(const FieldElement& o) const;
  FieldElement inverse() const;
  FieldElement pow(std::uint64_t k) const;

  bool operator==(const FieldElement& o) const;
  bool operator!=(const FieldElement& o) const { return !(*this == o); }

 private:
  void check_same_field(const FieldElement& o) const;

  FieldPtr field_;
  std::vector<std::uint64_t> c_;
};

std::uint64_t multiplicative_order(const FieldElement& a);
bool is_generator(const FieldElement& a);
/// Degree of the minimal polynomial of a over the subfield of order `base_q`.
int degree_over(const FieldElement& a, std::uint64_t base_q);

/// Least element of GF(q^h) (in index order) with order q^h - 1 and degree h over GF(q).
FieldElement find_degree_h_primitive(std::uint64_t base_q, int h, const Caps& caps = {});

/// Elements of the subfield of order `base_q`, in index order, computed from a generator of the field.
std::vector<FieldElement> subfield_elements(const FieldElement& generator, std::uint64_t base_q);

struct ResidueClass {
  std::uint64_t modulus;
  std::uint64_t value;
  bool operator==(const ResidueClass&) const = default;
};

/// Baby-step giant-step: d with alpha^d = target, 0 <= d < q-1.
ResidueClass discrete_log(const FieldElement& alpha, const FieldElement& target);

}  // namespace bhlab
