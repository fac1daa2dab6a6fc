#include "bhlab/algebra.hpp"

#include "bhlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace bhlab {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using Poly = std::vector<u64>;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 k, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (k) {
    if (k & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    k >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

// a mod f for monic f.
void reduce(Poly& a, const Poly& f, u64 p) {
  const std::size_t e = f.size() - 1;
  for (std::size_t i = a.size(); i-- > e;) {
    const u64 c = a[i];
    if (c == 0) continue;
    for (std::size_t j = 0; j <= e; ++j) {
      const std::size_t k = i - e + j;
      a[k] = (a[k] + p - mulmod(c, f[j], p)) % p;
    }
  }
  if (a.size() > e) a.resize(e);
}

Poly mul_reduce(const Poly& a, const Poly& b, const Poly& f, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  }
  reduce(r, f, p);
  return r;
}

Poly pow_reduce(Poly a, u64 k, const Poly& f, u64 p) {
  Poly r{1};
  while (k) {
    if (k & 1) r = mul_reduce(r, a, f, p);
    k >>= 1;
    if (k) a = mul_reduce(a, a, f, p);
  }
  return r;
}

// Remainder of a by b (b nonzero, any leading coefficient).
Poly poly_mod(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  const u64 inv = invmod(b.back(), p);
  while (a.size() >= b.size()) {
    const u64 c = mulmod(a.back(), inv, p);
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] = (a[shift + j] + p - mulmod(c, b[j], p)) % p;
    trim(a);
  }
  return a;
}

Poly poly_gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Ben-Or: f of degree e is irreducible iff gcd(f, x^{p^i} - x) = 1 for i <= e/2.
bool irreducible(const Poly& f, u64 p) {
  const int e = static_cast<int>(f.size()) - 1;
  Poly x{0, 1};
  reduce(x, f, p);
  Poly xp = x;
  for (int i = 1; i <= e / 2; ++i) {
    xp = pow_reduce(xp, p, f, p);
    Poly g = xp;
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = (g[1] + p - 1) % p;
    if (poly_gcd(f, g, p).size() != 1) return false;
  }
  return true;
}

Poly least_irreducible(u64 p, int e) {
  u64 count = 1;
  for (int i = 0; i < e; ++i) count *= p;
  for (u64 idx = 0; idx < count; ++idx) {
    Poly f(e + 1, 0);
    u64 r = idx;
    for (int i = 0; i < e; ++i) {
      f[i] = r % p;
      r /= p;
    }
    f[e] = 1;
    if (e > 1 && f[0] == 0) continue;
    if (irreducible(f, p)) return f;
  }
  throw Error(Errc::invalid_params, "no irreducible polynomial found");
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (u64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t m) {
  std::vector<u64> out;
  for (u64 d = 2; d * d <= m; ++d) {
    if (m % d) continue;
    out.push_back(d);
    while (m % d == 0) m /= d;
  }
  if (m > 1) out.push_back(m);
  return out;
}

PrimePower factor_prime_power(std::uint64_t q) {
  if (q < 2) throw Error(Errc::not_a_prime_power, std::to_string(q) + " is not a prime power");
  auto primes = distinct_prime_factors(q);
  if (primes.size() != 1) throw Error(Errc::not_a_prime_power, std::to_string(q) + " is not a prime power");
  int e = 0;
  for (u64 r = q; r > 1; r /= primes[0]) ++e;
  return {primes[0], e};
}

std::uint64_t checked_power(std::uint64_t q, int h, std::uint64_t cap) {
  if (h < 0) throw Error(Errc::invalid_params, "negative exponent");
  u64 r = 1;
  for (int i = 0; i < h; ++i) {
    if (r > cap / q) throw Error(Errc::size_cap_exceeded, std::to_string(q) + "^" + std::to_string(h) + " exceeds cap " + std::to_string(cap));
    r *= q;
  }
  if (r > cap) throw Error(Errc::size_cap_exceeded, std::to_string(r) + " exceeds cap " + std::to_string(cap));
  return r;
}

FiniteField::FiniteField(std::uint64_t p, int e, std::vector<std::uint64_t> modulus)
    : p_(p), e_(e), q_(1), modulus_(std::move(modulus)) {
  for (int i = 0; i < e_; ++i) q_ *= p_;
}

FieldElement FiniteField::zero() const { return element(0); }
FieldElement FiniteField::one() const { return element(1); }

FieldElement FiniteField::element(std::uint64_t index) const {
  std::vector<u64> c(e_, 0);
  for (int i = 0; i < e_; ++i) {
    c[i] = index % p_;
    index /= p_;
  }
  return FieldElement(shared_from_this(), std::move(c));
}

FieldElement FiniteField::element(std::vector<std::uint64_t> coefficients) const {
  return FieldElement(shared_from_this(), std::move(coefficients));
}

FieldPtr make_field(std::uint64_t q, const Caps& caps) {
  auto [p, e] = factor_prime_power(q);
  if (q > caps.field_order) throw Error(Errc::size_cap_exceeded, "field order " + std::to_string(q) + " exceeds cap");
  Poly f = e == 1 ? Poly{0, 1} : least_irreducible(p, e);
  return std::make_shared<const FiniteField>(p, e, std::move(f));
}

FieldElement::FieldElement(FieldPtr field, std::vector<std::uint64_t> coefficients)
    : field_(std::move(field)), c_(std::move(coefficients)) {
  c_.resize(field_->degree(), 0);
  for (auto& v : c_) v %= field_->characteristic();
}

std::uint64_t FieldElement::index() const {
  u64 r = 0;
  for (std::size_t i = c_.size(); i-- > 0;) r = r * field_->characteristic() + c_[i];
  return r;
}

bool FieldElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](u64 v) { return v == 0; });
}

bool FieldElement::is_one() const {
  if (c_[0] != 1) return false;
  return std::all_of(c_.begin() + 1, c_.end(), [](u64 v) { return v == 0; });
}

void FieldElement::check_same_field(const FieldElement& o) const {
  if (field_ != o.field_ && !(*field_ == *o.field_)) throw Error(Errc::invalid_params, "elements of different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same_field(o);
  const u64 p = field_->characteristic();
  std::vector<u64> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = (c_[i] + o.c_[i]) % p;
  return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-() const {
  const u64 p = field_->characteristic();
  std::vector<u64> r(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) r[i] = (p - c_[i]) % p;
  return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-(const FieldElement& o) const { return *this + (-o); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same_field(o);
  const u64 p = field_->characteristic();
  if (field_->is_prime_field()) return FieldElement(field_, {mulmod(c_[0], o.c_[0], p)});
  Poly a = c_, b = o.c_;
  trim(a);
  trim(b);
  return FieldElement(field_, mul_reduce(a, b, field_->modulus(), p));
}

FieldElement FieldElement::pow(std::uint64_t k) const {
  FieldElement r = field_->one();
  FieldElement b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

FieldElement FieldElement::inverse() const {
  if (is_zero()) throw Error(Errc::zero_target, "inverse of zero");
  return pow(field_->order() - 2);
}

bool FieldElement::operator==(const FieldElement& o) const {
  return c_ == o.c_ && (field_ == o.field_ || *field_ == *o.field_);
}

std::uint64_t multiplicative_order(const FieldElement& a) {
  if (a.is_zero()) throw Error(Errc::zero_target, "order of zero");
  u64 ord = a.field()->order() - 1;
  for (u64 r : distinct_prime_factors(ord)) {
    while (ord % r == 0 && a.pow(ord / r).is_one()) ord /= r;
  }
  return ord;
}

bool is_generator(const FieldElement& a) {
  return !a.is_zero() && multiplicative_order(a) == a.field()->order() - 1;
}

int degree_over(const FieldElement& a, std::uint64_t base_q) {
  FieldElement x = a;
  for (int j = 1; j <= a.field()->degree() * 64; ++j) {
    x = x.pow(base_q);
    if (x == a) return j;
  }
  throw Error(Errc::invalid_params, "base field is not a subfield");
}

FieldElement find_degree_h_primitive(std::uint64_t base_q, int h, const Caps& caps) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  factor_prime_power(base_q);
  const u64 q = checked_power(base_q, h, caps.field_order);
  FieldPtr field = make_field(q, caps);
  const u64 m = q - 1;
  const auto primes = distinct_prime_factors(m);
  for (u64 idx = 1; idx < q; ++idx) {
    FieldElement a = field->element(idx);
    bool full = true;
    for (u64 r : primes) {
      if (a.pow(m / r).is_one()) {
        full = false;
        break;
      }
    }
    if (full && degree_over(a, base_q) == h) return a;
  }
  throw Error(Errc::invalid_params, "no primitive element found");
}

std::vector<FieldElement> subfield_elements(const FieldElement& generator, std::uint64_t base_q) {
  const u64 q = generator.field()->order();
  if (base_q < 2 || (q - 1) % (base_q - 1) != 0) throw Error(Errc::invalid_params, "not a subfield order");
  FieldElement beta = generator.pow((q - 1) / (base_q - 1));
  std::vector<FieldElement> out{generator.field()->zero()};
  FieldElement x = generator.field()->one();
  for (u64 j = 0; j + 1 < base_q; ++j) {
    out.push_back(x);
    x = x * beta;
  }
  std::sort(out.begin(), out.end(), [](const FieldElement& a, const FieldElement& b) { return a.index() < b.index(); });
  return out;
}

ResidueClass discrete_log(const FieldElement& alpha, const FieldElement& target) {
  if (target.is_zero()) throw Error(Errc::zero_target, "discrete log of zero");
  if (!(*alpha.field() == *target.field())) throw Error(Errc::invalid_params, "elements of different fields");
  if (!is_generator(alpha)) throw Error(Errc::not_a_generator, "alpha does not generate the multiplicative group");
  const u64 m = alpha.field()->order() - 1;
  u64 s = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(m))));
  while (s * s < m) ++s;
  std::unordered_map<u64, u64> baby;
  baby.reserve(s * 2);
  FieldElement x = alpha.field()->one();
  for (u64 j = 0; j < s; ++j) {
    baby.emplace(x.index(), j);
    x = x * alpha;
  }
  const FieldElement giant = alpha.pow((m - s % m) % m);
  FieldElement y = target;
  for (u64 i = 0; i <= s; ++i) {
    if (auto it = baby.find(y.index()); it != baby.end()) return {m, (i * s + it->second) % m};
    y = y * giant;
  }
  throw Error(Errc::not_a_generator, "no logarithm found");
}

}  // namespace bhlab
