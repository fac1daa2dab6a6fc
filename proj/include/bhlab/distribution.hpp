#pragma once

#include "bhlab/errors.hpp"
#include "bhlab/group.hpp"
#include "bhlab/rational.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace Eigen {
template <>
struct NumTraits<bhlab::Rational> : GenericNumTraits<bhlab::Rational> {
  typedef bhlab::Rational Real;
  typedef bhlab::Rational NonInteger;
  typedef bhlab::Rational Nested;
  enum { IsComplex = 0, IsInteger = 0, IsSigned = 1, RequireInitialization = 1, ReadCost = 10, AddCost = 20, MulCost = 40 };
};
}  // namespace Eigen

namespace bhlab {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Finitely supported law on integer vectors.
template <typename Scalar>
class Distribution {
 public:
  Distribution() = default;
  Distribution(std::vector<GroupElement> support, Vector<Scalar> mass) : support_(std::move(support)), mass_(std::move(mass)) {
    validate();
  }

  /// Law on {0,1}^n0 given by masses indexed by the big-endian word value.
  static Distribution bits(int n0, const std::vector<Scalar>& masses) {
    if (n0 < 1 || n0 > 20 || masses.size() != (std::size_t{1} << n0))
      throw Error(Errc::invalid_distribution, "need 2^n0 masses for a distribution on n0-bit words");
    std::vector<GroupElement> support;
    Vector<Scalar> mass(static_cast<Eigen::Index>(masses.size()));
    for (std::size_t x = 0; x < masses.size(); ++x) {
      GroupElement v(n0);
      for (int j = 0; j < n0; ++j) v[j] = (x >> (n0 - 1 - j)) & 1u;
      support.push_back(std::move(v));
      mass[static_cast<Eigen::Index>(x)] = masses[x];
    }
    return Distribution(std::move(support), std::move(mass));
  }

  static Distribution uniform_bits(int n0) {
    const std::size_t m = std::size_t{1} << n0;
    return bits(n0, std::vector<Scalar>(m, Scalar(1) / Scalar(static_cast<long long>(m))));
  }

  static Distribution point_mass(GroupElement v) {
    Vector<Scalar> mass(1);
    mass[0] = Scalar(1);
    return Distribution({std::move(v)}, std::move(mass));
  }

  int dimension() const { return support_.empty() ? 0 : static_cast<int>(support_.front().size()); }
  std::size_t size() const { return support_.size(); }
  const std::vector<GroupElement>& support() const { return support_; }
  const Vector<Scalar>& masses() const { return mass_; }
  const Scalar& mass(std::size_t i) const { return mass_[static_cast<Eigen::Index>(i)]; }

  template <typename Other>
  Distribution<Other> cast() const {
    Vector<Other> m(mass_.size());
    for (Eigen::Index i = 0; i < mass_.size(); ++i) m[i] = convert<Other>(mass_[i]);
    return Distribution<Other>(support_, std::move(m));
  }

 private:
  template <typename Other>
  static Other convert(const Scalar& x) {
    if constexpr (std::is_same_v<Scalar, Rational> && !std::is_same_v<Other, Rational>)
      return static_cast<Other>(x.template convert_to<double>());
    else
      return static_cast<Other>(x);
  }

  void validate() const {
    if (support_.empty()) throw Error(Errc::invalid_distribution, "empty support");
    if (static_cast<std::size_t>(mass_.size()) != support_.size())
      throw Error(Errc::invalid_distribution, "support and mass sizes differ");
    const auto dim = support_.front().size();
    Scalar total(0);
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (support_[i].size() != dim) throw Error(Errc::invalid_distribution, "support points of different dimension");
      if (mass_[static_cast<Eigen::Index>(i)] < Scalar(0)) throw Error(Errc::invalid_distribution, "negative mass");
      total += mass_[static_cast<Eigen::Index>(i)];
    }
    if constexpr (std::is_same_v<Scalar, Rational>) {
      if (total != 1) throw Error(Errc::invalid_distribution, "masses sum to " + to_string(total));
    } else {
      using std::abs;
      if (!(abs(total - Scalar(1)) <= Scalar(1e-12))) throw Error(Errc::invalid_distribution, "masses do not sum to 1");
    }
  }

  std::vector<GroupElement> support_;
  Vector<Scalar> mass_;
};

}  // namespace bhlab
