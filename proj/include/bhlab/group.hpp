#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace bhlab {

using GroupElement = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

/// Finite product of cyclic groups Z/m_i (m_i = 0 meaning Z).
class AbelianAmbient {
 public:
  enum class Kind { integer_vectors, residues, field_vectors };

  static AbelianAmbient integer_vectors(int n);
  static AbelianAmbient residues(std::uint64_t m);
  /// GF(p^e)^h flattened to (Z/p)^{h e}.
  static AbelianAmbient field_vectors(std::uint64_t p, int dim);

  Kind kind() const { return kind_; }
  int rank() const { return static_cast<int>(moduli_.size()); }
  const GroupElement& moduli() const { return moduli_; }

  GroupElement zero() const { return GroupElement::Zero(rank()); }
  GroupElement reduce(GroupElement x) const;
  GroupElement add(const GroupElement& a, const GroupElement& b) const { return reduce(a + b); }
  bool is_canonical(const GroupElement& x) const;

 private:
  AbelianAmbient(Kind kind, GroupElement moduli) : kind_(kind), moduli_(std::move(moduli)) {}

  Kind kind_;
  GroupElement moduli_;
};

/// Lexicographic order on same-size vectors.
bool lex_less(const GroupElement& a, const GroupElement& b);

}  // namespace bhlab
