#include "bhlab/group.hpp"

#include "bhlab/errors.hpp"

#include <algorithm>

namespace bhlab {

AbelianAmbient AbelianAmbient::integer_vectors(int n) {
  if (n < 1) throw Error(Errc::invalid_params, "rank must be positive");
  return AbelianAmbient(Kind::integer_vectors, GroupElement::Zero(n));
}

AbelianAmbient AbelianAmbient::residues(std::uint64_t m) {
  if (m < 1) throw Error(Errc::degenerate_modulus, "modulus must be positive");
  return AbelianAmbient(Kind::residues, GroupElement::Constant(1, static_cast<std::int64_t>(m)));
}

AbelianAmbient AbelianAmbient::field_vectors(std::uint64_t p, int dim) {
  if (dim < 1 || p < 2) throw Error(Errc::invalid_params, "bad field-vector ambient");
  return AbelianAmbient(Kind::field_vectors, GroupElement::Constant(dim, static_cast<std::int64_t>(p)));
}

GroupElement AbelianAmbient::reduce(GroupElement x) const {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const std::int64_t m = moduli_[i];
    if (m > 0) x[i] = ((x[i] % m) + m) % m;
  }
  return x;
}

bool AbelianAmbient::is_canonical(const GroupElement& x) const {
  if (x.size() != moduli_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (moduli_[i] > 0 && (x[i] < 0 || x[i] >= moduli_[i])) return false;
  return true;
}

bool lex_less(const GroupElement& a, const GroupElement& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

}  // namespace bhlab
