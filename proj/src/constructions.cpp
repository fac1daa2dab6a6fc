#include "bhlab/constructions.hpp"

#include "bhlab/errors.hpp"

#include <algorithm>
#include <bit>

namespace bhlab {

std::vector<GroupElement> BhSetResidues::group_elements() const {
  std::vector<GroupElement> out;
  out.reserve(elements.size());
  for (auto r : elements) out.push_back(GroupElement::Constant(1, static_cast<std::int64_t>(r)));
  return out;
}

AbelianAmbient BhSetFieldVectors::ambient() const {
  return AbelianAmbient::field_vectors(field->characteristic(), h * field->degree());
}

std::vector<GroupElement> BhSetFieldVectors::group_elements() const {
  const int e = field->degree();
  std::vector<GroupElement> out;
  out.reserve(elements.size());
  for (const auto& v : elements) {
    GroupElement g(h * e);
    for (int i = 0; i < h; ++i)
      for (int j = 0; j < e; ++j) g[i * e + j] = static_cast<std::int64_t>(v[i].coefficients()[j]);
    out.push_back(std::move(g));
  }
  return out;
}

BhSetResidues bose_chowla(std::uint64_t q, int h, const Caps& caps) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  factor_prime_power(q);
  const std::uint64_t order = checked_power(q, h, caps.field_order);
  if (order - 1 <= 1) throw Error(Errc::degenerate_modulus, "q^h - 1 = " + std::to_string(order - 1));
  if (h == 1) throw Error(Errc::invalid_params, "h = 1 leaves alpha inside GF(q), so alpha + x vanishes for one x");
  FieldElement alpha = find_degree_h_primitive(q, h, caps);
  BhSetResidues s;
  s.modulus = order - 1;
  s.h = h;
  for (const auto& x : subfield_elements(alpha, q)) s.elements.push_back(discrete_log(alpha, alpha + x).value);
  std::sort(s.elements.begin(), s.elements.end());
  return s;
}

BhSetFieldVectors power_map(std::uint64_t q, int h, const Caps& caps) {
  if (h < 1) throw Error(Errc::invalid_params, "h must be at least 1");
  FieldPtr field = make_field(q, caps);
  if (field->characteristic() <= static_cast<std::uint64_t>(h))
    throw Error(Errc::characteristic_too_small, "characteristic " + std::to_string(field->characteristic()) + " <= h = " + std::to_string(h));
  BhSetFieldVectors s;
  s.field = field;
  s.h = h;
  for (std::uint64_t idx = 0; idx < q; ++idx) {
    FieldElement x = field->element(idx);
    std::vector<FieldElement> v;
    FieldElement power = x;
    for (int i = 0; i < h; ++i) {
      v.push_back(power);
      power = power * x;
    }
    s.elements.push_back(std::move(v));
  }
  return s;
}

int residue_word_width(std::uint64_t m) {
  if (m < 2) throw Error(Errc::degenerate_modulus, "modulus " + std::to_string(m) + " < 2");
  const std::uint64_t top = m - 1;
  int w = 0;
  while ((std::uint64_t{1} << w) < top) ++w;
  return std::max(w, static_cast<int>(std::bit_width(top)));
}

BinaryCode residues_to_binary(const BhSetResidues& s) {
  const int w = residue_word_width(s.modulus);
  PackedWords words(w);
  for (auto r : s.elements) {
    std::string bits(w, '0');
    for (int j = 0; j < w; ++j)
      if ((r >> (w - 1 - j)) & 1u) bits[j] = '1';
    words.push_back(bits);
  }
  return BinaryCode(std::move(words));
}

BinaryCode field_vectors_to_binary(const BhSetFieldVectors& s) {
  if (!s.field->is_prime_field())
    throw Error(Errc::non_prime_field_unsupported, "binary embedding needs a prime field, got order " + std::to_string(s.field->order()));
  const int b = std::bit_width(s.field->order() - 1);
  PackedWords words(b * s.h);
  for (const auto& v : s.elements) {
    std::string bits(b * s.h, '0');
    for (int i = 0; i < s.h; ++i) {
      const std::uint64_t c = v[i].coefficients()[0];
      for (int j = 0; j < b; ++j)
        if ((c >> (b - 1 - j)) & 1u) bits[i * b + j] = '1';
    }
    words.push_back(bits);
  }
  return BinaryCode(std::move(words));
}

}  // namespace bhlab
