#pragma once

#include "bhlab/algebra.hpp"
#include "bhlab/binary_code.hpp"
#include "bhlab/caps.hpp"
#include "bhlab/group.hpp"

#include <cstdint>
#include <vector>

namespace bhlab {

struct BhSetResidues {
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> elements;
  int h = 0;

  AbelianAmbient ambient() const { return AbelianAmbient::residues(modulus); }
  std::vector<GroupElement> group_elements() const;
};

struct BhSetFieldVectors {
  FieldPtr field;
  int h = 0;
  std::vector<std::vector<FieldElement>> elements;

  /// GF(q)^h flattened to (Z/p)^{h e}.
  AbelianAmbient ambient() const;
  std::vector<GroupElement> group_elements() const;
};

/// {log_alpha(alpha + x) : x in GF(q)} in Z/(q^h - 1), sorted.
BhSetResidues bose_chowla(std::uint64_t q, int h, const Caps& caps = {});

/// {(x, x^2, ..., x^h) : x in GF(q)} in field-element index order.
BhSetFieldVectors power_map(std::uint64_t q, int h, const Caps& caps = {});

/// Bits per residue in Z/m: ceil(log2(m-1)), widened when m-1 is a power of two.
int residue_word_width(std::uint64_t m);

BinaryCode residues_to_binary(const BhSetResidues& s);
BinaryCode field_vectors_to_binary(const BhSetFieldVectors& s);

}  // namespace bhlab
