#pragma once

#include "bhlab/group.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bhlab {

/// Multiset of length-n bit-words packed into 64-bit limbs. Coordinate j is bit j%64 of limb j/64
/// and the j-th character of the text form.
class PackedWords {
 public:
  PackedWords() = default;
  explicit PackedWords(int n);

  int length() const { return n_; }
  int limbs() const { return limbs_; }
  std::size_t size() const { return limbs_ ? data_.size() / limbs_ : count_; }
  bool empty() const { return size() == 0; }

  void push_back(std::string_view bits);
  void push_back_limbs(const std::uint64_t* limbs);
  void push_back_word(std::uint64_t word);
  void reserve(std::size_t words) { data_.reserve(words * limbs_); }

  bool bit(std::size_t i, int j) const { return (data_[i * limbs_ + j / 64] >> (j % 64)) & 1u; }
  const std::uint64_t* limb_ptr(std::size_t i) const { return data_.data() + i * limbs_; }
  std::uint64_t word64(std::size_t i) const;
  std::string to_string(std::size_t i) const;
  GroupElement to_group_element(std::size_t i) const;
  std::vector<GroupElement> to_group_elements() const;

  PackedWords select(const std::vector<std::size_t>& keep) const;
  bool has_duplicates() const;

  bool operator==(const PackedWords& o) const { return n_ == o.n_ && data_ == o.data_ && size() == o.size(); }

 private:
  int n_ = 0;
  int limbs_ = 0;
  std::size_t count_ = 0;  // only used when n == 0
  std::vector<std::uint64_t> data_;
};

/// Set of distinct equal-length bit-words.
class BinaryCode {
 public:
  BinaryCode() = default;
  explicit BinaryCode(PackedWords words);

  int length() const { return words_.length(); }
  std::size_t size() const { return words_.size(); }
  const PackedWords& words() const { return words_; }
  double rate() const;

  bool operator==(const BinaryCode& o) const { return words_ == o.words_; }

 private:
  PackedWords words_;
};

struct CodeFile {
  PackedWords words;
  int h = 0;
  std::string source;
};

/// Header "n=<n> h=<h> source=<tag>" followed by one 0/1 word per line.
CodeFile read_code(std::istream& in);
CodeFile read_code_file(const std::string& path);
void write_code(std::ostream& out, const PackedWords& words, int h, std::string_view source);

}  // namespace bhlab
