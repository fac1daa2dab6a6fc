#include "bhlab/binary_code.hpp"

#include "bhlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bhlab {

PackedWords::PackedWords(int n) : n_(n), limbs_((n + 63) / 64) {
  if (n < 0) throw Error(Errc::invalid_params, "negative word length");
}

void PackedWords::push_back(std::string_view bits) {
  if (static_cast<int>(bits.size()) != n_)
    throw Error(Errc::parse_error, "word '" + std::string(bits) + "' has length " + std::to_string(bits.size()) + ", expected " + std::to_string(n_));
  if (limbs_ == 0) {
    ++count_;
    return;
  }
  const std::size_t base = data_.size();
  data_.resize(base + limbs_, 0);
  for (int j = 0; j < n_; ++j) {
    if (bits[j] == '1')
      data_[base + j / 64] |= std::uint64_t{1} << (j % 64);
    else if (bits[j] != '0')
      throw Error(Errc::parse_error, "word '" + std::string(bits) + "' is not a 0/1 string");
  }
}

void PackedWords::push_back_limbs(const std::uint64_t* limbs) {
  if (limbs_ == 0) {
    ++count_;
    return;
  }
  data_.insert(data_.end(), limbs, limbs + limbs_);
}

void PackedWords::push_back_word(std::uint64_t word) {
  if (n_ > 64) throw Error(Errc::invalid_params, "push_back_word needs n <= 64");
  if (n_ < 64) word &= (std::uint64_t{1} << n_) - 1;
  push_back_limbs(&word);
}

std::uint64_t PackedWords::word64(std::size_t i) const {
  if (n_ > 64) throw Error(Errc::invalid_params, "word64 needs n <= 64");
  return limbs_ ? data_[i] : 0;
}

std::string PackedWords::to_string(std::size_t i) const {
  std::string s(n_, '0');
  for (int j = 0; j < n_; ++j)
    if (bit(i, j)) s[j] = '1';
  return s;
}

GroupElement PackedWords::to_group_element(std::size_t i) const {
  GroupElement v(n_);
  for (int j = 0; j < n_; ++j) v[j] = bit(i, j);
  return v;
}

std::vector<GroupElement> PackedWords::to_group_elements() const {
  std::vector<GroupElement> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(to_group_element(i));
  return out;
}

PackedWords PackedWords::select(const std::vector<std::size_t>& keep) const {
  PackedWords out(n_);
  out.reserve(keep.size());
  for (std::size_t i : keep) out.push_back_limbs(limb_ptr(i));
  if (limbs_ == 0) out.count_ = keep.size();
  return out;
}

bool PackedWords::has_duplicates() const {
  if (limbs_ == 0) return size() > 1;
  std::vector<std::size_t> order(size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  auto cmp = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(limb_ptr(a), limb_ptr(a) + limbs_, limb_ptr(b), limb_ptr(b) + limbs_);
  };
  std::sort(order.begin(), order.end(), cmp);
  for (std::size_t i = 1; i < order.size(); ++i)
    if (std::equal(limb_ptr(order[i - 1]), limb_ptr(order[i - 1]) + limbs_, limb_ptr(order[i]))) return true;
  return false;
}

BinaryCode::BinaryCode(PackedWords words) : words_(std::move(words)) {
  if (words_.has_duplicates()) throw Error(Errc::invalid_params, "a code cannot contain duplicate words");
}

double BinaryCode::rate() const {
  if (size() == 0 || length() == 0) return 0.0;
  return std::log2(static_cast<double>(size())) / length();
}

CodeFile read_code(std::istream& in) {
  CodeFile file;
  std::string line;
  bool have_header = false;
  int n = -1;
  std::vector<std::string> pending;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!have_header && line.rfind("n=", 0) == 0) {
      std::istringstream hs(line);
      std::string tok;
      while (hs >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw Error(Errc::parse_error, "bad header token '" + tok + "'");
        auto key = tok.substr(0, eq);
        auto value = tok.substr(eq + 1);
        try {
          if (key == "n") n = std::stoi(value);
          else if (key == "h") file.h = std::stoi(value);
          else if (key == "source") file.source = value;
        } catch (const std::exception&) {
          throw Error(Errc::parse_error, "bad header value '" + tok + "'");
        }
      }
      have_header = true;
      continue;
    }
    have_header = true;
    pending.push_back(line);
  }
  if (n < 0) {
    if (pending.empty()) throw Error(Errc::parse_error, "empty code file without header");
    n = static_cast<int>(pending.front().size());
  }
  file.words = PackedWords(n);
  file.words.reserve(pending.size());
  for (const auto& w : pending) file.words.push_back(w);
  return file;
}

CodeFile read_code_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path);
  return read_code(in);
}

void write_code(std::ostream& out, const PackedWords& words, int h, std::string_view source) {
  out << "n=" << words.length() << " h=" << h << " source=" << source << '\n';
  for (std::size_t i = 0; i < words.size(); ++i) out << words.to_string(i) << '\n';
}

}  // namespace bhlab
