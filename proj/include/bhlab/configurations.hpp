#pragma once

#include "bhlab/caps.hpp"
#include "bhlab/distribution.hpp"
#include "bhlab/rational.hpp"

#include <json.hpp>

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace bhlab {

/// k x l matrix of variables up to column swaps and within-column swaps.
class Configuration {
 public:
  Configuration() = default;

  /// Columns are size-k multisets of arbitrary variable ids; the result is canonical.
  static Configuration from_columns(const std::vector<std::vector<int>>& columns);

  int rows() const { return k_; }
  int cols() const { return l_; }
  int variables() const { return d_; }
  /// Canonical display form: sorted columns, variables numbered by first occurrence.
  const std::vector<std::vector<int>>& columns() const { return columns_; }
  /// Multiplicity of each variable in each column (variables x columns).
  std::vector<std::vector<int>> multiplicities() const;

  /// No variable in every column and no two equal columns.
  bool is_valid() const;
  /// No variable in two or more columns.
  bool is_separable() const;

  /// Letters for small configurations, e.g. "(aa|ab|bb)"; numeric ids beyond 26 variables.
  std::string str() const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.k_ == b.k_ && a.l_ == b.l_ && a.key_ == b.key_;
  }
  /// Shape, then d(C), then canonical key.
  friend std::strong_ordering operator<=>(const Configuration& a, const Configuration& b);

 private:
  int k_ = 0, l_ = 0, d_ = 0;
  std::vector<std::uint64_t> key_;
  std::vector<std::vector<int>> columns_;
};

struct ConfStats {
  int d = 0;
  ExactProbability p;
};

/// Conf(k,l); options to drop configurations with more than `max_variables` variables.
std::vector<Configuration> enumerate_conf(int k, int l, const Caps& caps = {}, int max_variables = -1);
std::vector<Configuration> enumerate_conf_upto(int h, int l, const Caps& caps = {});
std::vector<Configuration> enumerate_sconf(int k, int l, const Caps& caps = {});
std::vector<Configuration> enumerate_sconf_upto(int h, int l, const Caps& caps = {});
/// Conf^#(<= h)[d] with l <= caps.sharp_columns.
std::vector<Configuration> enumerate_conf_sharp(int h, int d, const Caps& caps = {});

/// Exhaustive over the 2^d(C) assignments of uniform bits.
ConfStats conf_stats(const Configuration& c, const Caps& caps = {});
/// Exhaustive over assignments of i.i.d. draws from `dist`.
ConfStats conf_stats_general(const Configuration& c, const Distribution<Rational>& dist, const Caps& caps = {});

/// All-distinct configuration of shape (h,l).
Configuration cmax(int h, int l);
/// 2^{-d(g+1)} sum_i binom(d,i)^{g+1}.
ExactProbability cmax_p_closed(int d, int g);
/// Column (a_1..a_h) against columns (c_j, b_2..b_h), j = 2..g+1.
Configuration special_block_config(int h, int g);

nlohmann::json to_json(const Configuration& c, const ConfStats& stats);

}  // namespace bhlab
