#pragma once

#include "bhlab/binary_code.hpp"
#include "bhlab/caps.hpp"
#include "bhlab/distribution.hpp"
#include "bhlab/oracle.hpp"
#include "bhlab/rational.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bhlab {

/// Words of length n made of n/n0 i.i.d. blocks; B_h when g == 1, B_h[g] otherwise.
struct SamplingPlan {
  int n = 0;
  int n0 = 1;
  Distribution<Rational> dist = Distribution<Rational>::uniform_bits(1);
  std::uint64_t t = 0;
  std::uint64_t seed = 0;
  int h = 2;
  int g = 1;

  void validate() const;
};

struct ChooseT {
  std::uint64_t t = 0;
  bool infeasible = false;
  double log2_expected = 0;  // log2 E(t) at the returned t
};

/// Largest t with E(t) <= t/2, E(t) = sum_C t(t-1)...(t-d+1) p(C)^{n/n0}.
ChooseT choose_t(const SamplingPlan& plan, const Caps& caps = {});
/// Expected number of labeled minimal violations at population t.
Rational expected_violations(const SamplingPlan& plan, std::uint64_t t, const Caps& caps = {});

/// Deterministic in (seed, attempt); word i uses its own substream.
PackedWords sample_code(const SamplingPlan& plan, std::uint64_t attempt = 0);

struct ConstructionStats {
  int n = 0, n0 = 1, h = 0, g = 1;
  std::uint64_t seed = 0;
  std::uint64_t t = 0;
  int attempts = 0;
  std::size_t violations_found = 0;
  std::vector<std::size_t> violations_per_k;  // index k
  std::map<std::string, std::size_t> violations_per_class;
  std::size_t words_removed = 0;
  std::size_t final_size = 0;
  double final_rate = 0;
  std::string verdict;
};

struct Construction {
  BinaryCode code;
  ConstructionStats stats;
};

/// Removes the least index of the lexicographically least surviving minimal violation until none remain.
Construction prune(const PackedWords& words, int h, int g = 1, const OracleOptions& opts = {});

struct ConstructOptions {
  int n0 = 1;
  std::optional<Distribution<Rational>> dist;
  int g = 1;
  int attempts = 5;
  OracleOptions oracle;
};

Construction construct(int h, int n, std::uint64_t seed, const ConstructOptions& options = {});

nlohmann::json to_json(const ConstructionStats& s);

}  // namespace bhlab
