#pragma once

#include "bhlab/binary_code.hpp"
#include "bhlab/caps.hpp"
#include "bhlab/group.hpp"

#include <json.hpp>

#include <chrono>
#include <cstddef>
#include <optional>
#include <vector>

namespace bhlab {

using IndexMultiset = std::vector<std::size_t>;

/// All size-k index multisets sharing one sum, members sorted lexicographically.
struct SumClass {
  GroupElement sum;
  std::vector<IndexMultiset> members;
};

/// Equal-sum columns. B_h: two disjoint multisets; B_h[g]: g+1 multisets; B_h^#: every multiset of one sum.
struct Violation {
  GroupElement sum;
  std::vector<IndexMultiset> columns;

  bool operator==(const Violation& o) const { return sum == o.sum && columns == o.columns; }
};

enum class Engine { automatic, hashed, streaming };

struct OracleOptions {
  Caps caps;
  Engine engine = Engine::automatic;
  int threads = 0;  // 0: BHLAB_THREADS or 1
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

int resolve_threads(int requested);

std::vector<SumClass> collision_classes(const std::vector<GroupElement>& elements, const AbelianAmbient& ambient,
                                        int k, std::size_t min_size, const OracleOptions& opts = {});
std::vector<SumClass> collision_classes(const PackedWords& words, int k, std::size_t min_size,
                                        const OracleOptions& opts = {});

std::optional<Violation> verify_bh(const std::vector<GroupElement>& elements, const AbelianAmbient& ambient, int h,
                                   const OracleOptions& opts = {});
std::optional<Violation> verify_bh(const PackedWords& words, int h, const OracleOptions& opts = {});
std::optional<Violation> verify_bh(const BinaryCode& code, int h, const OracleOptions& opts = {});

std::optional<Violation> verify_bhg(const std::vector<GroupElement>& elements, const AbelianAmbient& ambient, int h,
                                    int g, const OracleOptions& opts = {});
std::optional<Violation> verify_bhg(const PackedWords& words, int h, int g, const OracleOptions& opts = {});
std::optional<Violation> verify_bhg(const BinaryCode& code, int h, int g, const OracleOptions& opts = {});

std::optional<Violation> verify_bh_sharp(const std::vector<GroupElement>& elements, const AbelianAmbient& ambient,
                                         int h, int d, const OracleOptions& opts = {});
std::optional<Violation> verify_bh_sharp(const PackedWords& words, int h, int d, const OracleOptions& opts = {});
std::optional<Violation> verify_bh_sharp(const BinaryCode& code, int h, int d, const OracleOptions& opts = {});

/// Disjoint equal-sum pairs of k-multisets for k = 1..h, lexicographically sorted.
std::vector<Violation> find_minimal_violations(const std::vector<GroupElement>& elements,
                                               const AbelianAmbient& ambient, int h, const OracleOptions& opts = {});
std::vector<Violation> find_minimal_violations(const PackedWords& words, int h, const OracleOptions& opts = {});

/// (g+1)-sets of equal-sum k-multisets (k = 1..h) with no index common to all columns.
std::vector<Violation> find_minimal_violations_bhg(const std::vector<GroupElement>& elements,
                                                   const AbelianAmbient& ambient, int h, int g,
                                                   const OracleOptions& opts = {});
std::vector<Violation> find_minimal_violations_bhg(const PackedWords& words, int h, int g,
                                                   const OracleOptions& opts = {});

nlohmann::json to_json(const Violation& v);

}  // namespace bhlab
