#pragma once

#include "bhlab/oracle.hpp"

namespace bhlab::detail {

/// Exact collision classes of size-k multisets of words with n <= 64, streaming by prefix groups.
std::vector<SumClass> streaming_collision_classes(const PackedWords& words, int k, std::size_t min_size,
                                                  const OracleOptions& opts);

}  // namespace bhlab::detail
