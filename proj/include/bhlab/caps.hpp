#pragma once

#include <cstdint>

namespace bhlab {

/// Enumeration limits shared by all modules. Every limit can be raised from the CLI.
struct Caps {
  std::uint64_t field_order = 1ull << 20;       // q^h for field constructions
  std::uint64_t multisets = 1ull << 26;         // in-memory oracle enumeration
  std::uint64_t streaming_multisets = 1ull << 34;
  int conf_cells = 18;                          // k*l in enumerate_conf
  int conf_variables = 24;                      // d(C) for exhaustive p(C)
  int sharp_columns = 8;                        // l in Conf^#
  std::uint64_t hfold_support = 1ull << 22;
};

}  // namespace bhlab
