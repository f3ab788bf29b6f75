#pragma once

#include <cstddef>
#include <cstdint>

namespace permsum {

/// Hard ceiling for the exact engines: n! must fit in a 64-bit count.
inline constexpr std::size_t kMaxExactSize = 20;

struct EngineLimits {
  /// Largest n for full permutation enumeration (11! ~ 4e7).
  std::size_t enum_cap = 11;
  /// Largest n for the subset dynamic program.
  std::size_t dp_cap = 16;
  /// Upper bound on tally memory held by the subset dynamic program.
  std::size_t memory_budget_bytes = std::size_t{2} << 30;
  /// Iteration budget for brute-force tuple counting.
  std::uint64_t iteration_budget = 1'000'000'000;
  unsigned workers = 1;
};

}  // namespace permsum
