#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"
#include "limits.hpp"
#include "multiset.hpp"
#include "rational.hpp"
#include "tally.hpp"

namespace permsum {

namespace detail {

inline void require_same_size(const WeightedMultiset& a, const WeightedMultiset& b) {
  if (a.size() != b.size())
    throw InvalidInput("size mismatch: |A| = " + std::to_string(a.size()) + ", |B| = " + std::to_string(b.size()));
}

/// Largest magnitude of any sum of n products a_i * b_j kept in int64 arithmetic.
inline const BigInt& int64_sum_guard() {
  static const BigInt guard = BigInt(1) << 62;
  return guard;
}

/// Upper bound on |sum_i a_i b_pi(i)| over all permutations.
inline BigInt sum_magnitude_bound(const std::vector<BigInt>& a, const std::vector<BigInt>& b) {
  BigInt s = 0;
  for (const auto& x : a) s += abs(x);
  return s * max_abs(b);
}

/// All (n-1)! arrangements of B with b[first] pinned at position 0, via
/// Heap's algorithm. Each step is one transposition, so the running sum is
/// updated in O(1).
template <class Int, class Tally>
void enumerate_branch(const std::vector<Int>& a, const std::vector<Int>& b, std::size_t first, Tally& tally) {
  const std::size_t n = a.size();
  std::vector<Int> rest;
  rest.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j)
    if (j != first) rest.push_back(b[j]);

  Int sum = a[0] * b[first];
  for (std::size_t i = 0; i + 1 < n; ++i) sum += a[i + 1] * rest[i];
  tally.add(sum, 1);

  const std::size_t m = rest.size();
  std::vector<std::size_t> c(m, 0);
  std::size_t i = 0;
  while (i < m) {
    if (c[i] < i) {
      const std::size_t j = (i % 2 == 0) ? 0 : c[i];
      sum += (a[j + 1] - a[i + 1]) * (rest[i] - rest[j]);
      std::swap(rest[i], rest[j]);
      tally.add(sum, 1);
      ++c[i];
      i = 0;
    } else {
      c[i] = 0;
      ++i;
    }
  }
}

template <class Int, class MakeTally>
auto enumerate_all(const std::vector<Int>& a, const std::vector<Int>& b, unsigned workers, MakeTally make_tally) {
  const std::size_t n = a.size();
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  std::vector<decltype(make_tally())> partial;
  for (unsigned w = 0; w < workers; ++w) partial.push_back(make_tally());
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t first = w; first < n; first += workers) enumerate_branch(a, b, first, partial[w]);
      });
  }
  for (unsigned w = 1; w < workers; ++w) partial[0].merge(partial[w]);
  return std::move(partial[0]);
}

}  // namespace detail

/// Exact law of sum_i a_i b_pi(i) over all n! permutations, by direct
/// enumeration. Counts are per permutation, so total = n!.
inline ExactDistribution exact_distribution_enum(const WeightedMultiset& a, const WeightedMultiset& b,
                                                 const EngineLimits& limits = {}) {
  detail::require_same_size(a, b);
  const std::size_t n = a.size();
  if (n > limits.enum_cap || n > kMaxExactSize)
    throw ResourceLimit("n = " + std::to_string(n) + " exceeds the enumeration cap (" +
                        std::to_string(std::min(limits.enum_cap, kMaxExactSize)) + "); use the subset DP engine");

  const auto sa = scale_to_integers(a.expanded());
  const auto sb = scale_to_integers(b.expanded());
  const BigInt scale = sa.scale * sb.scale;
  const BigInt total = factorial(static_cast<unsigned>(n));
  const BigInt bound = detail::sum_magnitude_bound(sa.values, sb.values);

  if (bound <= detail::int64_sum_guard()) {
    const auto ai = narrow_to_int64(sa.values);
    const auto bi = narrow_to_int64(sb.values);
    const auto span = bound.convert_to<std::int64_t>();
    if (span <= (std::int64_t{1} << 22)) {
      auto tally = detail::enumerate_all(ai, bi, limits.workers, [span] {
        detail::DenseTally t;
        t.reserve(-span, span);
        return t;
      });
      return distribution_from_scaled(detail::to_ordered(tally), scale, total);
    }
    auto tally = detail::enumerate_all(ai, bi, limits.workers, [] { return detail::SparseTally<std::int64_t>{}; });
    return distribution_from_scaled(detail::to_ordered(tally), scale, total);
  }
  auto tally = detail::enumerate_all(sa.values, sb.values, limits.workers, [] { return detail::SparseTally<BigInt>{}; });
  return distribution_from_scaled(detail::to_ordered(tally), scale, total);
}

}  // namespace permsum
