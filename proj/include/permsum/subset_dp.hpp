#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "distribution.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "limits.hpp"
#include "multiset.hpp"
#include "rational.hpp"
#include "tally.hpp"

namespace permsum {

namespace detail {

/// Calls f(mask) for every k-element subset of the set bits of `pool`.
template <class F>
void for_each_k_subset(std::uint32_t pool, std::size_t k, F&& f) {
  std::vector<std::uint32_t> bits;
  for (std::uint32_t p = pool; p != 0; p &= p - 1) bits.push_back(p & -p);
  if (k > bits.size()) return;
  if (k == 0) {
    f(std::uint32_t{0});
    return;
  }
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    std::uint32_t mask = 0;
    for (std::size_t i : idx) mask |= bits[i];
    f(mask);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == bits.size() - k + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// State: the set of B positions already matched by the first distinct
/// values of A. Each distinct value v with multiplicity k claims a k-subset
/// U of the free positions and shifts the partial sum by v * sum_{j in U} b_j.
/// The k! matchings of identical copies of v onto U are folded into the
/// count as a multiplicative weight, so the final total is n!.
template <class Tally>
Tally subset_dp(const std::vector<std::pair<std::int64_t, std::size_t>>& a_blocks, const std::vector<std::int64_t>& b,
                std::size_t memory_budget_bytes) {
  const std::size_t n = b.size();
  const std::uint32_t full = n == 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << n) - 1;
  std::vector<Tally> layer(std::size_t{1} << n);
  layer[0].add(0, 1);
  std::vector<std::uint32_t> frontier{0};
  std::size_t live_cells = 1;

  for (const auto& [value, k] : a_blocks) {
    std::uint64_t weight = 1;
    for (std::size_t i = 2; i <= k; ++i) weight *= i;

    std::vector<std::uint32_t> next;
    for (std::uint32_t state : frontier) {
      const Tally& source = layer[state];
      for_each_k_subset(full & ~state, k, [&](std::uint32_t chosen) {
        std::int64_t bsum = 0;
        for (std::uint32_t p = chosen; p != 0; p &= p - 1) bsum += b[static_cast<std::size_t>(std::countr_zero(p))];
        Tally& target = layer[state | chosen];
        if (target.empty()) next.push_back(state | chosen);
        const std::size_t before = target.cells();
        target.add_shifted(source, value * bsum, weight);
        live_cells += target.cells() - before;
        if (live_cells * sizeof(std::uint64_t) * 2 > memory_budget_bytes)
          throw ResourceLimit("subset DP exceeded its memory budget (" + std::to_string(memory_budget_bytes) +
                              " bytes)");
      });
    }
    for (std::uint32_t state : frontier) {
      live_cells -= layer[state].cells();
      layer[state].clear();
    }
    frontier = std::move(next);
  }
  return std::move(layer[full]);
}

}  // namespace detail

/// Same law as exact_distribution_enum, computed by a subset dynamic program
/// over B's positions. Rational inputs are cleared to integers by the lcm of
/// their denominators and mapped back afterwards.
inline ExactDistribution exact_distribution_dp(const WeightedMultiset& a, const WeightedMultiset& b,
                                               const EngineLimits& limits = {}) {
  detail::require_same_size(a, b);
  const std::size_t n = a.size();
  if (n > limits.dp_cap || n > kMaxExactSize)
    throw ResourceLimit("n = " + std::to_string(n) + " exceeds the subset DP cap (" +
                        std::to_string(std::min(limits.dp_cap, kMaxExactSize)) + ")");

  std::vector<Rational> a_distinct;
  for (const auto& e : a.entries()) a_distinct.push_back(e.value);
  const auto sa = scale_to_integers(a_distinct);
  const auto sb = scale_to_integers(b.expanded());

  std::vector<BigInt> a_full;
  for (std::size_t i = 0; i < a_distinct.size(); ++i)
    a_full.insert(a_full.end(), a.entries()[i].multiplicity, sa.values[i]);
  const BigInt bound = detail::sum_magnitude_bound(a_full, sb.values);
  if (bound > detail::int64_sum_guard())
    throw ResourceLimit("subset DP: scaled integer sums exceed the 64-bit overflow guard; use enumeration");

  std::vector<std::pair<std::int64_t, std::size_t>> blocks;
  for (std::size_t i = 0; i < a_distinct.size(); ++i)
    blocks.emplace_back(sa.values[i].convert_to<std::int64_t>(), a.entries()[i].multiplicity);
  const auto bi = narrow_to_int64(sb.values);

  const BigInt scale = sa.scale * sb.scale;
  const BigInt total = factorial(static_cast<unsigned>(n));
  if (bound <= (BigInt(1) << 20)) {
    auto tally = detail::subset_dp<detail::DenseTally>(blocks, bi, limits.memory_budget_bytes);
    return distribution_from_scaled(detail::to_ordered(tally), scale, total);
  }
  auto tally = detail::subset_dp<detail::SparseTally<std::int64_t>>(blocks, bi, limits.memory_budget_bytes);
  return distribution_from_scaled(detail::to_ordered(tally), scale, total);
}

}  // namespace permsum
