#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

namespace permsum::detail {

/// Counts over a contiguous integer window that grows on demand.
class DenseTally {
 public:
  using Key = std::int64_t;

  void add(Key key, std::uint64_t count) {
    reserve(key, key);
    counts_[static_cast<std::size_t>(key - lo_)] += count;
  }

  /// Grow the window to cover [lo, hi].
  void reserve(Key lo, Key hi) {
    if (counts_.empty()) {
      lo_ = lo;
      counts_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
      return;
    }
    const Key cur_hi = lo_ + static_cast<Key>(counts_.size()) - 1;
    if (lo < lo_) {
      counts_.insert(counts_.begin(), static_cast<std::size_t>(lo_ - lo), 0);
      lo_ = lo;
    }
    if (hi > cur_hi) counts_.resize(counts_.size() + static_cast<std::size_t>(hi - cur_hi), 0);
  }

  bool empty() const { return counts_.empty(); }
  Key lo() const { return lo_; }
  Key hi() const { return lo_ + static_cast<Key>(counts_.size()) - 1; }
  std::size_t cells() const { return counts_.size(); }

  /// f(key, count) for every nonzero cell, ascending.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < counts_.size(); ++i)
      if (counts_[i] != 0) f(lo_ + static_cast<Key>(i), counts_[i]);
  }

  /// Adds `other` shifted by `delta`, every count multiplied by `weight`.
  void add_shifted(const DenseTally& other, Key delta, std::uint64_t weight) {
    if (other.empty()) return;
    reserve(other.lo() + delta, other.hi() + delta);
    const std::size_t offset = static_cast<std::size_t>(other.lo() + delta - lo_);
    for (std::size_t i = 0; i < other.counts_.size(); ++i) counts_[offset + i] += other.counts_[i] * weight;
  }

  void merge(const DenseTally& other) { add_shifted(other, 0, 1); }

  void clear() {
    counts_.clear();
    counts_.shrink_to_fit();
  }

 private:
  Key lo_ = 0;
  std::vector<std::uint64_t> counts_;
};

/// Sparse counts keyed by an arbitrary integer type.
template <class K>
class SparseTally {
 public:
  using Key = K;

  void add(const Key& key, std::uint64_t count) { counts_[key] += count; }

  void add_shifted(const SparseTally& other, const Key& delta, std::uint64_t weight) {
    for (const auto& [k, c] : other.counts_) counts_[k + delta] += c * weight;
  }

  void merge(const SparseTally& other) {
    for (const auto& [k, c] : other.counts_) counts_[k] += c;
  }

  bool empty() const { return counts_.empty(); }
  std::size_t cells() const { return counts_.size(); }

  template <class F>
  void for_each(F&& f) const {
    if constexpr (std::is_integral_v<Key>) {
      std::vector<std::pair<Key, std::uint64_t>> sorted(counts_.begin(), counts_.end());
      std::sort(sorted.begin(), sorted.end());
      for (const auto& [k, c] : sorted) f(k, c);
    } else {
      for (const auto& [k, c] : counts_) f(k, c);
    }
  }

  void clear() { counts_.clear(); }

 private:
  using Map = std::conditional_t<std::is_integral_v<Key>, std::unordered_map<Key, std::uint64_t>,
                                 std::map<Key, std::uint64_t>>;
  Map counts_;
};

/// Materialize any tally as an ordered key -> count map.
template <class Tally>
auto to_ordered(const Tally& tally) {
  std::map<typename Tally::Key, std::uint64_t> out;
  tally.for_each([&](const auto& k, std::uint64_t c) { out[k] += c; });
  return out;
}

}  // namespace permsum::detail
