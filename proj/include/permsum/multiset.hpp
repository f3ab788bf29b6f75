#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace permsum {

/// A finite multiset of rationals, stored as distinct values (ascending)
/// with multiplicities.
class WeightedMultiset {
 public:
  struct Entry {
    Rational value;
    std::size_t multiplicity = 0;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  WeightedMultiset() = default;

  /// Repetition in `values` encodes multiplicity. Throws InvalidInput on empty input.
  explicit WeightedMultiset(std::vector<Rational> values) {
    if (values.empty()) throw InvalidInput("multiset must be nonempty");
    std::sort(values.begin(), values.end());
    for (auto& v : values) {
      if (!entries_.empty() && entries_.back().value == v)
        ++entries_.back().multiplicity;
      else
        entries_.push_back({std::move(v), 1});
    }
    size_ = std::accumulate(entries_.begin(), entries_.end(), std::size_t{0},
                            [](std::size_t acc, const Entry& e) { return acc + e.multiplicity; });
  }

  template <class T>
    requires std::is_integral_v<T>
  static WeightedMultiset of(std::initializer_list<T> values) {
    std::vector<Rational> v;
    for (T x : values) v.emplace_back(x);
    return WeightedMultiset(std::move(v));
  }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return size_; }
  std::size_t distinct_count() const { return entries_.size(); }
  bool is_set() const { return entries_.size() == size_; }
  bool is_constant() const { return entries_.size() == 1; }
  bool all_integer() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return is_integer(e.value); });
  }

  /// Every element listed with repetition, ascending.
  std::vector<Rational> expanded() const {
    std::vector<Rational> out;
    out.reserve(size_);
    for (const auto& e : entries_) out.insert(out.end(), e.multiplicity, e.value);
    return out;
  }

  Rational sum() const {
    Rational s = 0;
    for (const auto& e : entries_) s += e.value * e.multiplicity;
    return s;
  }

  friend bool operator==(const WeightedMultiset&, const WeightedMultiset&) = default;

 private:
  std::vector<Entry> entries_;
  std::size_t size_ = 0;
};

/// mu(B) sorted nonincreasing, plus M(B) = sum_i (i-1)^2 mu_i.
struct MultiplicityProfile {
  std::vector<std::size_t> parts;
  std::size_t n = 0;
  BigInt M = 0;

  std::size_t distinct_count() const { return parts.size(); }
  friend bool operator==(const MultiplicityProfile&, const MultiplicityProfile&) = default;
};

/// M for an arbitrary nonincreasing partition. Exact.
inline BigInt diversity_statistic(const std::vector<std::size_t>& parts) {
  BigInt m = 0;
  for (std::size_t i = 1; i < parts.size(); ++i) m += BigInt(i) * i * parts[i];
  return m;
}

inline BigInt diversity_statistic(const MultiplicityProfile& profile) { return diversity_statistic(profile.parts); }

inline void require_partition(const std::vector<std::size_t>& lambda) {
  if (lambda.empty()) throw InvalidInput("partition must be nonempty");
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (lambda[i] == 0) throw InvalidInput("partition parts must be positive");
    if (i > 0 && lambda[i] > lambda[i - 1]) throw InvalidInput("partition parts must be nonincreasing");
  }
}

inline MultiplicityProfile multiplicity_profile(const WeightedMultiset& b) {
  if (b.size() == 0) throw InvalidInput("multiplicity profile of an empty multiset");
  MultiplicityProfile p;
  p.n = b.size();
  for (const auto& e : b.entries()) p.parts.push_back(e.multiplicity);
  std::sort(p.parts.begin(), p.parts.end(), std::greater<>{});
  p.M = diversity_statistic(p.parts);
  return p;
}

/// lambda_i copies of the value i-1.
inline WeightedMultiset staircase(const std::vector<std::size_t>& lambda) {
  require_partition(lambda);
  std::vector<Rational> values;
  for (std::size_t i = 0; i < lambda.size(); ++i) values.insert(values.end(), lambda[i], Rational(i));
  return WeightedMultiset(std::move(values));
}

/// {1, 2, ..., n}.
inline WeightedMultiset uniform_grid(std::size_t n) {
  if (n == 0) throw InvalidInput("uniform grid needs n >= 1");
  std::vector<Rational> values;
  for (std::size_t i = 1; i <= n; ++i) values.emplace_back(i);
  return WeightedMultiset(std::move(values));
}

/// A = {1..floor(n/2)} plus ceil(n/2) zeros, B = {1, 0, ..., 0}: the sum is a
/// uniform element of A, so Q >= 1/2 while M(A)M(B) is only of order n^3.
inline std::pair<WeightedMultiset, WeightedMultiset> counterexample_pair(std::size_t n) {
  if (n < 2) throw InvalidInput("counterexample family needs n >= 2");
  std::vector<Rational> a(n - n / 2, Rational(0));
  for (std::size_t i = 1; i <= n / 2; ++i) a.emplace_back(i);
  std::vector<Rational> b(n, Rational(0));
  b[0] = 1;
  return {WeightedMultiset(std::move(a)), WeightedMultiset(std::move(b))};
}

/// m disjoint copies of an r-element set inside a multiset, chosen so that
/// m * r^3 * ln(n) >= M.
struct Decomposition {
  std::size_t m = 0;
  std::size_t r = 0;
  std::vector<Rational> witness;
  /// 1-based position i in the profile; equals r.
  std::size_t chosen_index = 0;
};

inline Decomposition decompose(const WeightedMultiset& a) {
  const std::size_t n = a.size();
  if (n < 3) throw InvalidInput("decompose requires n >= 3");
  const auto profile = multiplicity_profile(a);
  if (profile.M == 0) throw NoDiversity("decompose requires at least two distinct values (M = 0)");

  const Real log_n = boost::multiprecision::log(Real(n));
  const Real target(profile.M);
  for (std::size_t i = 2; i <= profile.parts.size(); ++i) {
    const std::size_t mu = profile.parts[i - 1];
    if (Real(BigInt(i) * i * i * mu) * log_n < target) continue;

    std::vector<WeightedMultiset::Entry> by_freq = a.entries();
    std::stable_sort(by_freq.begin(), by_freq.end(),
                     [](const auto& x, const auto& y) { return x.multiplicity > y.multiplicity; });
    Decomposition d;
    d.m = mu;
    d.r = i;
    d.chosen_index = i;
    for (std::size_t k = 0; k < i; ++k) d.witness.push_back(by_freq[k].value);
    return d;
  }
  // sum_{i>=2} (i-1)^2/i^3 < ln n rules this out for every n >= 2.
  throw std::logic_error("decompose: no index satisfies i^3 mu_i ln n >= M");
}

}  // namespace permsum
