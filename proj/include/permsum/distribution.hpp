#pragma once

#include <cstddef>
#include <cstdint>
#include <map>

#include "errors.hpp"
#include "rational.hpp"

namespace permsum {

/// Exact law of a discrete random variable as value -> count with an
/// explicit total weight (n! for a permutation sum).
struct ExactDistribution {
  std::map<Rational, BigInt> atoms;
  BigInt total = 0;

  std::size_t support_size() const { return atoms.size(); }

  Rational probability(const Rational& value) const {
    auto it = atoms.find(value);
    return it == atoms.end() ? Rational(0) : Rational(it->second, total);
  }

  /// Counts positive and summing to total.
  bool consistent() const {
    BigInt s = 0;
    for (const auto& [v, c] : atoms) {
      if (c <= 0) return false;
      s += c;
    }
    return s == total && total > 0;
  }

  friend bool operator==(const ExactDistribution&, const ExactDistribution&) = default;
};

/// Integer-keyed tally scaled back to rationals: key k becomes k / scale.
template <class Tally>
ExactDistribution distribution_from_scaled(const Tally& tally, const BigInt& scale, const BigInt& total) {
  ExactDistribution d;
  d.total = total;
  for (const auto& [key, count] : tally) {
    if (count == 0) continue;
    d.atoms.emplace(Rational(BigInt(key), scale), BigInt(count));
  }
  return d;
}

/// Q = sup_x P[X = x], with the smallest maximizing value.
struct PointMassReport {
  Rational q;
  Rational argmax_value;
  std::size_t support_size = 0;
};

inline PointMassReport max_point_mass(const ExactDistribution& dist) {
  if (dist.atoms.empty() || dist.total <= 0) throw InvalidInput("max_point_mass of an empty distribution");
  const std::pair<const Rational, BigInt>* best = nullptr;
  for (const auto& atom : dist.atoms)  // ascending, so strict > keeps the smallest argmax
    if (best == nullptr || atom.second > best->second) best = &atom;
  return {Rational(best->second, dist.total), best->first, dist.atoms.size()};
}

inline Rational distribution_mean(const ExactDistribution& dist) {
  Rational s = 0;
  for (const auto& [v, c] : dist.atoms) s += v * c;
  return s / dist.total;
}

inline Rational distribution_variance(const ExactDistribution& dist) {
  const Rational mean = distribution_mean(dist);
  Rational s = 0;
  for (const auto& [v, c] : dist.atoms) s += (v - mean) * (v - mean) * c;
  return s / dist.total;
}

/// Law of f(X); atoms that collide under f are merged.
template <class F>
ExactDistribution pushforward(const ExactDistribution& dist, F&& f) {
  ExactDistribution out;
  out.total = dist.total;
  for (const auto& [v, c] : dist.atoms) out.atoms[f(v)] += c;
  return out;
}

}  // namespace permsum
