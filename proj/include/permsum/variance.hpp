#pragma once

#include "enumerate.hpp"
#include "errors.hpp"
#include "multiset.hpp"
#include "rational.hpp"

namespace permsum {

/// sum (x - mean)^2 over the multiset, with repetition.
inline Rational centered_sum_of_squares(const WeightedMultiset& x) {
  const Rational mean = x.sum() / x.size();
  Rational s = 0;
  for (const auto& e : x.entries()) s += (e.value - mean) * (e.value - mean) * e.multiplicity;
  return s;
}

/// Var(sum_i a_i b_pi(i)) = SS(A) * SS(B) / (n - 1) for uniform pi.
inline Rational exact_variance(const WeightedMultiset& a, const WeightedMultiset& b) {
  detail::require_same_size(a, b);
  if (a.size() < 2) throw InvalidInput("exact_variance requires n >= 2");
  return centered_sum_of_squares(a) * centered_sum_of_squares(b) / (a.size() - 1);
}

/// E[sum_i a_i b_pi(i)] = (sum A)(sum B) / n.
inline Rational exact_mean(const WeightedMultiset& a, const WeightedMultiset& b) {
  detail::require_same_size(a, b);
  return a.sum() * b.sum() / a.size();
}

}  // namespace permsum
