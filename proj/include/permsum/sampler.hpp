#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include "distribution.hpp"
#include "enumerate.hpp"
#include "multiset.hpp"
#include "rational.hpp"
#include "tally.hpp"

namespace permsum {

/// SplitMix64. The state walks the full 2^64 cycle in steps of an odd
/// constant, so streams started at different offsets of that cycle are
/// disjoint until one of them has drawn past the offset gap.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++draws_;
    return mix(state_ += kGamma);
  }

  std::uint64_t draws() const { return draws_; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
  std::uint64_t draws_ = 0;
};

/// Uniform on [0, bound) without modulo bias (multiply-shift with rejection).
template <class Gen>
std::uint64_t uniform_below(Gen& gen, std::uint64_t bound) {
  unsigned __int128 m = static_cast<unsigned __int128>(gen()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(gen()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Fisher-Yates: every permutation of [0, n) with probability 1/n!.
template <class Gen>
void shuffle_in_place(std::vector<std::size_t>& perm, Gen& gen) {
  for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[uniform_below(gen, i)]);
}

struct SampleConfig {
  std::uint64_t seed = 0;
  std::uint64_t samples = 10'000;
  unsigned workers = 1;
};

/// Samples are drawn in fixed-size chunks; chunk k owns the generator
/// segment starting kChunkStride draws after chunk k-1. Tallies are merged
/// by exact value, so the result depends on (seed, samples) only.
inline constexpr std::uint64_t kChunkSamples = 4096;
inline constexpr std::uint64_t kChunkStride = std::uint64_t{1} << 32;

inline SplitMix64 chunk_generator(std::uint64_t seed, std::uint64_t chunk) {
  return SplitMix64(SplitMix64::mix(seed) + chunk * kChunkStride * SplitMix64::kGamma);
}

namespace detail {

template <class Int, class Tally>
void sample_chunk(const std::vector<Int>& a, const std::vector<Int>& b, std::uint64_t seed, std::uint64_t chunk,
                  std::uint64_t count, Tally& tally) {
  auto gen = chunk_generator(seed, chunk);
  std::vector<std::size_t> perm(a.size());
  for (std::uint64_t t = 0; t < count; ++t) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    shuffle_in_place(perm, gen);
    Int sum = 0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[perm[i]];
    tally.add(sum, 1);
  }
  if (gen.draws() >= kChunkStride) throw std::logic_error("sampler chunk overran its generator segment");
}

template <class Int>
auto sample_tally(const std::vector<Int>& a, const std::vector<Int>& b, const SampleConfig& cfg) {
  const std::uint64_t chunks = (cfg.samples + kChunkSamples - 1) / kChunkSamples;
  const unsigned workers = std::max(1u, static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, chunks)));
  std::vector<SparseTally<Int>> partial(workers);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::uint64_t k = w; k < chunks; k += workers) {
          const std::uint64_t count = std::min(kChunkSamples, cfg.samples - k * kChunkSamples);
          sample_chunk(a, b, cfg.seed, k, count, partial[w]);
        }
      });
  }
  for (unsigned w = 1; w < workers; ++w) partial[0].merge(partial[w]);
  return to_ordered(partial[0]);
}

}  // namespace detail

/// Empirical law of N sampled permutation sums, tallied by exact value;
/// total = N.
inline ExactDistribution sample_distribution(const WeightedMultiset& a, const WeightedMultiset& b,
                                             const SampleConfig& cfg) {
  detail::require_same_size(a, b);
  if (cfg.samples == 0) throw InvalidInput("sampler needs at least one sample");
  const auto sa = scale_to_integers(a.expanded());
  const auto sb = scale_to_integers(b.expanded());
  const BigInt scale = sa.scale * sb.scale;
  if (detail::sum_magnitude_bound(sa.values, sb.values) <= detail::int64_sum_guard())
    return distribution_from_scaled(
        detail::sample_tally(narrow_to_int64(sa.values), narrow_to_int64(sb.values), cfg), scale, cfg.samples);
  return distribution_from_scaled(detail::sample_tally(sa.values, sb.values, cfg), scale, cfg.samples);
}

/// q_hat = (largest tally) / N. This upper-biases Q whenever the true mode
/// is not the most frequent bin in the sample; the Wilson interval treats
/// the chosen bin as a fixed binomial proportion and is heuristic for that
/// reason.
struct QEstimate {
  Rational q_hat;
  Rational mode_value;
  double ci_low = 0;
  double ci_high = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Two-sided Wilson score interval for k successes in N trials.
inline std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t trials, double z = 1.959963984540054) {
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

inline QEstimate estimate_q(const WeightedMultiset& a, const WeightedMultiset& b, const SampleConfig& cfg) {
  const auto empirical = sample_distribution(a, b, cfg);
  const auto mode = max_point_mass(empirical);
  QEstimate est;
  est.q_hat = mode.q;
  est.mode_value = mode.argmax_value;
  est.samples = cfg.samples;
  est.seed = cfg.seed;
  if (a.is_constant() || b.is_constant()) {
    // the sum is deterministic
    est.ci_low = est.ci_high = 1.0;
    return est;
  }
  const auto hits = empirical.atoms.at(mode.argmax_value).convert_to<std::uint64_t>();
  std::tie(est.ci_low, est.ci_high) = wilson_interval(hits, cfg.samples);
  const double q = to_real(est.q_hat).convert_to<double>();
  est.ci_low = std::min(est.ci_low, q);
  est.ci_high = std::max(est.ci_high, q);
  return est;
}

}  // namespace permsum
