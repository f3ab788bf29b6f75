#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "limits.hpp"
#include "multiset.hpp"
#include "rational.hpp"

namespace permsum {

/// c = (c_1, ..., c_s), s >= 2, all entries nonzero.
class CoefficientTuple {
 public:
  explicit CoefficientTuple(std::vector<std::int64_t> c) : c_(std::move(c)) {
    if (c_.size() < 2) throw InvalidInput("coefficient tuple needs s >= 2 entries");
    if (std::any_of(c_.begin(), c_.end(), [](std::int64_t x) { return x == 0; }))
      throw InvalidInput("coefficient tuple entries must be nonzero");
  }
  CoefficientTuple(std::initializer_list<std::int64_t> c) : CoefficientTuple(std::vector<std::int64_t>(c)) {}

  std::size_t s() const { return c_.size(); }
  const std::vector<std::int64_t>& values() const { return c_; }
  std::int64_t operator[](std::size_t k) const { return c_[k]; }

 private:
  std::vector<std::int64_t> c_;
};

/// Exact law of a rational-valued random variable; probabilities sum to 1.
struct ValueDistribution {
  std::map<Rational, Rational> atoms;

  bool normalized() const {
    Rational s = 0;
    for (const auto& [v, p] : atoms) {
      if (p <= 0) return false;
      s += p;
    }
    return s == 1;
  }
  Rational probability(const Rational& v) const {
    auto it = atoms.find(v);
    return it == atoms.end() ? Rational(0) : it->second;
  }
};

enum class EnergyMethod { convolution, brute, brute_distinct };

inline const char* to_string(EnergyMethod m) {
  switch (m) {
    case EnergyMethod::convolution: return "convolution";
    case EnergyMethod::brute: return "brute";
    case EnergyMethod::brute_distinct: return "brute_distinct";
  }
  return "?";
}

/// kappa = K / (n n')^{2s}. K is the raw tuple count (K_c, or K'_c for
/// brute_distinct). The distinct variant keeps the (n n')^{2s} normalization
/// rather than falling factorials.
struct EnergyReport {
  EnergyMethod method = EnergyMethod::convolution;
  std::vector<std::int64_t> c;
  Rational kappa;
  std::optional<BigInt> K;
  std::size_t n = 0;
  std::size_t n_prime = 0;
};

namespace detail {

/// Z = (A1 - A2)(B1 - B2) in integer units: value z stands for z / scale,
/// and counts are over the (n n')^2 equally likely index quadruples.
struct ZLaw {
  std::map<BigInt, BigInt> counts;
  BigInt scale = 1;
  BigInt outcomes = 1;
};

inline std::map<BigInt, BigInt> difference_counts(const WeightedMultiset& x, const IntegerScaling& scaled) {
  std::map<BigInt, BigInt> out;
  const auto& entries = x.entries();
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (std::size_t j = 0; j < entries.size(); ++j)
      out[scaled.values[i] - scaled.values[j]] += BigInt(entries[i].multiplicity) * entries[j].multiplicity;
  return out;
}

inline std::vector<Rational> distinct_values(const WeightedMultiset& x) {
  std::vector<Rational> v;
  for (const auto& e : x.entries()) v.push_back(e.value);
  return v;
}

inline ZLaw z_law(const WeightedMultiset& a, const WeightedMultiset& b) {
  const auto sa = scale_to_integers(distinct_values(a));
  const auto sb = scale_to_integers(distinct_values(b));
  const auto da = difference_counts(a, sa);
  const auto db = difference_counts(b, sb);
  ZLaw z;
  z.scale = sa.scale * sb.scale;
  z.outcomes = BigInt(a.size()) * a.size() * b.size() * b.size();
  for (const auto& [x, cx] : da)
    for (const auto& [y, cy] : db) z.counts[x * y] += cx * cy;
  return z;
}

}  // namespace detail

/// Exact law of (A1 - A2)(B1 - B2), A1, A2 iid uniform on A (with
/// multiplicity) and B1, B2 iid uniform on B.
inline ValueDistribution z_distribution(const WeightedMultiset& a, const WeightedMultiset& b) {
  const auto z = detail::z_law(a, b);
  ValueDistribution out;
  for (const auto& [v, c] : z.counts) out.atoms.emplace(Rational(v, z.scale), Rational(c, z.outcomes));
  return out;
}

/// sum_z P[Z = z]^2.
inline Rational collision_probability(const ValueDistribution& z) {
  Rational s = 0;
  for (const auto& [v, p] : z.atoms) s += p * p;
  return s;
}

/// kappa_c = P[c_1 Z_1 + ... + c_s Z_s = 0] by exact convolution. The first
/// s-1 scaled copies are convolved; the last factor is matched against the
/// accumulated law by lookup. Since the normalizer is (n n')^{2s}, the
/// resulting zero mass is exactly K_c.
inline EnergyReport kappa_convolution(const WeightedMultiset& a, const WeightedMultiset& b, const CoefficientTuple& c,
                                      const EngineLimits& limits = {}) {
  const auto z = detail::z_law(a, b);
  const std::size_t s = c.s();

  std::map<BigInt, BigInt> acc;
  for (const auto& [v, cnt] : z.counts) acc[v * c[0]] += cnt;
  for (std::size_t k = 1; k + 1 < s; ++k) {
    if (BigInt(acc.size()) * z.counts.size() > limits.iteration_budget)
      throw ResourceLimit("kappa convolution: intermediate support exceeds the iteration budget");
    std::map<BigInt, BigInt> next;
    for (const auto& [x, cx] : acc)
      for (const auto& [v, cv] : z.counts) next[x + v * c[k]] += cx * cv;
    acc = std::move(next);
  }
  BigInt zero_mass = 0;
  const std::int64_t last = c[s - 1];
  for (const auto& [v, cv] : z.counts) {
    auto it = acc.find(-(v * last));
    if (it != acc.end()) zero_mass += it->second * cv;
  }

  EnergyReport r;
  r.method = EnergyMethod::convolution;
  r.c = c.values();
  r.n = a.size();
  r.n_prime = b.size();
  r.K = zero_mass;
  r.kappa = Rational(zero_mass, boost::multiprecision::pow(z.outcomes, static_cast<unsigned>(s)));
  return r;
}

namespace detail {

/// Depth-first walk over the 4s-tuple (i_k, j_k, i'_k, j'_k)_k. With
/// `distinct`, all 2s indices into A are pairwise distinct and likewise for B.
template <class Int>
class TupleCounter {
 public:
  TupleCounter(const std::vector<Int>& a, const std::vector<Int>& b, const std::vector<std::int64_t>& c, bool distinct)
      : a_(a), b_(b), c_(c), distinct_(distinct) {}

  std::uint64_t count_with_first(std::size_t i1) const {
    std::uint64_t total = 0;
    const std::uint64_t used_a = std::uint64_t{1} << i1;
    for (std::size_t j = 0; j < a_.size(); ++j) {
      if (distinct_ && (used_a >> j & 1)) continue;
      const Int da = a_[i1] - a_[j];
      walk_b(0, da, used_a | (std::uint64_t{1} << j), 0, Int(0), total);
    }
    return total;
  }

 private:
  void walk_b(std::size_t k, const Int& da, std::uint64_t used_a, std::uint64_t used_b, const Int& partial,
              std::uint64_t& total) const {
    for (std::size_t ip = 0; ip < b_.size(); ++ip) {
      if (distinct_ && (used_b >> ip & 1)) continue;
      for (std::size_t jp = 0; jp < b_.size(); ++jp) {
        if (distinct_ && (jp == ip || (used_b >> jp & 1))) continue;
        const Int next = partial + Int(c_[k]) * da * (b_[ip] - b_[jp]);
        const std::uint64_t ub = used_b | (std::uint64_t{1} << ip) | (std::uint64_t{1} << jp);
        if (k + 1 == c_.size()) {
          if (next == 0) ++total;
        } else {
          walk_a(k + 1, used_a, ub, next, total);
        }
      }
    }
  }

  void walk_a(std::size_t k, std::uint64_t used_a, std::uint64_t used_b, const Int& partial,
              std::uint64_t& total) const {
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (distinct_ && (used_a >> i & 1)) continue;
      for (std::size_t j = 0; j < a_.size(); ++j) {
        if (distinct_ && (j == i || (used_a >> j & 1))) continue;
        walk_b(k, a_[i] - a_[j], used_a | (std::uint64_t{1} << i) | (std::uint64_t{1} << j), used_b, partial, total);
      }
    }
  }

  const std::vector<Int>& a_;
  const std::vector<Int>& b_;
  const std::vector<std::int64_t>& c_;
  bool distinct_;
};

template <class Int>
std::uint64_t count_tuples(const std::vector<Int>& a, const std::vector<Int>& b, const std::vector<std::int64_t>& c,
                           bool distinct, unsigned workers) {
  const TupleCounter<Int> counter(a, b, c, distinct);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(a.size())));
  std::vector<std::uint64_t> partial(workers, 0);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i1 = w; i1 < a.size(); i1 += workers) partial[w] += counter.count_with_first(i1);
      });
  }
  std::uint64_t total = 0;
  for (auto p : partial) total += p;
  return total;
}

}  // namespace detail

/// K_c (or K'_c when `distinct`) by direct enumeration of all (n n')^{2s}
/// index tuples; kappa normalizes by (n n')^{2s} in both cases.
inline EnergyReport kappa_bruteforce(const WeightedMultiset& a, const WeightedMultiset& b, const CoefficientTuple& c,
                                     bool distinct, const EngineLimits& limits = {}) {
  const std::size_t n = a.size();
  const std::size_t np = b.size();
  const std::size_t s = c.s();
  const BigInt tuples = boost::multiprecision::pow(BigInt(n) * n * np * np, static_cast<unsigned>(s));
  if (tuples > limits.iteration_budget)
    throw ResourceLimit("brute-force energy: (n n')^{2s} = " + tuples.str() + " exceeds the iteration budget (" +
                        std::to_string(limits.iteration_budget) + ")");
  if (n > 64 || np > 64) throw ResourceLimit("brute-force energy supports at most 64 elements per side");

  const auto sa = scale_to_integers(a.expanded());
  const auto sb = scale_to_integers(b.expanded());
  BigInt csum = 0;
  for (auto x : c.values()) csum += abs(BigInt(x));
  const BigInt bound = csum * 4 * max_abs(sa.values) * max_abs(sb.values);

  std::uint64_t count = 0;
  if (bound <= (BigInt(1) << 62))
    count = detail::count_tuples(narrow_to_int64(sa.values), narrow_to_int64(sb.values), c.values(), distinct,
                                 limits.workers);
  else
    count = detail::count_tuples(sa.values, sb.values, c.values(), distinct, limits.workers);

  EnergyReport r;
  r.method = distinct ? EnergyMethod::brute_distinct : EnergyMethod::brute;
  r.c = c.values();
  r.n = n;
  r.n_prime = np;
  r.K = BigInt(count);
  r.kappa = Rational(BigInt(count), tuples);
  return r;
}

/// kappa_{(1,-1)}(A,B) |A||B| / (ln|A| + ln|B|): the implied constant in the
/// log-loss energy bound for sets.
struct RnrReport {
  Rational kappa;
  Real ratio;
};

inline RnrReport rnr_ratio(const WeightedMultiset& a, const WeightedMultiset& b, const EngineLimits& limits = {}) {
  if (!a.is_set() || !b.is_set()) throw InvalidInput("rnr_ratio requires duplicate-free A and B");
  if (a.size() < 2 || b.size() < 2) throw InvalidInput("rnr_ratio requires |A|, |B| >= 2");
  const auto report = kappa_convolution(a, b, CoefficientTuple{1, -1}, limits);
  const Real logs = boost::multiprecision::log(Real(a.size())) + boost::multiprecision::log(Real(b.size()));
  return {report.kappa, to_real(report.kappa) * Real(a.size()) * Real(b.size()) / logs};
}

}  // namespace permsum
