#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/math/constants/constants.hpp>

#include "distribution.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "limits.hpp"
#include "multiset.hpp"
#include "rational.hpp"
#include "sampler.hpp"
#include "subset_dp.hpp"

namespace permsum {

enum class BoundKind {
  /// 1 / (2 ceil(n/2) + 1)
  Pawlowski,
  /// (n-1)!/n! for odd n, n (n-2)!/n! for even n: the hyperplane point counts as a probability
  PawlowskiCount,
  /// C / (n sqrt(M(B)))
  MainThm,
  /// C sqrt(n) ln(n)^2 / sqrt(M(A) M(B)), only when M(A) M(B) >= n^{3+eps}
  MAMBThm,
  /// sqrt(n) / sqrt(M(A) M(B)), a lower bound for integer inputs
  TightnessLower,
  /// (12 / sqrt(2 pi)) n^{-5/2} for sets A, B
  ConjectureAP,
};

inline constexpr BoundKind kAllBoundKinds[] = {BoundKind::Pawlowski,      BoundKind::PawlowskiCount,
                                               BoundKind::MainThm,        BoundKind::MAMBThm,
                                               BoundKind::TightnessLower, BoundKind::ConjectureAP};

inline std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::Pawlowski: return "Pawlowski";
    case BoundKind::PawlowskiCount: return "PawlowskiCount";
    case BoundKind::MainThm: return "MainThm";
    case BoundKind::MAMBThm: return "MAMBThm";
    case BoundKind::TightnessLower: return "TightnessLower";
    case BoundKind::ConjectureAP: return "ConjectureAP";
  }
  return "?";
}

inline BoundKind parse_bound_kind(std::string_view s) {
  for (auto k : kAllBoundKinds)
    if (to_string(k) == s) return k;
  throw ParseError("unknown bound kind \"" + std::string(s) + "\"");
}

struct BoundSpec {
  BoundKind kind = BoundKind::Pawlowski;
  /// Implied constant for the asymptotic bounds. Unless pinned, asymptotic
  /// verdicts are reported-only.
  Rational constant = 1;
  bool constant_pinned = false;
  /// Exponent slack in the M(A) M(B) >= n^{3+eps} precondition.
  Rational epsilon = Rational(1, 10);
};

enum class VerdictStatus { satisfied, violated, not_applicable, reported_only };

inline std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::satisfied: return "satisfied";
    case VerdictStatus::violated: return "violated";
    case VerdictStatus::not_applicable: return "not-applicable";
    case VerdictStatus::reported_only: return "reported-only";
  }
  return "?";
}

struct VerdictRecord {
  BoundKind kind = BoundKind::Pawlowski;
  std::optional<Real> bound_value;
  std::optional<Rational> bound_exact;
  Rational observed_q;
  /// observed_q / bound_value
  std::optional<Real> ratio;
  VerdictStatus status = VerdictStatus::not_applicable;
  std::string note;
};

// ---- bound formulas ----

inline Rational pawlowski_bound(std::size_t n) {
  if (n < 3) throw InvalidInput("pawlowski_bound requires n >= 3");
  return Rational(1, 2 * ((n + 1) / 2) + 1);
}

/// Largest probability implied by the maximal hyperplane point counts:
/// (n-1)! points (odd n) or n (n-2)! points (even n) out of n!.
inline Rational pawlowski_count_bound(std::size_t n) {
  if (n < 3) throw InvalidInput("pawlowski_count_bound requires n >= 3");
  return n % 2 == 1 ? Rational(1, n) : Rational(1, n - 1);
}

inline void require_positive(const BigInt& m, const char* what) {
  if (m <= 0) throw InvalidInput(std::string(what) + " must be positive");
}

inline void require_positive(const Rational& c, const char* what) {
  if (c <= 0) throw InvalidInput(std::string(what) + " must be positive");
}

/// M(A) M(B) >= n^{3+eps}, compared through logarithms at 50 digits.
inline bool mamb_precondition(std::size_t n, const BigInt& ma, const BigInt& mb, const Rational& epsilon) {
  if (ma * mb <= 0 || n < 2) return false;
  using boost::multiprecision::log;
  return log(Real(ma * mb)) >= (Real(3) + to_real(epsilon)) * log(Real(n));
}

struct MambEvaluation {
  Real value;
  bool applicable = false;
};

inline MambEvaluation mamb_bound(std::size_t n, const BigInt& ma, const BigInt& mb, const Rational& constant = 1,
                                 const Rational& epsilon = Rational(1, 10)) {
  require_positive(ma, "M(A)");
  require_positive(mb, "M(B)");
  require_positive(constant, "constant C");
  require_positive(epsilon, "epsilon");
  using boost::multiprecision::log;
  using boost::multiprecision::sqrt;
  const Real ln = log(Real(n));
  return {to_real(constant) * sqrt(Real(n)) * ln * ln / sqrt(Real(ma * mb)), mamb_precondition(n, ma, mb, epsilon)};
}

inline Real main_bound(std::size_t n, const BigInt& mb, const Rational& constant = 1) {
  require_positive(mb, "M(B)");
  require_positive(constant, "constant C");
  return to_real(constant) / (Real(n) * boost::multiprecision::sqrt(Real(mb)));
}

inline Real tightness_lower(std::size_t n, const BigInt& ma, const BigInt& mb) {
  require_positive(ma, "M(A)");
  require_positive(mb, "M(B)");
  using boost::multiprecision::sqrt;
  return sqrt(Real(n)) / sqrt(Real(ma * mb));
}

/// 12 / sqrt(2 pi)
inline Real conjecture_constant() {
  return Real(12) / boost::multiprecision::sqrt(2 * boost::math::constants::pi<Real>());
}

/// q n^{5/2} sqrt(2 pi) / 12.
inline Real conjecture_ratio(std::size_t n, const Rational& q) {
  if (n < 2) throw InvalidInput("conjecture_ratio requires n >= 2");
  if (q <= 0 || q > 1) throw InvalidInput("conjecture_ratio requires q in (0, 1]");
  return to_real(q) * boost::multiprecision::pow(Real(n), Real(5) / 2) / conjecture_constant();
}

// ---- observing Q ----

enum class QMethod { enumerate, dp, mc };

inline std::string_view to_string(QMethod m) {
  switch (m) {
    case QMethod::enumerate: return "exact";
    case QMethod::dp: return "dp";
    case QMethod::mc: return "mc";
  }
  return "?";
}

inline QMethod parse_q_method(std::string_view s) {
  if (s == "exact") return QMethod::enumerate;
  if (s == "dp") return QMethod::dp;
  if (s == "mc") return QMethod::mc;
  throw ParseError("unknown method \"" + std::string(s) + "\" (expected exact|dp|mc)");
}

struct ObservedQ {
  Rational q;
  Rational argmax;
  bool exact = true;
};

inline ObservedQ observe_q(const WeightedMultiset& a, const WeightedMultiset& b, QMethod method,
                           const EngineLimits& limits = {}, const SampleConfig& sampling = {}) {
  switch (method) {
    case QMethod::enumerate: {
      const auto r = max_point_mass(exact_distribution_enum(a, b, limits));
      return {r.q, r.argmax_value, true};
    }
    case QMethod::dp: {
      const auto r = max_point_mass(exact_distribution_dp(a, b, limits));
      return {r.q, r.argmax_value, true};
    }
    case QMethod::mc: {
      const auto e = estimate_q(a, b, sampling);
      return {e.q_hat, e.mode_value, false};
    }
  }
  throw std::logic_error("unreachable");
}

// ---- verdicts ----

struct VerifyReport {
  std::size_t n = 0;
  BigInt m_a = 0;
  BigInt m_b = 0;
  ObservedQ observed;
  std::vector<VerdictRecord> records;
};

/// One verdict for a single bound against an already observed Q.
inline VerdictRecord evaluate_bound(const WeightedMultiset& a, const WeightedMultiset& b, const BoundSpec& spec,
                                    const Rational& q) {
  require_positive(spec.constant, "constant C");
  require_positive(spec.epsilon, "epsilon");
  const std::size_t n = a.size();
  const BigInt ma = multiplicity_profile(a).M;
  const BigInt mb = multiplicity_profile(b).M;

  VerdictRecord rec;
  rec.kind = spec.kind;
  rec.observed_q = q;
  auto not_applicable = [&](std::string why) {
    rec.status = VerdictStatus::not_applicable;
    rec.note = std::move(why);
    return rec;
  };
  auto set_value = [&](const Real& v) {
    rec.bound_value = v;
    rec.ratio = to_real(q) / v;
  };
  auto set_exact = [&](const Rational& v) {
    rec.bound_exact = v;
    set_value(to_real(v));
  };
  // Upper bounds: satisfied iff Q <= value. Lower bounds flip the comparison.
  auto judge_asymptotic = [&](bool lower) {
    if (!spec.constant_pinned) {
      rec.status = VerdictStatus::reported_only;
      return;
    }
    const Real qr = to_real(q);
    const bool ok = lower ? qr >= *rec.bound_value : qr <= *rec.bound_value;
    rec.status = ok ? VerdictStatus::satisfied : VerdictStatus::violated;
  };

  if (a.is_constant() || b.is_constant()) return not_applicable("degenerate: the permutation sum is constant");

  switch (spec.kind) {
    case BoundKind::Pawlowski:
    case BoundKind::PawlowskiCount: {
      if (n < 3) return not_applicable("requires n >= 3");
      if (!a.is_set() && !b.is_set()) return not_applicable("requires one side to be duplicate-free");
      set_exact(spec.kind == BoundKind::Pawlowski ? pawlowski_bound(n) : pawlowski_count_bound(n));
      rec.status = q <= *rec.bound_exact ? VerdictStatus::satisfied : VerdictStatus::violated;
      return rec;
    }
    case BoundKind::MainThm: {
      // A a set paired with M(B); the sum is symmetric in A and B.
      if (a.is_set()) {
        set_value(main_bound(n, mb, spec.constant));
      } else if (b.is_set()) {
        set_value(main_bound(n, ma, spec.constant));
      } else {
        return not_applicable("requires one side to be duplicate-free");
      }
      rec.note = "n^{o(1)} factor unquantified";
      judge_asymptotic(false);
      return rec;
    }
    case BoundKind::MAMBThm: {
      if (!mamb_precondition(n, ma, mb, spec.epsilon))
        return not_applicable("M(A) M(B) < n^{3+eps} with eps = " + to_string(spec.epsilon));
      set_value(mamb_bound(n, ma, mb, spec.constant, spec.epsilon).value);
      judge_asymptotic(false);
      return rec;
    }
    case BoundKind::TightnessLower: {
      if (!a.all_integer() || !b.all_integer()) return not_applicable("requires integer-valued A and B");
      set_value(to_real(spec.constant) * tightness_lower(n, ma, mb));
      judge_asymptotic(true);
      return rec;
    }
    case BoundKind::ConjectureAP: {
      if (!a.is_set() || !b.is_set()) return not_applicable("requires A and B duplicate-free");
      set_value(to_real(spec.constant) * conjecture_constant() / boost::multiprecision::pow(Real(n), Real(5) / 2));
      judge_asymptotic(false);
      return rec;
    }
  }
  throw std::logic_error("unreachable");
}

inline VerifyReport verify(const WeightedMultiset& a, const WeightedMultiset& b, const std::vector<BoundSpec>& bounds,
                           QMethod method, const EngineLimits& limits = {}, const SampleConfig& sampling = {}) {
  detail::require_same_size(a, b);
  VerifyReport report;
  report.n = a.size();
  report.m_a = multiplicity_profile(a).M;
  report.m_b = multiplicity_profile(b).M;
  report.observed = observe_q(a, b, method, limits, sampling);
  for (const auto& spec : bounds) {
    auto rec = evaluate_bound(a, b, spec, report.observed.q);
    if (!report.observed.exact) rec.note += rec.note.empty() ? "Q estimated by sampling" : "; Q estimated by sampling";
    report.records.push_back(std::move(rec));
  }
  return report;
}

inline std::vector<BoundSpec> default_bounds() {
  std::vector<BoundSpec> out;
  for (auto k : kAllBoundKinds) out.push_back({k});
  return out;
}

}  // namespace permsum
