#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "permsum/bounds.hpp"
#include "permsum/variance.hpp"

using namespace permsum;

namespace {

double as_double(const Real& x) { return x.convert_to<double>(); }

const VerdictRecord& find(const VerifyReport& r, BoundKind k) {
  for (const auto& rec : r.records)
    if (rec.kind == k) return rec;
  throw std::runtime_error("bound kind missing");
}

}  // namespace

TEST(Pawlowski, Formula) {
  EXPECT_EQ(pawlowski_bound(3), Rational(1, 5));
  EXPECT_EQ(pawlowski_bound(4), Rational(1, 5));
  EXPECT_EQ(pawlowski_bound(10), Rational(1, 11));
  EXPECT_THROW(pawlowski_bound(2), InvalidInput);
}

TEST(Pawlowski, CountDerivedFormula) {
  EXPECT_EQ(pawlowski_count_bound(3), Rational(1, 3));
  EXPECT_EQ(pawlowski_count_bound(4), Rational(1, 3));
  EXPECT_EQ(pawlowski_count_bound(7), Rational(1, 7));
  EXPECT_EQ(pawlowski_count_bound(8), Rational(1, 7));
}

TEST(Mamb, PreconditionAtExactlyNCubed) {
  // n = 4: M(A) M(B) = 64 = n^3 < n^{3.1}.
  const auto e = mamb_bound(4, 8, 8, 1, Rational(1, 10));
  EXPECT_FALSE(e.applicable);
  EXPECT_FALSE(mamb_precondition(4, 8, 8, Rational(1, 10)));
  EXPECT_FALSE(mamb_precondition(4, 8, 8, Rational(1, 1000000)));
  EXPECT_TRUE(mamb_precondition(4, 9, 8, Rational(1, 1000000)));
}

TEST(Mamb, DistinctSixteen) {
  const auto e = mamb_bound(16, 1240, 1240);
  EXPECT_TRUE(e.applicable);
  const double ln16 = std::log(16.0);
  EXPECT_NEAR(as_double(e.value), 4 * ln16 * ln16 / 1240, 1e-15);
  EXPECT_NEAR(as_double(e.value), 0.02480, 5e-6);
}

TEST(Mamb, Errors) {
  EXPECT_THROW(mamb_bound(16, 1240, 1240, 0), InvalidInput);
  EXPECT_THROW(mamb_bound(16, 0, 1240), InvalidInput);
}

TEST(Tightness, Values) {
  EXPECT_NEAR(as_double(tightness_lower(6, 14, 14)), std::sqrt(6.0) / 14, 1e-15);
  EXPECT_NEAR(as_double(tightness_lower(6, 14, 14)), 0.1750, 1e-4);
  EXPECT_NEAR(as_double(tightness_lower(4, 14, 14)), 2.0 / 14, 1e-15);
  EXPECT_THROW(tightness_lower(4, 14, 0), InvalidInput);
}

TEST(Conjecture, Ratio) {
  EXPECT_NEAR(as_double(conjecture_constant()), 12 / std::sqrt(2 * M_PI), 1e-14);
  EXPECT_NEAR(as_double(conjecture_constant()), 4.78731, 1e-5);
  EXPECT_NEAR(as_double(conjecture_ratio(3, Rational(1, 3))), std::pow(3.0, 2.5) * std::sqrt(2 * M_PI) / 36, 1e-14);
  EXPECT_NEAR(as_double(conjecture_ratio(3, Rational(1, 3))), 1.0854, 1e-4);
  EXPECT_THROW(conjecture_ratio(1, 1), InvalidInput);
  EXPECT_THROW(conjecture_ratio(5, 0), InvalidInput);
}

TEST(Verify, PawlowskiDiscrepancyAtThree) {
  const auto r = verify(uniform_grid(3), WeightedMultiset::of({0, 0, 1}), default_bounds(), QMethod::enumerate);
  EXPECT_EQ(r.observed.q, Rational(1, 3));
  const auto& paw = find(r, BoundKind::Pawlowski);
  EXPECT_EQ(*paw.bound_exact, Rational(1, 5));
  EXPECT_EQ(paw.status, VerdictStatus::violated);
  const auto& count = find(r, BoundKind::PawlowskiCount);
  EXPECT_EQ(*count.bound_exact, Rational(1, 3));
  EXPECT_EQ(count.status, VerdictStatus::satisfied);
  EXPECT_EQ(find(r, BoundKind::MainThm).status, VerdictStatus::reported_only);
  EXPECT_EQ(find(r, BoundKind::ConjectureAP).status, VerdictStatus::not_applicable);
}

TEST(Verify, CounterexampleMambNotApplicable) {
  const auto [a, b] = counterexample_pair(6);
  const auto r = verify(a, b, default_bounds(), QMethod::dp);
  EXPECT_EQ(r.observed.q, Rational(1, 2));
  EXPECT_EQ(r.m_a, 14);
  EXPECT_EQ(r.m_b, 1);
  EXPECT_EQ(find(r, BoundKind::MAMBThm).status, VerdictStatus::not_applicable);
}

TEST(Verify, ConstantCoefficientsDegenerate) {
  const auto r = verify(uniform_grid(5), WeightedMultiset::of({2, 2, 2, 2, 2}), default_bounds(), QMethod::dp);
  EXPECT_EQ(r.observed.q, 1);
  for (const auto& rec : r.records) {
    EXPECT_EQ(rec.status, VerdictStatus::not_applicable) << to_string(rec.kind);
    EXPECT_NE(rec.note.find("degenerate"), std::string::npos);
  }
}

TEST(Verify, PinnedConstantTurnsReportsIntoVerdicts) {
  BoundSpec loose{BoundKind::MainThm, 100, true};
  BoundSpec tight{BoundKind::MainThm, Rational(1, 100), true};
  const auto r = verify(uniform_grid(6), uniform_grid(6), {loose, tight}, QMethod::dp);
  EXPECT_EQ(r.records[0].status, VerdictStatus::satisfied);
  EXPECT_EQ(r.records[1].status, VerdictStatus::violated);

  BoundSpec lower{BoundKind::TightnessLower, Rational(1, 4), true};
  const auto s = staircase({2, 2, 1, 1});
  EXPECT_EQ(verify(s, s, {lower}, QMethod::dp).records[0].status, VerdictStatus::satisfied);
}

TEST(Verify, SamplerMethodMarksEstimate) {
  const auto r = verify(uniform_grid(4), uniform_grid(4), {{BoundKind::Pawlowski}}, QMethod::mc, {}, {1, 20000, 1});
  EXPECT_FALSE(r.observed.exact);
  EXPECT_NE(r.records[0].note.find("sampling"), std::string::npos);
}

TEST(Verify, RejectsBadSpecs) {
  EXPECT_THROW(verify(uniform_grid(4), uniform_grid(4), {{BoundKind::MainThm, 0, true}}, QMethod::dp), InvalidInput);
  EXPECT_THROW(verify(uniform_grid(4), uniform_grid(5), default_bounds(), QMethod::dp), InvalidInput);
}

TEST(Families, CounterexampleEvenN) {
  for (std::size_t n = 4; n <= 10; n += 2) {
    const auto [a, b] = counterexample_pair(n);
    const auto r = verify(a, b, {{BoundKind::MAMBThm}}, QMethod::dp);
    EXPECT_EQ(r.observed.q, Rational(1, 2)) << n;
    EXPECT_EQ(r.m_b, 1);
    EXPECT_EQ(r.records[0].status, VerdictStatus::not_applicable);
  }
}

TEST(Families, DistinctStaircaseVarianceClosedForm) {
  // lambda = (1^n): Var n / M^2 = n (n+1)^2 / (4 (n-1) (2n-1)^2), which tends to 1/16.
  for (std::size_t n = 2; n <= 30; ++n) {
    const auto s = staircase(std::vector<std::size_t>(n, 1));
    const BigInt m = multiplicity_profile(s).M;
    const Rational ratio = exact_variance(s, s) * n / Rational(m * m);
    EXPECT_EQ(ratio, Rational(BigInt(n) * (n + 1) * (n + 1), BigInt(4) * (n - 1) * (2 * n - 1) * (2 * n - 1)));
  }
}

TEST(Families, TightnessDirectionOnStaircases) {
  // Integer staircases: Q >= (1/4) sqrt(n) / sqrt(M(A) M(B)) for every partition of n = 6..12.
  for (std::size_t n = 6; n <= 12; ++n)
    for (const auto& lambda : oracle::partitions(n)) {
      const auto s = staircase(lambda);
      const BigInt m = multiplicity_profile(s).M;
      if (m == 0) continue;
      const Rational q = observe_q(s, s, QMethod::dp).q;
      EXPECT_GE(to_real(q), tightness_lower(n, m, m) / 4) << "n=" << n << " parts=" << lambda.size();
    }
}
