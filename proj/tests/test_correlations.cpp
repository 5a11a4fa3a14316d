#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "innerclt/correlations.hpp"
#include "oracles.hpp"

using namespace innerclt;

namespace {

BlaschkeProduct half_map() {
  const cplx a = 0.5;
  return BlaschkeProduct::with_zeros(std::span<const cplx>(&a, 1));
}

// ∫ f^n conj(f^j) dm for a map with f'(0) = lambda.
cplx pair_value(cplx lambda, int n, int j) {
  return n >= j ? std::pow(lambda, n - j) : std::pow(std::conj(lambda), j - n);
}

}  // namespace

TEST(CorrelationSpec, Validation) {
  EXPECT_THROW(CorrelationSpec({}, {}), InvalidArgument);
  EXPECT_THROW(CorrelationSpec({1, 1}, {1}), InvalidArgument);
  EXPECT_THROW(CorrelationSpec({1, 2}, {1, 2}), InvalidArgument);
  EXPECT_THROW(CorrelationSpec({1, 1}, {2, 2}), InvalidArgument);
  EXPECT_THROW(CorrelationSpec({1}, {0}), InvalidArgument);
  const CorrelationSpec s({1, -1, 1}, {1, 4, 6});
  EXPECT_EQ(s.k(), 3);
  EXPECT_EQ(s.min_gap(), 2);
}

TEST(Correlations, PairExamples) {
  const auto sq = BlaschkeProduct::monomial(2);
  EXPECT_LE(pair_correlation(sq, 1, 3).residual, 1e-12);
  const auto f = half_map();
  EXPECT_NEAR(std::abs(pair_correlation(f, 1, 2).value - 0.5), 0.0, 1e-10);
  EXPECT_NEAR(std::abs(pair_correlation(f, 1, 3).value - 0.25), 0.0, 1e-10);
  EXPECT_THROW(pair_correlation(f, 2, 2), InvalidArgument);
}

TEST(Correlations, PairAgainstClosedForm) {
  const cplx a(0.3, -0.4);
  const auto f = BlaschkeProduct::with_zeros(std::span<const cplx>(&a, 1), std::polar(1.0, 0.7));
  const cplx lambda = std::polar(1.0, 0.7) * a;
  for (int j = 2; j <= 6; ++j)
    for (int k = 1; k < j; ++k)
      EXPECT_NEAR(std::abs(pair_correlation(f, k, j).value - std::pow(lambda, j - k)), 0.0, 1e-9);
}

TEST(Correlations, MonomialMapOracle) {
  const auto sq = BlaschkeProduct::monomial(2);
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<int> s(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<int> signs, idx;
    int n = 0;
    for (int j = 0; j < 2 + trial % 4; ++j) {
      n += 1 + trial % 2;
      idx.push_back(n);
      signs.push_back(s(gen) ? 1 : -1);
    }
    const CorrelationSpec spec(signs, idx);
    EXPECT_NEAR(std::abs(higher_correlation(sq, spec) - oracle::monomial_correlation(2, signs, idx)), 0.0, 1e-12);
  }
  // Repeated indices can cancel: 2·2^2 − 2^3 = 0.
  const std::vector<SignedIndex> fs{{1, 2}, {1, 2}, {-1, 3}};
  EXPECT_NEAR(std::abs(signed_product_integral(sq, fs).value - 1.0), 0.0, 1e-12);
}

TEST(Correlations, PairProductFactorization) {
  const auto f = half_map();
  const cplx lambda = 0.5;
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<int> u(1, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int n1 = u(gen), j1 = u(gen);
    const int base = std::max(n1, j1);
    const int n2 = base + u(gen), j2 = base + u(gen);
    const std::vector<SignedIndex> fs{{1, n1}, {-1, j1}, {1, n2}, {-1, j2}};
    const cplx v = signed_product_integral(f, fs).value;
    EXPECT_NEAR(std::abs(v - pair_value(lambda, n1, j1) * pair_value(lambda, n2, j2)), 0.0, 1e-8);
  }
}

TEST(Correlations, BlockFactorizationExamples) {
  const auto sq = BlaschkeProduct::monomial(2);
  const auto ones = CoefficientSequence::constant(8);
  const std::vector<BlockSum> blocks{{{1, 2}}, {{3, 4}}};
  const auto r = block_product_factorization(sq, ones, blocks);
  EXPECT_NEAR(r.lhs, 4.0, 1e-10);
  EXPECT_NEAR(r.rhs, 4.0, 1e-10);
  EXPECT_LE(r.residual, 1e-10);

  const std::vector<BlockSum> single{{{1, 2, 3}}};
  EXPECT_EQ(block_product_factorization(half_map(), ones, single).residual, 0.0);

  const auto a = CoefficientSequence::explicit_values({cplx(2.0, 1.0), cplx(-0.5, 0.0)});
  const std::vector<BlockSum> two{{{1}}, {{2}}};
  const auto t = block_product_factorization(half_map(), a, two);
  EXPECT_NEAR(t.lhs, 5.0 * 0.25, 1e-12);
  EXPECT_NEAR(t.rhs, 5.0 * 0.25, 1e-12);

  const std::vector<BlockSum> bad{{{1, 3}}, {{2, 4}}};
  EXPECT_THROW(block_product_factorization(sq, ones, bad), SeparationViolation);
}

TEST(Correlations, DegreeBudget) {
  const auto sq = BlaschkeProduct::monomial(2);
  const CorrelationSpec big({1, -1}, {14, 16});
  EXPECT_THROW(higher_correlation(sq, big), DegreeBudgetExceeded);
}

TEST(FourFactor, ShapeIExamplesAndSweep) {
  const auto sq = BlaschkeProduct::monomial(2);
  const auto r = four_factor(sq, {{{{1, 1}, {-1, 2}, {1, 3}, {1, 4}}}});
  EXPECT_EQ(r.shape, FourFactorShape::I);
  EXPECT_LE(std::abs(r.value), 1e-12);

  const auto f = half_map();
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> u(1, 3), s(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const int n1 = u(gen), n2 = n1 == 3 ? 1 : n1 + u(gen) % 2 + (trial % 2);
    const int lo = std::max(n1, n2);
    const int n3 = lo + u(gen), n4 = lo + u(gen);
    const int e = s(gen) ? 1 : -1;
    const auto res = four_factor(f, {{{{e, n1}, {-e, n2}, {1, n3}, {1, n4}}}}, FourFactorShape::I);
    EXPECT_LE(std::abs(res.value), 1e-8);
    EXPECT_TRUE(res.exact_pass.value_or(false));
  }
}

TEST(FourFactor, AlternatingShapeIV) {
  const auto f = half_map();
  const auto r = four_factor(f, {{{{1, 1}, {-1, 2}, {1, 3}, {-1, 4}}}});
  EXPECT_EQ(r.shape, FourFactorShape::IV);
  EXPECT_NEAR(std::abs(r.value), 0.25, 1e-9);
  for (int n1 = 1; n1 <= 4; ++n1)
    for (int n2 = n1 + 1; n2 <= 6; ++n2)
      for (int n3 = n2 + 1; n3 <= 8; ++n3)
        for (int n4 = n3 + 1; n4 <= 10; ++n4) {
          const auto v = four_factor(f, {{{{-1, n1}, {1, n2}, {1, n3}, {-1, n4}}}});
          EXPECT_NEAR(std::abs(v.value), std::pow(0.5, n2 - n1 + n4 - n3), 1e-8);
        }
}

TEST(FourFactor, BoundShapes) {
  const auto f = half_map();
  std::vector<FourFactorResult> fam;
  fam.push_back(four_factor(f, {{{{1, 1}, {1, 2}, {1, 2}, {-1, 5}}}}));
  EXPECT_EQ(fam.back().shape, FourFactorShape::II);
  EXPECT_EQ(fam.back().exponent, 4.0);
  fam.push_back(four_factor(f, {{{{1, 1}, {1, 1}, {-1, 3}, {1, 6}}}}));
  EXPECT_EQ(fam.back().shape, FourFactorShape::III);
  EXPECT_EQ(fam.back().exponent, 5.0);
  fam.push_back(four_factor(f, {{{{1, 1}, {1, 1}, {-1, 2}, {1, 3}}}}));
  EXPECT_EQ(fam.back().exponent, 0.0);
  fam.push_back(four_factor(f, {{{{1, 1}, {1, 2}, {1, 3}, {-1, 7}}}}));
  EXPECT_EQ(fam.back().exponent, 5.0);
  fam.push_back(four_factor(f, {{{{1, 1}, {1, 3}, {-1, 4}, {-1, 5}}}}));
  EXPECT_EQ(fam.back().exponent, 3.0);
  const double C = fit_four_factor_constant(fam);
  EXPECT_TRUE(std::isfinite(C));
  for (const auto& r : fam) EXPECT_TRUE(r.bounded_by(C));
}

TEST(FourFactor, ShapeMismatch) {
  const auto f = half_map();
  EXPECT_THROW(four_factor(f, {{{{1, 3}, {1, 2}, {1, 2}, {1, 1}}}}), ShapeMismatch);
  EXPECT_THROW(four_factor(f, {{{{1, 1}, {1, 2}, {1, 3}, {1, 4}}}}, FourFactorShape::II), ShapeMismatch);
}

TEST(Higher, Examples) {
  const auto f = half_map();
  const CorrelationSpec alt({1, -1, 1, -1, 1, -1}, {1, 3, 5, 7, 9, 11});
  EXPECT_NEAR(std::abs(higher_correlation(f, alt)), 0.015625, 1e-8);
  EXPECT_NEAR(std::abs(higher_correlation(f, CorrelationSpec({1}, {4}))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(higher_correlation(f, CorrelationSpec({1, -1}, {2, 5}))), 0.125, 1e-10);
}

TEST(Higher, AlternatingPairsExact) {
  const auto f = half_map();
  // Signs (+,−) pairs collapse: |I| = a^{Σ gaps inside pairs}.
  for (int k = 2; k <= 6; k += 2) {
    std::vector<int> s, n;
    int pos = 1, expect = 0;
    for (int j = 0; j < k; ++j) {
      s.push_back(j % 2 ? -1 : 1);
      n.push_back(pos);
      const int gap = 1 + (j % 3);
      if (j % 2 == 0) expect += gap;
      pos += gap;
    }
    EXPECT_NEAR(std::abs(higher_correlation(f, CorrelationSpec(s, n))), std::pow(0.5, expect), 1e-8);
  }
}

TEST(Higher, SignFlipConjugates) {
  const auto f = half_map();
  const CorrelationSpec s({1, 1, -1, 1, -1}, {1, 2, 4, 5, 8});
  EXPECT_NEAR(std::abs(higher_correlation(f, s.flipped()) - std::conj(higher_correlation(f, s))), 0.0, 1e-10);
}

TEST(Phi, Examples) {
  const auto a = phi_exponent(CorrelationSpec({1, -1, 1, -1}, {1, 2, 3, 4}));
  EXPECT_EQ(a.deltas, (std::vector<double>{1, 0, 1}));
  EXPECT_EQ(a.phi, 2.0);
  EXPECT_EQ(a.lower_bound, 1.0);
  const auto b = phi_exponent(CorrelationSpec({1, 1}, {1, 5}));
  EXPECT_EQ(b.deltas, (std::vector<double>{1}));
  EXPECT_EQ(b.phi, 4.0);
  EXPECT_GE(b.phi, b.lower_bound);
  const auto c = phi_exponent(CorrelationSpec({1, 1, 1}, {1, 4, 7}));
  EXPECT_EQ(c.deltas[0], 1.0);
  EXPECT_GE(c.deltas[1], 0.5);
  EXPECT_GE(c.phi, 4.5);
  EXPECT_THROW(phi_exponent(CorrelationSpec({1}, {1})), InvalidArgument);
}

TEST(Phi, StructuralInvariantsOverAllSignPatterns) {
  std::mt19937_64 gen(41);
  std::uniform_int_distribution<int> g(1, 4);
  for (int k = 2; k <= 8; ++k)
    for (int mask = 0; mask < (1 << k); ++mask) {
      std::vector<int> s, n;
      int pos = 0;
      for (int j = 0; j < k; ++j) {
        s.push_back((mask >> j) & 1 ? -1 : 1);
        pos += g(gen);
        n.push_back(pos);
      }
      const CorrelationSpec spec(s, n);
      const auto r = phi_exponent(spec);
      ASSERT_EQ(r.deltas.size(), static_cast<std::size_t>(k - 1));
      EXPECT_EQ(r.deltas.front(), 1.0);
      EXPECT_GE(r.deltas.back(), 0.5);
      for (std::size_t j = 1; j < r.deltas.size(); ++j)
        EXPECT_EQ(r.deltas[j] == 1.0, r.deltas[j - 1] == 0.0);
      double phi = 0.0;
      for (std::size_t j = 0; j < r.deltas.size(); ++j) phi += r.deltas[j] * (n[j + 1] - n[j]);
      EXPECT_EQ(phi, r.phi);
      EXPECT_GE(r.phi, k * spec.min_gap() / 4.0);
    }
}

TEST(Decay, AlternatingFamilyNeedsNoConstant) {
  const auto f = half_map();
  std::vector<CorrelationSpec> fam{CorrelationSpec({1, -1}, {1, 3}),
                                   CorrelationSpec({1, -1, 1, -1}, {1, 3, 5, 7}),
                                   CorrelationSpec({-1, 1, -1, 1, -1, 1}, {1, 3, 5, 7, 9, 11})};
  const auto d = decay_check(f, fam, 2);
  EXPECT_FALSE(d.vacuous);
  EXPECT_LE(d.fitted_C, 1.0 + 1e-6);
  EXPECT_TRUE(d.pass);
  for (const auto& r : d.rows) EXPECT_TRUE(r.pass);
}

TEST(Decay, VacuousForZeroDerivative) {
  const auto sq = BlaschkeProduct::monomial(2);
  const auto d = decay_check(sq, std::vector<CorrelationSpec>{CorrelationSpec({1, -1}, {1, 3})}, 2);
  EXPECT_TRUE(d.vacuous);
  EXPECT_TRUE(d.pass);
}

TEST(Decay, RejectsGapBelowQ) {
  const auto f = half_map();
  EXPECT_THROW(decay_check(f, std::vector<CorrelationSpec>{CorrelationSpec({1, 1}, {1, 2})}, 2),
               InvalidArgument);
}
