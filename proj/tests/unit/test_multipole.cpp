#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hsh4/io.hpp"
#include "hsh4/multipole.hpp"
#include "reference_values.inc"
#include "test_support.hpp"

using namespace hsh4;

namespace {

double binom(int n, int k) { return std::round(std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k))); }

double max_abs_diff(const CComponents& a, const CComponents& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double max_abs(const CComponents& a) {
  double m = 0.0;
  for (const auto& v : a.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(Admissibility, Rules) {
  EXPECT_TRUE(is_admissible(1, 0, 1));
  EXPECT_TRUE(is_admissible(1, 1, 0));
  EXPECT_FALSE(is_admissible(1, 1, 1));
  EXPECT_FALSE(is_admissible(0, 2, 0));
  EXPECT_FALSE(is_admissible(2, 0, 0));
  EXPECT_FALSE(is_admissible(0, 0, 2));
  EXPECT_TRUE(terminates(3.0, 1));
  EXPECT_TRUE(terminates(1.0, 1));
  EXPECT_FALSE(terminates(2.0, 1));
  EXPECT_FALSE(terminates(-2.0, 0));
  EXPECT_FALSE(terminates(2.5, 0));
}

TEST(ExpansionSpec, Validation) {
  EXPECT_THROW((ExpansionSpec{1.0, 2, 0.5, 1.0, 1}.validate()), DomainError);
  EXPECT_THROW((ExpansionSpec{1.0, 0, 0.5, 0.0}.validate()), DomainError);
  EXPECT_THROW((ExpansionSpec{1.0, 0, -0.5, 1.0}.validate()), DomainError);
  EXPECT_THROW((ExpansionSpec{1.0, -1, 0.5, 1.0}.validate()), DomainError);
  EXPECT_NO_THROW((ExpansionSpec{1.0, 1, 0.5, 1.0}.validate()));
}

TEST(BCoeff, ReferenceValues) {
  for (const auto& r : kBCoeffRefs) {
    const double v = b_coeff({r.n, r.j, r.r1, r.r2}, r.l, r.lp);
    EXPECT_NEAR(v, r.value, 1e-12 * std::max(std::abs(r.value), 1e-300))
        << r.n << " " << r.j << " " << r.l << " " << r.lp;
  }
}

TEST(BCoeff, HarmonicPolynomialCase) {
  // n = j: binom(j, l) r1^l r2^{j-l} at lp = j - l, zero elsewhere
  const double r1 = 0.7, r2 = 1.3;
  for (int j = 0; j <= 8; ++j) {
    const CoeffTable t = expand_translated({double(j), j, r1, r2});
    EXPECT_TRUE(t.terminated);
    for (const auto& [key, value] : t.entries) {
      const auto [l, lp] = key;
      if (lp == j - l) {
        const double expected = binom(j, l) * std::pow(r1, l) * std::pow(r2, j - l);
        EXPECT_NEAR(value, expected, 1e-13 * expected) << j << " " << l;
      } else {
        EXPECT_EQ(value, 0.0) << j << " " << l << " " << lp;
      }
    }
  }
}

TEST(BCoeff, InverseHarmonicCase) {
  // n = -j-2: (-1)^l r1^l / r2^{j+l+2} binom(j+l+1, l) at lp = j + l
  const double r1 = 0.3, r2 = 0.9;
  for (int j = 0; j <= 4; ++j)
    for (int l = 0; l <= 12; ++l) {
      const ExpansionSpec s{-j - 2.0, j, r1, r2};
      const double expected = ((l % 2) ? -1.0 : 1.0) * std::pow(r1, l) / std::pow(r2, j + l + 2) * binom(j + l + 1, l);
      EXPECT_NEAR(b_coeff(s, l, j + l), expected, 1e-13 * std::abs(expected));
      for (int lp = std::max(0, j - l); lp < j + l; ++lp) EXPECT_EQ(b_coeff(s, l, lp), 0.0);
    }
}

TEST(BCoeff, InverseSquareGeneratingFunction) {
  const double r1 = 0.5, r2 = 1.0, t = 0.5;
  const CoeffTable table = expand_translated({-2.0, 0, r1, r2, 40});
  for (int l = 0; l <= 40; ++l)
    EXPECT_NEAR(table.entries.at({l, l}), (l + 1.0) * std::pow(-t, l), 1e-13 * (l + 1.0) * std::pow(t, l));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec4 a = test::random_unit(rng), b = test::random_unit(rng);
    const double c = dot(a, b);
    const double exact = 1.0 / (1.0 + 2.0 * t * c + t * t);
    const cplx v = eval_expansion(table, 0, a, b).at(0, 0);
    EXPECT_NEAR(v.real(), exact, 1e-10 * exact);
    EXPECT_NEAR(v.imag(), 0.0, 1e-13);
  }
}

TEST(BCoeff, LawOfCosines) {
  const double r1 = 0.8, r2 = 1.7;
  const CoeffTable t = expand_translated({2.0, 0, r1, r2});
  ASSERT_TRUE(t.terminated);
  for (const auto& [key, value] : t.entries)
    if (key.first > 1) EXPECT_EQ(value, 0.0);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const Vec4 a = test::random_unit(rng), b = test::random_unit(rng);
    const double exact = r1 * r1 + r2 * r2 + 2.0 * r1 * r2 * dot(a, b);
    EXPECT_NEAR(std::abs(eval_expansion(t, 0, a, b).at(0, 0) - exact), 0.0, 1e-12 * exact);
  }
}

TEST(BCoeff, TerminationIsExact) {
  for (int j = 0; j <= 3; ++j)
    for (int p = 0; p <= 3; ++p) {
      const double n = j + 2.0 * p;
      for (int l = 0; l <= 12; ++l)
        for (int lp = 0; lp <= 12; ++lp)
          if (is_admissible(j, l, lp) && l + lp - j > n - j) EXPECT_EQ(b_coeff({n, j, 0.5, 1.0}, l, lp), 0.0);
    }
}

TEST(BCoeff, JZeroClosedForm) {
  for (double n : {-3.0, -2.0, -1.0, 0.5, 1.0, 2.0, 3.0, 4.5})
    for (int l = 0; l <= 20; ++l) {
      const double b = b_coeff({n, 0, 0.6, 1.1}, l, l);
      const double m = (l + 1.0) * mult_j_zero_coeff(n, 0.6, 1.1, l);
      EXPECT_NEAR(b, m, 1e-13 * std::max(std::abs(m), 1e-300)) << n << " " << l;
    }
}

TEST(BCoeff, DivergenceGuardAndSwap) {
  const ExpansionSpec bad{-3.0, 1, 1.2, 0.6};
  EXPECT_THROW(b_coeff(bad, 1, 2), DivergentExpansion);
  EXPECT_THROW(expand_translated(bad), DivergentExpansion);
  EXPECT_THROW(mult_j_zero_coeff(-1.0, 2.0, 1.0, 3), DivergentExpansion);
  EXPECT_NO_THROW(expand_translated({3.0, 1, 1.2, 0.6}));

  // Expanding in r1/r2 < 1 after the swap recovers convergence.
  std::mt19937_64 rng(9);
  const Vec4 a = test::random_unit(rng), b = test::random_unit(rng);
  const CoeffTable swapped = expand_translated({-3.0, 1, 0.6, 1.2, 40});
  const CComponents approx = eval_expansion(swapped, 1, b, a);
  const CComponents exact = translated_harmonic(-3.0, 1, 1.2 * a, 0.6 * b);
  EXPECT_LE(max_abs_diff(approx, exact), 1e-8 * max_abs(exact));
}

TEST(Residual, TerminatingCasesAreExact) {
  std::mt19937_64 rng(12);
  for (const auto& [n, j] : {std::pair{1, 1}, std::pair{2, 0}, std::pair{2, 2}, std::pair{3, 1}, std::pair{4, 0},
                             std::pair{4, 2}, std::pair{5, 3}})
    for (int i = 0; i < 5; ++i) {
      const Vec4 a = test::random_unit(rng), b = test::random_unit(rng);
      const CoeffTable t = expand_translated({double(n), j, 0.5, 1.0});
      const CComponents exact = translated_harmonic(n, j, 0.5 * a, b);
      EXPECT_LE(max_abs_diff(eval_expansion(t, j, a, b), exact), 1e-12 * max_abs(exact)) << n << " " << j;
    }
}

TEST(Residual, InfiniteCasesConverge) {
  std::mt19937_64 rng(13);
  for (const auto& [n, j] : {std::pair{-2.0, 0}, std::pair{-2.0, 1}, std::pair{-3.0, 1}, std::pair{1.0, 0},
                             std::pair{2.0, 1}, std::pair{2.7, 2}})
    for (int i = 0; i < 4; ++i) {
      const Vec4 a = test::random_unit(rng), b = test::random_unit(rng);
      const CoeffTable t = expand_translated({n, j, 0.5, 1.0, 60});
      const CComponents exact = translated_harmonic(n, j, 0.5 * a, b);
      EXPECT_LE(max_abs_diff(eval_expansion(t, j, a, b), exact), 1e-10 * max_abs(exact)) << n << " " << j;
    }
}

TEST(Expand, SmallTables) {
  const CoeffTable t = expand_translated({1.0, 1, 0.5, 1.0, 10});
  EXPECT_TRUE(t.terminated);
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(t.entries.at({0, 1}), 1.0);
  EXPECT_EQ(t.entries.at({1, 0}), 0.5);
  const CoeffTable c = expand_translated({0.0, 0, 0.5, 1.0});
  ASSERT_EQ(c.entries.size(), 1u);
  EXPECT_EQ(c.entries.at({0, 0}), 1.0);
  // deterministic
  EXPECT_EQ(expand_translated({-3.0, 1, 0.5, 1.0}).entries, expand_translated({-3.0, 1, 0.5, 1.0}).entries);
}

TEST(Expand, RankOneLinear) {
  // j = 1, n = 1: the outer components are |r| C_1(r^)
  std::mt19937_64 rng(14);
  const CoeffTable t = expand_translated({1.0, 1, 0.3, 0.8});
  for (int i = 0; i < 10; ++i) {
    const Vec4 a = test::random_unit(rng), b = test::random_unit(rng);
    EXPECT_LE(max_abs_diff(eval_expansion(t, 1, a, b), translated_harmonic(1.0, 1, 0.3 * a, 0.8 * b)), 1e-12);
  }
  EXPECT_EQ(max_abs(eval_expansion(CoeffTable{}, 2, Vec4{0, 0, 0, 1}, Vec4{1, 0, 0, 0})), 0.0);
}

TEST(RadialFunction, SingleTermAndEmpty) {
  std::vector<double> f(4, 0.0);
  f[2] = 1.0;
  const CoeffTable a = expand_radial_function(f, 2, 0.4, 1.0, 10);
  const CoeffTable b = expand_translated({2.0, 2, 0.4, 1.0, 10});
  EXPECT_EQ(a.entries, b.entries);
  EXPECT_TRUE(a.terminated);
  EXPECT_TRUE(expand_radial_function({}, 0, 0.4, 1.0, 10).entries.empty());
}

TEST(RadialFunction, Exponential) {
  std::vector<double> f(26);
  for (std::size_t n = 0; n < f.size(); ++n) f[n] = std::exp(-log_factorial(static_cast<int>(n)));
  const double r1 = 0.25, r2 = 0.5;
  const CoeffTable t = expand_radial_function(f, 0, r1, r2, 40);
  EXPECT_FALSE(t.terminated);
  std::mt19937_64 rng(15);
  for (int i = 0; i < 10; ++i) {
    const Vec4 a = test::random_unit(rng), b = test::random_unit(rng);
    const double exact = std::exp(norm(r1 * a + r2 * b));
    EXPECT_NEAR(std::abs(eval_expansion(t, 0, a, b).at(0, 0) - exact), 0.0, 1e-10 * exact);
  }
}

TEST(ScalarPower, Coefficients) {
  EXPECT_EQ(scalar_power_coeff(0, 0), 1.0);
  EXPECT_NEAR(scalar_power_coeff(1, 1), 0.5, 1e-15);
  EXPECT_EQ(scalar_power_coeff(2, 1), 0.0);
  EXPECT_EQ(scalar_power_coeff(1, 3), 0.0);
  std::mt19937_64 rng(16);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double c = u(rng);
    for (int n = 0; n <= 8; ++n) {
      double s = 0.0;
      for (int l = n % 2; l <= n; l += 2) s += scalar_power_coeff(n, l) * gegenbauer(1.0, l, c);
      EXPECT_NEAR(s, std::pow(c, n), 1e-14) << n << " " << c;
    }
  }
}

TEST(PlaneWave, Coefficients) {
  EXPECT_NEAR(plane_wave_radial(0, 1e-9, 1.0), 1.0, 1e-15);
  for (int l = 0; l <= 15; ++l)
    for (double x : {0.2, 1.0, 2.0, -1.5}) {
      const double bessel = 2.0 * (l + 1) * std::cyl_bessel_i(l + 1.0, std::abs(x)) / std::abs(x);
      const double expected = (x < 0 && l % 2) ? -bessel : bessel;
      EXPECT_NEAR(plane_wave_radial(l, x, 1.0), expected, 1e-13 * std::abs(expected)) << l << " " << x;
    }
}

TEST(PlaneWave, PartialSumsConverge) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double ar : {0.5, 1.0, 2.0})
    for (int i = 0; i < 20; ++i) {
      const double c = u(rng);
      double s = 0.0;
      for (int l = 0; l <= 30; ++l) s += plane_wave_radial(l, ar, 1.0) * gegenbauer(1.0, l, c);
      EXPECT_NEAR(s, std::exp(ar * c), 1e-12 * std::exp(ar * c));
    }
}

TEST(LaplacianPower, Examples) {
  for (int j = 0; j <= 5; ++j) {
    EXPECT_EQ(laplacian_power(j, j, 1), 0.0);
    EXPECT_EQ(laplacian_power(-j - 2.0, j, 1), 0.0);
    EXPECT_EQ(laplacian_power(2.3, j, 0), 1.0);
  }
  EXPECT_DOUBLE_EQ(laplacian_power(2.0, 0, 1), 8.0);
  // Delta^2 r^4 = Delta 24 r^2 = 192
  EXPECT_DOUBLE_EQ(laplacian_power(4.0, 0, 2), 192.0);
  EXPECT_THROW(laplacian_power(1.0, 0, -1), DomainError);
}

TEST(LaplacianPower, MatchesFiniteDifference) {
  const Vec4 v{0.4, -0.3, 0.6, 0.5};
  const double h = 1e-3;
  for (int j = 0; j <= 3; ++j)
    for (double n : {2.0, 3.0, double(j), -j - 2.0, 1.5}) {
      const auto f = [&](const Vec4& p) { return std::pow(norm(p), n) * hsh_c({j, j, j > 0 ? 1 : 0}, p); };
      const cplx lap = test::laplacian_fd(f, v, h);
      const cplx expected = laplacian_power(n, j, 1) * std::pow(norm(v), n - 2) * hsh_c({j, j, j > 0 ? 1 : 0}, v);
      const double scale = std::max(std::abs(f(v)), std::abs(expected));
      EXPECT_LE(std::abs(lap - expected), 1e-5 * scale) << n << " " << j;
    }
}

TEST(Serialization, CsvRoundTripIsBitExact) {
  const CoeffTable t = expand_translated({-3.0, 1, 0.37, 1.1, 15});
  const std::string csv = to_csv(t);
  EXPECT_EQ(csv.rfind("l,lp,value\n", 0), 0u);
  EXPECT_EQ(from_csv(csv).entries, t.entries);
  EXPECT_THROW(from_csv("a,b\n"), std::invalid_argument);
  EXPECT_THROW(from_csv("l,lp,value\n1;2\n"), std::invalid_argument);
}

TEST(Serialization, JsonRoundTrip) {
  const CoeffTable t = expand_translated({2.5, 2, 0.4, 0.9, 12, {1e-15, 5000}});
  const auto j = to_json(t);
  const CoeffTable back = coeff_table_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.entries, t.entries);
  EXPECT_EQ(back.spec.n, 2.5);
  EXPECT_EQ(back.spec.j, 2);
  EXPECT_EQ(back.spec.l_max, 12);
  EXPECT_EQ(back.spec.ctl.max_terms, 5000);
  EXPECT_EQ(back.terminated, t.terminated);
}
