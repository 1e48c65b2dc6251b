#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hsh4/angular3.hpp"
#include "reference_values.inc"
#include "test_support.hpp"

using namespace hsh4;

namespace {

TwiceInt T(int v) { return TwiceInt(v); }

}  // namespace

TEST(TwiceInt, Projections) {
  EXPECT_TRUE(is_projection(T(1), T(-1)));
  EXPECT_TRUE(is_projection(T(4), T(2)));
  EXPECT_FALSE(is_projection(T(4), T(1)));
  EXPECT_FALSE(is_projection(T(3), T(5)));
  EXPECT_EQ(TwiceInt::of(3).value, 6);
  EXPECT_DOUBLE_EQ(T(3).half(), 1.5);
  EXPECT_EQ((T(3) + T(1)).value, 4);
}

TEST(Cgc3, ReferenceValues) {
  for (const auto& r : kCg3Refs)
    EXPECT_NEAR(cgc3(T(r.j1), T(r.m1), T(r.j2), T(r.m2), T(r.j), T(r.m)), r.value, 1e-13)
        << r.j1 << " " << r.m1 << " " << r.j2 << " " << r.m2 << " " << r.j << " " << r.m;
}

TEST(Cgc3, SpinHalfTable) {
  // 1/2 x 1/2: triplet and singlet
  EXPECT_NEAR(cgc3(T(1), T(1), T(1), T(-1), T(2), T(0)), std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(cgc3(T(1), T(-1), T(1), T(1), T(0), T(0)), -std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(cgc3(T(1), T(1), T(1), T(-1), T(0), T(0)), std::sqrt(0.5), 1e-15);
  // l x 1/2, j = l + 1/2: sqrt((l + m + 1/2)/(2l+1))
  for (int l = 0; l <= 6; ++l)
    for (int tm = -(2 * l + 1); tm <= 2 * l + 1; tm += 2) {
      if (std::abs(tm - 1) > 2 * l) continue;
      const double expected = std::sqrt((l + tm / 2.0 + 0.5) / (2.0 * l + 1.0));
      EXPECT_NEAR(cgc3(TwiceInt::of(l), T(tm - 1), T(1), T(1), T(2 * l + 1), T(tm)), expected, 1e-14);
    }
}

TEST(Cgc3, SelectionRulesAndErrors) {
  EXPECT_EQ(cgc3(T(2), T(0), T(2), T(2), T(2), T(0)), 0.0);
  EXPECT_EQ(cgc3(T(2), T(0), T(2), T(0), T(6), T(0)), 0.0);
  EXPECT_THROW(cgc3(T(2), T(1), T(2), T(0), T(2), T(1)), InvalidIndex);
  EXPECT_THROW(cgc3(T(2), T(4), T(2), T(0), T(2), T(4)), InvalidIndex);
}

TEST(Cgc3, Orthogonality) {
  for (int j1 = 0; j1 <= 6; ++j1)
    for (int j2 = 0; j2 <= 6; ++j2)
      for (int j = std::abs(j1 - j2); j <= j1 + j2; j += 2)
        for (int jp = std::abs(j1 - j2); jp <= j1 + j2; jp += 2)
          for (int m = -std::min(j, jp); m <= std::min(j, jp); m += 2) {
            if ((j - m) % 2 || (jp - m) % 2) continue;
            double s = 0.0;
            for (int m1 = -j1; m1 <= j1; m1 += 2) {
              const int m2 = m - m1;
              if (std::abs(m2) > j2 || (j2 - m2) % 2) continue;
              s += cgc3(T(j1), T(m1), T(j2), T(m2), T(j), T(m)) * cgc3(T(j1), T(m1), T(j2), T(m2), T(jp), T(m));
            }
            ASSERT_NEAR(s, j == jp ? 1.0 : 0.0, 1e-13);
          }
}

TEST(Wigner6j, ReferenceValues) {
  for (const auto& r : kSixJRefs)
    EXPECT_NEAR(wigner6j(T(r.a), T(r.b), T(r.c), T(r.d), T(r.e), T(r.f)), r.value, 1e-13);
}

TEST(Wigner6j, ZeroArgumentClosedForm) {
  // {a b c; 0 c b} = (-1)^{a+b+c} / sqrt((2b+1)(2c+1))
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b)
      for (int c = std::abs(a - b); c <= a + b; c += 2) {
        const double sign = ((a + b + c) / 2) % 2 ? -1.0 : 1.0;
        EXPECT_NEAR(wigner6j(T(a), T(b), T(c), T(0), T(c), T(b)), sign / std::sqrt((b + 1.0) * (c + 1.0)), 1e-14);
      }
}

TEST(Wigner9j, ReferenceValues) {
  for (const auto& r : kNineJRefs)
    EXPECT_NEAR(wigner9j(T(r.a), T(r.b), T(r.c), T(r.d), T(r.e), T(r.f), T(r.g), T(r.hh), T(r.k)), r.value, 1e-13);
}

TEST(Wigner9j, ReducesTo6j) {
  // {a b e; c d e; f f 0} = (-1)^{b+c+e+f} {a b e; d c f} / sqrt((2e+1)(2f+1))
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 4; ++c)
        for (int d = 0; d <= 4; ++d)
          for (int e = std::abs(a - b); e <= a + b; e += 2)
            for (int f = std::abs(a - c); f <= a + c; f += 2) {
              if (!triangle(c, d, e) || !triangle(b, d, f)) continue;
              const double sign = ((b + c + e + f) / 2) % 2 ? -1.0 : 1.0;
              const double expected =
                  sign * wigner6j(T(a), T(b), T(e), T(d), T(c), T(f)) / std::sqrt((e + 1.0) * (f + 1.0));
              EXPECT_NEAR(wigner9j(T(a), T(b), T(e), T(c), T(d), T(e), T(f), T(f), T(0)), expected, 1e-13);
            }
}

TEST(GenCharacter, ReferenceValues) {
  for (const auto& r : kCharRefs)
    EXPECT_NEAR(gen_character(T(r.twice_l), r.lambda, r.omega), r.value, 1e-12 * std::max(1.0, std::abs(r.value)));
}

TEST(GenCharacter, OrdinaryCharacterAndIdentity) {
  for (int tl = 0; tl <= 10; ++tl) {
    for (double om : {0.3, 1.1, 2.9, 5.0}) {
      const double chi = std::sin((tl + 1) * om / 2) / std::sin(om / 2);
      EXPECT_NEAR(gen_character(T(tl), 0, om), chi, 1e-12);
    }
    for (int lam = 0; lam <= tl; ++lam) EXPECT_NEAR(gen_character(T(tl), lam, 0.0), lam == 0 ? tl + 1.0 : 0.0, 1e-13);
  }
  EXPECT_THROW(gen_character(T(2), 3, 0.1), InvalidIndex);
}

TEST(ModSphHarm, LowOrderExplicit) {
  const double th = 0.7, ph = 1.3;
  const cplx e(std::cos(ph), std::sin(ph));
  EXPECT_NEAR(std::abs(mod_sph_harm(0, 0, th, ph) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(mod_sph_harm(1, 0, th, ph) - std::cos(th)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(mod_sph_harm(1, 1, th, ph) + std::sin(th) * e / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(mod_sph_harm(1, -1, th, ph) - std::sin(th) * std::conj(e) / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(mod_sph_harm(2, 2, th, ph) - std::sqrt(3.0 / 8.0) * std::pow(std::sin(th), 2) * e * e), 0.0,
              1e-15);
}

TEST(ModSphHarm, MatchesStdSphLegendre) {
  for (int l = 0; l <= 12; ++l)
    for (int m = 0; m <= l; ++m)
      for (double th : {0.2, 1.0, 2.5}) {
        const double y = std::sph_legendre(l, m, th);
        const double expected = std::sqrt(4.0 * std::numbers::pi / (2 * l + 1)) * y;
        EXPECT_NEAR(mod_sph_harm(l, m, th, 0.0).real(), expected, 1e-13) << l << " " << m;
      }
}

TEST(ModSphHarm, AdditionTheorem) {
  // sum_alpha |C_{l alpha}|^2 = 1
  for (int l = 0; l <= 15; ++l) {
    const auto all = mod_sph_harm_all(l, 1.234, 0.567);
    double s = 0.0;
    for (int a = -l; a <= l; ++a) s += std::norm(all[l * l + l + a]);
    EXPECT_NEAR(s, 1.0, 1e-13);
  }
}

TEST(RotationU, MatchesMatrixExponential) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int tl = trial % 7;
    const double om = 2 * std::numbers::pi * u(rng), th = std::numbers::pi * u(rng), ph = 2 * std::numbers::pi * u(rng);
    const auto m = test::rotation_matrix_oracle(tl, om, th, ph);
    for (int r = 0; r <= tl; ++r)
      for (int c = 0; c <= tl; ++c) {
        const cplx v = rotation_u(T(tl), T(tl - 2 * r), T(tl - 2 * c), {om, th, ph});
        EXPECT_NEAR(std::abs(v - m[r][c]), 0.0, 1e-12) << tl << " " << r << " " << c;
      }
  }
}

TEST(RotationU, IsUnitary) {
  for (int tl = 0; tl <= 8; ++tl) {
    const Angle3 a{2.1, 0.8, 4.0};
    for (int r1 = -tl; r1 <= tl; r1 += 2)
      for (int r2 = -tl; r2 <= tl; r2 += 2) {
        cplx s = 0.0;
        for (int c = -tl; c <= tl; c += 2) s += rotation_u(T(tl), T(r1), T(c), a) * std::conj(rotation_u(T(tl), T(r2), T(c), a));
        EXPECT_NEAR(std::abs(s - (r1 == r2 ? 1.0 : 0.0)), 0.0, 1e-12);
      }
  }
}

TEST(RotationU, InvalidProjection) { EXPECT_THROW(rotation_u(T(2), T(1), T(0), {}), InvalidIndex); }

TEST(RotationU, TraceIsCharacter) {
  for (int tl = 0; tl <= 8; ++tl)
    for (double om : {0.4, 2.2, 5.1}) {
      const double chi = gen_character(T(tl), 0, om);
      for (const auto& [th, ph] : {std::pair{0.3, 1.0}, std::pair{2.0, 4.4}, std::pair{1.5, 0.0}}) {
        cplx tr = 0.0;
        for (int m = -tl; m <= tl; m += 2) tr += rotation_u(T(tl), T(m), T(m), {om, th, ph});
        EXPECT_NEAR(std::abs(tr - chi), 0.0, 1e-12);
      }
    }
}

TEST(ModSphHarm, Conjugation) {
  for (int l = 0; l <= 10; ++l)
    for (int a = -l; a <= l; ++a) {
      const double sign = (a % 2) ? -1.0 : 1.0;
      EXPECT_NEAR(std::abs(std::conj(mod_sph_harm(l, a, 0.9, 2.3)) - sign * mod_sph_harm(l, -a, 0.9, 2.3)), 0.0, 1e-14);
    }
}
