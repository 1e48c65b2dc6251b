#pragma once

// O(4) coupling: H- and C-type Clebsch-Gordan coefficients, closed forms for
// special index patterns, 4D 9j recoupling coefficients, bipolar harmonics
// and product linearization.

#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "hsh4/angular3.hpp"
#include "hsh4/cache.hpp"
#include "hsh4/error.hpp"
#include "hsh4/harmonics.hpp"
#include "hsh4/special_fn.hpp"

namespace hsh4 {

enum class Family { H, C };

/// |j1 - j2| <= j <= j1 + j2 with j1 + j2 + j even.
constexpr bool rank_triangle(int j1, int j2, int j) {
  return j1 >= 0 && j2 >= 0 && j >= std::abs(j1 - j2) && j <= j1 + j2 && (j1 + j2 + j) % 2 == 0;
}

/// H^{j mu nu}_{j1 mu1 nu1; j2 mu2 nu2}; projections doubled.
struct CgcQueryH {
  int j1 = 0;
  TwiceInt mu1, nu1;
  int j2 = 0;
  TwiceInt mu2, nu2;
  int j = 0;
  TwiceInt mu, nu;

  void validate() const {
    HshIndexH{j1, mu1, nu1}.validate();
    HshIndexH{j2, mu2, nu2}.validate();
    HshIndexH{j, mu, nu}.validate();
  }
};

/// C^{j lambda alpha}_{j1 lambda1 alpha1; j2 lambda2 alpha2}.
struct CgcQueryC {
  int j1 = 0, lambda1 = 0, alpha1 = 0;
  int j2 = 0, lambda2 = 0, alpha2 = 0;
  int j = 0, lambda = 0, alpha = 0;

  void validate() const {
    HshIndexC{j1, lambda1, alpha1}.validate();
    HshIndexC{j2, lambda2, alpha2}.validate();
    HshIndexC{j, lambda, alpha}.validate();
  }

  std::array<int, 9> key() const { return {j1, lambda1, alpha1, j2, lambda2, alpha2, j, lambda, alpha}; }

  /// Same coefficient with the two coupled factors exchanged.
  CgcQueryC swapped() const { return {j2, lambda2, alpha2, j1, lambda1, alpha1, j, lambda, alpha}; }
};

/// H-type coefficient: product of a mu-coupling and a nu-coupling 3D CGC.
inline double cgc4_h(const CgcQueryH& q) {
  q.validate();
  if (!rank_triangle(q.j1, q.j2, q.j)) return 0.0;
  return cgc3(TwiceInt(q.j1), q.mu1, TwiceInt(q.j2), q.mu2, TwiceInt(q.j), q.mu) *
         cgc3(TwiceInt(q.j1), q.nu1, TwiceInt(q.j2), q.nu2, TwiceInt(q.j), q.nu);
}

/// (j+1) sqrt((2 lambda1+1)(2 lambda2+1)) {j1/2 j2/2 j/2; j1/2 j2/2 j/2; lambda1 lambda2 lambda}:
/// the projection-independent part of the C-type coefficient. Memoized.
inline double cgc4_c_reduced(int j1, int j2, int j, int lambda1, int lambda2, int lambda) {
  if (!rank_triangle(j1, j2, j)) return 0.0;
  if ((lambda1 + lambda2 + lambda) % 2 != 0) return 0.0;
  if (!triangle(2 * lambda1, 2 * lambda2, 2 * lambda)) return 0.0;
  static ReadMostlyCache<std::array<int, 6>, double, IntArrayHash> cache;
  return cache.get_or_compute({j1, j2, j, lambda1, lambda2, lambda}, [&] {
    const TwiceInt a(j1), b(j2), c(j);
    return (j + 1.0) * std::sqrt((2.0 * lambda1 + 1.0) * (2.0 * lambda2 + 1.0)) *
           wigner9j(a, b, c, a, b, c, TwiceInt::of(lambda1), TwiceInt::of(lambda2), TwiceInt::of(lambda));
  });
}

/// C-type coefficient: (j+1) sqrt((2l1+1)(2l2+1)) C^{lambda alpha}_{lambda1 alpha1, lambda2 alpha2} x 9j.
inline double cgc4_c(const CgcQueryC& q) {
  q.validate();
  if (!rank_triangle(q.j1, q.j2, q.j)) return 0.0;
  if (q.alpha1 + q.alpha2 != q.alpha) return 0.0;
  const double reduced = cgc4_c_reduced(q.j1, q.j2, q.j, q.lambda1, q.lambda2, q.lambda);
  if (reduced == 0.0) return 0.0;
  return reduced * cgc3(TwiceInt::of(q.lambda1), TwiceInt::of(q.alpha1), TwiceInt::of(q.lambda2),
                        TwiceInt::of(q.alpha2), TwiceInt::of(q.lambda), TwiceInt::of(q.alpha));
}

// ---------------------------------------------------------------------------
// Closed forms for special index patterns of the C-type coefficient.

enum class ClosedForm {
  stretched,                 // j = j1 + j2
  stretched_j1_zero_lambda,  // j = j1 + j2, lambda1 = alpha1 = 0
  stretched_zero,            // j = j1 + j2, all lambda, alpha zero
  stretched_max_lambda,      // j = j1 + j2, lambda1 = j1, lambda2 = j2, lambda = j
  stretched_max,             // as above with alpha = lambda everywhere
  diff,                      // j = j2 - j1
  six_j_reduction,           // lambda1 = alpha1 = 0
  spin1,                     // j1 = 1, lambda1 = alpha1 = 0
  zero_projection,           // all lambda, alpha zero
  j1_zero,                   // j1 = 0
};

inline constexpr std::array<ClosedForm, 10> kAllClosedForms = {
    ClosedForm::stretched,       ClosedForm::stretched_j1_zero_lambda,
    ClosedForm::stretched_zero,  ClosedForm::stretched_max_lambda,
    ClosedForm::stretched_max,   ClosedForm::diff,
    ClosedForm::six_j_reduction, ClosedForm::spin1,
    ClosedForm::zero_projection, ClosedForm::j1_zero};

inline std::string_view to_string(ClosedForm f) {
  switch (f) {
    case ClosedForm::stretched: return "stretched";
    case ClosedForm::stretched_j1_zero_lambda: return "stretched_j1_zero_lambda";
    case ClosedForm::stretched_zero: return "stretched_zero";
    case ClosedForm::stretched_max_lambda: return "stretched_max_lambda";
    case ClosedForm::stretched_max: return "stretched_max";
    case ClosedForm::diff: return "diff";
    case ClosedForm::six_j_reduction: return "six_j_reduction";
    case ClosedForm::spin1: return "spin1";
    case ClosedForm::zero_projection: return "zero_projection";
    case ClosedForm::j1_zero: return "j1_zero";
  }
  return "unknown";
}

inline bool closed_form_applies(const CgcQueryC& q, ClosedForm f) {
  const bool zero1 = q.lambda1 == 0 && q.alpha1 == 0;
  const bool all_zero = zero1 && q.lambda2 == 0 && q.alpha2 == 0 && q.lambda == 0 && q.alpha == 0;
  const bool sum = q.j == q.j1 + q.j2;
  const bool max_lambda = q.lambda1 == q.j1 && q.lambda2 == q.j2 && q.lambda == q.j;
  switch (f) {
    case ClosedForm::stretched: return sum;
    case ClosedForm::stretched_j1_zero_lambda: return sum && zero1;
    case ClosedForm::stretched_zero: return sum && all_zero;
    case ClosedForm::stretched_max_lambda: return sum && max_lambda;
    case ClosedForm::stretched_max:
      return sum && max_lambda && q.alpha1 == q.lambda1 && q.alpha2 == q.lambda2 && q.alpha == q.lambda;
    case ClosedForm::diff: return q.j2 >= q.j1 && q.j == q.j2 - q.j1;
    case ClosedForm::six_j_reduction: return zero1;
    case ClosedForm::spin1: return q.j1 == 1 && zero1 && (q.j == q.j2 + 1 || q.j == q.j2 - 1);
    case ClosedForm::zero_projection: return all_zero;
    case ClosedForm::j1_zero: return q.j1 == 0;
  }
  return false;
}

inline std::vector<ClosedForm> applicable_closed_forms(const CgcQueryC& q) {
  std::vector<ClosedForm> out;
  for (ClosedForm f : kAllClosedForms)
    if (closed_form_applies(q, f)) out.push_back(f);
  return out;
}

namespace detail {

inline double cg_int(int l1, int a1, int l2, int a2, int l, int a) {
  return cgc3(TwiceInt::of(l1), TwiceInt::of(a1), TwiceInt::of(l2), TwiceInt::of(a2), TwiceInt::of(l),
              TwiceInt::of(a));
}

}  // namespace detail

/// Closed-form value of the C-type coefficient on the pattern `form`.
/// Throws InvalidIndex when the query does not match the pattern.
inline double cgc4_c_closed(const CgcQueryC& q, ClosedForm form) {
  q.validate();
  if (!closed_form_applies(q, form))
    throw InvalidIndex("cgc4_c_closed: query does not match pattern " + std::string(to_string(form)));
  if (!rank_triangle(q.j1, q.j2, q.j)) return 0.0;
  if (q.alpha1 + q.alpha2 != q.alpha) return 0.0;
  const int j1 = q.j1, j2 = q.j2, j = q.j;
  const int l1 = q.lambda1, l2 = q.lambda2, l = q.lambda;
  const auto lf = [](int n) { return log_factorial(n); };

  switch (form) {
    case ClosedForm::stretched: {
      const double cg = detail::cg_int(l1, 0, l2, 0, l, 0) * detail::cg_int(l1, q.alpha1, l2, q.alpha2, l, q.alpha);
      if (cg == 0.0) return 0.0;
      const double log_val = lf(j1) + lf(j2) - lf(j) +
                             0.5 * (lf(j + l + 1) + lf(j - l) + std::log(2.0 * l1 + 1.0) +
                                    std::log(2.0 * l2 + 1.0) - lf(j1 + l1 + 1) - lf(j1 - l1) -
                                    lf(j2 + l2 + 1) - lf(j2 - l2) - std::log(2.0 * l + 1.0));
      return cg * std::exp(log_val);
    }
    case ClosedForm::stretched_j1_zero_lambda: {
      if (l != l2 || q.alpha != q.alpha2) return 0.0;
      const double log_val = lf(j2) - lf(j) +
                             0.5 * (lf(j + l + 1) + lf(j - l) - std::log(j1 + 1.0) - lf(j2 + l + 1) -
                                    lf(j2 - l));
      return std::exp(log_val);
    }
    case ClosedForm::stretched_zero:
      return std::sqrt((j1 + j2 + 1.0) / ((j1 + 1.0) * (j2 + 1.0)));
    case ClosedForm::stretched_max_lambda:
      return detail::cg_int(j1, q.alpha1, j2, q.alpha2, j, q.alpha);
    case ClosedForm::stretched_max:
      return 1.0;
    case ClosedForm::diff: {
      const double cg = detail::cg_int(l, 0, l1, 0, l2, 0) * detail::cg_int(l1, q.alpha1, l2, q.alpha2, l, q.alpha);
      if (cg == 0.0) return 0.0;
      const double log_val = lf(j1) + lf(j2 - j1 + 1) - lf(j2 + 1) +
                             0.5 * (lf(j2 + l2 + 1) + lf(j2 - l2) + std::log(2.0 * l1 + 1.0) -
                                    lf(j1 + l1 + 1) - lf(j1 - l1) - lf(j2 - j1 + l + 1) -
                                    lf(j2 - j1 - l));
      return cg * std::exp(log_val);
    }
    case ClosedForm::six_j_reduction: {
      if (l != l2 || q.alpha != q.alpha2) return 0.0;
      const double sign = detail::parity_sign(l + (j1 + j2 + j) / 2);
      return sign * (j + 1.0) / std::sqrt(j1 + 1.0) *
             wigner6j(TwiceInt::of(l), TwiceInt(j), TwiceInt(j), TwiceInt(j1), TwiceInt(j2), TwiceInt(j2));
    }
    case ClosedForm::spin1: {
      if (l != l2 || q.alpha != q.alpha2) return 0.0;
      if (j == j2 - 1)
        return std::sqrt((j2 - l) * (j2 + l + 1.0)) / ((j2 + 1.0) * std::numbers::sqrt2);
      return std::sqrt((j2 - l + 1.0) * (j2 + l + 2.0)) / ((j2 + 1.0) * std::numbers::sqrt2);
    }
    case ClosedForm::zero_projection:
      return std::sqrt((j + 1.0) / ((j1 + 1.0) * (j2 + 1.0)));
    case ClosedForm::j1_zero:
      return (j == j2 && l == l2 && q.alpha == q.alpha2) ? 1.0 : 0.0;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// 4D recoupling coefficients.

/// [a b c; d e f; g h k] = {a/2 b/2 c/2; d/2 e/2 f/2; g/2 h/2 k/2}^2, zero unless
/// every row and column satisfies the rank triangle rule.
inline double ninej4(int a, int b, int c, int d, int e, int f, int g, int h, int k) {
  if (!rank_triangle(a, b, c) || !rank_triangle(d, e, f) || !rank_triangle(g, h, k) ||
      !rank_triangle(a, d, g) || !rank_triangle(b, e, h) || !rank_triangle(c, f, k))
    return 0.0;
  const double w = wigner9j(TwiceInt(a), TwiceInt(b), TwiceInt(c), TwiceInt(d), TwiceInt(e), TwiceInt(f),
                            TwiceInt(g), TwiceInt(h), TwiceInt(k));
  return w * w;
}

/// Closed form of [k k 0; l-k j-l+k j; l l' j].
inline double ninej4_closed(int j, int l, int lp, int k) {
  if (k < 0 || l < k || j - l + k < 0)
    throw InvalidIndex("ninej4_closed: pattern requires 0 <= k <= l and j - l + k >= 0");
  if (!rank_triangle(l - k, j - l + k, j) || !rank_triangle(l, lp, j) || !rank_triangle(k, l - k, l) ||
      !rank_triangle(k, j - l + k, lp))
    return 0.0;
  const double sign = detail::parity_sign(j + l + lp);
  const double log_ratio = log_factorial(k) + log_factorial(j - l + k) - log_factorial(l + 1) -
                           log_factorial(j + 1) + std::lgamma((j + l + lp) / 2.0 + 2.0) +
                           std::lgamma((j + l - lp) / 2.0 + 1.0);
  return sign * std::exp(log_ratio) / ((k + 1.0) * (j + 1.0)) *
         reciprocal_gamma((j - l - lp) / 2.0 + k + 1.0) * reciprocal_gamma((j - l + lp) / 2.0 + k + 2.0);
}

// ---------------------------------------------------------------------------
// Tensor products.

namespace detail {

struct CouplingTerm {
  int out;
  int first;
  int second;
  double coeff;
};

using CouplingTable = std::vector<CouplingTerm>;

inline const CouplingTable& coupling_table_c(int j1, int j2, int j) {
  static ReadMostlyCache<std::array<int, 3>, std::shared_ptr<const CouplingTable>, IntArrayHash> cache;
  return *cache.get_or_compute({j1, j2, j}, [=] {
    auto table = std::make_shared<CouplingTable>();
    if (rank_triangle(j1, j2, j)) {
      for (int l = 0; l <= j; ++l)
        for (int a = -l; a <= l; ++a)
          for (int l1 = 0; l1 <= j1; ++l1)
            for (int a1 = -l1; a1 <= l1; ++a1)
              for (int l2 = 0; l2 <= j2; ++l2) {
                const int a2 = a - a1;
                if (std::abs(a2) > l2) continue;
                const double c = cgc4_c({j1, l1, a1, j2, l2, a2, j, l, a});
                if (c != 0.0)
                  table->push_back({CComponents::index(l, a), CComponents::index(l1, a1),
                                    CComponents::index(l2, a2), c});
              }
    }
    return std::shared_ptr<const CouplingTable>(std::move(table));
  });
}

inline const CouplingTable& coupling_table_h(int j1, int j2, int j) {
  static ReadMostlyCache<std::array<int, 3>, std::shared_ptr<const CouplingTable>, IntArrayHash> cache;
  return *cache.get_or_compute({j1, j2, j}, [=] {
    auto table = std::make_shared<CouplingTable>();
    if (rank_triangle(j1, j2, j)) {
      for (int m = -j; m <= j; m += 2)
        for (int n = -j; n <= j; n += 2)
          for (int m1 = -j1; m1 <= j1; m1 += 2)
            for (int n1 = -j1; n1 <= j1; n1 += 2) {
              const int m2 = m - m1, n2 = n - n1;
              if (std::abs(m2) > j2 || std::abs(n2) > j2) continue;
              const double c = cgc4_h({j1, TwiceInt(m1), TwiceInt(n1), j2, TwiceInt(m2), TwiceInt(n2), j,
                                       TwiceInt(m), TwiceInt(n)});
              if (c != 0.0)
                table->push_back({HComponents::index(j, m, n), HComponents::index(j1, m1, n1),
                                  HComponents::index(j2, m2, n2), c});
            }
    }
    return std::shared_ptr<const CouplingTable>(std::move(table));
  });
}

}  // namespace detail

/// Irreducible rank-j part {A (x) B}_j of two C-type tensors.
inline CComponents couple(const CComponents& a, const CComponents& b, int j) {
  CComponents out(j);
  auto dst = out.values();
  const auto x = a.values();
  const auto y = b.values();
  for (const auto& t : detail::coupling_table_c(a.rank(), b.rank(), j))
    dst[t.out] += t.coeff * x[t.first] * y[t.second];
  return out;
}

/// Irreducible rank-j part {A (x) B}_j of two H-type tensors.
inline HComponents couple(const HComponents& a, const HComponents& b, int j) {
  HComponents out(j);
  auto dst = out.values();
  const auto x = a.values();
  const auto y = b.values();
  for (const auto& t : detail::coupling_table_h(a.rank(), b.rank(), j))
    dst[t.out] += t.coeff * x[t.first] * y[t.second];
  return out;
}

/// Bipolar harmonic {C_{j1}(a) (x) C_{j2}(b)}_j, all components.
inline CComponents bipolar_c(int j1, int j2, int j, const Vec4& a, const Vec4& b) {
  return couple(hsh_c_all(j1, a), hsh_c_all(j2, b), j);
}

/// Bipolar harmonic {H_{j1}(a) (x) H_{j2}(b)}_j, all components.
inline HComponents bipolar_h(int j1, int j2, int j, const Vec4& a, const Vec4& b) {
  return couple(hsh_h_all(j1, a), hsh_h_all(j2, b), j);
}

/// Label of one bipolar-harmonic component. For the C family (p, q) is
/// (lambda, alpha); for the H family it is (2mu, 2nu).
struct BipolarIndex {
  int j1 = 0;
  int j2 = 0;
  int j = 0;
  int p = 0;
  int q = 0;
};

inline cplx bipolar(const BipolarIndex& idx, const Vec4& a, const Vec4& b, Family family) {
  if (family == Family::C) {
    HshIndexC{idx.j, idx.p, idx.q}.validate();
    return bipolar_c(idx.j1, idx.j2, idx.j, a, b).at(idx.p, idx.q);
  }
  HshIndexH{idx.j, TwiceInt(idx.p), TwiceInt(idx.q)}.validate();
  return bipolar_h(idx.j1, idx.j2, idx.j, a, b).at(idx.p, idx.q);
}

/// Evaluates many C-type bipolar harmonics {C_l(a) (x) C_l'(b)}_j at one pair of
/// directions by separating the theta0 factors from the 3D angular coupling.
///
/// {C_l(a) (x) C_l'(b)}_{j lambda alpha}
///   = sum_{lambda1 lambda2} R(l, j, lambda1, lambda2, lambda) rho_{l lambda1}(a) rho_{l' lambda2}(b)
///     T_{lambda1 lambda2 lambda alpha}(a, b)
/// where rho are the theta0 factors of C-harmonics and T is the 3D coupling of
/// modified spherical harmonics. T depends only on the angles, so it is
/// shared by every (l, l') pair.
class BipolarEvaluator {
 public:
  BipolarEvaluator(const Vec4& a, const Vec4& b, int lmax_a, int lmax_b, int j)
      : lmax_a_(lmax_a), lmax_b_(lmax_b), j_(j) {
    if (lmax_a < 0 || lmax_b < 0 || j < 0) throw InvalidIndex("BipolarEvaluator: negative rank");
    ha_ = detail::direction_angles(a, "BipolarEvaluator");
    hb_ = detail::direction_angles(b, "BipolarEvaluator");
    const auto ya = mod_sph_harm_all(lmax_a, ha_.theta, ha_.phi);
    const auto yb = mod_sph_harm_all(lmax_b, hb_.theta, hb_.phi);
    // T[lambda1][lambda2 - lambda1 + j][lambda][alpha + lambda]
    t_.assign((lmax_a + 1) * (2 * j + 1) * (j + 1) * (2 * j + 1), cplx{});
    for (int l1 = 0; l1 <= lmax_a; ++l1)
      for (int l2 = std::max(0, l1 - j); l2 <= std::min(lmax_b, l1 + j); ++l2)
        for (int lam = std::abs(l1 - l2); lam <= j; ++lam) {
          if ((l1 + l2 + lam) % 2 != 0) continue;
          for (int alpha = -lam; alpha <= lam; ++alpha) {
            cplx sum = 0.0;
            for (int a1 = -l1; a1 <= l1; ++a1) {
              const int a2 = alpha - a1;
              if (std::abs(a2) > l2) continue;
              sum += detail::cg_int(l1, a1, l2, a2, lam, alpha) * ya[CComponents::index(l1, a1)] *
                     yb[CComponents::index(l2, a2)];
            }
            t_[t_index(l1, l2, lam, alpha)] = sum;
          }
        }
    radial_a_.reserve(lmax_a + 1);
    for (int l = 0; l <= lmax_a; ++l) radial_a_.push_back(c_radial_factors(l, ha_.theta0));
    radial_b_.reserve(lmax_b + 1);
    for (int l = 0; l <= lmax_b; ++l) radial_b_.push_back(c_radial_factors(l, hb_.theta0));
  }

  int rank() const { return j_; }

  /// {C_l(a) (x) C_lp(b)}_j for l <= lmax_a, lp <= lmax_b.
  CComponents operator()(int l, int lp) const {
    if (l < 0 || l > lmax_a_ || lp < 0 || lp > lmax_b_)
      throw InvalidIndex("BipolarEvaluator: rank outside precomputed range");
    CComponents out(j_);
    if (!rank_triangle(l, lp, j_)) return out;
    const auto& ra = radial_a_[l];
    const auto& rb = radial_b_[lp];
    for (int l1 = 0; l1 <= l; ++l1)
      for (int l2 = std::max(0, l1 - j_); l2 <= std::min(lp, l1 + j_); ++l2)
        for (int lam = std::abs(l1 - l2); lam <= j_; ++lam) {
          const double reduced = cgc4_c_reduced(l, lp, j_, l1, l2, lam);
          if (reduced == 0.0) continue;
          const cplx w = reduced * ra[l1] * rb[l2];
          for (int alpha = -lam; alpha <= lam; ++alpha)
            out.at(lam, alpha) += w * t_[t_index(l1, l2, lam, alpha)];
        }
    return out;
  }

 private:
  std::size_t t_index(int l1, int l2, int lam, int alpha) const {
    return ((static_cast<std::size_t>(l1) * (2 * j_ + 1) + (l2 - l1 + j_)) * (j_ + 1) + lam) * (2 * j_ + 1) +
           (alpha + lam);
  }

  int lmax_a_;
  int lmax_b_;
  int j_;
  HyperAngles ha_;
  HyperAngles hb_;
  std::vector<cplx> t_;
  std::vector<std::vector<cplx>> radial_a_;
  std::vector<std::vector<cplx>> radial_b_;
};

// ---------------------------------------------------------------------------
// Product linearization.

/// One term of the expansion of a product of two harmonics at the same point.
template <class Index>
struct ProductTerm {
  Index index;        // label of the harmonic in the expansion
  double coefficient;  // coupling coefficient
  cplx value;          // harmonic value at the point
};

/// C_{j1 l1 a1}(v) C_{j2 l2 a2}(v) = sum_{j lambda} C^{j lambda alpha}_{...} C_{j lambda alpha}(v).
inline std::vector<ProductTerm<HshIndexC>> linearize_product(const HshIndexC& f, const HshIndexC& g,
                                                             const Vec4& v) {
  f.validate();
  g.validate();
  std::vector<ProductTerm<HshIndexC>> terms;
  const int alpha = f.alpha + g.alpha;
  for (int j = std::abs(f.j - g.j); j <= f.j + g.j; j += 2) {
    const CComponents cj = hsh_c_all(j, v);
    for (int lambda = std::abs(alpha); lambda <= j; ++lambda) {
      const double c = cgc4_c({f.j, f.lambda, f.alpha, g.j, g.lambda, g.alpha, j, lambda, alpha});
      if (c == 0.0) continue;
      terms.push_back({{j, lambda, alpha}, c, cj.at(lambda, alpha)});
    }
  }
  return terms;
}

/// H_{j1 mu1 nu1}(v) H_{j2 mu2 nu2}(v) = sum_j H^{j mu nu}_{...} H_{j mu nu}(v).
inline std::vector<ProductTerm<HshIndexH>> linearize_product(const HshIndexH& f, const HshIndexH& g,
                                                             const Vec4& v) {
  f.validate();
  g.validate();
  std::vector<ProductTerm<HshIndexH>> terms;
  const TwiceInt mu = f.mu + g.mu;
  const TwiceInt nu = f.nu + g.nu;
  for (int j = std::abs(f.j - g.j); j <= f.j + g.j; j += 2) {
    if (!is_projection(TwiceInt(j), mu) || !is_projection(TwiceInt(j), nu)) continue;
    const double c = cgc4_h({f.j, f.mu, f.nu, g.j, g.mu, g.nu, j, mu, nu});
    if (c == 0.0) continue;
    terms.push_back({{j, mu, nu}, c, hsh_h_all(j, v).at(mu.value, nu.value)});
  }
  return terms;
}

template <class Index>
cplx sum_terms(const std::vector<ProductTerm<Index>>& terms) {
  cplx s = 0.0;
  for (const auto& t : terms) s += t.coefficient * t.value;
  return s;
}

}  // namespace hsh4
