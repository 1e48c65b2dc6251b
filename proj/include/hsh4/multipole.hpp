#pragma once

// Multipole expansions of r^n C_j(r^) with r = r1 + r2 into bipolar
// harmonics {C_l(r1^) (x) C_l'(r2^)}_j.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <utility>
#include <vector>

#include "hsh4/coupling4.hpp"
#include "hsh4/error.hpp"
#include "hsh4/harmonics.hpp"
#include "hsh4/special_fn.hpp"

namespace hsh4 {

struct ExpansionSpec {
  double n = 0.0;
  int j = 0;
  double r1 = 0.0;
  double r2 = 1.0;
  int l_max = 30;
  SeriesControl ctl{};

  void validate() const {
    ctl.validate();
    if (!std::isfinite(n)) throw DomainError("ExpansionSpec: n must be finite");
    if (j < 0) throw DomainError("ExpansionSpec: j must be nonnegative");
    if (!(std::isfinite(r1) && r1 >= 0.0)) throw DomainError("ExpansionSpec: r1 must be a nonnegative length");
    if (!(std::isfinite(r2) && r2 > 0.0)) throw DomainError("ExpansionSpec: r2 must be positive");
    if (l_max < j) throw DomainError("ExpansionSpec: l_max must be >= j");
  }
};

using LPair = std::pair<int, int>;

struct CoeffTable {
  ExpansionSpec spec;
  std::map<LPair, double> entries;
  bool terminated = false;
};

/// j + l - lp even and nonnegative, |l - lp| <= j <= l + lp.
constexpr bool is_admissible(int j, int l, int lp) {
  return j >= 0 && l >= 0 && lp >= 0 && j + l - lp >= 0 && (j + l - lp) % 2 == 0 && l + lp >= j && l - lp <= j;
}

/// True when n - j is a nonnegative even integer, so the expansion is a finite sum.
inline bool terminates(double n, int j) {
  const double d = n - j;
  return d >= 0.0 && d == std::floor(d) && static_cast<long long>(d) % 2 == 0;
}

/// Coefficient of C^1_l(a^ . r^) in exp(a . r):
/// (a r)^l / (2^l l!) 0F1(l + 2; (a r)^2 / 4).
inline double plane_wave_radial(int l, double a, double r, const SeriesControl& ctl = {}) {
  if (l < 0) throw DomainError("plane_wave_radial: negative l");
  const double x = a * r;
  const double lead = std::exp(l * std::log(std::abs(x) / 2.0) - log_factorial(l));
  const double sign = (x < 0.0 && l % 2 != 0) ? -1.0 : 1.0;
  return (l == 0 ? 1.0 : sign * lead) * hyp0f1(l + 2.0, x * x / 4.0, ctl);
}

/// Coefficient of (a r)^n (C_l(a^) . C_l(r^)) in (a . r)^n:
/// n! 2 (l+1) / ((n-l)!! (n+l+2)!!), zero unless n - l is even and nonnegative.
inline double scalar_power_coeff(int n, int l) {
  if (n < 0 || l < 0 || l > n || (n - l) % 2 != 0) return 0.0;
  // (n-l)!! (n+l+2)!! = 2^{p+q} p! q! with p = (n-l)/2, q = (n+l+2)/2
  const int p = (n - l) / 2, q = (n + l + 2) / 2;
  return 2.0 * (l + 1) *
         std::exp(log_factorial(n) - log_factorial(p) - log_factorial(q) - (p + q) * std::numbers::ln2);
}

/// Factor in Delta^k (r^n C_j) = factor * r^{n-2k} C_j:
/// 2^{2k} ((-2-j-n)/2)_k ((j-n)/2)_k.
inline double laplacian_power(double n, int j, int k) {
  if (j < 0) throw DomainError("laplacian_power: negative j");
  if (k < 0) throw DomainError("laplacian_power: negative k");
  return std::ldexp(pochhammer((-2.0 - j - n) / 2.0, k) * pochhammer((j - n) / 2.0, k), 2 * k);
}

/// B^{(nj)}_{l lp}(r1, r2), the coefficient of {C_l(r1^) (x) C_lp(r2^)}_j.
///
/// B = r2^n (-r1/r2)^l (lp+1)/(l! (j+1)) ((-2-j-n)/2)_{(j+l-lp)/2} ((j-n)/2)_{(l+lp-j)/2}
///     2F1((-2+l-lp-n)/2, (l+lp-n)/2; l+2; r1^2/r2^2)
inline double b_coeff(const ExpansionSpec& spec, int l, int lp) {
  spec.validate();
  const int j = spec.j;
  if (!is_admissible(j, l, lp)) return 0.0;
  const double n = spec.n;
  const double p1 = pochhammer((-2.0 - j - n) / 2.0, (j + l - lp) / 2);
  const double p2 = pochhammer((j - n) / 2.0, (l + lp - j) / 2);
  if (p1 == 0.0 || p2 == 0.0) return 0.0;
  if (spec.r1 >= spec.r2 && !terminates(n, j))
    throw DivergentExpansion("b_coeff: series diverges for r1 >= r2; swap r1 and r2 to expand in r2/r1");
  const double ratio = spec.r1 / spec.r2;
  const double f = hyp2f1((-2.0 + l - lp - n) / 2.0, (l + lp - n) / 2.0, l + 2.0, ratio * ratio, spec.ctl);
  const double radial = std::pow(spec.r2, n) * std::pow(-ratio, l) * std::exp(-log_factorial(l));
  return radial * (lp + 1.0) / (j + 1.0) * p1 * p2 * f;
}

/// Coefficient of (C_l(r1^) . C_l(r2^)) in |r1 + r2|^n:
/// r2^n (-r1/r2)^l (1/l!) (-n/2)_l 2F1(-1-n/2, l-n/2; l+2; r1^2/r2^2).
inline double mult_j_zero_coeff(double n, double r1, double r2, int l, const SeriesControl& ctl = {}) {
  ExpansionSpec{n, 0, r1, r2, std::max(l, 0), ctl}.validate();
  if (l < 0) return 0.0;
  const double p = pochhammer(-n / 2.0, l);
  if (p == 0.0) return 0.0;
  if (r1 >= r2 && !terminates(n, 0))
    throw DivergentExpansion("mult_j_zero_coeff: series diverges for r1 >= r2; swap r1 and r2");
  const double ratio = r1 / r2;
  return std::pow(r2, n) * std::pow(-ratio, l) * std::exp(-log_factorial(l)) * p *
         hyp2f1(-1.0 - n / 2.0, l - n / 2.0, l + 2.0, ratio * ratio, ctl);
}

namespace detail {

// Admissible (l, lp) pairs: l <= l_max for infinite series; every pair with
// l + lp <= n when the series terminates.
inline std::vector<LPair> expansion_pairs(const ExpansionSpec& spec, bool finite) {
  std::vector<LPair> pairs;
  const int j = spec.j;
  const int l_top = finite ? static_cast<int>(spec.n) : spec.l_max;
  for (int l = 0; l <= l_top; ++l)
    for (int lp = std::max(0, j - l); lp <= j + l; ++lp) {
      if (!is_admissible(j, l, lp)) continue;
      if (finite && l + lp > spec.n) continue;
      pairs.emplace_back(l, lp);
    }
  return pairs;
}

}  // namespace detail

/// Table of B^{(nj)}_{l lp} over all admissible pairs.
inline CoeffTable expand_translated(const ExpansionSpec& spec) {
  spec.validate();
  CoeffTable table{spec, {}, terminates(spec.n, spec.j)};
  if (!table.terminated && spec.r1 >= spec.r2)
    throw DivergentExpansion("expand_translated: series diverges for r1 >= r2; swap r1 and r2");
  for (const auto& [l, lp] : detail::expansion_pairs(spec, table.terminated))
    table.entries[{l, lp}] = b_coeff(spec, l, lp);
  return table;
}

/// Expansion of f(r) C_j(r^) from the Taylor coefficients f_n of f:
/// C^{(j)}_{l lp} = sum_n f_n B^{(nj)}_{l lp}.
inline CoeffTable expand_radial_function(const std::vector<double>& taylor, int j, double r1, double r2,
                                         int l_max, const SeriesControl& ctl = {}) {
  ExpansionSpec base{0.0, j, r1, r2, l_max, ctl};
  base.validate();
  CoeffTable out{base, {}, true};
  for (std::size_t n = 0; n < taylor.size(); ++n) {
    if (taylor[n] == 0.0) continue;
    ExpansionSpec spec = base;
    spec.n = static_cast<double>(n);
    const CoeffTable term = expand_translated(spec);
    out.terminated = out.terminated && term.terminated;
    for (const auto& [key, value] : term.entries) out.entries[key] += taylor[n] * value;
  }
  if (out.entries.empty()) out.terminated = false;
  return out;
}

/// sum_{l lp} B_{l lp} {C_l(r1^) (x) C_lp(r2^)}_j, all outer components.
inline CComponents eval_expansion(const CoeffTable& table, int j, const Vec4& r1hat, const Vec4& r2hat) {
  CComponents out(j);
  if (table.entries.empty()) return out;
  int la = 0, lb = 0;
  for (const auto& [key, value] : table.entries) {
    la = std::max(la, key.first);
    lb = std::max(lb, key.second);
  }
  const BipolarEvaluator bip(r1hat, r2hat, la, lb, j);
  auto dst = out.values();
  for (const auto& [key, value] : table.entries) {
    if (value == 0.0) continue;
    const CComponents b = bip(key.first, key.second);
    const auto src = b.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += value * src[i];
  }
  return out;
}

/// r^n C_j(r^) for r = r1 + r2, evaluated directly.
inline CComponents translated_harmonic(double n, int j, const Vec4& r1, const Vec4& r2) {
  const Vec4 r = r1 + r2;
  CComponents c = hsh_c_all(j, r);
  const double scale = std::pow(norm(r), n);
  for (auto& v : c.values()) v *= scale;
  return c;
}

}  // namespace hsh4
