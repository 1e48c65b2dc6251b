#pragma once

// Quadrature on S^3 and numerical oracles for the analytic formulas.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hsh4/coupling4.hpp"
#include "hsh4/error.hpp"
#include "hsh4/harmonics.hpp"
#include "hsh4/multipole.hpp"

namespace hsh4 {

/// Neumaier-compensated running sum.
template <class T>
class CompensatedSum {
 public:
  void add(T x) {
    const T t = sum_ + x;
    comp_ += (std::abs(sum_) >= std::abs(x)) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_{};
  T comp_{};
};

template <>
class CompensatedSum<cplx> {
 public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

/// Product grid on S^3 with the measure sin^2(theta0) sin(theta) dtheta0 dtheta dphi.
///
/// theta0: Gauss-Chebyshev of the second kind in cos(theta0);
/// theta:  Gauss-Legendre in cos(theta);
/// phi:    uniform trapezoid.
/// The three 1D rules are stored separately; node (a, b, c) has weight
/// w0[a] w1[b] w2[c].
struct QuadratureGrid {
  std::vector<double> theta0, w0;
  std::vector<double> theta, w1;
  std::vector<double> phi, w2;
  int exact_degree = 0;

  std::size_t size() const { return theta0.size() * theta.size() * phi.size(); }

  Vec4 node(std::size_t a, std::size_t b, std::size_t c) const {
    return from_hyperangles({1.0, theta0[a], theta[b], phi[c]});
  }
  double weight(std::size_t a, std::size_t b, std::size_t c) const { return w0[a] * w1[b] * w2[c]; }

  /// Visits every node as f(Vec4, weight).
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t a = 0; a < theta0.size(); ++a)
      for (std::size_t b = 0; b < theta.size(); ++b)
        for (std::size_t c = 0; c < phi.size(); ++c) f(node(a, b, c), weight(a, b, c));
  }
};

namespace detail {

// (P_n(z), P_{n-1}(z)) by the three-term recurrence.
inline std::pair<double, double> legendre_pair(int n, double z) {
  double p0 = 1.0, p1 = z;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return {p1, p0};
}

}  // namespace detail

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one node");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      const auto [pn, pm] = detail::legendre_pair(n, z);
      dp = n * (z * pn - pm) / (z * z - 1.0);
      const double dz = pn / dp;
      z -= dz;
      if (std::abs(dz) <= 1e-16) break;
    }
    const auto [pn, pm] = detail::legendre_pair(n, z);
    dp = n * (z * pn - pm) / (z * z - 1.0);
    x[i] = z;
    x[n - 1 - i] = -z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

inline QuadratureGrid build_grid(int n0, int n1, int n2) {
  if (n0 < 1 || n1 < 1 || n2 < 1) throw DomainError("build_grid: node counts must be >= 1");
  QuadratureGrid g;
  const double pi = std::numbers::pi;
  for (int k = 1; k <= n0; ++k) {
    const double t = k * pi / (n0 + 1);
    g.theta0.push_back(t);
    g.w0.push_back(pi / (n0 + 1) * std::sin(t) * std::sin(t));
  }
  const auto [x, w] = gauss_legendre(n1);
  for (int k = 0; k < n1; ++k) {
    g.theta.push_back(std::acos(x[k]));
    g.w1.push_back(w[k]);
  }
  for (int k = 0; k < n2; ++k) {
    g.phi.push_back(2.0 * pi * k / n2);
    g.w2.push_back(2.0 * pi / n2);
  }
  g.exact_degree = std::min({2 * n0 - 1, 2 * n1 - 1, n2 - 1});
  return g;
}

/// Integral of f over S^3; f may return double or cplx.
template <class F>
auto integrate(const QuadratureGrid& grid, F&& f) {
  using T = decltype(f(Vec4{}));
  CompensatedSum<T> total;
  for (std::size_t a = 0; a < grid.theta0.size(); ++a)
    for (std::size_t b = 0; b < grid.theta.size(); ++b) {
      T slice{};
      for (std::size_t c = 0; c < grid.phi.size(); ++c) slice += grid.w2[c] * f(grid.node(a, b, c));
      total.add(grid.w0[a] * grid.w1[b] * slice);
    }
  return total.value();
}

// ---------------------------------------------------------------------------
// Orthogonality.

struct GramMatrix {
  std::vector<std::string> labels;
  std::vector<int> ranks;
  std::vector<cplx> overlap;  // row-major, overlap[a * size + b] = <f_a, f_b>
  double max_diag_error = 0.0;
  double max_offdiag_error = 0.0;

  std::size_t size() const { return labels.size(); }
  cplx at(std::size_t a, std::size_t b) const { return overlap[a * size() + b]; }
};

struct OrthogonalityReport {
  int j_max = 0;
  std::size_t nodes = 0;
  int exact_degree = 0;
  GramMatrix c_family;
  GramMatrix h_family;
  double max_diag_family_gap = 0.0;
};

namespace detail {

// Gram matrix sum_nodes w conj(f_a) f_b. `fill(v, out)` writes all harmonic
// values at v into out[h]. Each (theta0, theta) slice is summed over phi in
// plain arithmetic; slices are then combined with compensation.
template <class Fill>
void fill_gram(const QuadratureGrid& grid, GramMatrix& g, Fill&& fill) {
  const std::size_t count = g.size();
  const std::size_t np = grid.phi.size();
  // node-major: re[c * count + h]
  std::vector<double> re(np * count), im(np * count);
  std::vector<cplx> values(count);
  std::vector<double> sr(count), si(count);
  std::vector<CompensatedSum<double>> acc_re(count * count), acc_im(count * count);
  for (std::size_t a = 0; a < grid.theta0.size(); ++a)
    for (std::size_t b = 0; b < grid.theta.size(); ++b) {
      for (std::size_t c = 0; c < np; ++c) {
        fill(grid.node(a, b, c), values);
        const double sw = std::sqrt(grid.w2[c]);
        for (std::size_t h = 0; h < count; ++h) {
          re[c * count + h] = values[h].real() * sw;
          im[c * count + h] = values[h].imag() * sw;
        }
      }
      const double ws = grid.w0[a] * grid.w1[b];
      for (std::size_t h1 = 0; h1 < count; ++h1) {
        std::fill(sr.begin() + h1, sr.end(), 0.0);
        std::fill(si.begin() + h1, si.end(), 0.0);
        for (std::size_t c = 0; c < np; ++c) {
          const double* rr = &re[c * count];
          const double* ii = &im[c * count];
          const double x = rr[h1], y = ii[h1];
          for (std::size_t h2 = h1; h2 < count; ++h2) {
            sr[h2] += x * rr[h2] + y * ii[h2];
            si[h2] += x * ii[h2] - y * rr[h2];
          }
        }
        for (std::size_t h2 = h1; h2 < count; ++h2) {
          acc_re[h1 * count + h2].add(ws * sr[h2]);
          acc_im[h1 * count + h2].add(ws * si[h2]);
        }
      }
    }
  g.overlap.assign(count * count, cplx{});
  for (std::size_t h1 = 0; h1 < count; ++h1)
    for (std::size_t h2 = h1; h2 < count; ++h2) {
      const cplx v(acc_re[h1 * count + h2].value(), acc_im[h1 * count + h2].value());
      g.overlap[h1 * count + h2] = v;
      g.overlap[h2 * count + h1] = std::conj(v);
    }
}

inline void score_gram(GramMatrix& g) {
  const double pi2 = 2.0 * std::numbers::pi * std::numbers::pi;
  for (std::size_t a = 0; a < g.size(); ++a)
    for (std::size_t b = 0; b < g.size(); ++b) {
      if (a == b) {
        g.max_diag_error = std::max(g.max_diag_error, std::abs(g.at(a, a) - pi2 / (g.ranks[a] + 1.0)));
      } else {
        g.max_offdiag_error = std::max(g.max_offdiag_error, std::abs(g.at(a, b)));
      }
    }
}

}  // namespace detail

/// Overlaps of all C- and H-harmonics with j <= j_max against 2 pi^2/(j+1) delta.
inline OrthogonalityReport orthogonality_report(int j_max, const QuadratureGrid& grid) {
  if (j_max < 0) throw DomainError("orthogonality_report: negative j_max");
  if (grid.exact_degree < 2 * j_max + 2)
    throw DomainError("orthogonality_report: grid exactness below 2 j_max + 2");
  OrthogonalityReport rep;
  rep.j_max = j_max;
  rep.nodes = grid.size();
  rep.exact_degree = grid.exact_degree;

  std::size_t count = 0;
  for (int j = 0; j <= j_max; ++j) {
    count += static_cast<std::size_t>((j + 1) * (j + 1));
    for (int l = 0; l <= j; ++l)
      for (int a = -l; a <= l; ++a) {
        rep.c_family.labels.push_back("C(" + std::to_string(j) + "," + std::to_string(l) + "," + std::to_string(a) + ")");
        rep.c_family.ranks.push_back(j);
      }
    for (int m = -j; m <= j; m += 2)
      for (int n = -j; n <= j; n += 2) {
        rep.h_family.labels.push_back("H(" + std::to_string(j) + "," + std::to_string(m) + "/2," +
                                      std::to_string(n) + "/2)");
        rep.h_family.ranks.push_back(j);
      }
  }

  detail::fill_gram(grid, rep.c_family, [j_max](const Vec4& v, std::vector<cplx>& out) {
    std::size_t k = 0;
    for (int j = 0; j <= j_max; ++j) {
      const CComponents c = hsh_c_all(j, v);
      for (const cplx& x : c.values()) out[k++] = x;
    }
  });
  detail::score_gram(rep.c_family);
  detail::fill_gram(grid, rep.h_family, [j_max](const Vec4& v, std::vector<cplx>& out) {
    std::size_t k = 0;
    for (int j = 0; j <= j_max; ++j) {
      const HComponents h = hsh_h_all(j, v);
      for (const cplx& x : h.values()) out[k++] = x;
    }
  });
  detail::score_gram(rep.h_family);

  for (std::size_t a = 0; a < count; ++a)
    rep.max_diag_family_gap =
        std::max(rep.max_diag_family_gap, std::abs(rep.c_family.at(a, a) - rep.h_family.at(a, a)));
  return rep;
}

// ---------------------------------------------------------------------------
// Projection oracle for multipole coefficients.

/// Portable Gaussian and rotation sampling from a seeded mt19937_64.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    // 53-bit mantissa from the raw engine output; identical on every platform.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    spare_ = rad * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return rad * std::cos(2.0 * std::numbers::pi * u2);
  }

  Vec4 unit_vector() {
    for (;;) {
      const Vec4 v{gaussian(), gaussian(), gaussian(), gaussian()};
      const double r = norm(v);
      if (r > 1e-8) return (1.0 / r) * v;
    }
  }

  /// Random orthogonal 4x4 matrix (rows orthonormal) by Gram-Schmidt.
  std::array<Vec4, 4> rotation() {
    std::array<Vec4, 4> q;
    for (int i = 0; i < 4; ++i) {
      for (;;) {
        Vec4 v{gaussian(), gaussian(), gaussian(), gaussian()};
        for (int k = 0; k < i; ++k) v = v - dot(v, q[k]) * q[k];
        const double r = norm(v);
        if (r > 1e-6) {
          q[i] = (1.0 / r) * v;
          break;
        }
      }
    }
    return q;
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline Vec4 rotate(const std::array<Vec4, 4>& rows, const Vec4& v) {
  return {dot(rows[0], v), dot(rows[1], v), dot(rows[2], v), dot(rows[3], v)};
}

struct ProjectionOptions {
  std::array<int, 3> grid{24, 24, 48};
  std::array<int, 3> check_grid{32, 32, 64};
  std::uint64_t seed = 20240611;
  double agree_tol = 1e-8;
};

struct ProjectionResult {
  std::map<LPair, double> values;
  double seed_spread = 0.0;  // max |B(seed) - B(seed + 1)| on the check grid
  double grid_spread = 0.0;  // max |B(grid) - B(check_grid)|
  bool consistent = false;
};

namespace detail {

// sum over grid of <bip_{l lp}, LHS> and <bip_{l lp}, bip_{l lp}> with the
// second direction fixed at a random point and the first grid rotated.
inline std::map<LPair, double> project_once(double n, int j, double r1, double r2,
                                            const std::vector<LPair>& pairs, const QuadratureGrid& grid,
                                            std::uint64_t seed) {
  RandomSource rng(seed);
  const auto rot = rng.rotation();
  const Vec4 u2 = rng.unit_vector();
  int la = 0, lb = 0;
  for (const auto& [l, lp] : pairs) la = std::max(la, l), lb = std::max(lb, lp);

  std::vector<CompensatedSum<cplx>> num(pairs.size());
  std::vector<CompensatedSum<double>> den(pairs.size());
  for (std::size_t a = 0; a < grid.theta0.size(); ++a)
    for (std::size_t b = 0; b < grid.theta.size(); ++b)
      for (std::size_t c = 0; c < grid.phi.size(); ++c) {
        const double w = grid.weight(a, b, c);
        const Vec4 u1 = rotate(rot, grid.node(a, b, c));
        const CComponents lhs = translated_harmonic(n, j, r1 * u1, r2 * u2);
        const BipolarEvaluator bip(u1, u2, la, lb, j);
        for (std::size_t p = 0; p < pairs.size(); ++p) {
          const CComponents bv = bip(pairs[p].first, pairs[p].second);
          cplx s = 0.0;
          double nn = 0.0;
          for (std::size_t i = 0; i < bv.size(); ++i) {
            s += std::conj(bv.values()[i]) * lhs.values()[i];
            nn += std::norm(bv.values()[i]);
          }
          num[p].add(w * s);
          den[p].add(w * nn);
        }
      }
  std::map<LPair, double> out;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const double d = den[p].value();
    out[pairs[p]] = d > 0.0 ? num[p].value().real() / d : 0.0;
  }
  return out;
}

}  // namespace detail

/// Recovers B^{(nj)}_{l lp} for every pair in `pairs` by projecting r^n C_j((r1+r2)^)
/// onto the bipolar harmonics. The value comes from `opt.grid` with `opt.seed`;
/// a second seed and a finer grid must agree within `opt.agree_tol`.
inline ProjectionResult project_multipole_batch(double n, int j, double r1, double r2,
                                                const std::vector<LPair>& pairs,
                                                const ProjectionOptions& opt = {}) {
  if (!(r1 >= 0.0 && r1 < r2)) throw DivergentExpansion("project_multipole: requires 0 <= r1 < r2");
  if (j < 0) throw DomainError("project_multipole: negative j");
  ProjectionResult res;
  if (pairs.empty()) {
    res.consistent = true;
    return res;
  }
  const auto g = build_grid(opt.grid[0], opt.grid[1], opt.grid[2]);
  const auto gc = build_grid(opt.check_grid[0], opt.check_grid[1], opt.check_grid[2]);
  res.values = detail::project_once(n, j, r1, r2, pairs, g, opt.seed);
  const auto fine_a = detail::project_once(n, j, r1, r2, pairs, gc, opt.seed);
  const auto fine_b = detail::project_once(n, j, r1, r2, pairs, gc, opt.seed + 1);
  for (const auto& key : pairs) {
    res.seed_spread = std::max(res.seed_spread, std::abs(fine_a.at(key) - fine_b.at(key)));
    res.grid_spread = std::max(res.grid_spread, std::abs(res.values.at(key) - fine_a.at(key)));
  }
  res.consistent = res.seed_spread <= opt.agree_tol && res.grid_spread <= opt.agree_tol;
  return res;
}

inline ProjectionResult project_multipole(double n, int j, double r1, double r2, int l, int lp,
                                          const ProjectionOptions& opt = {}) {
  return project_multipole_batch(n, j, r1, r2, {{l, lp}}, opt);
}

// ---------------------------------------------------------------------------
// Check records.

struct CheckResult {
  std::string check;
  std::map<std::string, double> params;
  double expected = 0.0;
  double observed = 0.0;
  double abs_err = 0.0;
  double rel_err = 0.0;
  bool pass = false;
};

/// Passes when |observed - expected| <= abs_tol or <= rel_tol |expected|.
inline CheckResult make_check(std::string name, std::map<std::string, double> params, double expected,
                              double observed, double abs_tol, double rel_tol = 0.0) {
  CheckResult r{std::move(name), std::move(params), expected, observed, 0.0, 0.0, false};
  r.abs_err = std::abs(observed - expected);
  r.rel_err = expected != 0.0 ? r.abs_err / std::abs(expected) : r.abs_err;
  r.pass = r.abs_err <= abs_tol || (rel_tol > 0.0 && r.abs_err <= rel_tol * std::abs(expected));
  return r;
}

}  // namespace hsh4
