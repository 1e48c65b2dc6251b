#pragma once

// Four-dimensional geometry and the two families of hyperspherical harmonics:
// parabolic-type H_{j,mu,nu} (rotation-matrix elements U^{j/2}_{mu nu}) and
// spherical-type C_{j,lambda,alpha}.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "hsh4/angular3.hpp"
#include "hsh4/cache.hpp"
#include "hsh4/error.hpp"
#include "hsh4/special_fn.hpp"

namespace hsh4 {

/// Cartesian 4-vector (x, y, z, z0).
struct Vec4 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double z0 = 0.0;

  friend constexpr Vec4 operator+(const Vec4& a, const Vec4& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z, a.z0 + b.z0};
  }
  friend constexpr Vec4 operator-(const Vec4& a, const Vec4& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z, a.z0 - b.z0};
  }
  friend constexpr Vec4 operator*(double s, const Vec4& a) {
    return {s * a.x, s * a.y, s * a.z, s * a.z0};
  }
  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

constexpr double dot(const Vec4& a, const Vec4& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z + a.z0 * b.z0;
}

inline double norm(const Vec4& a) { return std::sqrt(dot(a, a)); }

/// Cosine of the 4D angle between two nonzero vectors, clamped to [-1, 1].
inline double cos_angle(const Vec4& a, const Vec4& b) {
  const double c = dot(a, b) / (norm(a) * norm(b));
  return std::clamp(c, -1.0, 1.0);
}

/// Hyperspherical coordinates (r, theta0, theta, phi).
struct HyperAngles {
  double r = 0.0;
  double theta0 = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

inline HyperAngles to_hyperangles(const Vec4& v) {
  const double r = norm(v);
  if (r == 0.0) return {};
  const double rho = std::hypot(v.x, v.y);
  double phi = std::atan2(v.y, v.x);
  if (phi < 0.0) phi += 2.0 * std::numbers::pi;
  if (phi >= 2.0 * std::numbers::pi) phi = 0.0;
  return {r, std::acos(std::clamp(v.z0 / r, -1.0, 1.0)), std::atan2(rho, v.z), phi};
}

inline Vec4 from_hyperangles(const HyperAngles& h) {
  const double s0 = std::sin(h.theta0);
  const double s = std::sin(h.theta);
  return {h.r * s0 * s * std::cos(h.phi), h.r * s0 * s * std::sin(h.phi), h.r * s0 * std::cos(h.theta),
          h.r * std::cos(h.theta0)};
}

/// Hyperspherical components r_{mu nu}, indexed [(2mu+1)/2][(2nu+1)/2].
using HypComponents = std::array<std::array<cplx, 2>, 2>;

inline HypComponents hyp_components(const Vec4& v) {
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const cplx i(0.0, 1.0);
  HypComponents r{};
  r[1][1] = inv_sqrt2 * (v.z0 - i * v.z);         // (+1/2, +1/2)
  r[0][0] = inv_sqrt2 * (v.z0 + i * v.z);         // (-1/2, -1/2)
  r[1][0] = -i * inv_sqrt2 * (v.x - i * v.y);     // (+1/2, -1/2)
  r[0][1] = -i * inv_sqrt2 * (v.x + i * v.y);     // (-1/2, +1/2)
  return r;
}

/// Label (j, 2mu, 2nu) of an H-harmonic.
struct HshIndexH {
  int j = 0;
  TwiceInt mu;
  TwiceInt nu;

  void validate() const {
    if (j < 0 || !is_projection(TwiceInt(j), mu) || !is_projection(TwiceInt(j), nu))
      throw InvalidIndex("HshIndexH: invalid (j, 2mu, 2nu) = (" + std::to_string(j) + ", " +
                         std::to_string(mu.value) + ", " + std::to_string(nu.value) + ")");
  }
};

/// Label (j, lambda, alpha) of a C-harmonic.
struct HshIndexC {
  int j = 0;
  int lambda = 0;
  int alpha = 0;

  void validate() const {
    if (j < 0 || lambda < 0 || lambda > j || std::abs(alpha) > lambda)
      throw InvalidIndex("HshIndexC: invalid (j, lambda, alpha) = (" + std::to_string(j) + ", " +
                         std::to_string(lambda) + ", " + std::to_string(alpha) + ")");
  }
};

/// All (j+1)^2 components of a rank-j H-type tensor, row-major in
/// ((2mu+j)/2, (2nu+j)/2).
class HComponents {
 public:
  explicit HComponents(int j = 0) : j_(j), values_((j + 1) * (j + 1)) {
    if (j < 0) throw InvalidIndex("HComponents: negative rank");
  }

  int rank() const { return j_; }
  std::size_t size() const { return values_.size(); }

  static int index(int j, int twice_mu, int twice_nu) {
    return ((twice_mu + j) / 2) * (j + 1) + (twice_nu + j) / 2;
  }
  cplx& at(int twice_mu, int twice_nu) { return values_[index(j_, twice_mu, twice_nu)]; }
  const cplx& at(int twice_mu, int twice_nu) const { return values_[index(j_, twice_mu, twice_nu)]; }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }

 private:
  int j_;
  std::vector<cplx> values_;
};

/// All (j+1)^2 components of a rank-j C-type tensor, ordered by lambda then
/// alpha + lambda.
class CComponents {
 public:
  explicit CComponents(int j = 0) : j_(j), values_((j + 1) * (j + 1)) {
    if (j < 0) throw InvalidIndex("CComponents: negative rank");
  }

  int rank() const { return j_; }
  std::size_t size() const { return values_.size(); }

  static int index(int lambda, int alpha) { return lambda * lambda + lambda + alpha; }
  cplx& at(int lambda, int alpha) { return values_[index(lambda, alpha)]; }
  const cplx& at(int lambda, int alpha) const { return values_[index(lambda, alpha)]; }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }

 private:
  int j_;
  std::vector<cplx> values_;
};

namespace detail {

inline HyperAngles direction_angles(const Vec4& v, const char* what) {
  const HyperAngles h = to_hyperangles(v);
  if (h.r == 0.0) throw DomainError(std::string(what) + ": zero vector has no direction");
  return h;
}

// One term of an H <-> C basis change, or of the lambda-sum for U^{j/2}_{mu nu}.
struct BasisTerm {
  int h_index;
  int c_index;
  int lambda;
  double coeff;
};

// sqrt((2 lambda+1)/(j+1)) C^{(j/2) nu}_{(j/2) mu, lambda alpha}, alpha = nu - mu.
inline const std::vector<BasisTerm>& basis_change_terms(int j) {
  static ReadMostlyCache<int, std::shared_ptr<const std::vector<BasisTerm>>> cache;
  return *cache.get_or_compute(j, [j] {
    auto terms = std::make_shared<std::vector<BasisTerm>>();
    const TwiceInt tj(j);
    for (int tmu = -j; tmu <= j; tmu += 2) {
      for (int tnu = -j; tnu <= j; tnu += 2) {
        const int alpha = (tnu - tmu) / 2;
        for (int lambda = std::abs(alpha); lambda <= j; ++lambda) {
          const double cg = cgc3(tj, TwiceInt(tmu), TwiceInt::of(lambda), TwiceInt::of(alpha), tj,
                                 TwiceInt(tnu));
          if (cg == 0.0) continue;
          terms->push_back({HComponents::index(j, tmu, tnu), CComponents::index(lambda, alpha),
                            lambda, std::sqrt((2.0 * lambda + 1.0) / (j + 1.0)) * cg});
        }
      }
    }
    return std::shared_ptr<const std::vector<BasisTerm>>(std::move(terms));
  });
}

// chi^{j/2}_lambda(2 theta0) for lambda = 0..j.
inline std::vector<double> characters(int j, double theta0) {
  std::vector<double> chi(j + 1);
  for (int lambda = 0; lambda <= j; ++lambda)
    chi[lambda] = gen_character(TwiceInt(j), lambda, 2.0 * theta0);
  return chi;
}

}  // namespace detail

/// Radial (theta0) factor of C_{j,lambda,alpha}:
/// (-i)^lambda sqrt((2 lambda + 1)/(j + 1)) chi^{j/2}_lambda(2 theta0), for lambda = 0..j.
inline std::vector<cplx> c_radial_factors(int j, double theta0) {
  const auto chi = detail::characters(j, theta0);
  std::vector<cplx> out(j + 1);
  for (int lambda = 0; lambda <= j; ++lambda)
    out[lambda] = detail::minus_i_pow(lambda) * std::sqrt((2.0 * lambda + 1.0) / (j + 1.0)) * chi[lambda];
  return out;
}

/// H_{j,mu,nu}(v/|v|) = U^{j/2}_{mu nu}(2 theta0, theta, phi).
inline cplx hsh_h(const HshIndexH& idx, const Vec4& v) {
  idx.validate();
  const HyperAngles h = detail::direction_angles(v, "hsh_h");
  return rotation_u(TwiceInt(idx.j), idx.mu, idx.nu, {2.0 * h.theta0, h.theta, h.phi});
}

/// C_{j,lambda,alpha}(v/|v|) = (-i)^lambda sqrt((2 lambda+1)/(j+1)) chi^{j/2}_lambda(2 theta0) C_{lambda alpha}(theta, phi).
inline cplx hsh_c(const HshIndexC& idx, const Vec4& v) {
  idx.validate();
  const HyperAngles h = detail::direction_angles(v, "hsh_c");
  return detail::minus_i_pow(idx.lambda) * std::sqrt((2.0 * idx.lambda + 1.0) / (idx.j + 1.0)) *
         gen_character(TwiceInt(idx.j), idx.lambda, 2.0 * h.theta0) *
         mod_sph_harm(idx.lambda, idx.alpha, h.theta, h.phi);
}

/// Every component of C_j at one direction.
inline CComponents hsh_c_all(int j, const Vec4& v) {
  if (j < 0) throw InvalidIndex("hsh_c_all: negative rank");
  const HyperAngles h = detail::direction_angles(v, "hsh_c_all");
  const auto radial = c_radial_factors(j, h.theta0);
  const auto ylm = mod_sph_harm_all(j, h.theta, h.phi);
  CComponents out(j);
  for (int lambda = 0; lambda <= j; ++lambda)
    for (int alpha = -lambda; alpha <= lambda; ++alpha)
      out.at(lambda, alpha) = radial[lambda] * ylm[CComponents::index(lambda, alpha)];
  return out;
}

/// Every component of H_j at one direction, through the character sum for U^{j/2}.
inline HComponents hsh_h_all(int j, const Vec4& v) {
  if (j < 0) throw InvalidIndex("hsh_h_all: negative rank");
  const HyperAngles h = detail::direction_angles(v, "hsh_h_all");
  const auto chi = detail::characters(j, h.theta0);
  const auto ylm = mod_sph_harm_all(j, h.theta, h.phi);
  HComponents out(j);
  auto values = out.values();
  // U^{j/2}_{mu nu} = sum_lambda (-i)^lambda (2 lambda+1)/(j+1) C^{..}_{..} chi_lambda C_{lambda alpha}
  for (const auto& t : detail::basis_change_terms(j)) {
    const double weight = std::sqrt((2.0 * t.lambda + 1.0) / (j + 1.0));
    values[t.h_index] += detail::minus_i_pow(t.lambda) * (weight * t.coeff) * chi[t.lambda] * ylm[t.c_index];
  }
  return out;
}

/// C-components from H-components:
/// C_{j,lambda,alpha} = sqrt((2 lambda+1)/(j+1)) sum_{mu nu} C^{(j/2) nu}_{(j/2) mu, lambda alpha} H_{j,mu,nu}.
inline CComponents c_from_h(const HComponents& hc) {
  const int j = hc.rank();
  CComponents out(j);
  auto dst = out.values();
  const auto src = hc.values();
  for (const auto& t : detail::basis_change_terms(j)) dst[t.c_index] += t.coeff * src[t.h_index];
  return out;
}

/// Inverse of c_from_h.
inline HComponents h_from_c(const CComponents& cc) {
  const int j = cc.rank();
  HComponents out(j);
  auto dst = out.values();
  const auto src = cc.values();
  for (const auto& t : detail::basis_change_terms(j)) dst[t.h_index] += t.coeff * src[t.c_index];
  return out;
}

inline CComponents c_from_h(int j, const Vec4& v) { return c_from_h(hsh_h_all(j, v)); }
inline HComponents h_from_c(int j, const Vec4& v) { return h_from_c(hsh_c_all(j, v)); }

/// Scalar product of C-type components: sum (-1)^{lambda+alpha} a_{lambda alpha} b_{lambda,-alpha}.
inline cplx scalar_product(const CComponents& a, const CComponents& b) {
  if (a.rank() != b.rank()) throw InvalidIndex("scalar_product: rank mismatch");
  cplx sum = 0.0;
  for (int lambda = 0; lambda <= a.rank(); ++lambda)
    for (int alpha = -lambda; alpha <= lambda; ++alpha)
      sum += detail::parity_sign(lambda + alpha) * a.at(lambda, alpha) * b.at(lambda, -alpha);
  return sum;
}

/// Scalar product of H-type components: sum (-1)^{mu-nu} a_{mu nu} b_{-mu,-nu}.
inline cplx scalar_product(const HComponents& a, const HComponents& b) {
  if (a.rank() != b.rank()) throw InvalidIndex("scalar_product: rank mismatch");
  const int j = a.rank();
  cplx sum = 0.0;
  for (int tmu = -j; tmu <= j; tmu += 2)
    for (int tnu = -j; tnu <= j; tnu += 2)
      sum += detail::parity_sign((tmu - tnu) / 2) * a.at(tmu, tnu) * b.at(-tmu, -tnu);
  return sum;
}

/// (C_j(a) . C_j(b)), which equals C^1_j(cos gamma).
inline double scalar_product_c(int j, const Vec4& a, const Vec4& b) {
  return scalar_product(hsh_c_all(j, a), hsh_c_all(j, b)).real();
}

/// (H_j(a) . H_j(b)), which equals C^1_j(cos gamma).
inline double scalar_product_h(int j, const Vec4& a, const Vec4& b) {
  return scalar_product(hsh_h_all(j, a), hsh_h_all(j, b)).real();
}

/// Harmonic normalized to unit integral over S^3:
/// Y = ((-1)^{j+lambda}/pi) sqrt((j+1)/2) C_{j,lambda,alpha}.
inline cplx hsh_y(const HshIndexC& idx, const Vec4& v) {
  return detail::parity_sign(idx.j + idx.lambda) / std::numbers::pi * std::sqrt((idx.j + 1.0) / 2.0) *
         hsh_c(idx, v);
}

}  // namespace hsh4
