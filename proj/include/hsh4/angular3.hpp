#pragma once

// Three-dimensional angular-momentum kernel. Angular momenta and projections
// are passed as TwiceInt (2j, 2m) so half-integers stay exact.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "hsh4/error.hpp"
#include "hsh4/special_fn.hpp"

namespace hsh4 {

using cplx = std::complex<double>;

/// Doubled integer: stores 2j or 2m.
struct TwiceInt {
  int value = 0;

  constexpr TwiceInt() = default;
  constexpr explicit TwiceInt(int twice) : value(twice) {}

  static constexpr TwiceInt of(int integer) { return TwiceInt(2 * integer); }
  constexpr double half() const { return 0.5 * value; }
  constexpr bool is_integer() const { return value % 2 == 0; }

  friend constexpr auto operator<=>(TwiceInt, TwiceInt) = default;
  friend constexpr TwiceInt operator+(TwiceInt a, TwiceInt b) { return TwiceInt(a.value + b.value); }
  friend constexpr TwiceInt operator-(TwiceInt a, TwiceInt b) { return TwiceInt(a.value - b.value); }
  friend constexpr TwiceInt operator-(TwiceInt a) { return TwiceInt(-a.value); }
};

/// True when m is a valid projection of j: |m| <= j and m = j (mod 1).
constexpr bool is_projection(TwiceInt j, TwiceInt m) {
  return j.value >= 0 && std::abs(m.value) <= j.value && (j.value - m.value) % 2 == 0;
}

/// Triangle rule for three angular momenta (doubled).
constexpr bool triangle(int ta, int tb, int tc) {
  return ta >= 0 && tb >= 0 && tc >= 0 && (ta + tb + tc) % 2 == 0 && tc >= std::abs(ta - tb) &&
         tc <= ta + tb;
}

/// Rotation by omega about the axis with polar angles (theta, phi).
struct Angle3 {
  double omega = 0.0;
  double theta = 0.0;
  double phi = 0.0;
};

namespace detail {

inline void check_projection(TwiceInt j, TwiceInt m, const char* what) {
  if (!is_projection(j, m))
    throw InvalidIndex(std::string(what) + ": projection 2m=" + std::to_string(m.value) +
                       " invalid for 2j=" + std::to_string(j.value));
}

inline double parity_sign(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

// ln Delta(abc) for doubled arguments forming a valid triad.
inline double log_triangle_coeff(int ta, int tb, int tc) {
  return 0.5 * (log_factorial((ta + tb - tc) / 2) + log_factorial((ta - tb + tc) / 2) +
                log_factorial((-ta + tb + tc) / 2) - log_factorial((ta + tb + tc) / 2 + 1));
}

}  // namespace detail

/// Clebsch-Gordan coefficient C^{j m}_{j1 m1, j2 m2} (Condon-Shortley phases).
inline double cgc3(TwiceInt j1, TwiceInt m1, TwiceInt j2, TwiceInt m2, TwiceInt j, TwiceInt m) {
  detail::check_projection(j1, m1, "cgc3");
  detail::check_projection(j2, m2, "cgc3");
  detail::check_projection(j, m, "cgc3");
  if (m1.value + m2.value != m.value) return 0.0;
  if (!triangle(j1.value, j2.value, j.value)) return 0.0;

  const int a = (j1.value + j2.value - j.value) / 2;  // j1 + j2 - j
  const int b = (j1.value - m1.value) / 2;            // j1 - m1
  const int c = (j2.value + m2.value) / 2;            // j2 + m2
  const int d = (j.value - j2.value + m1.value) / 2;  // j - j2 + m1
  const int e = (j.value - j1.value - m2.value) / 2;  // j - j1 - m2

  const double log_pre =
      0.5 * std::log(j.value + 1.0) + detail::log_triangle_coeff(j1.value, j2.value, j.value) +
      0.5 * (log_factorial((j1.value + m1.value) / 2) + log_factorial((j1.value - m1.value) / 2) +
             log_factorial((j2.value + m2.value) / 2) + log_factorial((j2.value - m2.value) / 2) +
             log_factorial((j.value + m.value) / 2) + log_factorial((j.value - m.value) / 2));

  const int k_min = std::max({0, -d, -e});
  const int k_max = std::min({a, b, c});
  double sum = 0.0;
  for (int k = k_min; k <= k_max; ++k) {
    const double log_den = log_factorial(k) + log_factorial(a - k) + log_factorial(b - k) +
                           log_factorial(c - k) + log_factorial(d + k) + log_factorial(e + k);
    sum += detail::parity_sign(k) * std::exp(log_pre - log_den);
  }
  return sum;
}

/// Wigner 6j symbol {a b c; d e f} by the Racah single sum; zero on invalid triads.
inline double wigner6j(TwiceInt a, TwiceInt b, TwiceInt c, TwiceInt d, TwiceInt e, TwiceInt f) {
  const int ta = a.value, tb = b.value, tc = c.value, td = d.value, te = e.value, tf = f.value;
  if (!triangle(ta, tb, tc) || !triangle(ta, te, tf) || !triangle(td, tb, tf) ||
      !triangle(td, te, tc))
    return 0.0;
  const double log_delta = detail::log_triangle_coeff(ta, tb, tc) +
                           detail::log_triangle_coeff(ta, te, tf) +
                           detail::log_triangle_coeff(td, tb, tf) +
                           detail::log_triangle_coeff(td, te, tc);
  const int s1 = (ta + tb + tc) / 2;
  const int s2 = (ta + te + tf) / 2;
  const int s3 = (td + tb + tf) / 2;
  const int s4 = (td + te + tc) / 2;
  const int p1 = (ta + tb + td + te) / 2;
  const int p2 = (ta + tc + td + tf) / 2;
  const int p3 = (tb + tc + te + tf) / 2;
  const int t_min = std::max({s1, s2, s3, s4});
  const int t_max = std::min({p1, p2, p3});
  double sum = 0.0;
  for (int t = t_min; t <= t_max; ++t) {
    const double log_term = log_factorial(t + 1) - log_factorial(t - s1) - log_factorial(t - s2) -
                            log_factorial(t - s3) - log_factorial(t - s4) -
                            log_factorial(p1 - t) - log_factorial(p2 - t) - log_factorial(p3 - t);
    sum += detail::parity_sign(t) * std::exp(log_delta + log_term);
  }
  return sum;
}

/// Wigner 9j symbol {a b c; d e f; g h k} as a contraction of three 6j symbols.
inline double wigner9j(TwiceInt a, TwiceInt b, TwiceInt c, TwiceInt d, TwiceInt e, TwiceInt f,
                       TwiceInt g, TwiceInt h, TwiceInt k) {
  const int ta = a.value, tb = b.value, tc = c.value, td = d.value, te = e.value, tf = f.value,
            tg = g.value, th = h.value, tk = k.value;
  if (!triangle(ta, tb, tc) || !triangle(td, te, tf) || !triangle(tg, th, tk) ||
      !triangle(ta, td, tg) || !triangle(tb, te, th) || !triangle(tc, tf, tk))
    return 0.0;
  const int x_min = std::max({std::abs(ta - tk), std::abs(td - th), std::abs(tb - tf)});
  const int x_max = std::min({ta + tk, td + th, tb + tf});
  double sum = 0.0;
  for (int x = x_min; x <= x_max; ++x) {
    if (!triangle(ta, tk, x) || !triangle(td, th, x) || !triangle(tb, tf, x)) continue;
    const TwiceInt tx(x);
    sum += detail::parity_sign(x) * (x + 1.0) * wigner6j(a, b, c, f, k, tx) *
           wigner6j(d, e, f, b, tx, h) * wigner6j(g, h, k, tx, a, d);
  }
  return sum;
}

/// Generalized character chi^l_lambda(omega), expressed through C^{lambda+1}_{2l-lambda}.
inline double gen_character(TwiceInt l, int lambda, double omega) {
  const int tl = l.value;
  if (tl < 0) throw InvalidIndex("gen_character: negative l");
  if (lambda < 0 || lambda > tl)
    throw InvalidIndex("gen_character: lambda=" + std::to_string(lambda) + " outside [0, 2l]");
  // (2 lambda)!! = 2^lambda lambda!
  const double log_pre = lambda * std::numbers::ln2 + log_factorial(lambda) +
                         0.5 * (log_factorial(tl - lambda) - log_factorial(tl + lambda + 1));
  const double half = 0.5 * omega;
  return std::exp(log_pre) * std::sqrt(tl + 1.0) * std::pow(std::sin(half), lambda) *
         gegenbauer(lambda + 1.0, tl - lambda, std::cos(half));
}

/// All C_{lambda alpha}(theta, phi) for lambda <= lmax, stored at lambda^2 + lambda + alpha.
///
/// C_{lambda alpha} = sqrt(4 pi / (2 lambda + 1)) Y_{lambda alpha}, Condon-Shortley phase.
inline std::vector<cplx> mod_sph_harm_all(int lmax, double theta, double phi) {
  if (lmax < 0) throw InvalidIndex("mod_sph_harm_all: negative lmax");
  const int n = (lmax + 1) * (lmax + 1);
  std::vector<cplx> out(n);
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  // q holds sqrt((l-m)!/(l+m)!) P_l^m(x) including the (-1)^m phase.
  std::vector<double> q(n, 0.0);
  auto at = [](int l, int m) { return l * l + l + m; };
  double qmm = 1.0;
  for (int m = 0; m <= lmax; ++m) {
    if (m > 0) qmm *= -s * std::sqrt((2.0 * m - 1.0) / (2.0 * m));
    q[at(m, m)] = qmm;
    if (m + 1 <= lmax) q[at(m + 1, m)] = x * std::sqrt(2.0 * m + 1.0) * qmm;
    for (int l = m + 2; l <= lmax; ++l) {
      const double num = (2.0 * l - 1.0) * x * q[at(l - 1, m)] -
                         std::sqrt((l - 1.0 - m) * (l - 1.0 + m)) * q[at(l - 2, m)];
      q[at(l, m)] = num / std::sqrt((static_cast<double>(l) - m) * (static_cast<double>(l) + m));
    }
  }
  for (int m = 0; m <= lmax; ++m) {
    const cplx phase = std::polar(1.0, m * phi);
    for (int l = m; l <= lmax; ++l) {
      const cplx v = q[at(l, m)] * phase;
      out[at(l, m)] = v;
      if (m > 0) out[at(l, -m)] = detail::parity_sign(m) * std::conj(v);
    }
  }
  return out;
}

/// Modified spherical harmonic C_{lambda alpha}(theta, phi).
inline cplx mod_sph_harm(int lambda, int alpha, double theta, double phi) {
  if (lambda < 0 || std::abs(alpha) > lambda)
    throw InvalidIndex("mod_sph_harm: |alpha| must not exceed lambda");
  return mod_sph_harm_all(lambda, theta, phi)[lambda * lambda + lambda + alpha];
}

namespace detail {

// (-i)^n
inline cplx minus_i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

}  // namespace detail

/// Rotation matrix element U^l_{mu nu}(omega, theta, phi) in axis-angle form,
/// summed over the generalized characters:
///   U = sum_lambda (-i)^lambda (2 lambda + 1)/(2l + 1) C^{l nu}_{l mu, lambda alpha}
///       chi^l_lambda(omega) C_{lambda alpha}(theta, phi),   alpha = nu - mu.
inline cplx rotation_u(TwiceInt l, TwiceInt mu, TwiceInt nu, const Angle3& ang) {
  detail::check_projection(l, mu, "rotation_u");
  detail::check_projection(l, nu, "rotation_u");
  const int tl = l.value;
  const int alpha = (nu.value - mu.value) / 2;
  const auto ylm = mod_sph_harm_all(tl, ang.theta, ang.phi);
  cplx sum = 0.0;
  for (int lambda = std::abs(alpha); lambda <= tl; ++lambda) {
    const double cg = cgc3(l, mu, TwiceInt::of(lambda), TwiceInt::of(alpha), l, nu);
    if (cg == 0.0) continue;
    sum += detail::minus_i_pow(lambda) * ((2.0 * lambda + 1.0) / (tl + 1.0)) * cg *
           gen_character(l, lambda, ang.omega) * ylm[lambda * lambda + lambda + alpha];
  }
  return sum;
}

}  // namespace hsh4
