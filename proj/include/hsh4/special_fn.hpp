#pragma once

// Scalar special functions: factorial ladders, Pochhammer symbols,
// Gegenbauer polynomials and the hypergeometric series 0F1 / 2F1.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "hsh4/error.hpp"

namespace hsh4 {

/// Truncation control for non-terminating series.
struct SeriesControl {
  double tol = 1e-14;
  int max_terms = 10000;

  void validate() const {
    if (!(tol > 0.0)) throw DomainError("SeriesControl: tol must be positive");
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
  }
};

namespace detail {

inline constexpr int kLogFactorialTableSize = 1024;

inline const std::array<double, kLogFactorialTableSize>& log_factorial_table() {
  static const auto table = [] {
    std::array<double, kLogFactorialTableSize> t{};
    long double acc = 0.0L;
    t[0] = 0.0;
    for (int n = 1; n < kLogFactorialTableSize; ++n) {
      acc += std::log(static_cast<long double>(n));
      t[n] = static_cast<double>(acc);
    }
    return t;
  }();
  return table;
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace detail

/// ln(n!) for n >= 0.
inline double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument " + std::to_string(n));
  if (n < detail::kLogFactorialTableSize) return detail::log_factorial_table()[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// Rising factorial (a)_k = a (a+1) ... (a+k-1), with (a)_0 = 1.
///
/// Evaluated as a direct product, which returns an exact zero whenever a is a
/// nonpositive integer with -a < k.
inline double pochhammer(double a, int k) {
  if (k < 0) throw DomainError("pochhammer: negative k");
  double p = 1.0;
  for (int i = 0; i < k; ++i) {
    p *= a + i;
    if (p == 0.0) return 0.0;
  }
  return p;
}

/// n!! with (-1)!! = 0!! = 1.
inline double double_factorial(int n) {
  if (n < -1) throw DomainError("double_factorial: argument below -1");
  double p = 1.0;
  for (int i = n; i > 1; i -= 2) p *= i;
  return p;
}

/// Gegenbauer polynomial C^alpha_n(x) by upward three-term recurrence.
inline double gegenbauer(double alpha, int n, double x) {
  if (!(alpha > 0.0)) throw DomainError("gegenbauer: alpha must be positive");
  if (n < 0) throw DomainError("gegenbauer: negative degree");
  if (n == 0) return 1.0;
  double c_prev = 1.0;
  double c = 2.0 * alpha * x;
  for (int k = 2; k <= n; ++k) {
    const double c_next = (2.0 * (k + alpha - 1.0) * x * c - (k + 2.0 * alpha - 2.0) * c_prev) / k;
    c_prev = c;
    c = c_next;
  }
  return c;
}

/// 1/Gamma(x), zero at the poles.
inline double reciprocal_gamma(double x) {
  if (detail::is_nonpositive_integer(x)) return 0.0;
  return 1.0 / std::tgamma(x);
}

/// Gauss hypergeometric function 2F1(a, b; c; z).
///
/// A terminating series (a or b a nonpositive integer) is summed over its
/// finite terms; otherwise partial sums run until the relative change drops
/// below ctl.tol, which requires |z| < 1.
inline double hyp2f1(double a, double b, double c, double z, const SeriesControl& ctl = {}) {
  ctl.validate();
  const bool a_term = detail::is_nonpositive_integer(a);
  const bool b_term = detail::is_nonpositive_integer(b);
  if (a_term || b_term) {
    int m = 0;
    if (a_term && b_term) {
      m = static_cast<int>(-std::max(a, b));
    } else {
      m = static_cast<int>(a_term ? -a : -b);
    }
    if (detail::is_nonpositive_integer(c) && -c < m)
      throw DomainError("hyp2f1: c is a nonpositive integer reached before termination");
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < m; ++k) {
      term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
      sum += term;
    }
    return sum;
  }
  if (detail::is_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a nonpositive integer");
  if (!(std::abs(z) < 1.0)) throw DomainError("hyp2f1: |z| >= 1 with non-terminating series");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    const double ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    term *= ratio;
    sum += term;
    // Geometric bound on the remaining tail; the term ratio tends to z.
    const double q = std::max(std::abs(ratio), std::abs(z));
    if (q < 1.0 && std::abs(term) * std::max(1.0, q / (1.0 - q)) <= ctl.tol * std::abs(sum)) return sum;
  }
  throw NonConvergence("hyp2f1: series did not converge within max_terms");
}

/// Confluent hypergeometric limit function 0F1(; c; z).
inline double hyp0f1(double c, double z, const SeriesControl& ctl = {}) {
  ctl.validate();
  if (detail::is_nonpositive_integer(c)) throw DomainError("hyp0f1: c is a nonpositive integer");
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < ctl.max_terms; ++k) {
    term *= z / ((c + k) * (k + 1.0));
    sum += term;
    if (std::abs(term) <= ctl.tol * std::abs(sum)) return sum;
  }
  throw NonConvergence("hyp0f1: series did not converge within max_terms");
}

}  // namespace hsh4
