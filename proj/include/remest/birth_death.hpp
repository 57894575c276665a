#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "remest/core_model.hpp"

// Closed forms for the symmetric birth-death chain (p at +-1, 1-2p at 0,
// d(e) = |e|, a = 1). I - beta*P^(k) is tridiagonal with constant diagonal,
// so its inverse and the renewal quantities have hyperbolic closed forms.

namespace remest {

namespace detail {

inline void check_bd_args(double p, long k) {
  if (!(p > 0.0 && p < 1.0 / 3.0)) throw std::invalid_argument("birth-death p must lie in (0, 1/3)");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
}

}  // namespace detail

/// m_beta = acosh(-K_beta/2), K_beta = -2 - (1-beta)/(beta p).
inline double bd_m(double p, DiscountFactor beta) {
  const double b = beta.value();
  return std::acosh(1.0 + (1.0 - b) / (2.0 * b * p));
}

/// D^(k) and N^(k) from the hyperbolic (beta < 1) or polynomial (beta = 1) closed forms.
inline PerfPoint bd_closed_form(double p, DiscountFactor beta, long k) {
  detail::check_bd_args(p, k);
  PerfPoint out;
  out.provenance = Provenance::closed_form;
  const double kk = static_cast<double>(k);
  if (beta.is_average()) {
    out.distortion = (kk * kk - 1.0) / (3.0 * kk);
    out.transmission_rate = 2.0 * p / (kk * kk);
    return out;
  }
  const double b = beta.value();
  const double m = bd_m(p, beta);
  const double s_half = std::sinh(kk * m / 2.0);
  out.distortion = (std::sinh(kk * m) - kk * std::sinh(m)) / (2.0 * s_half * s_half * std::sinh(m));
  const double sm = std::sinh(m / 2.0);
  out.transmission_rate = 2.0 * b * p * sm * sm * std::cosh(kk * m) / (s_half * s_half) - (1.0 - b);
  return out;
}

/// lambda^(k)_1 = k(k+1)(k^2+k+1) / (6p(2k+1)).
inline double bd_lambda_average(double p, long k) {
  detail::check_bd_args(p, k);
  const double kk = static_cast<double>(k);
  return kk * (kk + 1.0) * (kk * kk + kk + 1.0) / (6.0 * p * (2.0 * kk + 1.0));
}

/**
 * Entry (i, j) of Q^(k) = [I - beta P^(k)]^{-1}, i, j in S^(k).
 *
 * beta < 1: [cosh((2k-|i-j|)m) - cosh((i+j)m)] / (2 beta p sinh(m) sinh(2km)).
 * beta = 1: (k - max(i,j)) (k + min(i,j)) / (2pk).
 */
inline double bd_q_entry(double p, DiscountFactor beta, long k, long i, long j) {
  detail::check_bd_args(p, k);
  if (std::abs(i) >= k || std::abs(j) >= k) throw std::invalid_argument("indices must lie in the silent set");
  const double kk = static_cast<double>(k);
  if (beta.is_average()) {
    return (kk - static_cast<double>(std::max(i, j))) * (kk + static_cast<double>(std::min(i, j))) / (2.0 * p * kk);
  }
  const double b = beta.value();
  const double m = bd_m(p, beta);
  const double num = std::cosh((2.0 * kk - static_cast<double>(std::abs(i - j))) * m) -
                     std::cosh(static_cast<double>(i + j) * m);
  return num / (2.0 * b * p * std::sinh(m) * std::sinh(2.0 * kk * m));
}

}  // namespace remest
