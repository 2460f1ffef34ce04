#pragma once

#include "cvk/gamma.hpp"
#include "cvk/types.hpp"

// Coefficient blocks shared by the fusion-side difference operators. The
// four-parameter label (a, t, c, d) follows the printed operator symbols:
// a and t sit in the top row, c and d in the bottom row.

namespace cvk::detail {

inline Complex hf_plus_log(Complex a, Complex t, Complex c, Complex d, double beta, double Q,
                           Complex sigma) {
  const Complex ib = iu * beta;
  const double b2 = beta * beta;
  const Complex bQ2 = 0.5 * beta * Q;
  Complex log_den = 0.0;
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) {
      log_den += log_gamma(bQ2 - ib * (sigma + double(e1) * a + double(e2) * c));
      log_den += log_gamma(bQ2 - ib * (sigma + double(e1) * d + double(e2) * t));
    }
  const Complex log_num = log_gamma(1.0 + 2.0 * b2 - 2.0 * ib * sigma) +
                          log_gamma(b2 - 2.0 * ib * sigma) + log_gamma(-2.0 * ib * sigma) +
                          log_gamma(1.0 + b2 - 2.0 * ib * sigma);
  return std::log(Complex(4.0 * pi * pi)) + log_num - log_den;
}

inline Complex hf_plus(Complex a, Complex t, Complex c, Complex d, double beta, double Q,
                       Complex sigma) {
  return std::exp(hf_plus_log(a, t, c, d, beta, Q, sigma));
}

inline Complex hf_zero(Complex a, Complex t, Complex c, Complex d, double beta, Complex sigma) {
  const Complex ib2 = 0.5 * iu * beta;
  Complex acc = -2.0 * std::cosh(2.0 * pi * beta * (a + t + ib2));
  for (int kk : {1, -1}) {
    const Complex ks = double(kk) * sigma;
    Complex num = 1.0;
    for (int e : {1, -1}) {
      num *= std::cosh(pi * beta * (double(e) * c - ib2 - a - ks));
      num *= std::cosh(pi * beta * (double(e) * d - ib2 - t - ks));
    }
    const Complex den =
        std::sinh(2.0 * pi * beta * (ks + ib2)) * std::sinh(2.0 * pi * beta * ks);
    if (std::abs(den) < 1e-13) throw CoefficientSingular("hf_zero: sinh denominator vanished");
    acc += 4.0 * num / den;
  }
  return acc;
}

inline Complex hf_tilde_plus_log(Complex a, Complex t, Complex c, Complex d, double beta,
                                 Complex sigma) {
  const Complex ib = iu * beta;
  const double b2 = beta * beta;
  const Complex half = 0.5 * (1.0 - b2);
  Complex log_den = 0.0;
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) {
      log_den += log_gamma(half + ib * (sigma + double(e1) * a + double(e2) * c));
      log_den += log_gamma(half + ib * (sigma + double(e1) * d + double(e2) * t));
    }
  const Complex log_num = log_gamma(1.0 - b2 + 2.0 * ib * sigma) +
                          log_gamma(1.0 + 2.0 * ib * sigma) +
                          log_gamma(2.0 * ib * sigma - 2.0 * b2) +
                          log_gamma(2.0 * ib * sigma - b2);
  return std::log(Complex(4.0 * pi * pi)) + log_num - log_den;
}

inline Complex hf_tilde_plus(Complex a, Complex t, Complex c, Complex d, double beta,
                             Complex sigma) {
  return std::exp(hf_tilde_plus_log(a, t, c, d, beta, sigma));
}

inline Complex hren_c(Complex a, Complex t, Complex c, Complex d, double beta, Complex sigma) {
  const Complex ib2 = 0.5 * iu * beta;
  Complex num = 4.0;
  for (int e : {1, -1}) {
    num *= std::cosh(pi * beta * (-ib2 - t + sigma + double(e) * d));
    num *= std::cosh(pi * beta * (-ib2 - a + sigma + double(e) * c));
  }
  const Complex den =
      std::sinh(2.0 * pi * beta * sigma) * std::sinh(pi * beta * (-2.0 * sigma + iu * beta));
  if (std::abs(den) < 1e-13) throw CoefficientSingular("hren_c: sinh denominator vanished");
  return num / den;
}

}  // namespace cvk::detail
