#pragma once

#include <functional>

#include "cvk/types.hpp"

namespace cvk {

struct AWParams {
  Complex alpha, beta, gamma, delta, q;
};

// Generic three-term operator A+ f(shifted up) + A0 f + A- f(shifted down).
// The shift is in the polynomial index n, additive (v -> v +- i*step) in a
// continuous variable, or multiplicative (z -> q^{+-1} z).
struct ThreeTermOperator {
  enum class Shift { index, additive, multiplicative };

  std::function<Complex(Complex)> plus, zero, minus;
  Shift shift = Shift::additive;
  Complex step;  // additive: the complex increment; multiplicative: q

  Complex apply(const std::function<Complex(Complex)>& f, Complex v) const {
    switch (shift) {
      case Shift::additive:
        return plus(v) * f(v + step) + zero(v) * f(v) + minus(v) * f(v - step);
      case Shift::multiplicative:
        return plus(v) * f(step * v) + zero(v) * f(v) + minus(v) * f(v / step);
      case Shift::index:
        throw DomainError("ThreeTermOperator: index shift needs apply_index");
    }
    return 0.0;
  }

  // index-shift application with explicitly supplied neighbours
  Complex apply_index(int n, Complex f_prev, Complex f_n, Complex f_next) const {
    const Complex nn(static_cast<double>(n), 0.0);
    return plus(nn) * f_next + zero(nn) * f_n + minus(nn) * f_prev;
  }
};

// Askey-Wilson polynomial A_n(z), terminating 4phi3 normalization.
Complex askey_wilson(int n, Complex z, const AWParams& p);

// recurrence operator in n with eigenvalue z + 1/z
ThreeTermOperator aw_recurrence_op(const AWParams& p);

// difference operator in z with eigenvalue q^{-n} + alpha beta gamma delta q^{n-1}
ThreeTermOperator aw_difference_op(const AWParams& p);

// continuous dual q-Hahn: A_n with delta = 0
Complex hahn(int n, Complex z, Complex alpha, Complex beta, Complex gamma, Complex q);
ThreeTermOperator hahn_recurrence_op(Complex alpha, Complex beta, Complex gamma, Complex q);
ThreeTermOperator hahn_difference_op(Complex alpha, Complex beta, Complex gamma, Complex q);

// the single-shift coefficient of the Hahn difference operator
Complex hahn_h(Complex alpha, Complex beta, Complex gamma, Complex q, Complex z);

// big q-Jacobi
Complex jacobi(int n, Complex x, Complex alpha, Complex beta, Complex gamma, Complex q);
ThreeTermOperator jacobi_recurrence_op(Complex alpha, Complex beta, Complex gamma, Complex q);
ThreeTermOperator jacobi_difference_op(Complex alpha, Complex beta, Complex gamma, Complex q);
Complex jacobi_d_plus(Complex alpha, Complex beta, Complex gamma, Complex q, Complex x);
Complex jacobi_d_minus(Complex alpha, Complex beta, Complex gamma, Complex q, Complex x);

// p_n((z+1/z)/2) in the standard normalization, evaluated from x
Complex standard_normalization(int n, Complex x, const AWParams& p);

}  // namespace cvk
