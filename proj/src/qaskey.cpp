#include "cvk/qaskey.hpp"

#include <cmath>

#include "cvk/qseries.hpp"

namespace cvk {

namespace {

Complex qpow(Complex q, int n) { return std::pow(q, n); }

void check_singular(Complex denom, const char* what) {
  if (std::abs(denom) < 1e-12) throw CoefficientSingular(what);
}

}  // namespace

Complex askey_wilson(int n, Complex z, const AWParams& p) {
  if (n < 0) throw DomainError("askey_wilson: n >= 0 required");
  if (std::abs(z) == 0.0) throw DomainError("askey_wilson: z must be nonzero");
  const Complex q = p.q;
  // terminating sum, k = 0..n
  CompensatedSum sum;
  Complex term = 1.0;
  sum.add(term);
  const Complex abcd = p.alpha * p.beta * p.gamma * p.delta;
  for (int k = 0; k < n; ++k) {
    const Complex qk = qpow(q, k);
    Complex num = (1.0 - qpow(q, k - n)) * (1.0 - abcd * qpow(q, n - 1) * qk) *
                  (1.0 - p.alpha * z * qk) * (1.0 - p.alpha / z * qk);
    Complex den = (1.0 - p.alpha * p.beta * qk) * (1.0 - p.alpha * p.gamma * qk) *
                  (1.0 - p.alpha * p.delta * qk) * (1.0 - qpow(q, k + 1));
    if (std::abs(den) < 1e-14) throw DenominatorVanishes("askey_wilson: Pochhammer denominator vanished");
    term *= num / den * q;
    sum.add(term);
  }
  return sum.value();
}

ThreeTermOperator aw_recurrence_op(const AWParams& p) {
  const AWParams pc = p;
  auto aplus = [pc](Complex nn) {
    const int n = static_cast<int>(std::lround(nn.real()));
    const Complex q = pc.q, abcd = pc.alpha * pc.beta * pc.gamma * pc.delta;
    const Complex den = pc.alpha * (1.0 - abcd * qpow(q, 2 * n - 1)) * (1.0 - abcd * qpow(q, 2 * n));
    check_singular(den, "aw_recurrence_op: a_n^+ denominator");
    return (1.0 - pc.alpha * pc.beta * qpow(q, n)) * (1.0 - pc.alpha * pc.gamma * qpow(q, n)) *
           (1.0 - pc.alpha * pc.delta * qpow(q, n)) * (1.0 - abcd * qpow(q, n - 1)) / den;
  };
  auto aminus = [pc](Complex nn) {
    const int n = static_cast<int>(std::lround(nn.real()));
    const Complex q = pc.q, abcd = pc.alpha * pc.beta * pc.gamma * pc.delta;
    const Complex den = (1.0 - abcd * qpow(q, 2 * n - 2)) * (1.0 - abcd * qpow(q, 2 * n - 1));
    check_singular(den, "aw_recurrence_op: a_n^- denominator");
    return pc.alpha * (1.0 - qpow(q, n)) * (1.0 - pc.beta * pc.gamma * qpow(q, n - 1)) *
           (1.0 - pc.beta * pc.delta * qpow(q, n - 1)) * (1.0 - pc.gamma * pc.delta * qpow(q, n - 1)) /
           den;
  };
  auto zero = [pc, aplus, aminus](Complex nn) {
    return pc.alpha + 1.0 / pc.alpha - aplus(nn) - aminus(nn);
  };
  return ThreeTermOperator{aplus, zero, aminus, ThreeTermOperator::Shift::index, 0.0};
}

ThreeTermOperator aw_difference_op(const AWParams& p) {
  const AWParams pc = p;
  auto guard = [pc](Complex z) {
    if (std::abs(z - 1.0) < 1e-8 || std::abs(z + 1.0) < 1e-8 || std::abs(z * z - pc.q) < 1e-8 ||
        std::abs(z * z - 1.0 / pc.q) < 1e-8)
      throw SingularPoint("aw_difference_op: z in singular set");
  };
  auto cplus = [pc, guard](Complex z) {
    guard(z);
    return (1.0 - pc.alpha * z) * (1.0 - pc.beta * z) * (1.0 - pc.gamma * z) * (1.0 - pc.delta * z) /
           ((1.0 - z * z) * (1.0 - pc.q * z * z));
  };
  auto cminus = [pc, guard](Complex z) {
    guard(z);
    return (pc.alpha - z) * (pc.beta - z) * (pc.gamma - z) * (pc.delta - z) /
           ((1.0 - z * z) * (pc.q - z * z));
  };
  auto zero = [pc, cplus, cminus](Complex z) {
    return 1.0 + pc.alpha * pc.beta * pc.gamma * pc.delta / pc.q - cplus(z) - cminus(z);
  };
  return ThreeTermOperator{cplus, zero, cminus, ThreeTermOperator::Shift::multiplicative, p.q};
}

Complex hahn(int n, Complex z, Complex alpha, Complex beta, Complex gamma, Complex q) {
  return askey_wilson(n, z, AWParams{alpha, beta, gamma, 0.0, q});
}

ThreeTermOperator hahn_recurrence_op(Complex alpha, Complex beta, Complex gamma, Complex q) {
  auto bplus = [=](Complex nn) {
    const int n = static_cast<int>(std::lround(nn.real()));
    return (1.0 - alpha * beta * qpow(q, n)) * (1.0 - alpha * gamma * qpow(q, n)) / alpha;
  };
  auto bminus = [=](Complex nn) {
    const int n = static_cast<int>(std::lround(nn.real()));
    return alpha * (1.0 - qpow(q, n)) * (1.0 - beta * gamma * qpow(q, n - 1));
  };
  auto zero = [=](Complex nn) { return alpha + 1.0 / alpha - bplus(nn) - bminus(nn); };
  return ThreeTermOperator{bplus, zero, bminus, ThreeTermOperator::Shift::index, 0.0};
}

Complex hahn_h(Complex alpha, Complex beta, Complex gamma, Complex q, Complex z) {
  const Complex den = (1.0 - z * z) * (1.0 - q * z * z);
  check_singular(den, "hahn_h: singular point");
  return (1.0 - alpha * z) * (1.0 - beta * z) * (1.0 - gamma * z) / den;
}

ThreeTermOperator hahn_difference_op(Complex alpha, Complex beta, Complex gamma, Complex q) {
  auto hplus = [=](Complex z) { return hahn_h(alpha, beta, gamma, q, z); };
  auto hminus = [=](Complex z) { return hahn_h(alpha, beta, gamma, q, 1.0 / z); };
  auto zero = [=](Complex z) { return -hplus(z) - hminus(z); };
  return ThreeTermOperator{hplus, zero, hminus, ThreeTermOperator::Shift::multiplicative, q};
}

Complex jacobi(int n, Complex x, Complex alpha, Complex beta, Complex gamma, Complex q) {
  if (n < 0) throw DomainError("jacobi: n >= 0 required");
  return phi_terminating({qpow(q, -n), alpha * beta * qpow(q, n + 1), x}, {alpha * q, gamma * q},
                         q, q, n);
}

ThreeTermOperator jacobi_recurrence_op(Complex alpha, Complex beta, Complex gamma, Complex q) {
  auto cplus = [=](Complex nn) {
    const int n = static_cast<int>(std::lround(nn.real()));
    const Complex den = (1.0 - alpha * beta * qpow(q, 2 * n + 1)) * (1.0 - alpha * beta * qpow(q, 2 * n + 2));
    check_singular(den, "jacobi_recurrence_op: c_n^+ denominator");
    return (1.0 - alpha * qpow(q, n + 1)) * (1.0 - alpha * beta * qpow(q, n + 1)) *
           (1.0 - gamma * qpow(q, n + 1)) / den;
  };
  auto cminus = [=](Complex nn) {
    const int n = static_cast<int>(std::lround(nn.real()));
    const Complex den = (1.0 - alpha * beta * qpow(q, 2 * n)) * (1.0 - alpha * beta * qpow(q, 2 * n + 1));
    check_singular(den, "jacobi_recurrence_op: c_n^- denominator");
    return -alpha * gamma * qpow(q, n + 1) * (1.0 - qpow(q, n)) *
           (1.0 - alpha * beta / gamma * qpow(q, n)) * (1.0 - beta * qpow(q, n)) / den;
  };
  auto zero = [=](Complex nn) { return 1.0 - cplus(nn) - cminus(nn); };
  return ThreeTermOperator{cplus, zero, cminus, ThreeTermOperator::Shift::index, 0.0};
}

Complex jacobi_d_plus(Complex alpha, Complex beta, Complex gamma, Complex q, Complex x) {
  return alpha * q * (x - 1.0) * (beta * x - gamma);
}

Complex jacobi_d_minus(Complex alpha, Complex /*beta*/, Complex gamma, Complex q, Complex x) {
  return (x - alpha * q) * (x - gamma * q);
}

ThreeTermOperator jacobi_difference_op(Complex alpha, Complex beta, Complex gamma, Complex q) {
  auto dplus = [=](Complex x) { return jacobi_d_plus(alpha, beta, gamma, q, x); };
  auto dminus = [=](Complex x) { return jacobi_d_minus(alpha, beta, gamma, q, x); };
  auto zero = [=](Complex x) { return -dplus(x) - dminus(x); };
  return ThreeTermOperator{dplus, zero, dminus, ThreeTermOperator::Shift::multiplicative, q};
}

Complex standard_normalization(int n, Complex x, const AWParams& p) {
  const Complex z = x + std::sqrt(x * x - 1.0);  // either root works, A_n is z <-> 1/z symmetric
  return std::pow(p.alpha, -n) *
         qpoch({p.alpha * p.beta, p.alpha * p.gamma, p.alpha * p.delta}, p.q, n) *
         askey_wilson(n, z, p);
}

}  // namespace cvk
