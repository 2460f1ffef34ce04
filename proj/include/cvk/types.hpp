#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cvk {

using Complex = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline const Complex iu{0.0, 1.0};

// ---------------------------------------------------------------------------
// Error hierarchy. Every failure mode of the library maps onto one of these.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ContourBlocked : Error {
  using Error::Error;
};
struct NoConvergence : Error {
  using Error::Error;
};
struct NonFiniteSample : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};
struct MultiplePole : Error {
  using Error::Error;
};
struct NonTerminating : Error {
  using Error::Error;
};
struct DenominatorVanishes : Error {
  using Error::Error;
};
struct CoefficientSingular : Error {
  using Error::Error;
};
struct SingularPoint : Error {
  using Error::Error;
};
struct ExtrapolationUnstable : Error {
  using Error::Error;
};
struct AssumptionViolated : Error {
  using Error::Error;
};
struct ConfigInvalid : Error {
  using Error::Error;
};
struct UsageError : Error {
  using Error::Error;
};

inline bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Power on the universal cover of C\{0}: the argument of `base` is the
// principal argument plus `branch_offset` (a multiple of 2*pi in practice).
struct BranchedPower {
  Complex base;
  Complex exponent;
  double branch_offset = 0.0;

  Complex log_base() const {
    return Complex(std::log(std::abs(base)), std::arg(base) + branch_offset);
  }
  Complex value() const { return std::exp(exponent * log_base()); }
};

// Neumaier compensated summation for complex values.
class CompensatedSum {
 public:
  void add(Complex x) {
    add_part(x.real(), re_, ce_);
    add_part(x.imag(), im_, ci_);
  }
  Complex value() const { return {re_ + ce_, im_ + ci_}; }

 private:
  static void add_part(double x, double& s, double& c) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double re_ = 0, im_ = 0, ce_ = 0, ci_ = 0;
};

// log(2*cosh(w)) without overflow for large |Re w|.
inline Complex log_2cosh(Complex w) {
  if (w.real() < 0) w = -w;
  return w + std::log(1.0 + std::exp(-2.0 * w));
}

// log(2*sinh(w)) up to a multiple of 2*pi*i, stable for large |Re w|.
inline Complex log_2sinh(Complex w) {
  Complex s = 0.0;
  if (w.real() < 0) {
    w = -w;
    s = Complex(0.0, pi);  // sinh(-w) = -sinh(w)
  }
  return s + w + std::log(1.0 - std::exp(-2.0 * w));
}

}  // namespace cvk
