#include "cvk/gamma.hpp"

#include <cmath>

namespace cvk {

namespace {

// Lanczos coefficients, g = 607/128, N = 15 (Godfrey's set).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
    -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
};

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * pi);

// log sin(pi z), stable for large |Im z|; branch is irrelevant for callers.
Complex log_sin_pi(Complex z) {
  const Complex ipz = iu * pi * z;
  if (z.imag() < 0.0) {
    // sin(pi z) = e^{i pi z}/(2i) * (1 - e^{-2 i pi z}), first factor dominant
    return ipz - std::log(Complex(0.0, 2.0)) + std::log(1.0 - std::exp(-2.0 * ipz));
  }
  return -ipz + std::log(Complex(0.0, 0.5)) + std::log(1.0 - std::exp(2.0 * ipz));
}

Complex log_gamma_core(Complex z) {
  // requires Re z >= 0.5
  Complex sum = kLanczos[0];
  for (int k = 1; k < 15; ++k) sum += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
  const Complex t = z + (kLanczosG - 0.5);
  return (z - 0.5) * std::log(t) - t + kLogSqrt2Pi + std::log(sum);
}

}  // namespace

Complex log_gamma(Complex z) {
  if (!finite(z)) throw NonFiniteSample("log_gamma: non-finite argument");
  if (z.real() < 0.5) {
    const double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z.real() - nearest) < 1e-12 && std::abs(z.imag()) < 1e-12)
      throw CoefficientSingular("log_gamma: argument at a pole of Gamma");
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(Complex(pi)) - log_sin_pi(z) - log_gamma_core(1.0 - z);
  }
  return log_gamma_core(z);
}

Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den) {
  Complex s = 0.0;
  for (Complex z : num) s += log_gamma(z);
  for (Complex z : den) s -= log_gamma(z);
  return std::exp(s);
}

}  // namespace cvk
