#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvk/gamma.hpp"
#include "test_helpers.hpp"

using namespace cvk;
using cvk::test::Rng;

TEST_CASE("gamma matches classic values") {
  CHECK_CLOSE(gamma(Complex(0.5, 0)), Complex(std::sqrt(pi), 0), 1e-14);
  CHECK_CLOSE(gamma(Complex(1, 0)), Complex(1, 0), 1e-14);
  CHECK_CLOSE(gamma(Complex(5, 0)), Complex(24, 0), 1e-14);
  // Gamma(1+i), standard tabulated value
  CHECK_CLOSE(gamma(Complex(1, 1)),
              Complex(0.49801566811835604271, -0.15494982830181068512), 1e-13);
}

TEST_CASE("recurrence and reflection at random points") {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const Complex z = rng.box(-4.0, 4.0);
    if (std::abs(z.real() - std::round(z.real())) < 1e-3) continue;
    CHECK_CLOSE(gamma(z + 1.0), z * gamma(z), 1e-12);
    const Complex refl = gamma(z) * gamma(1.0 - z);
    CHECK_CLOSE(refl, pi / std::sin(pi * z), 1e-12);
  }
}

TEST_CASE("log-space ratios survive large imaginary arguments") {
  // |Gamma(x+iy)| decays like e^{-pi |y|/2}; the ratio below is O(1)
  const Complex a(1.3, 40.0), b(0.7, 40.0);
  const Complex r = gamma_ratio({a}, {b});
  const Complex direct = std::exp(log_gamma(a) - log_gamma(b));
  CHECK_CLOSE(r, direct, 1e-13);
  CHECK(std::isfinite(std::abs(r)));
}

TEST_CASE("poles are reported") {
  CHECK_THROWS_AS(gamma(Complex(0, 0)), CoefficientSingular);
  CHECK_THROWS_AS(gamma(Complex(-3, 0)), CoefficientSingular);
}
