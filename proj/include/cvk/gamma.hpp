#pragma once

#include <initializer_list>

#include "cvk/types.hpp"

namespace cvk {

// log Gamma(z) for complex z, accurate to ~1e-14 relative away from poles.
// The imaginary part is defined only up to a multiple of 2*pi: callers are
// expected to exponentiate (sums of) the result, never to compare branches.
// Throws CoefficientSingular when z is within 1e-12 of a pole.
Complex log_gamma(Complex z);

Complex gamma(Complex z);

// exp(sum(log_gamma(num)) - sum(log_gamma(den))) evaluated in log space.
Complex gamma_ratio(std::initializer_list<Complex> num, std::initializer_list<Complex> den);

}  // namespace cvk
