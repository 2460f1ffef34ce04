#pragma once

#include <utility>
#include <vector>

#include "cvk/numerics.hpp"
#include "cvk/special.hpp"

namespace cvk {

// Barnes-type integrand e^{linear x} prod_i s_b(x + numer_i) / prod_j s_b(x + denom_j).
// All kernel integrals in this library are of this shape, which makes pole
// bookkeeping and residue extraction mechanical.
struct SbIntegrandSpec {
  Complex linear = 0.0;
  std::vector<Complex> numer;
  std::vector<Complex> denom;
};

Complex sb_kernel_integrand_log(const SbIntegrandSpec& spec, const BParameter& bp, Complex x);

// downward sequences from the numerator poles, upward from the denominator zeros
std::pair<std::vector<PoleSequence>, std::vector<PoleSequence>> sb_kernel_poles(
    const SbIntegrandSpec& spec, const BParameter& bp);

struct SbKernelResult {
  Complex integral;
  double err_estimate = 0.0;
  int residue_terms = 0;
};

// Contour integral from -infinity to +infinity separating the sequences.
// When no separating contour exists (a parameter shift dragged denominator
// zeros below numerator poles), the analytic continuation is evaluated as a
// straight-line integral plus explicit residue corrections.
SbKernelResult integrate_sb_kernel(const SbIntegrandSpec& spec, const BParameter& bp,
                                   const QuadratureSettings& qs, double decay_rate);

// ln|I(x)| ~ Re[c_plus x] (Re x -> +inf) and Re[c_minus x] (Re x -> -inf)
std::pair<Complex, Complex> sb_kernel_tail_exponents(const SbIntegrandSpec& spec);

// best decay rate achievable over the admissible tail directions on the given
// side (+1 right, -1 left); <= 0 means the continuation is out of reach
double sb_kernel_tail_rate(Complex c, int side);

}  // namespace cvk
