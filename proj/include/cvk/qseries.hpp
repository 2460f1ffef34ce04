#pragma once

#include <vector>

#include "cvk/types.hpp"

namespace cvk {

struct QValue {
  Complex q;
  bool root_of_unity_guard = false;
};

// (a; q)_n = prod_{k=0}^{n-1} (1 - a q^k)
Complex qpoch(Complex a, Complex q, int n);

// multi-argument variant: prod_j (a_j; q)_n
Complex qpoch(const std::vector<Complex>& as, Complex q, int n);

// Basic hypergeometric series {s+1}phi{s}. Sums the terminating series when a
// numerator entry equals q^{-n}; otherwise requires |z| < 1, |q| < 1.
Complex phi(const std::vector<Complex>& numer, const std::vector<Complex>& denom, Complex q,
            Complex z);

// same series with an explicitly known termination index
Complex phi_terminating(const std::vector<Complex>& numer, const std::vector<Complex>& denom,
                        Complex q, Complex z, int nterm);

// The Hahn-side sum over m = 0..n with the delta_{k,1} twist; literal formula.
Complex sigma_hahn(int n, int k, Complex alpha, Complex beta, Complex gamma, Complex z, Complex q);

// The Jacobi-side sum over m = 0..n with the delta_{k,2} twist; literal formula.
Complex sigma_jacobi(int n, int k, Complex alpha, Complex beta, Complex gamma, Complex x,
                     Complex q);

}  // namespace cvk
