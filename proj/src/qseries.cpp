#include "cvk/qseries.hpp"

#include <cmath>

namespace cvk {

namespace {

constexpr double kTerminationTol = 1e-10;
constexpr int kMaxTerminationIndex = 512;

// smallest n <= 512 with |a q^n - 1| < tol, or -1; `count` reports ambiguity
int termination_index(Complex a, Complex q, int* count) {
  int found = -1;
  *count = 0;
  Complex aqn = a;
  for (int n = 0; n <= kMaxTerminationIndex; ++n) {
    if (std::abs(aqn - 1.0) < kTerminationTol) {
      if (found < 0) found = n;
      ++(*count);
    }
    aqn *= q;
  }
  return found;
}

}  // namespace

Complex qpoch(Complex a, Complex q, int n) {
  if (n < 0) throw DomainError("qpoch: negative length");
  Complex prod = 1.0;
  Complex aqk = a;
  for (int k = 0; k < n; ++k) {
    prod *= (1.0 - aqk);
    aqk *= q;
  }
  return prod;
}

Complex qpoch(const std::vector<Complex>& as, Complex q, int n) {
  Complex prod = 1.0;
  for (Complex a : as) prod *= qpoch(a, q, n);
  return prod;
}

Complex phi(const std::vector<Complex>& numer, const std::vector<Complex>& denom, Complex q,
            Complex z) {
  int nterm = -1;
  for (Complex a : numer) {
    int count = 0;
    const int n = termination_index(a, q, &count);
    if (count > 1)
      throw NonTerminating("phi: ambiguous termination index (q too close to a root of unity)");
    if (n >= 0 && (nterm < 0 || n < nterm)) nterm = n;
  }
  return phi_terminating(numer, denom, q, z, nterm);
}

Complex phi_terminating(const std::vector<Complex>& numer, const std::vector<Complex>& denom,
                        Complex q, Complex z, int nterm) {
  const bool terminating = nterm >= 0;
  if (!terminating && !(std::abs(z) < 1.0 && std::abs(q) < 1.0))
    throw NonTerminating("phi: series does not terminate and |z|<1, |q|<1 fails");

  CompensatedSum sum;
  Complex term = 1.0;
  sum.add(term);
  Complex qk = 1.0;  // q^k
  const int kmax = terminating ? nterm : 100000;
  for (int k = 0; k < kmax; ++k) {
    Complex ratio = 1.0;
    for (Complex a : numer) ratio *= (1.0 - a * qk);
    for (Complex b : denom) {
      const Complex factor = 1.0 - b * qk;
      if (std::abs(factor) < 1e-14)
        throw DenominatorVanishes("phi: denominator Pochhammer vanished before termination");
      ratio /= factor;
    }
    const Complex qfac = 1.0 - q * qk;
    if (std::abs(qfac) < 1e-14) throw DenominatorVanishes("phi: (q;q)_k vanished");
    ratio *= z / qfac;
    term *= ratio;
    sum.add(term);
    qk *= q;
    if (!terminating && std::abs(term) < 1e-18 * (1.0 + std::abs(sum.value()))) break;
  }
  return sum.value();
}

Complex sigma_hahn(int n, int k, Complex alpha, Complex beta, Complex gamma, Complex z, Complex q) {
  if (n < 0) throw DomainError("sigma_hahn: n must be >= 0");
  if (k != 1 && k != 2) throw DomainError("sigma_hahn: k must be 1 or 2");
  const Complex qinv = 1.0 / q;
  CompensatedSum sum;
  for (int m = 0; m <= n; ++m) {
    const Complex q1m = std::pow(q, 1 - m);  // q^{1-m}
    const Complex qn = std::pow(q, -n);
    Complex t = std::pow(alpha * beta, -m) * std::pow(q, Complex(-double(m) * n));
    if (k == 1) t *= std::pow(alpha * beta, m) * std::pow(q, Complex(double(m) * (n - 1)));
    const Complex num = qpoch({q1m / qn, q1m / (gamma * z), q1m * z / gamma}, q, m);
    const Complex den = qpoch({q1m * qinv, q1m / (beta * gamma), q1m / (alpha * gamma)}, q, m);
    if (std::abs(den) == 0.0) throw DenominatorVanishes("sigma_hahn: vanishing denominator product");
    sum.add(t * num / den);
  }
  return sum.value();
}

Complex sigma_jacobi(int n, int k, Complex alpha, Complex beta, Complex gamma, Complex x,
                     Complex q) {
  if (n < 0) throw DomainError("sigma_jacobi: n must be >= 0");
  if (k != 1 && k != 2) throw DomainError("sigma_jacobi: k must be 1 or 2");
  CompensatedSum sum;
  for (int m = 0; m <= n; ++m) {
    Complex t = std::pow(q, -m);
    if (k == 2) t *= std::pow(x * beta / gamma, m);
    const Complex num =
        qpoch({std::pow(q, n + 1 - m), std::pow(q, -m - n) / (alpha * beta), std::pow(q, 1 - m) / x},
              q, m);
    const Complex den =
        qpoch({std::pow(q, -m) / alpha, std::pow(q, -m) / gamma, std::pow(q, -m)}, q, m);
    if (std::abs(den) == 0.0)
      throw DenominatorVanishes("sigma_jacobi: vanishing denominator product");
    sum.add(t * num / den);
  }
  return sum.value();
}

}  // namespace cvk
