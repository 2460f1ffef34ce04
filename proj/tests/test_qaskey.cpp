#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "cvk/qaskey.hpp"
#include "cvk/qseries.hpp"
#include "test_helpers.hpp"

using namespace cvk;
using cvk::test::Rng;

namespace {

Complex random_q(Rng& rng) {
  const double t = rng.uniform(0.07, 0.46) * (rng.uniform(0, 1) < 0.5 ? 1.0 : -1.0);
  return std::exp(2.0 * iu * pi * Complex(t, 0.0));
}

AWParams random_params(Rng& rng) {
  return AWParams{rng.unit_phase() * rng.uniform(0.6, 1.4), rng.unit_phase() * rng.uniform(0.6, 1.4),
                  rng.unit_phase() * rng.uniform(0.6, 1.4), rng.unit_phase() * rng.uniform(0.6, 1.4),
                  random_q(rng)};
}

Complex safe_z(Rng& rng, Complex q) {
  for (;;) {
    const Complex z = rng.unit_phase() * rng.uniform(0.75, 1.35);
    if (std::abs(z - 1.0) > 0.05 && std::abs(z + 1.0) > 0.05 && std::abs(z * z - q) > 0.05 &&
        std::abs(z * z - 1.0 / q) > 0.05)
      return z;
  }
}

// second transcription of the recurrence coefficients, grouped differently
Complex aplus_oracle(int n, const AWParams& p) {
  const Complex q = p.q, qn = std::pow(q, n);
  const Complex s = p.alpha * p.beta * p.gamma * p.delta * std::pow(q, n - 1);
  Complex r = (1.0 - p.alpha * p.beta * qn) / p.alpha;
  r *= (1.0 - p.alpha * p.gamma * qn) * (1.0 - p.alpha * p.delta * qn);
  return r * (1.0 - s) / ((1.0 - s * qn) * (1.0 - s * qn * q));
}

Complex aminus_oracle(int n, const AWParams& p) {
  const Complex q = p.q, qn1 = std::pow(q, n - 1);
  const Complex s = p.alpha * p.beta * p.gamma * p.delta * qn1;
  Complex r = p.alpha * (1.0 - qn1 * q);
  r *= (1.0 - p.beta * p.gamma * qn1) * (1.0 - p.beta * p.delta * qn1) *
       (1.0 - p.gamma * p.delta * qn1);
  return r / ((1.0 - s * qn1) * (1.0 - s * qn1 * q));
}

}  // namespace

TEST_CASE("A_0 = 1 and the z <-> 1/z symmetry") {
  Rng rng(21);
  const AWParams p = random_params(rng);
  const Complex z = safe_z(rng, p.q);
  CHECK_CLOSE(askey_wilson(0, z, p), Complex(1, 0), 1e-15);
  CHECK_CLOSE(askey_wilson(4, z, p), askey_wilson(4, 1.0 / z, p), 1e-12);
}

TEST_CASE("A_3 against a direct 4phi3 evaluation") {
  Rng rng(22);
  for (int trial = 0; trial < 8; ++trial) {
    const AWParams p = random_params(rng);
    const Complex z = safe_z(rng, p.q);
    const int n = 3;
    const Complex want =
        phi({std::pow(p.q, -n), p.alpha * p.beta * p.gamma * p.delta * std::pow(p.q, n - 1),
             p.alpha * z, p.alpha / z},
            {p.alpha * p.beta, p.alpha * p.gamma, p.alpha * p.delta}, p.q, p.q);
    CHECK_CLOSE(askey_wilson(n, z, p), want, 1e-11);
  }
}

TEST_CASE("recurrence: residual and the a_0^- = 0 edge") {
  Rng rng(23);
  for (int trial = 0; trial < 12; ++trial) {
    const AWParams p = random_params(rng);
    const ThreeTermOperator R = aw_recurrence_op(p);
    CHECK(std::abs(R.minus(Complex(0, 0))) < 1e-13);
    const Complex z = safe_z(rng, p.q);
    for (int n = 0; n <= 8; ++n) {
      const Complex fn = askey_wilson(n, z, p);
      const Complex fp = askey_wilson(n + 1, z, p);
      const Complex fm = n > 0 ? askey_wilson(n - 1, z, p) : 0.0;
      const Complex lhs = R.apply_index(n, fm, fn, fp);
      const Complex rhs = (z + 1.0 / z) * fn;
      CHECK(std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)) < 1e-10);
    }
  }
}

TEST_CASE("recurrence coefficients against a second transcription") {
  Rng rng(24);
  const AWParams p = random_params(rng);
  const ThreeTermOperator R = aw_recurrence_op(p);
  for (int n = 0; n <= 6; ++n) {
    CHECK_CLOSE(R.plus(Complex(n, 0)), aplus_oracle(n, p), 1e-13);
    CHECK_CLOSE(R.minus(Complex(n, 0)), aminus_oracle(n, p), 1e-13);
  }
}

TEST_CASE("difference operator: constant eigenfunction of the shift-free part") {
  Rng rng(25);
  const AWParams p = random_params(rng);
  const ThreeTermOperator D = aw_difference_op(p);
  const Complex z = safe_z(rng, p.q);
  auto one = [](Complex) { return Complex(1, 0); };
  CHECK_CLOSE(D.apply(one, z), 1.0 + p.alpha * p.beta * p.gamma * p.delta / p.q, 1e-12);
}

TEST_CASE("difference operator: eigenvalue q^{-n} + abcd q^{n-1}") {
  Rng rng(26);
  for (int trial = 0; trial < 8; ++trial) {
    const AWParams p = random_params(rng);
    const ThreeTermOperator D = aw_difference_op(p);
    const Complex z = safe_z(rng, p.q);
    for (int n = 0; n <= 8; ++n) {
      auto f = [&](Complex zz) { return askey_wilson(n, zz, p); };
      const Complex lhs = D.apply(f, z);
      const Complex ev =
          std::pow(p.q, -n) + p.alpha * p.beta * p.gamma * p.delta * std::pow(p.q, n - 1);
      CHECK(std::abs(lhs - ev * f(z)) / std::max(1.0, std::abs(ev * f(z))) < 1e-10);
    }
  }
}

TEST_CASE("difference operator rejects the singular set") {
  Rng rng(27);
  const AWParams p = random_params(rng);
  const ThreeTermOperator D = aw_difference_op(p);
  auto one = [](Complex) { return Complex(1, 0); };
  CHECK_THROWS_AS(D.apply(one, Complex(1.0, 0.0)), SingularPoint);
  CHECK_THROWS_AS(D.apply(one, std::sqrt(p.q)), SingularPoint);
}

TEST_CASE("H_n is exactly A_n at delta = 0") {
  Rng rng(28);
  const AWParams p = random_params(rng);
  const Complex z = safe_z(rng, p.q);
  for (int n = 0; n <= 8; ++n) {
    const Complex hn = hahn(n, z, p.alpha, p.beta, p.gamma, p.q);
    const AWParams p0{p.alpha, p.beta, p.gamma, 0.0, p.q};
    CHECK_CLOSE(hn, askey_wilson(n, z, p0), 1e-12);
  }
}

TEST_CASE("H_n recurrence and difference residuals") {
  Rng rng(29);
  for (int trial = 0; trial < 8; ++trial) {
    const AWParams p = random_params(rng);
    const Complex z = safe_z(rng, p.q);
    const ThreeTermOperator R = hahn_recurrence_op(p.alpha, p.beta, p.gamma, p.q);
    const ThreeTermOperator D = hahn_difference_op(p.alpha, p.beta, p.gamma, p.q);
    for (int n = 0; n <= 8; ++n) {
      auto f = [&](Complex zz) { return hahn(n, zz, p.alpha, p.beta, p.gamma, p.q); };
      const Complex fn = f(z);
      const Complex lhsR = R.apply_index(n, n > 0 ? f(z) * 0.0 + hahn(n - 1, z, p.alpha, p.beta, p.gamma, p.q) : 0.0,
                                         fn, hahn(n + 1, z, p.alpha, p.beta, p.gamma, p.q));
      CHECK(std::abs(lhsR - (z + 1.0 / z) * fn) / std::max(1.0, std::abs(fn)) < 1e-10);
      const Complex lhsD = D.apply(f, z);
      const Complex ev = std::pow(p.q, -n) - 1.0;
      CHECK(std::abs(lhsD - ev * fn) / std::max(1.0, std::abs(ev * fn) + 1.0) < 1e-10);
    }
  }
}

TEST_CASE("J_n: 3phi2 form, lambda limit of A_n, and operator residuals") {
  Rng rng(30);
  for (int trial = 0; trial < 6; ++trial) {
    const Complex q = random_q(rng);
    const Complex al = rng.unit_phase() * 0.9, be = rng.unit_phase() * 1.1,
                  ga = rng.unit_phase() * 1.2;
    const Complex x = rng.unit_phase() * 1.2;
    CHECK_CLOSE(jacobi(0, x, al, be, ga, q), Complex(1, 0), 1e-15);

    // A_n(x/lambda; lambda, alpha q/lambda, gamma q/lambda, lambda beta/gamma, q) -> J_n
    const int n = 3;
    auto aw_at = [&](double lambda) {
      const AWParams pl{Complex(lambda, 0), al * q / lambda, ga * q / lambda, lambda * be / ga, q};
      return askey_wilson(n, x / lambda, pl);
    };
    const Complex jn = jacobi(n, x, al, be, ga, q);
    const double d1 = std::abs(aw_at(1e-3) - jn);
    const double d2 = std::abs(aw_at(5e-4) - jn);
    CHECK(d1 < 1e-2);
    CHECK(d2 < 0.62 * d1);  // linear in lambda: halving lambda halves the error

    const ThreeTermOperator R = jacobi_recurrence_op(al, be, ga, q);
    const ThreeTermOperator D = jacobi_difference_op(al, be, ga, q);
    for (int m = 0; m <= 8; ++m) {
      auto f = [&](Complex xx) { return jacobi(m, xx, al, be, ga, q); };
      const Complex fm = f(x);
      const Complex lhsR =
          R.apply_index(m, m > 0 ? jacobi(m - 1, x, al, be, ga, q) : 0.0, fm,
                        jacobi(m + 1, x, al, be, ga, q));
      CHECK(std::abs(lhsR - x * fm) / std::max(1.0, std::abs(fm)) < 1e-10);
      const Complex lhsD = D.apply(f, x);
      const Complex ev = std::pow(q, -m) * (1.0 - std::pow(q, m)) *
                         (1.0 - al * be * std::pow(q, m + 1)) * x * x;
      CHECK(std::abs(lhsD - ev * fm) / std::max(1.0, std::abs(ev * fm) + 1.0) < 1e-10);
    }
  }
}

TEST_CASE("standard normalization: p_0 = 1 and parameter symmetry") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const AWParams p = random_params(rng);
    const Complex x = rng.box(-0.9, 0.9);
    CHECK_CLOSE(standard_normalization(0, x, p), Complex(1, 0), 1e-14);
    for (int n = 1; n <= 6; ++n) {
      const Complex base = standard_normalization(n, x, p);
      const AWParams swap_ab{p.beta, p.alpha, p.gamma, p.delta, p.q};
      const AWParams swap_ad{p.delta, p.beta, p.gamma, p.alpha, p.q};
      CHECK_CLOSE(standard_normalization(n, x, swap_ab), base, 1e-10);
      CHECK_CLOSE(standard_normalization(n, x, swap_ad), base, 1e-10);
    }
  }
}

TEST_CASE("A_n is a degree-n polynomial in z + 1/z") {
  Rng rng(32);
  const AWParams p = random_params(rng);
  const int n = 5;
  // fit on n+1 nodes, then check the fit reproduces A_n at fresh nodes
  std::vector<Complex> xs, ys;
  for (int j = 0; j <= n; ++j) {
    const Complex z = safe_z(rng, p.q);
    xs.push_back(z + 1.0 / z);
    ys.push_back(askey_wilson(n, z, p));
  }
  auto eval_fit = [&](Complex x) {
    // Lagrange interpolation through (xs, ys)
    Complex acc = 0.0;
    for (int j = 0; j <= n; ++j) {
      Complex lj = 1.0;
      for (int k = 0; k <= n; ++k)
        if (k != j) lj *= (x - xs[k]) / (xs[j] - xs[k]);
      acc += ys[j] * lj;
    }
    return acc;
  };
  for (int j = 0; j < 4; ++j) {
    const Complex z = safe_z(rng, p.q);
    CHECK(std::abs(eval_fit(z + 1.0 / z) - askey_wilson(n, z, p)) < 1e-9);
  }
}
