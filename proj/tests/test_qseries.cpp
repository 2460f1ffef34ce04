#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvk/qaskey.hpp"
#include "cvk/qseries.hpp"
#include "test_helpers.hpp"

using namespace cvk;
using cvk::test::Rng;

namespace {

Complex random_q(Rng& rng) {
  // unimodular, bounded away from low-order roots of unity
  const double t = rng.uniform(0.05, 0.45) * (rng.uniform(0, 1) < 0.5 ? 1.0 : -1.0);
  return std::exp(2.0 * iu * pi * Complex(t, 0.0));
}

}  // namespace

TEST_CASE("qpoch against a direct loop") {
  Rng rng(7);
  CHECK(qpoch(Complex(0.3, 0.8), Complex(0.2, 0.1), 0) == Complex(1, 0));
  for (int trial = 0; trial < 20; ++trial) {
    const Complex a = rng.box(-1, 1);
    const Complex q = random_q(rng);
    const int n = 7;
    Complex direct = 1.0;
    for (int k = 0; k < n; ++k) direct *= (1.0 - a * std::pow(q, k));
    CHECK_CLOSE(qpoch(a, q, n), direct, 1e-13);
  }
}

TEST_CASE("qpoch zero factor (q^{-2}; q)_3 = 0") {
  Rng rng(8);
  const Complex q = random_q(rng);
  CHECK(std::abs(qpoch(1.0 / (q * q), q, 3)) < 1e-13);
}

TEST_CASE("phi: numerator containing 1 kills all terms but the first") {
  Rng rng(9);
  const Complex q = random_q(rng);
  const Complex r = phi({Complex(1, 0), rng.box(-1, 1)}, {rng.box(-1, 1)}, q, rng.box(-1, 1));
  CHECK_CLOSE(r, Complex(1, 0), 1e-14);
}

TEST_CASE("phi: 3phi2 with n = 0 termination equals 1") {
  Rng rng(10);
  const Complex q = random_q(rng);
  const Complex r =
      phi({Complex(1, 0), rng.unit_phase(), rng.unit_phase()}, {rng.box(-1, 1), rng.box(-1, 1)}, q,
          q);
  CHECK_CLOSE(r, Complex(1, 0), 1e-14);
}

TEST_CASE("phi: terminating 4phi3 against an independent term-by-term sum") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const Complex q = random_q(rng);
    const int n = 5;
    const Complex a2 = rng.unit_phase() * 1.2, a3 = rng.unit_phase() * 0.8,
                  a4 = rng.unit_phase() * 1.1;
    const Complex b1 = rng.unit_phase() * 1.4, b2 = rng.unit_phase() * 0.7,
                  b3 = rng.unit_phase() * 1.05;
    const Complex z = rng.unit_phase();
    const Complex got = phi({std::pow(q, -n), a2, a3, a4}, {b1, b2, b3}, q, z);
    Complex want = 0.0;
    for (int k = 0; k <= n; ++k) {
      const Complex num = qpoch({std::pow(q, -n), a2, a3, a4}, q, k);
      const Complex den = qpoch({b1, b2, b3, q}, q, k);
      want += num / den * std::pow(z, k);
    }
    CHECK_CLOSE(got, want, 1e-12);
  }
}

TEST_CASE("phi error paths") {
  Rng rng(12);
  const Complex q = random_q(rng);
  CHECK_THROWS_AS(phi({Complex(2.0, 0.3)}, {}, q, Complex(2.0, 0.0)), NonTerminating);
  // denominator b = q^{-2} vanishes at k = 2 before termination at n = 5
  CHECK_THROWS_AS(phi({std::pow(q, -5)}, {std::pow(q, -2)}, q, q), DenominatorVanishes);
}

TEST_CASE("Pochhammer inversion identity (q^{1-m}/a; q)_m") {
  Rng rng(13);
  for (int m = 0; m <= 10; ++m) {
    const Complex q = random_q(rng);
    const Complex a = rng.unit_phase() * rng.uniform(0.5, 1.5);
    const Complex lhs = qpoch(std::pow(q, 1 - m) / a, q, m) * std::pow(-a, m) *
                        std::pow(q, 0.5 * m * (m - 1.0));
    CHECK_CLOSE(lhs, qpoch(a, q, m), 1e-12);
  }
}

TEST_CASE("Pochhammer base inversion (a; 1/q)_n") {
  Rng rng(14);
  for (int n = 0; n <= 10; ++n) {
    const Complex q = random_q(rng);
    const Complex a = rng.unit_phase() * rng.uniform(0.5, 1.5);
    const Complex lhs = qpoch(a, 1.0 / q, n);
    const Complex rhs =
        qpoch(1.0 / a, q, n) * std::pow(-a, n) * std::pow(q, -0.5 * n * (n - 1.0));
    CHECK_CLOSE(lhs, rhs, 1e-12);
  }
}

TEST_CASE("two-sided 3phi2 transformation (q^{-n},b,c; d,e | de q^n/(bc))") {
  Rng rng(15);
  for (int n = 1; n <= 8; ++n) {
    const Complex q = random_q(rng);
    const Complex b = rng.unit_phase() * 1.1, c = rng.unit_phase() * 0.9,
                  d = rng.unit_phase() * 1.3, e = rng.unit_phase() * 0.8;
    const Complex lhs = phi({std::pow(q, -n), b, c}, {d, e}, q, d * e * std::pow(q, n) / (b * c));
    const Complex rhs = qpoch(e / c, q, n) / qpoch(e, q, n) *
                        phi({std::pow(q, -n), c, d / b}, {d, c * std::pow(q, 1 - n) / e}, q, q);
    CHECK_CLOSE(lhs, rhs, 1e-11);
  }
}

TEST_CASE("3phi2 reversal identity with argument q") {
  Rng rng(16);
  for (int n = 1; n <= 8; ++n) {
    const Complex q = random_q(rng);
    const Complex b = rng.unit_phase() * 1.2, c = rng.unit_phase() * 0.8,
                  d = rng.unit_phase() * 1.1, e = rng.unit_phase() * 0.95;
    const Complex lhs = qpoch(d * e / (b * c), q, n) / qpoch(e, q, n) *
                        std::pow(b * c / d, n) *
                        phi({std::pow(q, -n), d / b, d / c}, {d, d * e / (b * c)}, q, q);
    const Complex rhs = phi({std::pow(q, -n), b, c}, {d, e}, q, q);
    CHECK_CLOSE(lhs, rhs, 1e-11);
  }
}

TEST_CASE("hahn-side sum: n = 0 gives 1 and the 3phi2 reductions hold") {
  Rng rng(17);
  const Complex q = random_q(rng);
  CHECK_CLOSE(sigma_hahn(0, 1, rng.unit_phase(), rng.unit_phase(), rng.unit_phase(),
                         rng.unit_phase(), q),
              Complex(1, 0), 1e-14);
  for (int trial = 0; trial < 6; ++trial) {
    const Complex qq = random_q(rng);
    const Complex al = rng.unit_phase() * 1.2, be = rng.unit_phase() * 0.9,
                  ga = rng.unit_phase() * 1.1, z = rng.unit_phase();
    const int n = 3;
    const Complex s2 = sigma_hahn(n, 2, al, be, ga, z, qq);
    const Complex w2 = phi({std::pow(qq, -n), ga * z, ga / z}, {be * ga, al * ga}, qq, qq);
    CHECK_CLOSE(s2, w2, 1e-11);
    const Complex s1 = sigma_hahn(n, 1, al, be, ga, z, qq);
    const Complex w1 = phi({std::pow(qq, -n), ga * z, ga / z}, {be * ga, al * ga}, qq,
                           al * be * std::pow(qq, n));
    CHECK_CLOSE(s1, w1, 1e-11);
  }
}

TEST_CASE("jacobi-side sum: n = 0 gives 1 and the J_n reductions hold") {
  Rng rng(18);
  const Complex q = random_q(rng);
  CHECK_CLOSE(sigma_jacobi(0, 2, rng.unit_phase(), rng.unit_phase(), rng.unit_phase(),
                           rng.unit_phase(), q),
              Complex(1, 0), 1e-14);
  for (int trial = 0; trial < 6; ++trial) {
    const Complex qq = random_q(rng);
    const Complex al = rng.unit_phase() * 1.15, be = rng.unit_phase() * 0.85,
                  ga = rng.unit_phase() * 1.05, x = rng.unit_phase() * 1.3;
    const int n = 4;
    const Complex s2 = sigma_jacobi(n, 2, al, be, ga, x, qq);
    CHECK_CLOSE(s2, jacobi(n, x, al, be, ga, qq), 1e-11);
    const Complex s1 = sigma_jacobi(n, 1, al, be, ga, x, qq);
    CHECK_CLOSE(s1, jacobi(n, 1.0 / x, 1.0 / al, 1.0 / be, 1.0 / ga, 1.0 / qq), 1e-11);
  }
}
