#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cvk/confluent.hpp"
#include "cvk/qaskey.hpp"
#include "test_helpers.hpp"

using namespace cvk;
using cvk::test::Rng;

namespace {

ConfluentParams golden_point(int k = 1) {
  return ConfluentParams{BParameter(0.7), 0.3, -0.2, 0.4, Complex(0.25, 0), Complex(0.35, 0), k};
}

const Complex kGoldenC1(-3.997344392502392e-02, -2.653026507112755e-01);
const Complex kGoldenC1Ren(-8.387515880205326e-02, 1.039759108317546e-01);
const Complex kGoldenC1Hat(4.897650415912429, 6.213911200219198);

QuadratureSettings settings() {
  QuadratureSettings qs;
  qs.rel_tol = 1e-11;
  qs.abs_tol = 1e-13;
  return qs;
}

Complex trapezoid_oracle(const ConfluentParams& p, double h) {
  auto [up, down] = ck_pole_data(p);
  double t0 = 1.0;
  for (const auto& s : up) t0 = std::max(t0, std::abs(s.anchor.real()) + 1.0);
  for (const auto& s : down) t0 = std::max(t0, std::abs(s.anchor.real()) + 1.0);
  const double cut = t0 + 42.0 / (pi * p.bp.Q) + 1.0;
  const double y = -0.25 * p.bp.Q;
  CompensatedSum acc;
  const int n = static_cast<int>(std::ceil(2.0 * cut / h));
  for (int i = 0; i <= n; ++i) {
    const Complex x(-cut + 2.0 * cut * i / n, y);
    Complex v = std::exp(ck_integrand_log(p, x));
    if (i == 0 || i == n) v *= 0.5;
    acc.add(v);
  }
  return acc.value() * (2.0 * cut / n);
}

}  // namespace

TEST_CASE("confluent kernel against the fixed-step trapezoid oracle") {
  const ConfluentParams p = golden_point();
  const KernelValue c = ck_kernel(p, settings());
  const Complex pref = std::exp(ck_prefactor_log(p));
  const Complex coarse = pref * trapezoid_oracle(p, 0.04);
  const Complex fine = pref * trapezoid_oracle(p, 0.01);
  CHECK(std::abs(coarse - fine) < 1e-11);
  CHECK_CLOSE(c.value, fine, 1e-9);
  CHECK_CLOSE(c.value, kGoldenC1, 1e-9);
  CHECK_CLOSE(ck_ren(p, settings()).value, kGoldenC1Ren, 1e-9);
  CHECK_CLOSE(chat_ren(p, settings()).value, kGoldenC1Hat, 1e-9);
}

TEST_CASE("integrand decay respects the exponential estimate") {
  const ConfluentParams p = golden_point();
  auto [up, down] = ck_pole_data(p);
  double t0 = 1.0;
  for (const auto& s : up) t0 = std::max(t0, std::abs(s.anchor.real()) + 1.0);
  for (const auto& s : down) t0 = std::max(t0, std::abs(s.anchor.real()) + 1.0);
  const double y = -0.25 * p.bp.Q;
  for (double sgn : {1.0, -1.0}) {
    const double base = std::abs(std::exp(ck_integrand_log(p, Complex(sgn * t0, y))));
    const double far = std::abs(std::exp(ck_integrand_log(p, Complex(sgn * (t0 + 3.0), y))));
    CHECK(far <= 5.0 * base * std::exp(-pi * p.bp.Q * 3.0));
  }
}

TEST_CASE("C_k vs C_{k+2}: the prefactor branch ratio") {
  const ConfluentParams p1 = golden_point(1);
  const ConfluentParams p3 = golden_point(3);
  const auto qs = settings();
  const Complex c1 = ck_kernel(p1, qs).value;
  const Complex c3 = ck_kernel(p3, qs).value;
  const Complex e = conformal_weight(p1.th0, p1.bp) + conformal_weight(p1.tht, p1.bp) -
                    conformal_weight(p1.sigma_s, p1.bp) + 0.5 * p1.thstar * p1.thstar -
                    2.0 * p1.nu * p1.nu;
  CHECK_CLOSE(c1 / c3, std::exp(-2.0 * iu * pi * e), 1e-9);
}

TEST_CASE("renormalized kernels: k-periodicity and b-inversion") {
  const auto qs = settings();
  for (int k : {1, 2}) {
    ConfluentParams p = golden_point(k);
    ConfluentParams p2 = golden_point(k + 2);
    const Complex a = ck_ren(p, qs).value;
    CHECK_CLOSE(ck_ren(p2, qs).value, a, 1e-9);
    ConfluentParams pinv = p;
    pinv.bp = BParameter(1.0 / p.bp.b);
    CHECK_CLOSE(ck_ren(pinv, qs).value, a, 1e-8);

    const Complex h = chat_ren(p, qs).value;
    CHECK_CLOSE(chat_ren(p2, qs).value, h, 1e-9);
    CHECK_CLOSE(chat_ren(pinv, qs).value, h, 1e-8);
  }
  // raw kernel b-inversion carries the explicit power
  ConfluentParams p = golden_point(1);
  ConfluentParams pinv = p;
  pinv.bp = BParameter(1.0 / p.bp.b);
  const Complex e = conformal_weight(p.th0, p.bp) + conformal_weight(p.tht, p.bp) -
                    conformal_weight(p.sigma_s, p.bp) + 0.5 * p.thstar * p.thstar -
                    2.0 * p.nu * p.nu;
  CHECK_CLOSE(ck_kernel(pinv, qs).value,
              std::pow(Complex(p.bp.b), -2.0 * e) * ck_kernel(p, qs).value, 1e-9);
}

TEST_CASE("four eigen-equations for k = 1..4") {
  const auto qs = settings();
  for (int k : {1, 2, 3, 4}) {
    ConfluentParams p = golden_point(k);
    for (int which : {1, 2, 3, 4}) {
      CAPTURE(k);
      CAPTURE(which);
      CHECK(verify_ck_eigen(p, which, qs) < 1e-7);
    }
  }
}

TEST_CASE("parity structure of the operator coefficients") {
  const ConfluentParams p1 = golden_point(1);
  const ConfluentParams p3 = golden_point(3);
  const ThreeTermOperator a = build_confluent_operator(ConfluentOp::Hck, p1, 0.7);
  const ThreeTermOperator b = build_confluent_operator(ConfluentOp::Hck, p3, 0.7);
  // H^0 depends on k only through (-1)^k
  const Complex nu(0.21, -0.05);
  CHECK_CLOSE(a.zero(nu), b.zero(nu), 1e-13);
  // renormalized coefficients are exactly k -> k+2 periodic
  const ThreeTermOperator ra = build_confluent_operator(ConfluentOp::HckRen, p1, 0.7);
  const ThreeTermOperator rb = build_confluent_operator(ConfluentOp::HckRen, p3, 0.7);
  CHECK_CLOSE(ra.plus(nu), rb.plus(nu), 1e-13);
  CHECK_CLOSE(ra.minus(nu), rb.minus(nu), 1e-13);
}

TEST_CASE("N-factor shift ratios and conjugation consistency") {
  const double b = 0.7;
  const Complex nu(0.25, 0.0), sig(0.35, 0.0);
  for (int k : {1, 2}) {
    ConfluentParams p = golden_point(k);
    const KParity kp(k);
    const ThreeTermOperator Hck = build_confluent_operator(ConfluentOp::Hck, p, b);
    const ThreeTermOperator Hr = build_confluent_operator(ConfluentOp::HckRen, p, b);
    const ThreeTermOperator Ht = build_confluent_operator(ConfluentOp::HckTilde, p, b);
    const ThreeTermOperator Hrt = build_confluent_operator(ConfluentOp::HckRenTilde, p, b);
    const ThreeTermOperator Hh = build_confluent_operator(ConfluentOp::HchatRen, p, b);
    const ThreeTermOperator Hht = build_confluent_operator(ConfluentOp::HchatRenTilde, p, b);

    auto n1_ratio = [&](Complex dnu, Complex dsig) {
      ConfluentParams q = p;
      q.nu = nu + dnu;
      q.sigma_s = sig + dsig;
      return std::exp(n1_log(p) - n1_log(q));
    };
    auto n3_ratio = [&](Complex dnu, Complex dsig) {
      ConfluentParams q = p;
      q.nu = nu + dnu;
      q.sigma_s = sig + dsig;
      return std::exp(n3_log(p) - n3_log(q));
    };
    const Complex ib(0, b);
    const Complex u = u_factor(p, nu, p.thstar);
    const Complex um =
        std::exp(double(kp.sign) * 2.0 * pi * b * (ib + p.th0 - p.tht)) *
        u_factor(p, -nu, -p.thstar);
    CHECK_CLOSE(n1_ratio(ib, 0), u, 1e-12);
    CHECK_CLOSE(n1_ratio(-ib, 0), um, 1e-12);
    CHECK_CLOSE(n1_ratio(0, ib), v_factor(p, sig), 1e-12);
    CHECK_CLOSE(n1_ratio(0, -ib), v_factor(p, -sig), 1e-12);

    const Complex s = s_factor(p, p.thstar, nu);
    const Complex sm =
        std::exp(double(-kp.sign) * 2.0 * pi * b * (-ib + p.th0 - p.tht)) *
        s_factor(p, -p.thstar, -nu);
    CHECK_CLOSE(n3_ratio(ib, 0), s, 1e-12);
    CHECK_CLOSE(n3_ratio(-ib, 0), sm, 1e-12);
    CHECK_CLOSE(n3_ratio(0, ib), r_factor(p, sig), 1e-11);
    CHECK_CLOSE(n3_ratio(0, -ib), r_factor(p, -sig), 1e-11);

    // conjugated coefficients equal the printed renormalized closed forms
    CHECK_CLOSE(u * Hck.plus(nu), Hr.plus(nu), 1e-11);
    CHECK_CLOSE(um * Hck.minus(nu), Hr.minus(nu), 1e-11);
    CHECK_CLOSE(v_factor(p, sig) * Ht.plus(sig), Hrt.plus(sig), 1e-11);
    CHECK_CLOSE(v_factor(p, -sig) * Ht.minus(sig), Hrt.minus(sig), 1e-11);
    CHECK_CLOSE(s * Hck.plus(nu), Hh.plus(nu), 1e-11);
    CHECK_CLOSE(sm * Hck.minus(nu), Hh.minus(nu), 1e-11);
    CHECK_CLOSE(r_factor(p, sig) * Ht.plus(sig), Hht.plus(sig), 1e-11);
  }
}

TEST_CASE("X, Y, Z building-block identities") {
  Rng rng(55);
  for (int k : {1, 2, 3}) {
    ConfluentParams p = golden_point(k);
    const Complex x = rng.box(-0.6, 0.6);
    auto m = xyz_identities(p, x);
    for (const auto& [name, residual] : m) {
      CAPTURE(name);
      CHECK(residual < 1e-11);
    }
  }
}

TEST_CASE("confluent limit of M with normalization L_k") {
  const auto qs = settings();
  ConfluentParams p = golden_point(1);
  for (int eps : {1, -1}) {
    const auto devs = confluent_limit_check(p, eps, {6, 12, 24}, qs);
    CHECK(devs[1] < devs[0]);
    CHECK(devs[2] < devs[1]);
    // O(1/Lambda): successive ratios within a factor 2 of 1/2
    CHECK(devs[1] / devs[0] > 0.25);
    CHECK(devs[1] / devs[0] < 1.0);
    CHECK(devs[2] / devs[1] > 0.25);
    CHECK(devs[2] / devs[1] < 1.0);
  }
}

TEST_CASE("operator convergence along Lambda") {
  ConfluentParams p = golden_point(1);
  p.nu = Complex(0.2, 0.0);
  for (auto fam : {ConvergenceFamily::HMtoHck, ConvergenceFamily::HMTildeToHckTilde}) {
    const auto rows = operator_convergence_check(fam, p, {6, 12, 24, 48});
    for (size_t i = 0; i + 1 < rows.size(); ++i)
      CHECK(rows[i + 1].max_coeff_deviation < rows[i].max_coeff_deviation);
    for (const auto& r : rows) CHECK(r.identity_residual < 1e-10);
  }
  // X_{+-1}(Lambda) -> 1 and J_j reach their exponential limits
  const auto rows = operator_convergence_check(ConvergenceFamily::HMtoHck, p, {50, 400});
  CHECK(rows[1].x_plus_dev < 0.25 * rows[0].x_plus_dev);
  CHECK(rows[1].x_plus_dev < 6e-3);
  CHECK(rows[0].aux_dev < 1e-5);  // J_j converge exponentially fast
  const auto trows =
      operator_convergence_check(ConvergenceFamily::HMTildeToHckTilde, p, {50});
  CHECK(trows[0].aux_dev < 1e-3);  // chi e^{-pi b Lambda} -> 1
}

TEST_CASE("Hahn-side limits: residue route, Pochhammer route, polynomial") {
  const ConfluentParams p = golden_point();
  const HahnMap hm = map_confluent_to_hahn(p);
  const Complex z = std::exp(2.0 * pi * p.bp.b * p.sigma_s);
  for (int k : {1, 2}) {
    for (int n = 0; n <= 6; ++n) {
      const Complex a = hahn_limit(n, k, p);
      const Complex b = hahn_limit_pochhammer(n, k, p);
      CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, std::abs(a)));
      const Complex h =
          k % 2 == 1
              ? hahn(n, 1.0 / z, 1.0 / hm.alpha, 1.0 / hm.beta, 1.0 / hm.gamma, 1.0 / hm.q)
              : hahn(n, z, hm.alpha, hm.beta, hm.gamma, hm.q);
      CHECK(std::abs(a - h) < 1e-10 * std::max(1.0, std::abs(h)));
    }
    CHECK(std::abs(hahn_limit(0, k, p) - 1.0) < 1e-12);
  }
}

TEST_CASE("Jacobi-side limits: residue route, Pochhammer route, polynomial") {
  const ConfluentParams p = golden_point();
  const JacobiMap jm = map_confluent_to_jacobi(p);
  for (int k : {1, 2}) {
    for (int n = 0; n <= 6; ++n) {
      const Complex a = jacobi_limit(n, k, p);
      const Complex b = jacobi_limit_pochhammer(n, k, p);
      CHECK(std::abs(a - b) < 1e-11 * std::max(1.0, std::abs(a)));
      const Complex j =
          k % 2 == 1
              ? jacobi(n, 1.0 / jm.x, 1.0 / jm.alpha, 1.0 / jm.beta, 1.0 / jm.gamma, 1.0 / jm.q)
              : jacobi(n, jm.x, jm.alpha, jm.beta, jm.gamma, jm.q);
      CHECK(std::abs(a - j) < 1e-10 * std::max(1.0, std::abs(j)));
    }
    CHECK(std::abs(jacobi_limit(0, k, p) - 1.0) < 1e-12);
  }
}

TEST_CASE("parameter maps: exponent arithmetic") {
  const ConfluentParams p = golden_point();
  const double b = p.bp.b;
  const HahnMap hm = map_confluent_to_hahn(p);
  // alpha beta = e^{2 pi b (2 tht - ib)}
  CHECK_CLOSE(hm.alpha * hm.beta, std::exp(2.0 * pi * b * (2.0 * p.tht - iu * b)), 1e-12);
  CHECK(std::abs(hm.q - std::exp(-2.0 * iu * pi * b * b)) < 1e-15);
  const JacobiMap jm = map_confluent_to_jacobi(p);
  // x * (-e^{-pi b(-ib + 2 th0 + th*)}) = e^{-2 pi b nu}
  CHECK_CLOSE(jm.x * (-std::exp(-pi * b * (-iu * b + 2.0 * p.th0 + p.thstar))),
              std::exp(-2.0 * pi * b * p.nu), 1e-12);
}

TEST_CASE("discretized recurrences and difference equations") {
  const ConfluentParams p = golden_point();
  for (int k : {1, 2}) {
    for (int n : {0, 2, 4}) {
      CAPTURE(k);
      CAPTURE(n);
      const auto hr = discretized_operator_check(DiscretizedCheck::hahn_recurrence, n, k, p);
      CHECK(hr.coefficient_deviation < 1e-11);
      CHECK(hr.value_residual < 1e-9);
      const auto hd = discretized_operator_check(DiscretizedCheck::hahn_difference, n, k, p);
      CHECK(hd.coefficient_deviation < 1e-12);
      CHECK(hd.value_residual < 1e-9);
      const auto jr = discretized_operator_check(DiscretizedCheck::jacobi_recurrence, n, k, p);
      CHECK(jr.coefficient_deviation < 1e-11);
      CHECK(jr.value_residual < 1e-9);
      const auto jd = discretized_operator_check(DiscretizedCheck::jacobi_difference, n, k, p);
      CHECK(jd.coefficient_deviation < 1e-11);
      CHECK(jd.value_residual < 1e-9);
    }
    CHECK(vk_h_identity_residual(golden_point(k), p.sigma_s) < 1e-12);
    CHECK(hat_eigenvalue_identity_residual(golden_point(k), 3) < 1e-12);
  }
}

TEST_CASE("near-limit cross-validation of the Hahn degeneration") {
  // C_k^ren at nu = nu_n + eps approaches the closed limit as eps shrinks
  const ConfluentParams p = golden_point(2);
  const auto qs = settings();
  const int n = 1;
  const Complex closed = hahn_limit(n, p.k, p);
  double prev = 1e300;
  for (double eps : {1e-2, 5e-3}) {
    ConfluentParams q = p;
    q.nu = nu_n(p, n) + eps;
    const Complex v = ck_ren(q, qs).value;
    const double dev = std::abs(v - closed);
    CHECK(dev < prev);
    prev = dev;
  }
  CHECK(prev < 5e-2 * std::max(1.0, std::abs(closed)));
}

TEST_CASE("assumption guards") {
  ConfluentParams p = golden_point();
  p.th0 = 0.0;
  CHECK_THROWS_AS(check_confluent_assumptions(p), AssumptionViolated);
  ConfluentParams q = golden_point();
  q.k = 0;
  CHECK_THROWS_AS(check_confluent_assumptions(q), DomainError);
  CHECK_NOTHROW(check_confluent_assumptions(golden_point()));
}
