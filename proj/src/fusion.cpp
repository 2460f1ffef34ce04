#include "cvk/fusion.hpp"

#include <algorithm>
#include <cmath>

#include "cvk/detail/hf_coeffs.hpp"
#include "cvk/sb_kernel.hpp"

namespace cvk {

namespace {

constexpr double kIrrationalTol = 1e-8;

SbIntegrandSpec fusion_spec(const FusionParams& p) {
  const Complex iQ2 = 0.5 * iu * p.bp.Q;
  SbIntegrandSpec spec;
  spec.numer = {p.th1 + Complex(0, 0), -p.th1 + Complex(0, 0),
                p.th0 + p.thinf + p.tht + Complex(0, 0), -p.th0 + p.thinf + p.tht + Complex(0, 0)};
  spec.denom = {iQ2 + p.thinf + p.sigma_s, iQ2 + p.thinf - p.sigma_s, iQ2 + p.tht + p.sigma_t,
                iQ2 + p.tht - p.sigma_t};
  return spec;
}

KernelValue integrate_fusion(const FusionParams& p, Complex log_prefactor,
                             const QuadratureSettings& qs_in) {
  const Complex pref = std::exp(log_prefactor);
  // the tolerance contract applies to prefactor * integral
  QuadratureSettings qs = qs_in;
  qs.abs_tol = qs_in.abs_tol / std::max(1.0, std::abs(pref));
  const SbKernelResult r = integrate_sb_kernel(fusion_spec(p), p.bp, qs, 2.0 * pi * p.bp.Q);
  return KernelValue{pref * r.integral, std::abs(pref) * r.err_estimate, r.residue_terms};
}

// pick a horizontal line height inside (lo, hi) maximizing the distance to
// the given blocked heights
double best_line_height(double lo, double hi, std::vector<double> blocked) {
  blocked.push_back(lo);
  blocked.push_back(hi);
  std::sort(blocked.begin(), blocked.end());
  double best = 0.5 * (lo + hi), gap = -1.0;
  for (size_t i = 0; i + 1 < blocked.size(); ++i) {
    const double a = std::max(lo, blocked[i]), b = std::min(hi, blocked[i + 1]);
    if (b - a > gap) {
      gap = b - a;
      best = 0.5 * (a + b);
    }
  }
  return best;
}

}  // namespace

void check_fusion_assumptions(const FusionParams& p) {
  if (p.bp.root_of_unity)
    throw AssumptionViolated("fusion: b^2 is rational within tolerance (q near a root of unity)");
  auto nonzero = [](Complex v, const char* what) {
    if (std::abs(v) < kIrrationalTol)
      throw AssumptionViolated(std::string("fusion: degenerate parameters, ") + what);
  };
  nonzero(p.sigma_s, "sigma_s = 0");
  nonzero(p.sigma_t, "sigma_t = 0");
  nonzero(Complex(p.th1, 0), "theta_1 = 0");
  nonzero(Complex(p.th0, 0), "theta_0 = 0");
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) {
      nonzero(p.thinf - p.tht + double(e1) * p.sigma_s + double(e2) * p.sigma_t,
              "thinf - tht + e sigma_s + e' sigma_t = 0");
      nonzero(Complex(p.thinf + p.tht + e1 * p.th0 + e2 * p.th1, 0),
              "thinf + tht + e th0 + e' th1 = 0");
    }
}

std::pair<std::vector<PoleSequence>, std::vector<PoleSequence>> fusion_pole_data(
    const FusionParams& p) {
  const double b = p.bp.b, binv = 1.0 / p.bp.b, Q = p.bp.Q;
  std::vector<PoleSequence> up, down;
  using O = PoleSequence::Orientation;
  up.push_back({-p.thinf + p.sigma_s, O::upward, b, binv, "-thinf+sigma_s"});
  up.push_back({-p.thinf - p.sigma_s, O::upward, b, binv, "-thinf-sigma_s"});
  up.push_back({-p.tht + p.sigma_t, O::upward, b, binv, "-tht+sigma_t"});
  up.push_back({-p.tht - p.sigma_t, O::upward, b, binv, "-tht-sigma_t"});
  down.push_back({Complex(p.th1, -Q / 2), O::downward, b, binv, "th1-iQ/2"});
  down.push_back({Complex(-p.th1, -Q / 2), O::downward, b, binv, "-th1-iQ/2"});
  down.push_back({Complex(p.th0 - p.thinf - p.tht, -Q / 2), O::downward, b, binv,
                  "th0-thinf-tht-iQ/2"});
  down.push_back({Complex(-p.th0 - p.thinf - p.tht, -Q / 2), O::downward, b, binv,
                  "-th0-thinf-tht-iQ/2"});
  return {up, down};
}

Complex fusion_integrand_log(const FusionParams& p, Complex x) {
  return sb_kernel_integrand_log(fusion_spec(p), p.bp, x);
}

Complex fusion_prefactor_log(const FusionParams& p) {
  const BParameter& bp = p.bp;
  const Complex iQ2 = 0.5 * iu * bp.Q;
  Complex lp = 0.0;
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) {
      lp += log_gb(double(e1) * p.th1 + p.tht + double(e2) * p.sigma_t, bp);
      lp += log_gb(double(e1) * p.th0 - p.thinf + double(e2) * p.sigma_t, bp);
      lp -= log_gb(double(e1) * p.th0 + p.tht + double(e2) * p.sigma_s, bp);
      lp -= log_gb(double(e1) * p.th1 - p.thinf + double(e2) * p.sigma_s, bp);
    }
  for (int e : {1, -1}) {
    lp += log_gb(iQ2 + 2.0 * double(e) * p.sigma_s, bp);
    lp -= log_gb(-iQ2 + 2.0 * double(e) * p.sigma_t, bp);
  }
  return lp;
}

KernelValue fusion_integral_only(const FusionParams& p, const QuadratureSettings& qs) {
  const SbKernelResult r = integrate_sb_kernel(fusion_spec(p), p.bp, qs, 2.0 * pi * p.bp.Q);
  return KernelValue{r.integral, r.err_estimate, r.residue_terms};
}

KernelValue fusion_kernel(const FusionParams& p, const QuadratureSettings& qs) {
  return integrate_fusion(p, fusion_prefactor_log(p), qs);
}

Complex fren_prefactor_log(const FusionParams& p) {
  const BParameter& bp = p.bp;
  const Complex iQ2 = 0.5 * iu * bp.Q;
  Complex lp = log_sb(iQ2 + 2.0 * p.tht, bp) +
               log_sb(iQ2 + p.th0 + p.th1 + p.thinf + p.tht, bp) +
               log_sb(iQ2 + p.th0 + p.th1 - p.thinf + p.tht, bp);
  for (int e1 : {1, -1}) {
    lp += log_sb(double(e1) * p.sigma_t - p.th0 - p.thinf, bp);
    lp -= log_sb(double(e1) * p.sigma_s + p.th1 - p.thinf, bp);
    for (int e2 : {1, -1}) lp += log_sb(double(e1) * p.sigma_s + double(e2) * p.th0 - p.tht, bp);
  }
  return lp;
}

KernelValue fren(const FusionParams& p, const QuadratureSettings& qs) {
  return integrate_fusion(p, fren_prefactor_log(p), qs);
}

KernelValue fren_via_normalization(const FusionParams& p, const QuadratureSettings& qs) {
  const BParameter& bp = p.bp;
  const Complex iQ2 = 0.5 * iu * bp.Q;
  Complex ln = log_sb(iQ2 + 2.0 * p.tht, bp) +
               log_sb(iQ2 + p.th0 + p.th1 + p.thinf + p.tht, bp) +
               log_sb(iQ2 + p.th0 + p.th1 - p.thinf + p.tht, bp);
  ln += log_gb(-2.0 * p.sigma_t - iQ2, bp) + log_gb(2.0 * p.sigma_t - iQ2, bp);
  ln -= log_gb(-2.0 * p.sigma_s + iQ2, bp) + log_gb(2.0 * p.sigma_s + iQ2, bp);
  for (int e1 : {1, -1})
    for (int e2 : {1, -1}) {
      ln += log_gb(-p.tht + double(e1) * p.th0 + double(e2) * p.sigma_s, bp);
      ln += log_gb(-p.th1 + double(e1) * p.thinf + double(e2) * p.sigma_s, bp);
      ln -= log_gb(p.th0 + double(e1) * p.thinf + double(e2) * p.sigma_t, bp);
      ln -= log_gb(p.tht + double(e1) * p.th1 + double(e2) * p.sigma_t, bp);
    }
  const KernelValue f = fusion_kernel(p, qs);
  const Complex n = std::exp(ln);
  return KernelValue{n * f.value, std::abs(n) * f.quadrature_err, 0};
}

ThreeTermOperator build_fusion_operator(FusionOp name, const FusionParams& p, double step) {
  const double beta = step, Q = p.bp.Q;
  const Complex th0 = p.th0, tht = p.tht, th1 = p.th1, thinf = p.thinf;
  const Complex istep = iu * beta;
  using detail::hf_plus;
  using detail::hf_tilde_plus;
  using detail::hf_zero;
  using detail::hren_c;

  switch (name) {
    case FusionOp::HF:
      return ThreeTermOperator{
          [=](Complex s) { return hf_plus(th1, tht, thinf, th0, beta, Q, s); },
          [=](Complex s) { return hf_zero(th1, tht, thinf, th0, beta, s); },
          [=](Complex s) { return hf_plus(th1, tht, thinf, th0, beta, Q, -s); },
          ThreeTermOperator::Shift::additive, istep};
    case FusionOp::HFDual:
      return ThreeTermOperator{
          [=](Complex s) { return hf_tilde_plus(th0, tht, thinf, th1, beta, s); },
          [=](Complex s) { return hf_zero(th0, tht, thinf, th1, beta, s); },
          [=](Complex s) { return hf_tilde_plus(th0, tht, thinf, th1, beta, -s); },
          ThreeTermOperator::Shift::additive, istep};
    case FusionOp::HM:
      return ThreeTermOperator{
          [=](Complex s) {
            return std::exp(2.0 * pi * beta * (s + 0.5 * iu * beta)) *
                   hf_plus(th0, tht, thinf, th1, beta, Q, s);
          },
          [=](Complex s) { return hf_zero(th0, tht, thinf, th1, beta, s); },
          [=](Complex s) {
            return std::exp(2.0 * pi * beta * (-s + 0.5 * iu * beta)) *
                   hf_plus(th0, tht, thinf, th1, beta, Q, -s);
          },
          ThreeTermOperator::Shift::additive, istep};
    case FusionOp::HMDual:
      return ThreeTermOperator{
          [=](Complex s) { return hf_tilde_plus(th1, tht, thinf, th0, beta, s); },
          [=](Complex s) { return hf_zero(th1, tht, thinf, th0, beta, s); },
          [=](Complex s) { return hf_tilde_plus(th1, tht, thinf, th0, beta, -s); },
          ThreeTermOperator::Shift::additive, istep};
    case FusionOp::HRen:
      return ThreeTermOperator{
          [=](Complex s) { return hren_c(th1, tht, thinf, th0, beta, -s); },
          [=](Complex s) { return hf_zero(th1, tht, thinf, th0, beta, s); },
          [=](Complex s) { return hren_c(th1, tht, thinf, th0, beta, s); },
          ThreeTermOperator::Shift::additive, istep};
    case FusionOp::HRenDual:
      return ThreeTermOperator{
          [=](Complex s) { return hren_c(th0, tht, thinf, th1, beta, -s); },
          [=](Complex s) { return hf_zero(th0, tht, thinf, th1, beta, s); },
          [=](Complex s) { return hren_c(th0, tht, thinf, th1, beta, s); },
          ThreeTermOperator::Shift::additive, istep};
  }
  throw DomainError("build_fusion_operator: unknown operator");
}

double eigen_residual(const ThreeTermOperator& op,
                      const std::function<Complex(Complex)>& kernel_eval, Complex point,
                      Complex eigenvalue) {
  const Complex lhs = op.apply(kernel_eval, point);
  const Complex rhs = eigenvalue * kernel_eval(point);
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
}

AWParams map_fusion_to_aw(const FusionParams& p) {
  const double b = p.bp.b;
  const Complex ib2 = 0.5 * iu * b;
  return AWParams{-std::exp(2.0 * pi * b * (ib2 + p.th1 + p.tht)),
                  -std::exp(2.0 * pi * b * (ib2 + p.th0 - p.thinf)),
                  -std::exp(2.0 * pi * b * (ib2 - p.th1 + p.tht)),
                  -std::exp(2.0 * pi * b * (ib2 + p.th0 + p.thinf)), p.bp.q};
}

Complex fusion_sigma_s_n(const FusionParams& p, int n) {
  return 0.5 * iu * p.bp.Q + p.th0 + p.tht + iu * (n * p.bp.b);
}

KernelValue fren_residue_corrected(const FusionParams& p, const QuadratureSettings& qs_in) {
  const BParameter& bp = p.bp;
  const double b = bp.b, Q = bp.Q;
  QuadratureSettings qs = qs_in;
  qs.decay_rate = 2.0 * pi * Q;

  // the invading sequence is the one anchored at -thinf - sigma_s
  const Complex invader = -p.thinf - p.sigma_s;

  // collect candidate member heights within the strip to steer the line
  std::vector<double> blocked;
  std::vector<std::pair<int, int>> below;  // lattice members that crossed the line
  const double hmin = -0.5 * Q, hmax = 0.0;
  for (int m = 0; m * b + invader.imag() < hmax + 2.0; ++m)
    for (int l = 0; invader.imag() + m * b + l / b < hmax + 2.0; ++l) {
      const double h = invader.imag() + m * b + l / b;
      if (h > hmin && h < hmax) blocked.push_back(h);
    }
  const double line = best_line_height(hmin, hmax, blocked);
  for (int m = 0; invader.imag() + m * b < line; ++m)
    for (int l = 0; invader.imag() + m * b + l / b < line; ++l) below.emplace_back(m, l);

  // remaining integral along the straight line
  auto f = [&](Complex x) { return std::exp(fusion_integrand_log(p, x)); };
  ContourPath path;
  path.left_height = path.right_height = line;
  double t0 = 1.0;
  auto [up, down] = fusion_pole_data(p);
  for (const auto& s : up) t0 = std::max(t0, std::abs(s.anchor.real()) + 1.0);
  for (const auto& s : down) t0 = std::max(t0, std::abs(s.anchor.real()) + 1.0);
  path.vertices = {Complex(-t0, line), Complex(t0, line)};
  const IntegralResult integral = integrate_along(f, path, qs);

  // residues of the crossed members: poles of 1/s_b(x + iQ/2 + thinf + sigma_s)
  std::vector<Complex> contributions;
  for (auto [m, l] : below) {
    const Complex x_pole = invader + iu * (m * b + l / b);
    Complex rest = 0.0;
    const Complex iQ2 = 0.5 * iu * Q;
    for (int e : {1, -1}) {
      rest += log_sb(x_pole + double(e) * p.th1, bp);
      rest += log_sb(x_pole + double(e) * p.th0 + p.thinf + p.tht, bp);
      rest -= log_sb(x_pole + iQ2 + p.tht + double(e) * p.sigma_t, bp);
    }
    rest -= log_sb(x_pole + iQ2 + p.thinf - p.sigma_s, bp);
    // Res 1/s_b at the lattice zero z_{m,l} is -sb_residue(m,l)
    contributions.push_back(2.0 * pi * iu * (-sb_residue(m, l, bp)) * std::exp(rest));
  }
  const Complex corrected = integral.value + residue_sum(contributions);
  const Complex pref = std::exp(fren_prefactor_log(p));
  return KernelValue{pref * corrected, std::abs(pref) * integral.err_estimate,
                     static_cast<int>(contributions.size())};
}

Complex aw_limit(int n, const FusionParams& p_in, const QuadratureSettings& qs) {
  if (p_in.bp.root_of_unity)
    throw AssumptionViolated("aw_limit: b^2 rational within tolerance");
  if (std::abs(p_in.sigma_t) < kIrrationalTol || std::abs(p_in.th0) < kIrrationalTol ||
      std::abs(p_in.th1) < kIrrationalTol)
    throw AssumptionViolated("aw_limit: degenerate sigma_t / theta parameters");
  const Complex target = fusion_sigma_s_n(p_in, n);
  // geometric /2 sequence; the leading eps-error is linear, Neville removes
  // the higher orders as well
  const std::vector<double> eps = {1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4};
  std::vector<Complex> vals;
  for (double e : eps) {
    FusionParams p = p_in;
    p.sigma_s = target + e;
    vals.push_back(fren_residue_corrected(p, qs).value);
  }
  for (size_t i = 0; i + 2 < vals.size(); ++i) {
    const double d1 = std::abs(vals[i + 1] - vals[i]);
    const double d2 = std::abs(vals[i + 2] - vals[i + 1]);
    if (d2 > 1.2 * d1 + 1e-12)
      throw ExtrapolationUnstable("aw_limit: deviations do not shrink along the eps sequence");
  }
  // Neville tableau evaluated at eps = 0
  std::vector<Complex> t = vals;
  for (size_t order = 1; order < t.size(); ++order)
    for (size_t i = 0; i + order < t.size(); ++i)
      t[i] = (eps[i + order] * t[i] - eps[i] * t[i + 1]) / (eps[i + order] - eps[i]);
  return t[0];
}

Complex aw_limit_closed0(const FusionParams& p_in) {
  FusionParams p = p_in;
  p.sigma_s = fusion_sigma_s_n(p_in, 0);
  const BParameter& bp = p.bp;
  const Complex iQ2 = 0.5 * iu * bp.Q;
  // P_1 with the vanishing factor s_b(sigma_s - th0 - tht) deleted
  Complex lp = log_sb(iQ2 + 2.0 * p.tht, bp) +
               log_sb(iQ2 + p.th0 + p.th1 + p.thinf + p.tht, bp) +
               log_sb(iQ2 + p.th0 + p.th1 - p.thinf + p.tht, bp);
  for (int e1 : {1, -1}) {
    lp += log_sb(double(e1) * p.sigma_t - p.th0 - p.thinf, bp);
    lp -= log_sb(double(e1) * p.sigma_s + p.th1 - p.thinf, bp);
  }
  lp += log_sb(p.sigma_s + p.th0 - p.tht, bp);
  lp += log_sb(-p.sigma_s + p.th0 - p.tht, bp);
  lp += log_sb(-p.sigma_s - p.th0 - p.tht, bp);
  // residue factor with the matching 1/s_b(-th0 - tht + sigma_s) deleted
  lp += log_sb(-2.0 * p.th0 - iQ2, bp);
  lp += log_sb(-p.th0 - p.th1 - p.thinf - p.tht - iQ2, bp);
  lp += log_sb(-p.th0 + p.th1 - p.thinf - p.tht - iQ2, bp);
  lp -= log_sb(-p.th0 - p.thinf - p.sigma_t, bp);
  lp -= log_sb(-p.th0 - p.thinf + p.sigma_t, bp);
  lp -= log_sb(-p.th0 - p.tht - p.sigma_s, bp);
  return std::exp(lp);
}

Complex aw_limit_second_term0(const FusionParams& p_in, const QuadratureSettings& qs_in) {
  FusionParams p = p_in;
  p.sigma_s = fusion_sigma_s_n(p_in, 0);
  const BParameter& bp = p.bp;
  // P_1 vanishes identically here: s_b(sigma_s - th0 - tht) = s_b(iQ/2) = 0
  const Complex zero_factor = sb(p.sigma_s - p.th0 - p.tht, bp).value;

  QuadratureSettings qs = qs_in;
  qs.decay_rate = 2.0 * pi * bp.Q;
  // line steered between the collided pole columns, as in the corrected route
  const Complex invader = -p.thinf - p.sigma_s;
  std::vector<double> blocked;
  for (int m = 0; invader.imag() + m * bp.b < 0.0; ++m)
    for (int l = 0; invader.imag() + m * bp.b + l / bp.b < 0.0; ++l) {
      const double h = invader.imag() + m * bp.b + l / bp.b;
      if (h > -0.5 * bp.Q) blocked.push_back(h);
    }
  ContourPath path;
  path.left_height = path.right_height = best_line_height(-0.5 * bp.Q, 0.0, blocked);
  auto f = [&](Complex x) { return std::exp(fusion_integrand_log(p, x)); };
  const IntegralResult integral = integrate_along(f, path, qs);

  Complex rest = log_sb(0.5 * iu * bp.Q + 2.0 * p.tht, bp) +
                 log_sb(0.5 * iu * bp.Q + p.th0 + p.th1 + p.thinf + p.tht, bp) +
                 log_sb(0.5 * iu * bp.Q + p.th0 + p.th1 - p.thinf + p.tht, bp);
  for (int e1 : {1, -1}) {
    rest += log_sb(double(e1) * p.sigma_t - p.th0 - p.thinf, bp);
    rest -= log_sb(double(e1) * p.sigma_s + p.th1 - p.thinf, bp);
  }
  rest += log_sb(p.sigma_s + p.th0 - p.tht, bp) + log_sb(-p.sigma_s + p.th0 - p.tht, bp) +
          log_sb(-p.sigma_s - p.th0 - p.tht, bp);
  return zero_factor * std::exp(rest) * integral.value;
}

}  // namespace cvk
