#include "cvk/sb_kernel.hpp"

#include <algorithm>
#include <cmath>

namespace cvk {

namespace {

double routing_clearance(const BParameter& bp) { return 0.05 * std::min(1.0, bp.min_step()); }

double anchor_reach(const SbIntegrandSpec& spec) {
  double t0 = 1.0;
  for (Complex n : spec.numer) t0 = std::max(t0, std::abs(n.real()) + 1.0);
  for (Complex d : spec.denom) t0 = std::max(t0, std::abs(d.real()) + 1.0);
  return t0;
}

// Far-tail exponents: ln|I(x)| ~ Re[c_plus x] as Re x -> +inf and
// Re[c_minus x] as Re x -> -inf. The quadratic terms of ln s_b cancel because
// the numerator and denominator have equally many factors.
std::pair<Complex, Complex> tail_exponents(const SbIntegrandSpec& spec) {
  Complex sum_n = 0.0, sum_d = 0.0;
  for (Complex n : spec.numer) sum_n += n;
  for (Complex d : spec.denom) sum_d += d;
  const Complex a = iu * pi * (sum_d - sum_n);
  return {spec.linear + a, spec.linear - a};
}

struct Tail {
  Complex direction;  // unit vector along which the tail recedes
  double rate;        // decay rate of ln|I| along the tail
};

constexpr double kTiltAngles[] = {0.0, 0.25, -0.25, 0.5,  -0.5, 0.8,
                                  -0.8, 1.1,  -1.1,  1.35, -1.35};

// best tail direction among moderate tilts; side = +1 (right) or -1 (left)
Tail pick_tail(Complex c, int side) {
  Tail best{Complex(side, 0), 0.0};
  for (double phi : kTiltAngles) {
    const Complex d(side * std::cos(phi), -std::sin(phi));
    const double rate = -(c * d).real();
    if (rate > best.rate) best = Tail{d, rate};
  }
  if (best.rate <= 0)
    throw NoConvergence("sb_kernel: integrand grows along every admissible tail direction");
  // keep the horizontal tail when it is already competitive
  const double horiz = -(c * Complex(side, 0)).real();
  if (horiz >= 0.7 * best.rate) return Tail{Complex(side, 0), horiz};
  return best;
}

// residue of the integrand at the (m, l) member of the upward sequence coming
// from 1/s_b(x + denom[j])
Complex member_residue(const SbIntegrandSpec& spec, const BParameter& bp, size_t j, int m, int l) {
  const Complex x_pole = 0.5 * iu * bp.Q - spec.denom[j] + iu * (m * bp.b + double(l) / bp.b);
  Complex lg = spec.linear * x_pole;
  for (Complex n : spec.numer) lg += log_sb(x_pole + n, bp);
  for (size_t jj = 0; jj < spec.denom.size(); ++jj)
    if (jj != j) lg -= log_sb(x_pole + spec.denom[jj], bp);
  // 1/s_b contributes 1/s_b'(zero) = -Res_{p_{m,l}} s_b
  return -sb_residue(m, l, bp) * std::exp(lg);
}

SbKernelResult integrate_over(const SbIntegrandSpec& spec, const BParameter& bp,
                              const QuadratureSettings& qs, std::vector<Complex> middle,
                              int residue_terms) {
  auto f = [&](Complex x) { return std::exp(sb_kernel_integrand_log(spec, bp, x)); };
  const auto [c_plus, c_minus] = tail_exponents(spec);
  const Tail right = pick_tail(c_plus, +1);
  const Tail left = pick_tail(c_minus, -1);
  const double budget = std::max(5.0, -std::log(qs.truncation_margin * qs.abs_tol));
  std::vector<Complex> pts;
  pts.push_back(middle.front() + left.direction * (budget / left.rate + 2.0));
  for (Complex v : middle) pts.push_back(v);
  pts.push_back(middle.back() + right.direction * (budget / right.rate + 2.0));
  const IntegralResult r = integrate_chain(f, pts, qs);
  const double tail_err =
      std::abs(f(pts.front())) / left.rate + std::abs(f(pts.back())) / right.rate;
  return SbKernelResult{r.value, r.err_estimate + tail_err, residue_terms};
}

}  // namespace

std::pair<Complex, Complex> sb_kernel_tail_exponents(const SbIntegrandSpec& spec) {
  return tail_exponents(spec);
}

double sb_kernel_tail_rate(Complex c, int side) {
  double best = 0.0;
  for (double phi : kTiltAngles) {
    const Complex d(side * std::cos(phi), -std::sin(phi));
    best = std::max(best, -(c * d).real());
  }
  return best;
}

Complex sb_kernel_integrand_log(const SbIntegrandSpec& spec, const BParameter& bp, Complex x) {
  Complex lg = spec.linear * x;
  for (Complex n : spec.numer) lg += log_sb(x + n, bp);
  for (Complex d : spec.denom) lg -= log_sb(x + d, bp);
  return lg;
}

std::pair<std::vector<PoleSequence>, std::vector<PoleSequence>> sb_kernel_poles(
    const SbIntegrandSpec& spec, const BParameter& bp) {
  std::vector<PoleSequence> up, down;
  const double b = bp.b, binv = 1.0 / b;
  const Complex iQ2 = 0.5 * iu * bp.Q;
  using O = PoleSequence::Orientation;
  for (Complex d : spec.denom) up.push_back({iQ2 - d, O::upward, b, binv, "denom zero"});
  for (Complex n : spec.numer) down.push_back({-iQ2 - n, O::downward, b, binv, "numer pole"});
  return {up, down};
}

SbKernelResult integrate_sb_kernel(const SbIntegrandSpec& spec, const BParameter& bp,
                                   const QuadratureSettings& qs_in, double decay_rate) {
  auto [up, down] = sb_kernel_poles(spec, bp);
  QuadratureSettings qs = qs_in;
  qs.decay_rate = decay_rate;
  const double reach = anchor_reach(spec);

  double clearance = routing_clearance(bp);
  for (int attempt = 0; attempt < 3; ++attempt, clearance *= 0.5) {
    try {
      ContourPath path = route_contour(up, down, {-0.5 * bp.Q, 0.0}, clearance);
      std::vector<Complex> middle;
      middle.emplace_back(-reach, path.left_height);
      for (Complex v : path.vertices) middle.push_back(v);
      middle.emplace_back(reach, path.right_height);
      return integrate_over(spec, bp, qs, middle, 0);
    } catch (const ContourBlocked&) {
      continue;
    }
  }

  // No separating contour: evaluate the continuation along a straight line
  // above every numerator pole and extract the denominator zeros it abandons.
  double down_top = -0.5 * bp.Q;
  for (const auto& s : down) down_top = std::max(down_top, s.anchor.imag());
  const double c = routing_clearance(bp);
  const double band_lo = down_top + 0.5 * c;
  const double band_hi = down_top + bp.min_step() + 4.0 * c;
  std::vector<double> blocked;
  for (const auto& s : up)
    for (int m = 0; s.anchor.imag() + m * bp.b <= band_hi + 1.0; ++m)
      for (int l = 0; s.anchor.imag() + m * bp.b + l / bp.b <= band_hi + 1.0; ++l) {
        const double h = s.member(m, l).imag();
        if (h >= band_lo - 1.0 && h <= band_hi + 1.0) blocked.push_back(h);
      }
  blocked.push_back(band_lo);
  blocked.push_back(band_hi);
  std::sort(blocked.begin(), blocked.end());
  double line = 0.5 * (band_lo + band_hi), gap = -1.0;
  for (size_t i = 0; i + 1 < blocked.size(); ++i) {
    const double a = std::max(band_lo, blocked[i]), bb = std::min(band_hi, blocked[i + 1]);
    if (bb - a > gap) {
      gap = bb - a;
      line = 0.5 * (a + bb);
    }
  }

  std::vector<Complex> corrections;
  for (size_t j = 0; j < spec.denom.size(); ++j) {
    const Complex anchor = 0.5 * iu * bp.Q - spec.denom[j];
    for (int m = 0; anchor.imag() + m * bp.b < line; ++m)
      for (int l = 0; anchor.imag() + m * bp.b + double(l) / bp.b < line; ++l)
        corrections.push_back(2.0 * pi * iu * member_residue(spec, bp, j, m, l));
  }

  SbKernelResult r = integrate_over(spec, bp, qs,
                                    {Complex(-reach, line), Complex(reach, line)},
                                    static_cast<int>(corrections.size()));
  r.integral += residue_sum(corrections);
  return r;
}

}  // namespace cvk
