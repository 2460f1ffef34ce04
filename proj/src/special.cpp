#include "cvk/special.hpp"

#include <cmath>

#include "cvk/gamma.hpp"
#include "cvk/numerics.hpp"
#include "cvk/qseries.hpp"

namespace cvk {

namespace {

constexpr double kLatticeTol = 1e-10;
constexpr double kEnvelopeCut = 41.45;  // ln(1e18)

const QuadratureSettings kDefiningIntegral{1e-13, 1e-15, 2500, 1.0, 1e-2};

double sq(double x) { return x * x; }

// b^{2k} + b^{-2k} and b^{2k+1} + b^{-(2k+1)}, small k
struct SymmetricPowers {
  double E2, E4, E6, E8, E10;  // even
  double O1, O3, O5, O7;       // odd
  explicit SymmetricPowers(double b) {
    const double B = b * b, Bi = 1.0 / B;
    E2 = B + Bi;
    E4 = E2 * E2 - 2.0;
    E6 = E2 * E4 - E2;
    E8 = E2 * E6 - E4;
    E10 = E2 * E8 - E6;
    O1 = b + 1.0 / b;
    O3 = E2 * O1 - O1;
    O5 = E2 * O3 - O1;
    O7 = E2 * O5 - O3;
  }
};

// Taylor polynomial of [sin(2yz)/(2 sinh(y/b) sinh(by)) - z/y]/y about y = 0,
// integrated exactly over [0, y0]. Even series, coefficients through y^8.
Complex sb_series_integral(Complex z, const BParameter& bp, double y0) {
  const SymmetricPowers P(bp.b);
  const Complex z2 = z * z, z4 = z2 * z2, z6 = z4 * z2, z8 = z4 * z4, z10 = z8 * z2;
  const Complex c0 = -z * (P.E2 + 4.0 * z2) / 6.0;
  const Complex c2 = z * (7.0 * P.E4 + 40.0 * z2 * P.E2 + 48.0 * z4 + 10.0) / 360.0;
  const Complex c4 = -z *
                     (31.0 * P.E6 + 196.0 * z2 * P.E4 + (336.0 * z4 + 49.0) * P.E2 + 192.0 * z6 +
                      280.0 * z2) /
                     15120.0;
  const Complex c6 = z *
                     (381.0 * P.E8 + 2480.0 * z2 * P.E6 + (4704.0 * z4 + 620.0) * P.E4 +
                      (3840.0 * z6 + 3920.0 * z2) * P.E2 + 1280.0 * z8 + 6720.0 * z4 + 686.0) /
                     1814400.0;
  const Complex c8 = -z *
                     (2555.0 * P.E10 + 16764.0 * z2 * P.E8 + (32736.0 * z4 + 4191.0) * P.E6 +
                      (29568.0 * z6 + 27280.0 * z2) * P.E4 +
                      (14080.0 * z8 + 51744.0 * z4 + 4774.0) * P.E2 + 3072.0 * z10 +
                      42240.0 * z6 + 30184.0 * z2) /
                     119750400.0;
  const double y2 = y0 * y0;
  // int_0^{y0} sum c_k y^k dy with k even
  return y0 * (c0 + y2 * (c2 / 3.0 + y2 * (c4 / 5.0 + y2 * (c6 / 7.0 + y2 * c8 / 9.0))));
}

// Same for the g_b bracket [(e^{2izt}-1)/(4 sinh(bt) sinh(t/b))
//                           + z^2/4 (e^{-2bt}+e^{-2t/b}) - iz/(2t)]/t.
Complex gb_series_integral(Complex z, const BParameter& bp, double t0) {
  const SymmetricPowers P(bp.b);
  const Complex z2 = z * z, z3 = z2 * z, z4 = z2 * z2, z6 = z4 * z2, z8 = z4 * z4;
  const Complex d0 = -(iu * z * P.E2 + 6.0 * z2 * P.O1 + 4.0 * iu * z3) / 12.0;
  const Complex d1 = z2 * (7.0 * P.E2 + 2.0 * z2) / 12.0;
  const Complex d2 = iu * z *
                     (7.0 * P.E4 + 240.0 * iu * z * P.O3 + 40.0 * z2 * P.E2 + 48.0 * z4 + 10.0) /
                     720.0;
  const Complex d3 = z2 * (113.0 * P.E4 - 20.0 * z2 * P.E2 - 16.0 * z4 - 10.0) / 720.0;
  const Complex d4 = -iu * z *
                     (31.0 * P.E6 - 2016.0 * iu * z * P.O5 + 196.0 * z2 * P.E4 +
                      (336.0 * z4 + 49.0) * P.E2 + 192.0 * z6 + 280.0 * z2) /
                     30240.0;
  const Complex d5 = z2 *
                     (703.0 * P.E6 + 98.0 * z2 * P.E4 + (112.0 * z4 + 49.0) * P.E2 + 48.0 * z6 +
                      140.0 * z2) /
                     30240.0;
  const Complex d6 = iu * z *
                     (381.0 * P.E8 + 23040.0 * iu * z * P.O7 + 2480.0 * z2 * P.E6 +
                      (4704.0 * z4 + 620.0) * P.E4 + (3840.0 * z6 + 3920.0 * z2) * P.E2 +
                      1280.0 * z8 + 6720.0 * z4 + 686.0) /
                     3628800.0;
  Complex acc = 0.0;
  const Complex d[7] = {d0, d1, d2, d3, d4, d5, d6};
  double tp = t0;
  for (int k = 0; k < 7; ++k) {
    acc += d[k] * tp / (k + 1.0);
    tp *= t0;
  }
  return acc;
}

// i * integral in the exponent of (the s_b defining representation)
Complex sb_defining_log(Complex z, const BParameter& bp) {
  if (std::abs(z) == 0.0) return 0.0;
  const double b = bp.b;
  const double y0 = std::min(0.05 * bp.min_step(), 0.16 / std::max(1.0, std::abs(z)));
  const double rate = bp.Q - 2.0 * std::abs(z.imag());
  if (rate <= 0) throw DomainError("sb_integral: |Im z| >= Q/2");
  const double cut = std::max(2.0 * y0, kEnvelopeCut / rate);

  const Complex series = sb_series_integral(z, bp, y0);
  auto f = [&](Complex y) {
    const double yr = y.real();
    return (std::sin(2.0 * yr * z) / (2.0 * std::sinh(yr / b) * std::sinh(b * yr)) - z / yr) / yr;
  };
  const IntegralResult quad = integrate_segment(f, y0, cut, kDefiningIntegral);
  return iu * (series + quad.value - z / cut);
}

Complex gb_defining_log(Complex z, const BParameter& bp) {
  if (std::abs(z) == 0.0) return 0.0;
  const double b = bp.b;
  const double t0 = std::min(0.05 * bp.min_step(), 0.16 / std::max(1.0, std::abs(z)));
  const double rate = std::min(bp.Q + 2.0 * z.imag(), 2.0 * bp.min_step());
  if (rate <= 0) throw DomainError("gb_integral: Im z <= -Q/2");
  const double cut = std::max(2.0 * t0, kEnvelopeCut / rate);

  const Complex series = gb_series_integral(z, bp, t0);
  const Complex z2 = z * z;
  auto f = [&](Complex t) {
    const double tr = t.real();
    return ((std::exp(2.0 * iu * z * tr) - 1.0) / (4.0 * std::sinh(b * tr) * std::sinh(tr / b)) +
            0.25 * z2 * (std::exp(-2.0 * b * tr) + std::exp(-2.0 * tr / b)) - iu * z / (2.0 * tr)) /
           tr;
  };
  const IntegralResult quad = integrate_segment(f, t0, cut, kDefiningIntegral);
  return series + quad.value - iu * z / (2.0 * cut);
}

// count lattice representations Im w = Q/2 + m b + l/b (w expected near iR+)
int lattice_multiplicity(Complex z, const BParameter& bp) {
  if (std::abs(z.real()) > kLatticeTol) return 0;
  const double h = z.imag() - 0.5 * bp.Q;
  if (h < -kLatticeTol) return 0;
  int count = 0;
  const double linv = 1.0 / bp.b;
  for (int l = 0; l * linv <= h + kLatticeTol; ++l) {
    const double rem = h - l * linv;
    const int m = static_cast<int>(std::lround(rem / bp.b));
    if (m >= 0 && std::abs(rem - m * bp.b) < kLatticeTol) ++count;
  }
  return count;
}

}  // namespace

BParameter::BParameter(double b_) : b(b_) {
  if (!(b > 0)) throw DomainError("BParameter: b must be positive");
  Q = b + 1.0 / b;
  c = 1.0 + 6.0 * Q * Q;
  q = std::exp(2.0 * iu * pi * b * b);
  q_tilde = std::exp(2.0 * iu * pi / (b * b));
  for (int m = 1; m <= 64; ++m) {
    if (std::abs(std::pow(q, m) - 1.0) < 1e-12) {
      root_of_unity = true;
      break;
    }
  }
}

int sb_zero_multiplicity(Complex z, const BParameter& bp) { return lattice_multiplicity(z, bp); }

int sb_pole_multiplicity(Complex z, const BParameter& bp) { return lattice_multiplicity(-z, bp); }

Complex sb_integral(Complex z, const BParameter& bp) {
  if (!(std::abs(z.imag()) < 0.5 * bp.Q)) throw DomainError("sb_integral: outside |Im z| < Q/2");
  return std::exp(sb_defining_log(z, bp));
}

Complex gb_integral(Complex z, const BParameter& bp) {
  if (!(z.imag() > -0.5 * bp.Q)) throw DomainError("gb_integral: outside Im z > -Q/2");
  return std::exp(gb_defining_log(z, bp));
}

double sb_asymptotic_threshold(const BParameter& bp) { return 4.0 * bp.max_step() + 2.0; }

Complex sb_asymptotic(Complex z, const BParameter& bp, int direction) {
  const Complex core = -iu * pi * z * z / 2.0 - iu * pi * (sq(bp.b) + 1.0 / sq(bp.b)) / 24.0;
  return direction >= 0 ? core : -core;
}

Complex log_sb(Complex z, const BParameter& bp) {
  if (sb_zero_multiplicity(z, bp) > 0 || sb_pole_multiplicity(z, bp) > 0)
    throw SingularPoint("log_sb: argument on the zero/pole lattice");

  // continuation toward the reduced strip, ib steps first, then i/b
  const double half = 0.5 * bp.min_step();
  Complex shift = 0.0;
  Complex w = z;
  for (double step : {bp.b, 1.0 / bp.b}) {
    while (w.imag() > half + 1e-14 && w.imag() - step >= -half - 1e-14) {
      shift += log_2cosh(pi * step * (w - 0.5 * iu * step));
      w -= iu * step;
    }
    while (w.imag() < -half - 1e-14 && w.imag() + step <= half + 1e-14) {
      shift -= log_2cosh(pi * step * (w + 0.5 * iu * step));
      w += iu * step;
    }
  }
  // mop up with the small step (always lands inside [-s/2, s/2])
  const double s = bp.min_step();
  while (w.imag() > half + 1e-14) {
    shift += log_2cosh(pi * s * (w - 0.5 * iu * s));
    w -= iu * s;
  }
  while (w.imag() < -half - 1e-14) {
    shift -= log_2cosh(pi * s * (w + 0.5 * iu * s));
    w += iu * s;
  }

  if (std::abs(w.real()) >= sb_asymptotic_threshold(bp))
    return shift + sb_asymptotic(w, bp, w.real() >= 0 ? 1 : -1);
  return shift + sb_defining_log(w, bp);
}

Complex log_gb(Complex z, const BParameter& bp) {
  if (sb_pole_multiplicity(z, bp) > 0) throw SingularPoint("log_gb: argument on the pole lattice");
  const double half = 0.5 * bp.min_step();
  const double ln_sqrt_2pi = 0.5 * std::log(2.0 * pi);
  Complex shift = 0.0;
  Complex w = z;
  for (double step : {bp.b, 1.0 / bp.b}) {
    while (w.imag() < -half - 1e-14 && w.imag() + step <= half + 1e-14) {
      shift += log_gamma(0.5 + 0.5 * step * step - iu * step * w) +
               (iu * step * w - 0.5 * step * step) * std::log(step) - ln_sqrt_2pi;
      w += iu * step;
    }
  }
  const double s = bp.min_step();
  while (w.imag() < -half - 1e-14) {
    shift += log_gamma(0.5 + 0.5 * s * s - iu * s * w) + (iu * s * w - 0.5 * s * s) * std::log(s) -
             ln_sqrt_2pi;
    w += iu * s;
  }
  return shift + gb_defining_log(w, bp);
}

SpecialValue sb(Complex z, const BParameter& bp) {
  const int zeros = sb_zero_multiplicity(z, bp);
  if (zeros > 0) return SpecialValue{SpecialValue::Kind::finite, 0.0, 0};
  const int poles = sb_pole_multiplicity(z, bp);
  if (poles > 0) return SpecialValue{SpecialValue::Kind::pole, 0.0, poles};
  return SpecialValue{SpecialValue::Kind::finite, std::exp(log_sb(z, bp)), 0};
}

SpecialValue gb(Complex z, const BParameter& bp) {
  const int poles = sb_pole_multiplicity(z, bp);
  if (poles > 0) return SpecialValue{SpecialValue::Kind::pole, 0.0, poles};
  return SpecialValue{SpecialValue::Kind::finite, std::exp(log_gb(z, bp)), 0};
}

Complex sb_value(Complex z, const BParameter& bp) {
  const SpecialValue v = sb(z, bp);
  if (v.is_pole()) throw SingularPoint("sb_value: pole hit");
  return v.value;
}

Complex gb_value(Complex z, const BParameter& bp) {
  const SpecialValue v = gb(z, bp);
  if (v.is_pole()) throw SingularPoint("gb_value: pole hit");
  return v.value;
}

Complex sb_shift(Complex x, int m, int l, const BParameter& bp) {
  const double b = bp.b;
  // ratio for a pure step of size `step` applied `n >= 0` times upward from base
  auto up = [&](Complex base, double step, int n) {
    const Complex qq = std::exp(-2.0 * iu * pi * step * step);
    return std::exp(iu * (double(n) * n * pi * step * step / 2.0) + pi * step * double(n) * base) *
           qpoch(-std::exp(-iu * pi * step * step) * std::exp(-2.0 * pi * step * base), qq, n);
  };
  Complex ratio = 1.0;
  Complex base = x;
  if (m >= 0) {
    ratio *= up(base, b, m);
  } else {
    ratio /= up(base + iu * (double(m) * b), b, -m);
  }
  base += iu * (double(m) * b);
  if (l >= 0) {
    ratio *= up(base, 1.0 / b, l);
  } else {
    ratio /= up(base + iu * (double(l) / b), 1.0 / b, -l);
  }
  return ratio;
}

Complex sb_residue(int m, int l, const BParameter& bp) {
  if (m < 0 || l < 0) throw DomainError("sb_residue: m, l must be >= 0");
  if (bp.root_of_unity)
    throw MultiplePole("sb_residue: b^2 rational within tolerance, poles not simple");
  const Complex p = -iu * (0.5 * bp.Q + m * bp.b + l / bp.b);
  // transport Res_{-iQ/2} s_b = i/(2 pi) down the lattice
  return (iu / (2.0 * pi)) / sb_shift(p, m, l, bp);
}

}  // namespace cvk
