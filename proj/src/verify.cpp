#include "cvk/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "cvk/confluent.hpp"
#include "cvk/fusion.hpp"
#include "cvk/gamma.hpp"
#include "cvk/qaskey.hpp"
#include "cvk/qseries.hpp"
#include "cvk/special.hpp"

namespace cvk {

namespace {

uint64_t fnv1a(const std::string& s, uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  double theta() { return uniform(-0.8, 0.8); }
  double sig() { return uniform(0.1, 0.8); }
  double draw_b() {
    const double bs[3] = {0.5 + std::sqrt(2.0) / 10.0, 0.7, 1.3};
    return bs[std::uniform_int_distribution<int>(0, 2)(gen)];
  }
  Complex box(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi)}; }
  Complex unit_phase() {
    const double t = uniform(0.0, 2.0 * pi);
    return {std::cos(t), std::sin(t)};
  }
  Complex off_root_q() {
    const double t = uniform(0.05, 0.45) * (uniform(0, 1) < 0.5 ? 1.0 : -1.0);
    return std::exp(2.0 * iu * pi * Complex(t, 0.0));
  }
};

double rel(Complex got, Complex want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// ---------------------------------------------------------------------------
// shared evaluation context (memoized heavy tables)
// ---------------------------------------------------------------------------

struct FusionEigenTable {
  double diff1 = 0, diff2 = 0, hren = 0;  // worst residuals per family
};

struct Context {
  const SuiteConfig& config;
  std::once_flag fusion_once;
  FusionEigenTable fusion_table;

  explicit Context(const SuiteConfig& c) : config(c) {}
};

FusionParams draw_fusion_point(Rng& rng, double b) {
  for (int tries = 0; tries < 100; ++tries) {
    FusionParams p{BParameter(b),        rng.theta(),          rng.theta(), rng.theta(),
                   rng.theta(),          Complex(rng.sig(), 0), Complex(rng.sig(), 0)};
    try {
      check_fusion_assumptions(p);
      return p;
    } catch (const AssumptionViolated&) {
      continue;
    }
  }
  throw ConfigInvalid("could not draw a non-degenerate fusion point");
}

FusionEigenTable compute_fusion_eigen_table(const SuiteConfig& cfg) {
  Rng rng(cfg.seed ^ fnv1a("fusion.eigen-table"));
  QuadratureSettings qs = cfg.quadrature;
  qs.abs_tol = 1e-16;  // the shared integrals are rel-tolerance driven
  FusionEigenTable table;
  for (double b : {0.7, 1.3}) {
    for (int pt = 0; pt < cfg.points; ++pt) {
      const FusionParams p = draw_fusion_point(rng, b);
      // contour integrals at the nine parameter configurations, memoized so F
      // and F_ren share them
      std::map<std::pair<std::pair<double, double>, std::pair<double, double>>, Complex> cache;
      auto integral = [&](Complex ss, Complex st) {
        const auto key = std::make_pair(std::make_pair(ss.real(), ss.imag()),
                                        std::make_pair(st.real(), st.imag()));
        const auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        FusionParams q = p;
        q.sigma_s = ss;
        q.sigma_t = st;
        const Complex v = fusion_integral_only(q, qs).value;
        cache.emplace(key, v);
        return v;
      };
      auto F = [&](Complex ss, Complex st) {
        FusionParams q = p;
        q.sigma_s = ss;
        q.sigma_t = st;
        return std::exp(fusion_prefactor_log(q)) * integral(ss, st);
      };
      auto Fren = [&](Complex ss, Complex st) {
        FusionParams q = p;
        q.sigma_s = ss;
        q.sigma_t = st;
        return std::exp(fren_prefactor_log(q)) * integral(ss, st);
      };
      const Complex ss = p.sigma_s, st = p.sigma_t;
      for (double step : {b, 1.0 / b}) {
        const Complex is = iu * step;
        // (difference1): H_F in sigma_s
        {
          const ThreeTermOperator op = build_fusion_operator(FusionOp::HF, p, step);
          const Complex lhs = op.plus(ss) * F(ss + is, st) + op.zero(ss) * F(ss, st) +
                              op.minus(ss) * F(ss - is, st);
          const Complex rhs = 2.0 * std::cosh(2.0 * pi * step * st) * F(ss, st);
          table.diff1 = std::max(table.diff1, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        // (difference2): dual operator in sigma_t
        {
          const ThreeTermOperator op = build_fusion_operator(FusionOp::HFDual, p, step);
          const Complex lhs = op.plus(st) * F(ss, st + is) + op.zero(st) * F(ss, st) +
                              op.minus(st) * F(ss, st - is);
          const Complex rhs = 2.0 * std::cosh(2.0 * pi * step * ss) * F(ss, st);
          table.diff2 = std::max(table.diff2, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        // (hreneq): renormalized operator in sigma_s and in sigma_t
        {
          const ThreeTermOperator op = build_fusion_operator(FusionOp::HRen, p, step);
          const Complex lhs = op.plus(ss) * Fren(ss + is, st) + op.zero(ss) * Fren(ss, st) +
                              op.minus(ss) * Fren(ss - is, st);
          const Complex rhs = 2.0 * std::cosh(2.0 * pi * step * st) * Fren(ss, st);
          table.hren = std::max(table.hren, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
          const ThreeTermOperator opd = build_fusion_operator(FusionOp::HRenDual, p, step);
          const Complex lhsd = opd.plus(st) * Fren(ss, st + is) + opd.zero(st) * Fren(ss, st) +
                               opd.minus(st) * Fren(ss, st - is);
          const Complex rhsd = 2.0 * std::cosh(2.0 * pi * step * ss) * Fren(ss, st);
          table.hren =
              std::max(table.hren, std::abs(lhsd - rhsd) / std::max(1.0, std::abs(rhsd)));
        }
      }
    }
  }
  return table;
}

const FusionEigenTable& fusion_table(Context& ctx) {
  std::call_once(ctx.fusion_once, [&] { ctx.fusion_table = compute_fusion_eigen_table(ctx.config); });
  return ctx.fusion_table;
}

ConfluentParams draw_confluent_point(Rng& rng, double b, int k, bool for_eigen = false) {
  for (int tries = 0; tries < 200; ++tries) {
    ConfluentParams p{BParameter(b),        rng.theta(),          rng.theta(), rng.theta(),
                      Complex(rng.sig(), 0), Complex(rng.sig(), 0), k};
    try {
      check_confluent_assumptions(p);
    } catch (const AssumptionViolated&) {
      continue;
    }
    // eigen checks continue the kernel in nu and sigma_s; stay clear of the
    // Stokes walls of the continuation and of draws whose coefficient
    // amplification pushes the attainable residual above the tolerance
    if (for_eigen && (ck_eigen_tail_margin(p) < 0.9 || ck_eigen_condition(p) > 2e3)) continue;
    return p;
  }
  throw ConfigInvalid("could not draw a non-degenerate confluent point");
}

ConfluentParams golden_confluent(int k) {
  return ConfluentParams{BParameter(0.7), 0.3, -0.2, 0.4, Complex(0.25, 0), Complex(0.35, 0), k};
}

// The polynomial-limit tables are compared at 1e-11..1e-10; the q-Pochhammer
// sums grow like (mapped modulus)^n, so the draw keeps the mapped parameters
// within a band where n = 6 sums stay below ~1e5 and double precision can
// deliver the tolerance.
ConfluentParams draw_polynomial_limit_point(Rng& rng, int k) {
  for (int tries = 0; tries < 5000; ++tries) {
    ConfluentParams p{BParameter(0.7),      rng.theta(),           rng.theta(), rng.theta(),
                      Complex(rng.sig(), 0), Complex(rng.sig(), 0), k};
    try {
      check_confluent_assumptions(p);
    } catch (const AssumptionViolated&) {
      continue;
    }
    const HahnMap hm = map_confluent_to_hahn(p);
    const JacobiMap jm = map_confluent_to_jacobi(p);
    double kappa = std::abs(2.0 * pi * p.bp.b * p.sigma_s.real());
    for (Complex v : {hm.alpha, hm.beta, hm.gamma, jm.alpha, jm.beta, jm.gamma, jm.x})
      kappa = std::max(kappa, std::abs(std::log(std::abs(v))));
    if (kappa > 1.8) continue;
    return p;
  }
  throw ConfigInvalid("could not draw a well-conditioned polynomial-limit point");
}

FusionParams golden_fusion() {
  return FusionParams{BParameter(0.7), 0.3, -0.2, 0.5, 0.1, Complex(0.4, 0), Complex(0.6, 0)};
}

// ---------------------------------------------------------------------------
// check registry
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  std::string anchor;
  double tol;
  Suite suite;
  std::function<double(Context&, Rng&)> run;
};

std::vector<Check> build_registry() {
  std::vector<Check> reg;
  auto add = [&](Suite s, std::string name, std::string anchor, double tol,
                 std::function<double(Context&, Rng&)> fn) {
    reg.push_back(Check{std::move(name), std::move(anchor), tol, s, std::move(fn)});
  };

  // ----- special ------------------------------------------------------------
  add(Suite::special, "special.sb_inversion", "s_b(z) s_b(-z) = 1", 1e-10,
      [](Context&, Rng& rng) {
        double worst = 0;
        const BParameter bp(rng.draw_b());
        for (int i = 0; i < 200; ++i) {
          const Complex z = rng.box(-2.5, 2.5);
          if (sb_zero_multiplicity(z, bp) || sb_pole_multiplicity(z, bp)) continue;
          worst = std::max(worst, std::abs(sb_value(z, bp) * sb_value(-z, bp) - 1.0));
        }
        return worst;
      });
  add(Suite::special, "special.sb_modular", "s_b = s_{1/b}", 1e-10, [](Context&, Rng& rng) {
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
      const BParameter bp(rng.draw_b()), bq(1.0 / bp.b);
      const Complex z = rng.box(-2.0, 2.0);
      if (sb_zero_multiplicity(z, bp) || sb_pole_multiplicity(z, bp)) continue;
      worst = std::max(worst, rel(sb_value(z, bp), sb_value(z, bq)));
    }
    return worst;
  });
  add(Suite::special, "special.sb_unitarity", "|s_b| = 1 on the real line", 1e-12,
      [](Context&, Rng& rng) {
        double worst = 0;
        const BParameter bp(rng.draw_b());
        for (int i = 0; i < 200; ++i)
          worst = std::max(
              worst, std::abs(std::abs(sb_value(Complex(rng.uniform(-3, 3), 0), bp)) - 1.0));
        return worst;
      });
  add(Suite::special, "special.sb_shift_equation", "s_b(z+ib/2) = 2cosh(pi b z) s_b(z-ib/2)",
      1e-10, [](Context&, Rng& rng) {
        double worst = 0;
        for (int i = 0; i < 200; ++i) {
          const BParameter bp(rng.draw_b());
          const Complex z = rng.box(-1.5, 1.5);
          for (double step : {bp.b, 1.0 / bp.b}) {
            const Complex lhs =
                sb_value(z + 0.5 * iu * step, bp) / sb_value(z - 0.5 * iu * step, bp);
            worst = std::max(worst, rel(lhs, 2.0 * std::cosh(pi * step * z)));
          }
        }
        return worst;
      });
  add(Suite::special, "special.gb_shift_equation", "g_b shift carries the Gamma factor", 1e-10,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int i = 0; i < 200; ++i) {
          const BParameter bp(rng.draw_b());
          const Complex z = rng.box(-1.2, 1.2);
          for (double step : {bp.b, 1.0 / bp.b}) {
            const Complex lhs =
                gb_value(z + 0.5 * iu * step, bp) / gb_value(z - 0.5 * iu * step, bp);
            const Complex rhs = std::pow(step, -iu * step * z) * std::sqrt(2.0 * pi) /
                                std::exp(log_gamma(0.5 - iu * step * z));
            worst = std::max(worst, rel(lhs, rhs));
          }
        }
        return worst;
      });
  add(Suite::special, "special.gb_nonvanishing", "g_b has no zeros", 0.5, [](Context&, Rng& rng) {
    const BParameter bp(rng.draw_b());
    double min_abs = 1e300;
    for (int i = 0; i < 200; ++i) {
      const Complex z = rng.box(-2, 2);
      if (sb_pole_multiplicity(z, bp)) continue;
      min_abs = std::min(min_abs, std::abs(gb_value(z, bp)));
    }
    return min_abs > 1e-8 ? 0.0 : 1.0;
  });
  add(Suite::special, "special.sb_gb_relation", "s_b(z) = g_b(z)/g_b(-z)", 1e-10,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int i = 0; i < 50; ++i) {
          const BParameter bp(rng.draw_b());
          const Complex z(rng.uniform(-1, 1), rng.uniform(-0.3, 0.3));
          worst = std::max(worst, rel(gb_value(z, bp) / gb_value(-z, bp), sb_value(z, bp)));
        }
        return worst;
      });
  add(Suite::special, "special.sb_asymptotics", "quadratic asymptotics of ln s_b", 1.0,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (double b : {0.5 + std::sqrt(2.0) / 10.0, 0.7, 1.3}) {
          const BParameter bp(b);
          for (int dir : {1, -1}) {
            const Complex z(dir * 8.0, rng.uniform(-0.4, 0.4));
            const Complex pred = sb_asymptotic(z, bp, dir);
            const double bound = std::exp(-2.0 * pi * 0.9 * 8.0 / bp.max_step());
            const double err = std::abs(std::log(sb_value(z, bp) / std::exp(pred)));
            worst = std::max(worst, err / (bound + 1e-13));
          }
        }
        return worst;
      });
  add(Suite::special, "special.sb_residue_lattice", "residues transported down the pole lattice",
      1e-9, [](Context&, Rng& rng) {
        const BParameter bp(rng.gen() % 2 ? 0.7 : 1.3);
        auto contour = [&](int m, int l) {
          const Complex center = -iu * (0.5 * bp.Q + m * bp.b + l / bp.b);
          Complex acc = 0.0;
          for (int j = 0; j < 64; ++j) {
            const double t = 2.0 * pi * j / 64;
            const Complex dir = std::exp(iu * t);
            acc += sb_value(center + 1e-2 * dir, bp) * 1e-2 * dir;
          }
          return acc / 64.0;
        };
        double worst = std::abs(sb_residue(0, 0, bp) - iu / (2.0 * pi));
        for (auto [m, l] : {std::pair{1, 0}, {0, 1}, {2, 1}})
          worst = std::max(worst, std::abs(sb_residue(m, l, bp) - contour(m, l)));
        return worst;
      });

  // ----- qseries ------------------------------------------------------------
  add(Suite::qseries, "qseries.pochhammer_inversion", "(q^{1-m}/a; q)_m inversion", 1e-12,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int m = 0; m <= 10; ++m) {
          const Complex q = rng.off_root_q();
          const Complex a = rng.unit_phase() * rng.uniform(0.5, 1.5);
          const Complex lhs = qpoch(std::pow(q, 1 - m) / a, q, m) * std::pow(-a, m) *
                              std::pow(q, 0.5 * m * (m - 1.0));
          worst = std::max(worst, rel(lhs, qpoch(a, q, m)));
        }
        return worst;
      });
  add(Suite::qseries, "qseries.pochhammer_base_inversion", "(a; 1/q)_n inversion", 1e-12,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int n = 0; n <= 10; ++n) {
          const Complex q = rng.off_root_q();
          const Complex a = rng.unit_phase() * rng.uniform(0.5, 1.5);
          const Complex rhs =
              qpoch(1.0 / a, q, n) * std::pow(-a, n) * std::pow(q, -0.5 * n * (n - 1.0));
          worst = std::max(worst, rel(qpoch(a, 1.0 / q, n), rhs));
        }
        return worst;
      });
  add(Suite::qseries, "qseries.phi32_reversal", "3phi2 reversal with argument q", 1e-11,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int n = 1; n <= 8; ++n) {
          const Complex q = rng.off_root_q();
          const Complex b = rng.unit_phase() * 1.2, c = rng.unit_phase() * 0.8,
                        d = rng.unit_phase() * 1.1, e = rng.unit_phase() * 0.95;
          const Complex lhs = qpoch(d * e / (b * c), q, n) / qpoch(e, q, n) *
                              std::pow(b * c / d, n) *
                              phi_terminating({std::pow(q, -n), d / b, d / c},
                                              {d, d * e / (b * c)}, q, q, n);
          worst = std::max(worst, rel(lhs, phi_terminating({std::pow(q, -n), b, c}, {d, e}, q, q, n)));
        }
        return worst;
      });
  add(Suite::qseries, "qseries.phi32_transform", "two-row 3phi2 transformation", 1e-11,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int n = 1; n <= 8; ++n) {
          const Complex q = rng.off_root_q();
          const Complex b = rng.unit_phase() * 1.1, c = rng.unit_phase() * 0.9,
                        d = rng.unit_phase() * 1.3, e = rng.unit_phase() * 0.8;
          const Complex lhs = phi_terminating({std::pow(q, -n), b, c}, {d, e}, q,
                                              d * e * std::pow(q, n) / (b * c), n);
          const Complex rhs =
              qpoch(e / c, q, n) / qpoch(e, q, n) *
              phi_terminating({std::pow(q, -n), c, d / b}, {d, c * std::pow(q, 1 - n) / e}, q, q, n);
          worst = std::max(worst, rel(lhs, rhs));
        }
        return worst;
      });
  add(Suite::qseries, "qseries.hahn_two_sided", "two-sided Hahn 3phi2 equality", 1e-11,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int n = 1; n <= 6; ++n) {
          const Complex q = rng.off_root_q();
          const Complex al = rng.unit_phase() * rng.uniform(0.85, 1.15),
                        be = rng.unit_phase() * rng.uniform(0.85, 1.15),
                        ga = rng.unit_phase() * rng.uniform(0.85, 1.15), z = rng.unit_phase();
          const Complex lhs =
              qpoch(ga * be, q, n) / qpoch(al * be, q, n) *
              phi_terminating({std::pow(q, -n), ga * z, ga / z}, {be * ga, al * ga}, q,
                              al * be * std::pow(q, n), n);
          const Complex rhs = phi_terminating({std::pow(q, -n), al / z, al * z},
                                              {al * be, al * ga}, q, be * ga * std::pow(q, n), n);
          worst = std::max(worst, rel(lhs, rhs));
        }
        return worst;
      });
  add(Suite::qseries, "qseries.sigma_hahn_reduction", "the m-sum reduces to a 3phi2", 1e-11,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int n = 1; n <= 6; ++n) {
          const Complex q = rng.off_root_q();
          const Complex al = rng.unit_phase() * 1.2, be = rng.unit_phase() * 0.9,
                        ga = rng.unit_phase() * 1.1, z = rng.unit_phase();
          const Complex s2 = sigma_hahn(n, 2, al, be, ga, z, q);
          worst = std::max(worst, rel(s2, phi_terminating({std::pow(q, -n), ga * z, ga / z},
                                                          {be * ga, al * ga}, q, q, n)));
          const Complex s1 = sigma_hahn(n, 1, al, be, ga, z, q);
          worst = std::max(
              worst, rel(s1, phi_terminating({std::pow(q, -n), ga * z, ga / z}, {be * ga, al * ga},
                                             q, al * be * std::pow(q, n), n)));
        }
        return worst;
      });
  add(Suite::qseries, "qseries.sigma_jacobi_reduction", "the m-sum reduces to big q-Jacobi",
      1e-11, [](Context&, Rng& rng) {
        double worst = 0;
        for (int n = 1; n <= 6; ++n) {
          const Complex q = rng.off_root_q();
          const Complex al = rng.unit_phase() * 1.15, be = rng.unit_phase() * 0.85,
                        ga = rng.unit_phase() * 1.05, x = rng.unit_phase() * 1.3;
          worst = std::max(worst, rel(sigma_jacobi(n, 2, al, be, ga, x, q),
                                      jacobi(n, x, al, be, ga, q)));
          worst = std::max(worst,
                           rel(sigma_jacobi(n, 1, al, be, ga, x, q),
                               jacobi(n, 1.0 / x, 1.0 / al, 1.0 / be, 1.0 / ga, 1.0 / q)));
        }
        return worst;
      });

  // ----- qaskey ---------------------------------------------------------------
  auto random_aw = [](Rng& rng) {
    return AWParams{rng.unit_phase() * rng.uniform(0.6, 1.4),
                    rng.unit_phase() * rng.uniform(0.6, 1.4),
                    rng.unit_phase() * rng.uniform(0.6, 1.4),
                    rng.unit_phase() * rng.uniform(0.6, 1.4), rng.off_root_q()};
  };
  auto safe_z = [](Rng& rng, Complex q) {
    for (;;) {
      const Complex z = rng.unit_phase() * rng.uniform(0.75, 1.35);
      if (std::abs(z - 1.0) > 0.05 && std::abs(z + 1.0) > 0.05 && std::abs(z * z - q) > 0.05 &&
          std::abs(z * z - 1.0 / q) > 0.05)
        return z;
    }
  };
  add(Suite::qaskey, "qaskey.aw_recurrence", "three-term recurrence of A_n", 1e-10,
      [random_aw, safe_z](Context&, Rng& rng) {
        double worst = 0;
        for (int draw = 0; draw < 50; ++draw) {
          const AWParams p = random_aw(rng);
          const ThreeTermOperator R = aw_recurrence_op(p);
          const Complex z = safe_z(rng, p.q);
          for (int n = 0; n <= 8; ++n) {
            const Complex fn = askey_wilson(n, z, p);
            const Complex lhs = R.apply_index(n, n ? askey_wilson(n - 1, z, p) : 0.0, fn,
                                              askey_wilson(n + 1, z, p));
            worst = std::max(worst, rel(lhs, (z + 1.0 / z) * fn));
          }
        }
        return worst;
      });
  add(Suite::qaskey, "qaskey.aw_difference", "Askey-Wilson difference equation", 1e-10,
      [random_aw, safe_z](Context&, Rng& rng) {
        double worst = 0;
        for (int draw = 0; draw < 50; ++draw) {
          const AWParams p = random_aw(rng);
          const ThreeTermOperator D = aw_difference_op(p);
          const Complex z = safe_z(rng, p.q);
          for (int n = 0; n <= 8; ++n) {
            auto f = [&](Complex zz) { return askey_wilson(n, zz, p); };
            const Complex ev =
                std::pow(p.q, -n) + p.alpha * p.beta * p.gamma * p.delta * std::pow(p.q, n - 1);
            worst = std::max(worst, rel(D.apply(f, z), ev * f(z)));
          }
        }
        return worst;
      });
  add(Suite::qaskey, "qaskey.hahn_ops", "continuous dual q-Hahn operator pair", 1e-10,
      [random_aw, safe_z](Context&, Rng& rng) {
        double worst = 0;
        for (int draw = 0; draw < 25; ++draw) {
          const AWParams p = random_aw(rng);
          const Complex z = safe_z(rng, p.q);
          const ThreeTermOperator R = hahn_recurrence_op(p.alpha, p.beta, p.gamma, p.q);
          const ThreeTermOperator D = hahn_difference_op(p.alpha, p.beta, p.gamma, p.q);
          for (int n = 0; n <= 8; ++n) {
            auto f = [&](Complex zz) { return hahn(n, zz, p.alpha, p.beta, p.gamma, p.q); };
            const Complex fn = f(z);
            worst = std::max(
                worst, rel(R.apply_index(n, n ? hahn(n - 1, z, p.alpha, p.beta, p.gamma, p.q) : 0.0,
                                         fn, hahn(n + 1, z, p.alpha, p.beta, p.gamma, p.q)),
                           (z + 1.0 / z) * fn));
            worst = std::max(worst, rel(D.apply(f, z), (std::pow(p.q, -n) - 1.0) * fn));
          }
        }
        return worst;
      });
  add(Suite::qaskey, "qaskey.jacobi_ops", "big q-Jacobi operator pair", 1e-10,
      [random_aw](Context&, Rng& rng) {
        double worst = 0;
        for (int draw = 0; draw < 25; ++draw) {
          const AWParams p = random_aw(rng);
          const Complex x = rng.unit_phase() * rng.uniform(0.8, 1.3);
          const ThreeTermOperator R = jacobi_recurrence_op(p.alpha, p.beta, p.gamma, p.q);
          const ThreeTermOperator D = jacobi_difference_op(p.alpha, p.beta, p.gamma, p.q);
          for (int n = 0; n <= 8; ++n) {
            auto f = [&](Complex xx) { return jacobi(n, xx, p.alpha, p.beta, p.gamma, p.q); };
            const Complex fn = f(x);
            worst = std::max(
                worst,
                rel(R.apply_index(n, n ? jacobi(n - 1, x, p.alpha, p.beta, p.gamma, p.q) : 0.0, fn,
                                  jacobi(n + 1, x, p.alpha, p.beta, p.gamma, p.q)),
                    x * fn));
            const Complex ev = std::pow(p.q, -n) * (1.0 - std::pow(p.q, n)) *
                               (1.0 - p.alpha * p.beta * std::pow(p.q, n + 1)) * x * x;
            worst = std::max(worst, rel(D.apply(f, x), ev * fn));
          }
        }
        return worst;
      });
  add(Suite::qaskey, "qaskey.hahn_is_aw_delta0", "H_n equals A_n at delta = 0", 1e-12,
      [random_aw, safe_z](Context&, Rng& rng) {
        double worst = 0;
        const AWParams p = random_aw(rng);
        const Complex z = safe_z(rng, p.q);
        for (int n = 0; n <= 8; ++n) {
          const AWParams p0{p.alpha, p.beta, p.gamma, 0.0, p.q};
          worst = std::max(worst, rel(hahn(n, z, p.alpha, p.beta, p.gamma, p.q),
                                      askey_wilson(n, z, p0)));
        }
        return worst;
      });
  add(Suite::qaskey, "qaskey.jacobi_lambda_limit", "A_n degenerates linearly to J_n", 0.62,
      [random_aw](Context&, Rng& rng) {
        const Complex q = rng.off_root_q();
        const Complex al = rng.unit_phase() * 0.9, be = rng.unit_phase() * 1.1,
                      ga = rng.unit_phase() * 1.2, x = rng.unit_phase() * 1.2;
        const int n = 3;
        auto aw_at = [&](double lambda) {
          const AWParams pl{Complex(lambda, 0), al * q / lambda, ga * q / lambda,
                            lambda * be / ga, q};
          return askey_wilson(n, x / lambda, pl);
        };
        const Complex jn = jacobi(n, x, al, be, ga, q);
        const double d1 = std::abs(aw_at(1e-3) - jn);
        const double d2 = std::abs(aw_at(5e-4) - jn);
        return d2 / d1;  // halving lambda must halve the deviation
      });
  add(Suite::qaskey, "qaskey.aw_polynomial_degree", "A_n has degree n in z + 1/z", 1e-9,
      [random_aw, safe_z](Context&, Rng& rng) {
        const AWParams p = random_aw(rng);
        const int n = 5;
        std::vector<Complex> xs, ys;
        for (int j = 0; j <= n; ++j) {
          const Complex z = safe_z(rng, p.q);
          xs.push_back(z + 1.0 / z);
          ys.push_back(askey_wilson(n, z, p));
        }
        double worst = 0;
        for (int t = 0; t < 4; ++t) {
          const Complex z = safe_z(rng, p.q);
          Complex acc = 0.0;
          for (int j = 0; j <= n; ++j) {
            Complex lj = 1.0;
            for (int m = 0; m <= n; ++m)
              if (m != j) lj *= (z + 1.0 / z - xs[m]) / (xs[j] - xs[m]);
            acc += ys[j] * lj;
          }
          worst = std::max(worst, std::abs(acc - askey_wilson(n, z, p)));
        }
        return worst;
      });
  add(Suite::qaskey, "qaskey.normalization_symmetry", "p_n is symmetric in all four parameters",
      1e-10, [random_aw](Context&, Rng& rng) {
        double worst = 0;
        const AWParams p = random_aw(rng);
        const Complex x = rng.box(-0.9, 0.9);
        for (int n = 1; n <= 6; ++n) {
          const Complex base = standard_normalization(n, x, p);
          const AWParams sab{p.beta, p.alpha, p.gamma, p.delta, p.q};
          const AWParams sad{p.delta, p.beta, p.gamma, p.alpha, p.q};
          worst = std::max(worst, rel(standard_normalization(n, x, sab), base));
          worst = std::max(worst, rel(standard_normalization(n, x, sad), base));
        }
        return worst;
      });

  // ----- fusion ---------------------------------------------------------------
  add(Suite::fusion, "fusion.eigen_sigma_s", "joint eigenfunction of two copies", 1e-7,
      [](Context& ctx, Rng&) { return fusion_table(ctx).diff1; });
  add(Suite::fusion, "fusion.eigen_sigma_t", "satisfies the dual pair", 1e-7,
      [](Context& ctx, Rng&) { return fusion_table(ctx).diff2; });
  add(Suite::fusion, "fusion.eigen_renormalized", "following four difference equations", 1e-7,
      [](Context& ctx, Rng&) { return fusion_table(ctx).hren; });
  add(Suite::fusion, "fusion.fren_two_routes", "renormalized kernel via N or via P_1", 1e-10,
      [](Context& ctx, Rng&) {
        const FusionParams p = golden_fusion();
        const Complex a = fren(p, ctx.config.quadrature).value;
        const Complex b = fren_via_normalization(p, ctx.config.quadrature).value;
        return rel(a, b);
      });
  add(Suite::fusion, "fusion.exchange_symmetry", "symmetric under the exchange", 1e-7,
      [](Context& ctx, Rng&) {
        const FusionParams p = golden_fusion();
        FusionParams q = p;
        std::swap(q.sigma_s, q.sigma_t);
        std::swap(q.th0, q.th1);
        const Complex a = fren(p, ctx.config.quadrature).value;
        return std::abs(a - fren(q, ctx.config.quadrature).value) / std::abs(a);
      });
  add(Suite::fusion, "fusion.contour_independence", "independence of the separating curve", 1.0,
      [](Context& ctx, Rng&) {
        FusionParams p = golden_fusion();
        p.sigma_s += iu * p.bp.b;
        QuadratureSettings qa = ctx.config.quadrature;
        const KernelValue v1 = fusion_kernel(p, qa);
        qa.abs_tol *= 3.0;
        const KernelValue v2 = fusion_kernel(p, qa);
        return std::abs(v1.value - v2.value) /
               (2.0 * (v1.quadrature_err + v2.quadrature_err) + 1e-12);
      });
  add(Suite::fusion, "fusion.golden_regression", "fixed-point regression of F and F_ren", 1e-9,
      [](Context& ctx, Rng&) {
        const FusionParams p = golden_fusion();
        const Complex f = fusion_kernel(p, ctx.config.quadrature).value;
        const Complex fr = fren(p, ctx.config.quadrature).value;
        return std::max(rel(f, Complex(1.030621313612709, 0.0)),
                        rel(fr, Complex(-4.456467916387553e-02, 1.454224390395605e-01)));
      });

  // ----- confluent --------------------------------------------------------------
  add(Suite::confluent, "confluent.eigen_nu", "pair of difference equations in nu", 1e-7,
      [](Context& ctx, Rng& rng) {
        double worst = 0;
        const int pts = std::min(ctx.config.points, 5);
        for (int k : ctx.config.k_list)
          for (int pt = 0; pt < pts; ++pt) {
            const ConfluentParams p = draw_confluent_point(rng, rng.draw_b(), k, true);
            worst = std::max(worst, verify_ck_eigen(p, 1, ctx.config.quadrature));
            worst = std::max(worst, verify_ck_eigen(p, 2, ctx.config.quadrature));
          }
        return worst;
      });
  add(Suite::confluent, "confluent.eigen_sigma_s", "pair of difference equations in sigma_s",
      1e-7, [](Context& ctx, Rng& rng) {
        double worst = 0;
        const int pts = std::min(ctx.config.points, 5);
        for (int k : ctx.config.k_list)
          for (int pt = 0; pt < pts; ++pt) {
            const ConfluentParams p = draw_confluent_point(rng, rng.draw_b(), k, true);
            worst = std::max(worst, verify_ck_eigen(p, 3, ctx.config.quadrature));
            worst = std::max(worst, verify_ck_eigen(p, 4, ctx.config.quadrature));
          }
        return worst;
      });
  add(Suite::confluent, "confluent.xyz_identities", "X, Y, Z building-block identities", 1e-11,
      [](Context&, Rng& rng) {
        double worst = 0;
        for (int k : {1, 2, 3}) {
          const ConfluentParams p = golden_confluent(k);
          const auto m = xyz_identities(p, rng.box(-0.6, 0.6));
          for (const auto& [nm, r] : m) worst = std::max(worst, r);
        }
        return worst;
      });
  add(Suite::confluent, "confluent.limit_from_m", "kernels arise as confluent limits of M", 1.0,
      [](Context& ctx, Rng&) {
        double worst = 0;
        const ConfluentParams p = golden_confluent(1);
        for (int eps : {1, -1}) {
          const auto devs =
              confluent_limit_check(p, eps, ctx.config.lambda_list, ctx.config.quadrature);
          for (size_t i = 0; i + 1 < devs.size(); ++i)
            worst = std::max(worst, devs[i + 1] / devs[i]);
        }
        return worst;
      });
  add(Suite::confluent, "confluent.operator_limit_monotone",
      "conjugated M-operators approach the confluent operators", 1.0, [](Context&, Rng&) {
        ConfluentParams p = golden_confluent(1);
        p.nu = Complex(0.2, 0.0);
        double worst = 0;
        for (auto fam : {ConvergenceFamily::HMtoHck, ConvergenceFamily::HMTildeToHckTilde}) {
          const auto rows = operator_convergence_check(fam, p, {6, 12, 24, 48});
          for (size_t i = 0; i + 1 < rows.size(); ++i)
            worst = std::max(worst, rows[i + 1].max_coeff_deviation / rows[i].max_coeff_deviation);
        }
        return worst;
      });
  add(Suite::confluent, "confluent.conjugated_coefficients",
      "conjugated coefficients equal X_j times the limit coefficients", 1e-9,
      [](Context&, Rng&) {
        ConfluentParams p = golden_confluent(1);
        p.nu = Complex(0.2, 0.0);
        double worst = 0;
        for (auto fam : {ConvergenceFamily::HMtoHck, ConvergenceFamily::HMTildeToHckTilde})
          for (const auto& row : operator_convergence_check(fam, p, {6, 24, 50}))
            worst = std::max(worst, row.identity_residual);
        return worst;
      });
  add(Suite::confluent, "confluent.x_factor_limit", "X_{+-1}(Lambda) tends to 1", 6e-2,
      [](Context&, Rng&) {
        ConfluentParams p = golden_confluent(1);
        p.nu = Complex(0.2, 0.0);
        const auto rows = operator_convergence_check(ConvergenceFamily::HMtoHck, p, {50});
        return std::max(rows[0].x_plus_dev, rows[0].x_minus_dev);
      });
  add(Suite::confluent, "confluent.ren_invariances",
      "renormalized kernels are k+2 periodic and b <-> 1/b invariant", 1e-8,
      [](Context& ctx, Rng&) {
        double worst = 0;
        const auto& qs = ctx.config.quadrature;
        for (int k : {1, 2}) {
          const ConfluentParams p = golden_confluent(k);
          ConfluentParams p2 = golden_confluent(k + 2);
          ConfluentParams pinv = p;
          pinv.bp = BParameter(1.0 / p.bp.b);
          const Complex a = ck_ren(p, qs).value;
          worst = std::max(worst, rel(ck_ren(p2, qs).value, a));
          worst = std::max(worst, rel(ck_ren(pinv, qs).value, a));
          const Complex h = chat_ren(p, qs).value;
          worst = std::max(worst, rel(chat_ren(p2, qs).value, h));
          worst = std::max(worst, rel(chat_ren(pinv, qs).value, h));
        }
        return worst;
      });
  add(Suite::confluent, "confluent.golden_regression", "fixed-point regression of C_1", 1e-9,
      [](Context& ctx, Rng&) {
        const ConfluentParams p = golden_confluent(1);
        return rel(ck_kernel(p, ctx.config.quadrature).value,
                   Complex(-3.997344392502392e-02, -2.653026507112755e-01));
      });

  // ----- limits ---------------------------------------------------------------
  add(Suite::limits, "limits.aw_n0_residue_formula", "the right-hand side equals 1", 1e-6,
      [](Context& ctx, Rng&) {
        const FusionParams p = golden_fusion();
        const double closed = std::abs(aw_limit_closed0(p) - 1.0);
        const double second = std::abs(aw_limit_second_term0(p, ctx.config.quadrature));
        return std::max(closed, second * 1e2);
      });
  add(Suite::limits, "limits.aw_polynomial_limit", "Under the parameter correspondence", 1.0,
      [](Context& ctx, Rng&) {
        const FusionParams p = golden_fusion();
        const AWParams ap = map_fusion_to_aw(p);
        const Complex z = std::exp(2.0 * pi * p.bp.b * p.sigma_t);
        double worst = 0;
        const double tols[3] = {1e-6, 1e-5, 1e-4};
        for (int n = 0; n <= std::min(ctx.config.n_max, 2); ++n) {
          const Complex lim = aw_limit(n, p, ctx.config.quadrature);
          worst = std::max(worst, std::abs(lim - askey_wilson(n, z, ap)) / tols[n]);
        }
        return worst;
      });
  add(Suite::limits, "limits.aw_operator_coefficients",
      "difference operators become the A_n operators", 1e-11, [](Context&, Rng& rng) {
        const FusionParams p = golden_fusion();
        const AWParams ap = map_fusion_to_aw(p);
        const ThreeTermOperator R = aw_recurrence_op(ap);
        double worst = 0;
        for (int n = 0; n <= 4; ++n) {
          FusionParams pn = p;
          pn.sigma_s = fusion_sigma_s_n(p, n);
          const ThreeTermOperator H = build_fusion_operator(FusionOp::HRen, pn, p.bp.b);
          const Complex nn(n, 0);
          worst = std::max(worst, std::abs(H.plus(pn.sigma_s) - R.plus(nn)));
          worst = std::max(worst, std::abs(H.minus(pn.sigma_s) - R.minus(nn)));
          worst = std::max(worst, std::abs(H.zero(pn.sigma_s) - R.zero(nn)));
        }
        FusionParams pt = p;
        pt.sigma_t = Complex(rng.sig(), 0);
        const Complex fac = -std::exp(2.0 * pi * p.bp.b * (0.5 * iu * p.bp.b + p.th0 + p.tht));
        const ThreeTermOperator Hd = build_fusion_operator(FusionOp::HRenDual, pt, p.bp.b);
        const ThreeTermOperator D = aw_difference_op(ap);
        const Complex z = std::exp(2.0 * pi * p.bp.b * pt.sigma_t);
        worst = std::max(worst, std::abs(fac * Hd.plus(pt.sigma_t) - D.plus(z)));
        worst = std::max(worst, std::abs(fac * Hd.minus(pt.sigma_t) - D.minus(z)));
        worst = std::max(worst, std::abs(fac * Hd.zero(pt.sigma_t) - D.zero(z)));
        return worst;
      });
  add(Suite::limits, "limits.hahn_table", "reduces to the continuous dual q-Hahn polynomial",
      1e-10, [](Context&, Rng& rng) {
        const ConfluentParams p = draw_polynomial_limit_point(rng, 1);
        const HahnMap hm = map_confluent_to_hahn(p);
        const Complex z = std::exp(2.0 * pi * p.bp.b * p.sigma_s);
        double diff = 0, scale = 1;
        for (int k : {1, 2})
          for (int n = 0; n <= 6; ++n) {
            const Complex lim = hahn_limit(n, k, p);
            const Complex h =
                k % 2 == 1 ? hahn(n, 1.0 / z, 1.0 / hm.alpha, 1.0 / hm.beta, 1.0 / hm.gamma,
                                  1.0 / hm.q)
                           : hahn(n, z, hm.alpha, hm.beta, hm.gamma, hm.q);
            diff = std::max(diff, std::abs(lim - h));
            scale = std::max({scale, std::abs(lim), std::abs(h)});
          }
        return diff / scale;
      });
  add(Suite::limits, "limits.hahn_routes_agree", "residue sum equals the finite q-sum", 1e-11,
      [](Context&, Rng& rng) {
        const ConfluentParams p = draw_polynomial_limit_point(rng, 1);
        double diff = 0, scale = 1;
        for (int k : {1, 2})
          for (int n = 0; n <= 6; ++n) {
            const Complex a = hahn_limit(n, k, p), b = hahn_limit_pochhammer(n, k, p);
            diff = std::max(diff, std::abs(a - b));
            scale = std::max({scale, std::abs(a), std::abs(b)});
          }
        return diff / scale;
      });
  add(Suite::limits, "limits.hahn_operator_coefficients",
      "discretized coefficients equal the H_n coefficients", 1e-11, [](Context&, Rng& rng) {
        const ConfluentParams p = draw_confluent_point(rng, 0.7, 1);
        double worst = 0;
        for (int k : {1, 2})
          for (int n : {0, 1, 3}) {
            worst = std::max(worst,
                             discretized_operator_check(DiscretizedCheck::hahn_recurrence, n, k, p)
                                 .coefficient_deviation);
            worst = std::max(worst,
                             discretized_operator_check(DiscretizedCheck::hahn_difference, n, k, p)
                                 .coefficient_deviation);
          }
        return worst;
      });
  add(Suite::limits, "limits.hahn_discretized_equations",
      "recurrence and difference equations at nu_n", 1e-9, [](Context&, Rng& rng) {
        const ConfluentParams p = draw_confluent_point(rng, 0.7, 1);
        double worst = 0;
        for (int k : {1, 2})
          for (int n : {0, 1, 2, 4}) {
            worst = std::max(worst,
                             discretized_operator_check(DiscretizedCheck::hahn_recurrence, n, k, p)
                                 .value_residual);
            worst = std::max(worst,
                             discretized_operator_check(DiscretizedCheck::hahn_difference, n, k, p)
                                 .value_residual);
          }
        return worst;
      });
  add(Suite::limits, "limits.jacobi_table", "reduces to the big q-Jacobi polynomial", 1e-10,
      [](Context&, Rng& rng) {
        const ConfluentParams p = draw_polynomial_limit_point(rng, 1);
        const JacobiMap jm = map_confluent_to_jacobi(p);
        double diff = 0, scale = 1;
        for (int k : {1, 2})
          for (int n = 0; n <= 6; ++n) {
            const Complex lim = jacobi_limit(n, k, p);
            const Complex j = k % 2 == 1 ? jacobi(n, 1.0 / jm.x, 1.0 / jm.alpha, 1.0 / jm.beta,
                                                  1.0 / jm.gamma, 1.0 / jm.q)
                                         : jacobi(n, jm.x, jm.alpha, jm.beta, jm.gamma, jm.q);
            diff = std::max(diff, std::abs(lim - j));
            scale = std::max({scale, std::abs(lim), std::abs(j)});
          }
        return diff / scale;
      });
  add(Suite::limits, "limits.jacobi_routes_agree", "residue sum equals the finite q-sum", 1e-11,
      [](Context&, Rng& rng) {
        const ConfluentParams p = draw_polynomial_limit_point(rng, 1);
        double diff = 0, scale = 1;
        for (int k : {1, 2})
          for (int n = 0; n <= 6; ++n) {
            const Complex a = jacobi_limit(n, k, p), b = jacobi_limit_pochhammer(n, k, p);
            diff = std::max(diff, std::abs(a - b));
            scale = std::max({scale, std::abs(a), std::abs(b)});
          }
        return diff / scale;
      });
  add(Suite::limits, "limits.jacobi_operator_coefficients",
      "discretized coefficients equal the J_n coefficients", 1e-11, [](Context&, Rng& rng) {
        const ConfluentParams p = draw_confluent_point(rng, 0.7, 1);
        double worst = 0;
        for (int k : {1, 2})
          for (int n : {0, 1, 3}) {
            worst = std::max(
                worst, discretized_operator_check(DiscretizedCheck::jacobi_recurrence, n, k, p)
                           .coefficient_deviation);
            worst = std::max(
                worst, discretized_operator_check(DiscretizedCheck::jacobi_difference, n, k, p)
                           .coefficient_deviation);
          }
        return worst;
      });
  add(Suite::limits, "limits.jacobi_discretized_equations",
      "recurrence and difference equations at sigma_s^{(n)}", 1e-9, [](Context&, Rng& rng) {
        const ConfluentParams p = draw_confluent_point(rng, 0.7, 1);
        double worst = 0;
        for (int k : {1, 2})
          for (int n : {0, 1, 2, 4}) {
            worst = std::max(
                worst, discretized_operator_check(DiscretizedCheck::jacobi_recurrence, n, k, p)
                           .value_residual);
            worst = std::max(
                worst, discretized_operator_check(DiscretizedCheck::jacobi_difference, n, k, p)
                           .value_residual);
          }
        return worst;
      });
  add(Suite::limits, "limits.scalar_identities", "the V_k and eigenvalue scalar identities",
      1e-12, [](Context&, Rng& rng) {
        double worst = 0;
        for (int k : {1, 2}) {
          const ConfluentParams p = draw_confluent_point(rng, 0.7, k);
          worst = std::max(worst, vk_h_identity_residual(p, p.sigma_s));
          worst = std::max(worst, vk_h_identity_residual(p, -p.sigma_s));
          worst = std::max(worst, hat_eigenvalue_identity_residual(p, 3));
        }
        return worst;
      });

  return reg;
}

const std::vector<Check>& registry() {
  static const std::vector<Check> reg = build_registry();
  return reg;
}

int thread_budget() {
  if (const char* env = std::getenv("CVK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 2;
}

}  // namespace

void SuiteConfig::validate() const {
  if (points < 1) throw ConfigInvalid("config: points must be >= 1");
  if (n_max < 0) throw ConfigInvalid("config: n_max must be >= 0");
  for (const auto& [name, tol] : tolerances)
    if (!(tol >= 0)) throw ConfigInvalid("config: tolerance for " + name + " must be >= 0");
  for (double l : lambda_list)
    if (!(l > 0)) throw ConfigInvalid("config: lambda values must be positive");
  for (int k : k_list)
    if (k < 1) throw ConfigInvalid("config: k values must be >= 1");
  if (!(quadrature.rel_tol > 0) || !(quadrature.abs_tol > 0))
    throw ConfigInvalid("config: quadrature tolerances must be positive");
}

Suite suite_from_name(const std::string& name) {
  if (name == "special") return Suite::special;
  if (name == "qseries") return Suite::qseries;
  if (name == "qaskey") return Suite::qaskey;
  if (name == "fusion") return Suite::fusion;
  if (name == "confluent") return Suite::confluent;
  if (name == "limits") return Suite::limits;
  if (name == "all") return Suite::all;
  throw UsageError("unknown suite: " + name);
}

std::vector<std::string> check_names(Suite which) {
  std::vector<std::string> names;
  for (const auto& c : registry())
    if (which == Suite::all || c.suite == which) names.push_back(c.name);
  return names;
}

double default_tolerance(const std::string& check_name) {
  for (const auto& c : registry())
    if (c.name == check_name) return c.tol;
  throw UsageError("unknown check: " + check_name);
}

std::string config_digest(const SuiteConfig& config) {
  std::ostringstream os;
  os << config.seed << '|' << config.points << '|' << config.n_max << '|';
  for (double l : config.lambda_list) os << l << ',';
  os << '|';
  for (int k : config.k_list) os << k << ',';
  os << '|' << config.quadrature.rel_tol << '|' << config.quadrature.abs_tol << '|'
     << config.quadrature.max_subdivisions << '|' << config.quadrature.truncation_margin << '|';
  for (const auto& [name, tol] : config.tolerances) os << name << '=' << tol << ';';
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

VerificationReport run_suite(const SuiteConfig& config, Suite which) {
  config.validate();
  Context ctx(config);
  std::vector<const Check*> selected;
  for (const auto& c : registry())
    if (which == Suite::all || c.suite == which) selected.push_back(&c);

  std::vector<CheckResult> results(selected.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= selected.size()) return;
      const Check& c = *selected[i];
      CheckResult r;
      r.name = c.name;
      r.anchor = c.anchor;
      const auto it = config.tolerances.find(c.name);
      r.tolerance = it != config.tolerances.end() ? it->second : c.tol;
      Rng rng(config.seed ^ fnv1a(c.name));
      const auto start = std::chrono::steady_clock::now();
      try {
        r.residual = c.run(ctx, rng);
        r.passed = r.residual <= r.tolerance;
      } catch (const std::exception& e) {
        r.error = e.what();
        r.residual = 9e99;  // keep the report JSON-serializable
        r.passed = false;
      }
      r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
      results[i] = std::move(r);
    }
  };

  const int nthreads = std::max(1, std::min<int>(thread_budget(), static_cast<int>(selected.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  VerificationReport report;
  report.version = "1";
  report.config_digest = config_digest(config);
  report.checks = std::move(results);
  for (const auto& r : report.checks) {
    if (r.skipped)
      ++report.skipped;
    else if (r.passed)
      ++report.passed;
    else
      ++report.failed;
  }
  return report;
}

std::string report_to_json(const VerificationReport& report, bool include_runtime) {
  nlohmann::json j;
  j["version"] = report.version;
  j["config_digest"] = report.config_digest;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["anchor"] = c.anchor;
    jc["residual"] = c.residual;
    jc["tolerance"] = c.tolerance;
    jc["passed"] = c.passed;
    jc["runtime_ms"] = include_runtime ? c.runtime_ms : 0;
    if (!c.error.empty()) jc["error"] = c.error;
    j["checks"].push_back(jc);
  }
  j["summary"] = {{"passed", report.passed}, {"failed", report.failed}, {"skipped", report.skipped}};
  return j.dump(2);
}

}  // namespace cvk
