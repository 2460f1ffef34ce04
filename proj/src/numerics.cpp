#include "cvk/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace cvk {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (positive abscissae).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  Complex a, b;
  Complex value;
  double err;
  bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const Integrand& f, Complex a, Complex b) {
  const Complex mid = 0.5 * (a + b);
  const Complex half = 0.5 * (b - a);
  Complex resk = 0.0, resg = 0.0;
  for (int j = 0; j < 8; ++j) {
    if (j == 7) {
      const Complex fc = f(mid);
      if (!finite(fc)) throw NonFiniteSample("integrand returned NaN/Inf near " + std::to_string(mid.real()));
      resk += kWgk[7] * fc;
      resg += kWg[3] * fc;
      break;
    }
    const Complex f1 = f(mid - half * kXgk[j]);
    const Complex f2 = f(mid + half * kXgk[j]);
    if (!finite(f1) || !finite(f2)) throw NonFiniteSample("integrand returned NaN/Inf (pole on or near the path?)");
    resk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double scale = std::abs(half);
  return Panel{a, b, resk * half, std::abs(resk - resg) * scale};
}

IntegralResult adaptive_chain(const Integrand& f, const std::vector<std::pair<Complex, Complex>>& segments,
                              const QuadratureSettings& settings) {
  std::priority_queue<Panel> work;
  Complex total = 0.0;
  double err = 0.0;
  double mass = 0.0;  // sum of |panel values|, bounds the attainable accuracy
  for (const auto& [a, b] : segments) {
    Panel p = gk15(f, a, b);
    total += p.value;
    err += p.err;
    mass += std::abs(p.value);
    work.push(p);
  }
  int splits = 0;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  auto target = [&] {
    return std::max({settings.abs_tol, settings.rel_tol * std::abs(total), 50.0 * eps * mass});
  };
  while (err > target()) {
    if (splits >= settings.max_subdivisions) {
      std::ostringstream os;
      os << "integrate: subdivision budget exhausted, err=" << err;
      throw NoConvergence(os.str());
    }
    Panel worst = work.top();
    work.pop();
    const Complex mid = 0.5 * (worst.a + worst.b);
    Panel l = gk15(f, worst.a, mid);
    Panel r = gk15(f, mid, worst.b);
    total += l.value + r.value - worst.value;
    err += l.err + r.err - worst.err;
    mass += std::abs(l.value) + std::abs(r.value) - std::abs(worst.value);
    work.push(l);
    work.push(r);
    ++splits;
  }
  return IntegralResult{total, err};
}

double point_segment_distance(Complex p, Complex a, Complex b) {
  const Complex ab = b - a;
  const double len2 = std::norm(ab);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((p.real() - a.real()) * ab.real() + (p.imag() - a.imag()) * ab.imag()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

std::vector<Complex> full_vertex_chain(const ContourPath& path, double t_left, double t_right) {
  std::vector<Complex> pts;
  pts.emplace_back(-t_left, path.left_height);
  for (Complex v : path.vertices) pts.push_back(v);
  pts.emplace_back(t_right, path.right_height);
  return pts;
}

}  // namespace

IntegralResult integrate_segment(const Integrand& f, Complex a, Complex b,
                                 const QuadratureSettings& settings) {
  return adaptive_chain(f, {{a, b}}, settings);
}

IntegralResult integrate_chain(const Integrand& f, const std::vector<Complex>& points,
                               const QuadratureSettings& settings) {
  std::vector<std::pair<Complex, Complex>> segments;
  for (size_t i = 0; i + 1 < points.size(); ++i)
    if (std::abs(points[i + 1] - points[i]) > 0) segments.emplace_back(points[i], points[i + 1]);
  if (segments.empty()) return IntegralResult{0.0, 0.0};
  return adaptive_chain(f, segments, settings);
}

IntegralResult integrate_along(const Integrand& f, const ContourPath& path,
                               const QuadratureSettings& settings) {
  if (settings.decay_rate <= 0) throw ConfigInvalid("integrate_along: decay_rate must be positive");
  double t0 = 1.0;
  for (Complex v : path.vertices) t0 = std::max(t0, std::abs(v.real()) + 1.0);
  const double budget = settings.truncation_margin * settings.abs_tol;
  const double t_cut = t0 + std::max(0.0, -std::log(budget)) / settings.decay_rate;

  const std::vector<Complex> pts = full_vertex_chain(path, t_cut, t_cut);
  std::vector<std::pair<Complex, Complex>> segments;
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    if (std::abs(pts[i + 1] - pts[i]) > 0) segments.emplace_back(pts[i], pts[i + 1]);

  IntegralResult res = adaptive_chain(f, segments, settings);
  // remainder bound for the two truncated tails
  const Complex fl = f(pts.front());
  const Complex fr = f(pts.back());
  if (!finite(fl) || !finite(fr)) throw NonFiniteSample("integrate_along: non-finite tail sample");
  res.err_estimate += (std::abs(fl) + std::abs(fr)) / settings.decay_rate;
  return res;
}

Complex residue_sum(const std::vector<Complex>& residues) {
  CompensatedSum sum;
  for (Complex r : residues) sum.add(r);
  return sum.value();
}

ContourPath route_contour(const std::vector<PoleSequence>& upward,
                          const std::vector<PoleSequence>& downward,
                          std::pair<double, double> strip, double clearance) {
  if (!(strip.first < strip.second)) throw ConfigInvalid("route_contour: empty strip");
  if (!(clearance > 0)) throw ConfigInvalid("route_contour: clearance must be positive");
  const double h0 = 0.5 * (strip.first + strip.second);

  // Sequences are vertical; the binding member of each is its anchor.
  struct Column {
    double re;
    double lower, upper;  // admissible band for the path height at this Re
  };
  std::vector<Column> cols;
  const double inf = std::numeric_limits<double>::infinity();
  for (const auto& s : upward)
    cols.push_back({s.anchor.real(), -inf, s.anchor.imag() - clearance});
  for (const auto& s : downward)
    cols.push_back({s.anchor.real(), s.anchor.imag() + clearance, inf});
  if (cols.empty()) return ContourPath{{}, h0, h0};

  std::sort(cols.begin(), cols.end(), [](const Column& a, const Column& b) { return a.re < b.re; });

  // Merge columns closer than 2*clearance: the path cannot thread between them.
  struct Group {
    double re_lo, re_hi;
    double lower, upper;
  };
  std::vector<Group> groups;
  for (const Column& c : cols) {
    if (!groups.empty() && c.re - groups.back().re_hi <= 2.0 * clearance) {
      Group& g = groups.back();
      g.re_hi = c.re;
      g.lower = std::max(g.lower, c.lower);
      g.upper = std::min(g.upper, c.upper);
    } else {
      groups.push_back({c.re, c.re, c.lower, c.upper});
    }
  }

  ContourPath path;
  path.left_height = path.right_height = h0;
  for (const Group& g : groups) {
    if (g.lower > g.upper)
      throw ContourBlocked("route_contour: upward and downward sequences overlap near Re=" +
                           std::to_string(0.5 * (g.re_lo + g.re_hi)));
    if (h0 >= g.lower && h0 <= g.upper) continue;  // line already clears this group
    const double pad = std::min(0.45 * (g.upper - g.lower), 0.25 * clearance);
    const double h = std::clamp(h0, g.lower + pad, g.upper - pad);
    const double wl = g.re_lo - clearance;
    const double wr = g.re_hi + clearance;
    path.vertices.emplace_back(wl, h0);
    path.vertices.emplace_back(wl, h);
    path.vertices.emplace_back(wr, h);
    path.vertices.emplace_back(wr, h0);
  }
  return path;
}

double path_distance(const ContourPath& path, Complex p) {
  const double reach = std::abs(p.real()) + std::abs(p.imag()) + 10.0;
  const std::vector<Complex> pts = full_vertex_chain(path, reach, reach);
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < pts.size(); ++i)
    d = std::min(d, point_segment_distance(p, pts[i], pts[i + 1]));
  // beyond the sampled rays the path is horizontal; account for pure vertical offset
  d = std::min(d, std::abs(p.imag() - path.left_height));
  d = std::min(d, std::abs(p.imag() - path.right_height));
  return d;
}

bool path_separates(const ContourPath& path, const std::vector<PoleSequence>& upward,
                    const std::vector<PoleSequence>& downward, double clearance,
                    int members_per_sequence) {
  const int grid = std::max(1, static_cast<int>(std::lround(std::sqrt(double(members_per_sequence)))));
  const double reach = 1e6;

  auto height_band = [&](double x) {
    const std::vector<Complex> pts = full_vertex_chain(path, reach, reach);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
      const double x1 = pts[i].real(), x2 = pts[i + 1].real();
      if (x < std::min(x1, x2) - 1e-300 || x > std::max(x1, x2) + 1e-300) continue;
      if (x1 == x2) {
        lo = std::min({lo, pts[i].imag(), pts[i + 1].imag()});
        hi = std::max({hi, pts[i].imag(), pts[i + 1].imag()});
      } else {
        const double y = pts[i].imag() + (pts[i + 1].imag() - pts[i].imag()) * (x - x1) / (x2 - x1);
        lo = std::min(lo, y);
        hi = std::max(hi, y);
      }
    }
    return std::pair<double, double>(lo, hi);
  };

  auto check = [&](const PoleSequence& seq, bool above) {
    for (int m = 0; m < grid; ++m)
      for (int l = 0; l < grid; ++l) {
        const Complex p = seq.member(m, l);
        const auto [lo, hi] = height_band(p.real());
        if (above && !(p.imag() > hi)) return false;
        if (!above && !(p.imag() < lo)) return false;
        if (path_distance(path, p) < clearance * (1.0 - 1e-9)) return false;
      }
    return true;
  };

  for (const auto& s : upward)
    if (!check(s, true)) return false;
  for (const auto& s : downward)
    if (!check(s, false)) return false;
  return true;
}

}  // namespace cvk
