#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cvk/types.hpp"

namespace cvk {

// A semi-infinite vertical lattice of poles: anchor + i*s*(m*step_b + l*step_binv)
// for m, l >= 0, with s = +1 (upward) or -1 (downward).
struct PoleSequence {
  enum class Orientation { upward, downward };

  Complex anchor;
  Orientation orientation = Orientation::upward;
  double step_b = 1.0;
  double step_binv = 1.0;
  std::string label;

  Complex member(int m, int l) const {
    const double s = orientation == Orientation::upward ? 1.0 : -1.0;
    return anchor + iu * (s * (m * step_b + l * step_binv));
  }
};

// Piecewise-linear path from -infinity to +infinity. With no vertices it is
// the horizontal line Im x = left_height (== right_height). Otherwise it runs
// horizontally at left_height up to the first vertex, through the vertices,
// then horizontally at right_height.
struct ContourPath {
  std::vector<Complex> vertices;
  double left_height = 0.0;
  double right_height = 0.0;
};

struct QuadratureSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;
  double decay_rate = 1.0;          // known exponential decay of the integrand, 1/length
  double truncation_margin = 1e-2;  // tails cut where the bound drops below margin*abs_tol
};

using Integrand = std::function<Complex(Complex)>;

struct IntegralResult {
  Complex value;
  double err_estimate = 0.0;
};

// Routes a contour through the strip separating upward from downward pole
// sequences. Throws ContourBlocked when the sequences overlap.
ContourPath route_contour(const std::vector<PoleSequence>& upward,
                          const std::vector<PoleSequence>& downward,
                          std::pair<double, double> strip, double clearance);

// Adaptive Gauss-Kronrod integral over the straight segment [a, b].
IntegralResult integrate_segment(const Integrand& f, Complex a, Complex b,
                                 const QuadratureSettings& settings);

// Adaptive integral over the polyline through the given points, refined
// against a single global error budget.
IntegralResult integrate_chain(const Integrand& f, const std::vector<Complex>& points,
                               const QuadratureSettings& settings);

// Integral over the full path; tails truncated using settings.decay_rate.
IntegralResult integrate_along(const Integrand& f, const ContourPath& path,
                               const QuadratureSettings& settings);

// Compensated sum of residue contributions already scaled by -2*pi*i.
Complex residue_sum(const std::vector<Complex>& residues);

// Euclidean distance from a point to the path (vertical clearance is never
// smaller than this, so it is a sound separation predicate).
double path_distance(const ContourPath& path, Complex p);

// True when p lies strictly above (resp. below) every point of the path at
// nearby real parts; used by the separation predicate.
bool path_separates(const ContourPath& path, const std::vector<PoleSequence>& upward,
                    const std::vector<PoleSequence>& downward, double clearance,
                    int members_per_sequence = 100);

}  // namespace cvk
