#pragma once

#include "cvk/types.hpp"

namespace cvk {

// Coupling b with the derived quantities used everywhere downstream.
struct BParameter {
  double b;
  double Q;        // b + 1/b
  double c;        // 1 + 6 Q^2
  Complex q;       // e^{2 i pi b^2}
  Complex q_tilde; // e^{2 i pi / b^2}
  bool root_of_unity = false;  // set when q^m ~ 1 for some m <= 64

  explicit BParameter(double b_);

  double min_step() const { return b < 1.0 ? b : 1.0 / b; }
  double max_step() const { return b > 1.0 ? b : 1.0 / b; }
};

struct SpecialValue {
  enum class Kind { finite, pole };
  Kind kind = Kind::finite;
  Complex value;  // meaningful when finite
  int order = 0;  // pole order when kind == pole

  bool is_pole() const { return kind == Kind::pole; }
};

// Lattice bookkeeping: number of representations z = i(Q/2 + m b + l/b),
// m, l >= 0 within tolerance 1e-10 (zeros of s_b); poles are the mirror image.
int sb_zero_multiplicity(Complex z, const BParameter& bp);
int sb_pole_multiplicity(Complex z, const BParameter& bp);

// Defining integral representations, valid in their respective domains.
Complex sb_integral(Complex z, const BParameter& bp);  // |Im z| < Q/2
Complex gb_integral(Complex z, const BParameter& bp);  // Im z > -Q/2

// Full meromorphic continuations. Zeros come back as finite 0, poles as
// kind == pole with their lattice multiplicity.
SpecialValue sb(Complex z, const BParameter& bp);
SpecialValue gb(Complex z, const BParameter& bp);

// Value-or-throw variants for call sites that cannot tolerate a pole.
Complex sb_value(Complex z, const BParameter& bp);
Complex gb_value(Complex z, const BParameter& bp);

// log s_b and log g_b up to a multiple of 2*pi*i; throw SingularPoint on the
// pole/zero lattice. These are the workhorses for kernel integrands.
Complex log_sb(Complex z, const BParameter& bp);
Complex log_gb(Complex z, const BParameter& bp);

// Predicted ln s_b(z) in the limit Re z -> +-infinity (direction = +-1).
Complex sb_asymptotic(Complex z, const BParameter& bp, int direction);

// |Re z| beyond which log_sb switches to the asymptotic formula.
double sb_asymptotic_threshold(const BParameter& bp);

// Residue of s_b at p_{m,l} = -iQ/2 - i m b - i l / b (simple poles only).
Complex sb_residue(int m, int l, const BParameter& bp);

// s_b(x + i m b + i l / b) / s_b(x) by the closed q-Pochhammer product
// identities; m and l of either sign.
Complex sb_shift(Complex x, int m, int l, const BParameter& bp);

}  // namespace cvk
