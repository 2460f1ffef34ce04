#pragma once

#include <utility>
#include <vector>

#include "cvk/numerics.hpp"
#include "cvk/qaskey.hpp"
#include "cvk/special.hpp"

namespace cvk {

struct FusionParams {
  BParameter bp;
  double th0 = 0, tht = 0, th1 = 0, thinf = 0;
  Complex sigma_s, sigma_t;
};

struct KernelValue {
  Complex value;
  double quadrature_err = 0.0;
  int residue_terms = 0;
};

// The non-degeneracy conditions needed by the polynomial limit (b^2
// irrational plus the eight inequalities); throws AssumptionViolated.
void check_fusion_assumptions(const FusionParams& p);

// eight semi-infinite pole sequences of the integrand: four upward anchored
// at -thinf +- sigma_s and -tht +- sigma_t, four downward at +-th1 - iQ/2 and
// +-th0 - thinf - tht - iQ/2
std::pair<std::vector<PoleSequence>, std::vector<PoleSequence>> fusion_pole_data(
    const FusionParams& p);

// log of the s_b-ratio integrand at x
Complex fusion_integrand_log(const FusionParams& p, Complex x);

// log of the g_b product prefactor in the kernel definition
Complex fusion_prefactor_log(const FusionParams& p);

// the contour integral alone (no prefactor)
KernelValue fusion_integral_only(const FusionParams& p, const QuadratureSettings& qs);

// the kernel itself: g_b prefactor times the routed contour integral
KernelValue fusion_kernel(const FusionParams& p, const QuadratureSettings& qs);

// renormalized kernel, evaluated as P_1 * integral of the same integrand
KernelValue fren(const FusionParams& p, const QuadratureSettings& qs);

// cross-check route: N * F with the normalization evaluated separately
KernelValue fren_via_normalization(const FusionParams& p, const QuadratureSettings& qs);

Complex fren_prefactor_log(const FusionParams& p);  // log P_1

enum class FusionOp {
  HF,        // acts on sigma_s, eigenvalue 2 cosh(2 pi beta sigma_t)
  HFDual,    // acts on sigma_t, eigenvalue 2 cosh(2 pi beta sigma_s)
  HM,        // acts on sigma_t (M-form), eigenvalue 2 cosh(2 pi beta sigma_s)
  HMDual,    // acts on sigma_s (M-form), eigenvalue 2 cosh(2 pi beta sigma_t)
  HRen,      // acts on sigma_s, eigenvalue 2 cosh(2 pi beta sigma_t)
  HRenDual,  // acts on sigma_t, eigenvalue 2 cosh(2 pi beta sigma_s)
};

// step is b or 1/b; coefficients are the closed Gamma / hyperbolic forms
ThreeTermOperator build_fusion_operator(FusionOp name, const FusionParams& p, double step);

// |Op f - lambda f| / max(1, |lambda f|) with f supplied as an evaluator of
// the shifted variable
double eigen_residual(const ThreeTermOperator& op,
                      const std::function<Complex(Complex)>& kernel_eval, Complex point,
                      Complex eigenvalue);

// parameter correspondence to the Askey-Wilson family
AWParams map_fusion_to_aw(const FusionParams& p);

// sigma_s^{(n)} = iQ/2 + th0 + tht + i b n
Complex fusion_sigma_s_n(const FusionParams& p, int n);

// F_ren at sigma_s = sigma_s^{(n)} + eps with crossed poles extracted
KernelValue fren_residue_corrected(const FusionParams& p, const QuadratureSettings& qs);

// limit of F_ren as sigma_s -> sigma_s^{(n)}: Richardson extrapolation over
// eps in {1e-2, 5e-3, 2.5e-3}
Complex aw_limit(int n, const FusionParams& p, const QuadratureSettings& qs);

// closed residue-formula value of the n = 0 limit
Complex aw_limit_closed0(const FusionParams& p);

// the P_1 * remaining-integral term at exactly sigma_s^{(0)} (the prefactor
// zero kills it; exposed so the vanishing can be asserted)
Complex aw_limit_second_term0(const FusionParams& p, const QuadratureSettings& qs);

}  // namespace cvk
