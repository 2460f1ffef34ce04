#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cvk/fusion.hpp"
#include "cvk/numerics.hpp"
#include "cvk/qaskey.hpp"
#include "cvk/special.hpp"

namespace cvk {

struct ConfluentParams {
  BParameter bp;
  double th0 = 0, tht = 0, thstar = 0;
  Complex nu, sigma_s;
  int k = 1;  // family index, k >= 1
};

// All k-dependence of the formulas flows through this record.
struct KParity {
  int k;
  int sign;        // (-1)^k
  int half_floor;  // floor(k/2)
  int half_floor_m1;  // floor((k-1)/2)
  int delta_k1;    // k odd (delta_{k,1} after period-2 reduction)
  int delta_k2;

  explicit KParity(int kk)
      : k(kk),
        sign(kk % 2 == 0 ? 1 : -1),
        half_floor(kk / 2),
        half_floor_m1((kk - 1) / 2),
        delta_k1(kk % 2 == 1 ? 1 : 0),
        delta_k2(kk % 2 == 0 ? 1 : 0) {}
};

void check_confluent_assumptions(const ConfluentParams& p);

// Delta(x) = Q^2/4 + x^2
Complex conformal_weight(Complex x, const BParameter& bp);

// three increasing and three decreasing pole sequences of I^{(k)}
std::pair<std::vector<PoleSequence>, std::vector<PoleSequence>> ck_pole_data(
    const ConfluentParams& p);

Complex ck_integrand_log(const ConfluentParams& p, Complex x);

// prefactor logs: raw P^{(k)} (universal-cover branch), the Hahn-side P_k,
// and the Jacobi-side P-hat^{(k)}
Complex ck_prefactor_log(const ConfluentParams& p);
Complex ck_ren_prefactor_log(const ConfluentParams& p);
Complex chat_ren_prefactor_log(const ConfluentParams& p);

// the contour integral of I^{(k)} alone (no prefactor)
KernelValue ck_integral_only(const ConfluentParams& p, const QuadratureSettings& qs);

KernelValue ck_kernel(const ConfluentParams& p, const QuadratureSettings& qs);
KernelValue ck_ren(const ConfluentParams& p, const QuadratureSettings& qs);
KernelValue chat_ren(const ConfluentParams& p, const QuadratureSettings& qs);

enum class ConfluentOp {
  Hck,            // acts on nu
  HckTilde,       // acts on sigma_s
  HckRen,         // acts on nu, conjugated by N_1
  HckRenTilde,    // acts on sigma_s, conjugated by N_1
  HchatRen,       // acts on nu, conjugated by N_3
  HchatRenTilde,  // acts on sigma_s, conjugated by N_3
};

ThreeTermOperator build_confluent_operator(ConfluentOp name, const ConfluentParams& p,
                                           double step);

// V_k(sigma, theta_t) appearing in the dual operators
Complex confluent_vk(const KParity& kp, double beta, Complex sigma, Complex tht, Complex th0,
                     Complex thstar);

// normalization factors and their shift ratios
Complex n1_log(const ConfluentParams& p);
Complex n2_log(const ConfluentParams& p);
Complex n3_log(const ConfluentParams& p);
Complex n4_log(const ConfluentParams& p);
Complex u_factor(const ConfluentParams& p, Complex nu, Complex thstar);   // N1(nu)/N1(nu+ib)
Complex v_factor(const ConfluentParams& p, Complex sigma);                // N1(s)/N1(s+ib)
Complex s_factor(const ConfluentParams& p, Complex thstar, Complex nu);   // N3(nu)/N3(nu+ib)
Complex r_factor(const ConfluentParams& p, Complex sigma);                // N3(s)/N3(s+ib)

// eigen-equation residuals; which = 1..4 picks (nu, b), (nu, 1/b),
// (sigma_s, b), (sigma_s, 1/b)
double verify_ck_eigen(const ConfluentParams& p, int which, const QuadratureSettings& qs);

// slowest contour tail rate over all nine shifted evaluations entering the
// eigen checks; points near a Stokes wall of the continuation come back ~0
double ck_eigen_tail_margin(const ConfluentParams& p);

// coefficient-to-eigenvalue amplification of the four eigen equations; the
// attainable residual in doubles scales with this number
double ck_eigen_condition(const ConfluentParams& p);

// X_k, Y_k, Z_k building blocks and psi_k of the direct eigenfunction proof
Complex xk_value(const ConfluentParams& p, Complex x, Complex nu);
Complex yk_value(const ConfluentParams& p, Complex x, Complex sigma);
Complex zk_value(const ConfluentParams& p, Complex x);
Complex psik_value(const ConfluentParams& p, Complex x, Complex nu);
std::map<std::string, double> xyz_identities(const ConfluentParams& p, Complex x);

// L_k(Lambda) M[...] - C_{2k or 2k-1} deviations for each Lambda
Complex confluent_m_value(const ConfluentParams& p, int eps, double lambda,
                          const QuadratureSettings& qs);
Complex confluent_l_log(const ConfluentParams& p, int eps, double lambda);
std::vector<double> confluent_limit_check(const ConfluentParams& p, int eps,
                                          const std::vector<double>& lambdas,
                                          const QuadratureSettings& qs);

// coefficient-wise convergence of the conjugated M-operators
struct OperatorConvergenceRow {
  double lambda;
  double max_coeff_deviation;
  double x_plus_dev, x_minus_dev;  // |X_{+-1}(Lambda) - 1|
  double aux_dev;                  // |chi e^{-pi b Lambda} - 1| (dual case only)
  double identity_residual;        // conjugated coefficient vs X_j * limit coefficient
};
enum class ConvergenceFamily { HMtoHck, HMTildeToHckTilde };
std::vector<OperatorConvergenceRow> operator_convergence_check(
    ConvergenceFamily family, const ConfluentParams& p, const std::vector<double>& lambdas);

Complex xj_factor(const ConfluentParams& p, int j, double lambda, Complex nu);
Complex jj_factor(const ConfluentParams& p, int j, double lambda, Complex nu);
Complex chi_factor(const ConfluentParams& p, double lambda, Complex sigma);

// discretization lattices
Complex nu_n(const ConfluentParams& p, int n);             // Hahn side
Complex sigma_s_disc(const ConfluentParams& p, int n);     // Jacobi side

// parameter maps (note q = e^{-2 i pi b^2} on this side of the scheme)
struct HahnMap {
  Complex alpha, beta, gamma, q;
};
struct JacobiMap {
  Complex alpha, beta, gamma, x, q;
};
HahnMap map_confluent_to_hahn(const ConfluentParams& p);
JacobiMap map_confluent_to_jacobi(const ConfluentParams& p);

// Hahn-side limit values of C_k^ren at nu = nu_n: the residue-sum route and
// the q-Pochhammer route (two independent in-repo paths)
Complex hahn_limit(int n, int k, const ConfluentParams& p);
Complex hahn_limit_pochhammer(int n, int k, const ConfluentParams& p);

// Jacobi-side limit values of C-hat_k^ren at sigma_s = sigma_s^{(n)}
Complex jacobi_limit(int n, int k, const ConfluentParams& p);
Complex jacobi_limit_pochhammer(int n, int k, const ConfluentParams& p);

// discretized operator checks
enum class DiscretizedCheck {
  hahn_recurrence,
  hahn_difference,
  jacobi_recurrence,
  jacobi_difference,
};
struct DiscretizedResult {
  double coefficient_deviation;  // operator coefficients vs polynomial coefficients
  double value_residual;         // the discretized equation applied to limit values
};
DiscretizedResult discretized_operator_check(DiscretizedCheck family, int n, int k,
                                             const ConfluentParams& p);

// scalar identities tying V_k and the hatted coefficients to h and d^+-
double vk_h_identity_residual(const ConfluentParams& p, Complex sigma);   // Hahn side
double hat_eigenvalue_identity_residual(const ConfluentParams& p, int n); // Jacobi side

}  // namespace cvk
