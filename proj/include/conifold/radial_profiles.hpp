#pragma once

#include <array>
#include <vector>

#include "conifold/errors.hpp"

namespace conifold {

// The three Candelas-de la Ossa radial geometries.  Scalar data throughout:
// s = r^2 is the squared ambient radius, eta(s) = s f'(s), and f is the
// Kahler potential profile.
//
//   cone      f(s) = (3/2) s^{2/3},  eta = s^{2/3}
//   resolved  eta solves eta^2 (eta + 3/2) = s^2;  f' = eta / s
//   deformed  eta = 2^{-1/3} t^{2/3} (sinh 2tau - 2tau)^{1/3} / tanh tau,
//             s = t cosh tau;  f(s) integrates (sinh 2tau - 2tau)^{1/3}
//
// Cone and deformed satisfy the Ricci-flatness ODE
//   s (s^2 - t^2) (eta^3)' + 3 t^2 eta^3 = 2 s^4.
enum class ProfileKind { cone, resolved, deformed };

struct Profile {
  ProfileKind kind = ProfileKind::cone;
  double t = 0.0;  // deformation modulus, > 0 iff deformed

  static Profile cone() { return {ProfileKind::cone, 0.0}; }
  static Profile resolved() { return {ProfileKind::resolved, 0.0}; }
  static Profile deformed(double t);
};

struct RadialSample {
  double r2 = 0.0;   // squared ambient radius
  double tau = 0.0;  // deformed only: r^2 = t cosh tau
  double eps = 0.0;  // deformed only: eps = t / r^2 in [0,1)
};

// Validates the domain (r2 > 0; r2 > t (1 + guard) for deformed).
RadialSample make_sample(const Profile& p, double r2, double guard = 1e-12);

struct ProfileEval {
  double eta = 0.0;
  double eta_prime = 0.0;  // d eta / ds
  double f = 0.0;
  double f1 = 0.0, f2 = 0.0, f3 = 0.0, f4 = 0.0;
  double ode_residual = 0.0;  // relative residual of the defining equation
};

double eta(const Profile& p, double r2);
double eta_prime(const Profile& p, double r2);

// Kahler potential profile.  Deformed: adaptive quadrature to abs_tol.
// Resolved: integral of eta/s anchored at f(1) = 0.
double f_value(const Profile& p, double s, double abs_tol = 1e-12);

// Relative residual of the profile's defining equation: the Ricci-flatness
// ODE for cone/deformed, |eta^2(eta+3/2) - s^2| / s^2 for resolved.
double ode_residual(const Profile& p, double s);

// f, f'..f'''', eta, eta' and the residual, with every analytic derivative
// cross-checked against a Richardson central difference of the next-lower
// one (step s*1e-5).  Mismatch beyond 1e-6 relative raises verification_error.
ProfileEval derivatives(const Profile& p, double s, bool fd_verify = true);

// ---------------------------------------------------------------------------
// Appendix monotonicity functions.  h(tau) = eta^3 / r^4 as a function of tau
// and the auxiliary h1 with h'(tau) = h1(tau) / (2 sinh^4 tau).  Evaluated in
// long double: near tau = 20 consecutive grid values of h differ by less than
// one double ulp of 1.
long double h_of_tau(long double tau);
long double h1_of_tau(long double tau);

struct MonotoneWitness {
  std::vector<double> tau_grid;
  std::vector<long double> h_values;
  std::vector<long double> h1_values;
  bool h_strictly_increasing = false;
  bool h1_positive = false;
};

MonotoneWitness monotonicity_witness(const std::vector<double>& tau_grid);

// ---------------------------------------------------------------------------
// Lemma-style certificates over grids.

struct ConvergenceTable {
  int k = 0;
  double delta = 0.0;
  std::vector<double> t_list;
  std::vector<double> sup_errors;  // sup_{[delta,1]} |f_t^{(k)} - f_0^{(k)}|
  bool strictly_decreasing = false;
};

// k in 0..2; all t in t_list must lie in (0, delta), delta in (0,1).
ConvergenceTable convergence_table(int k, double delta,
                                   const std::vector<double>& t_list,
                                   int grid_size);

struct RatioBounds {
  bool f1_band_holds = false;  // 1/2 <= f_t'/f_0' <= 2 on [delta', delta]
  bool f2_band_holds = false;
  double f1_ratio_min = 0, f1_ratio_max = 0;
  double f2_ratio_min = 0, f2_ratio_max = 0;
  double first_failure_s = 0;  // 0 when both bands hold
  double alpha_estimate = 0;   // largest t at this delta' with both bands holding
};

RatioBounds ratio_bounds(double delta_prime, double delta, double t,
                         int grid_size);

struct AsymptoticConstants {
  // sup over the grid of |f^{(k)}| r^{beta_k} (1-eps)^{gamma_k} for
  // (beta,gamma) = (2/3,0), (8/3,0), (14/3,1), (20/3,2), k = 1..4
  std::array<double, 4> sup_scaled{};
  double min_r23_eta_prime = 0, max_r23_eta_prime = 0;  // r^{2/3} eta'
  bool eta_prime_in_unit_interval = false;
};

AsymptoticConstants asymptotic_constants(double t,
                                         const std::vector<double>& r2_grid);

}  // namespace conifold
