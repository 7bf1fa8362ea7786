#pragma once

#include <random>
#include <vector>

#include "conifold/cutoffs.hpp"
#include "conifold/frame_algebra.hpp"

namespace conifold {

// Point on the resolved-side neighborhood, coordinates (z, u, v) with
// r^2 = (1 + |z|^2)(|u|^2 + |v|^2) and Gamma = (1 + |z|^2)^{1/2}.
// The coframe is l1 = dz, l2 = (ub du + vb dv)/rho, l3 = (v du - u dv)/rho
// with rho = r/Gamma.
struct ResolvedPoint {
  cplx z, u, v;

  double r2() const {
    return (1.0 + std::norm(z)) * (std::norm(u) + std::norm(v));
  }
  double r() const { return std::sqrt(r2()); }
  double gamma() const { return std::sqrt(1.0 + std::norm(z)); }
  double rho() const { return std::sqrt(std::norm(u) + std::norm(v)); }
};

// polynomial in (z, zbar) of degree <= 3 in each variable
class PolyZ {
 public:
  static constexpr int deg = 3;
  cplx coef[deg + 1][deg + 1] = {};  // coef[m][n] z^m zbar^n

  cplx eval(cplx z) const;
  PolyZ dz() const;
  PolyZ dzbar() const;
  bool is_zero() const;
  // real-valued on C iff the coefficient array is Hermitian
  static PolyZ real_poly(double c00, cplx c10, cplx c11);
};

// First and second Wirtinger derivatives of a real scalar at a point:
// d = (F_z, F_u, F_v), mixed(a,b) = F_{a bbar} over a,b in {z,u,v}.
struct ScalarJet2 {
  double value = 0.0;
  Eigen::Vector3cd d = Eigen::Vector3cd::Zero();
  Eigen::Matrix3cd mixed = Eigen::Matrix3cd::Zero();
};

FrameForm partial_form(const ScalarJet2& jet, const ResolvedPoint& p);  // dF (1,0)
FrameForm partial_bar_form(const ScalarJet2& jet, const ResolvedPoint& p);
FrameForm i_ddbar_form(const ScalarJet2& jet, const ResolvedPoint& p);

ScalarJet2 jet_r2(const ResolvedPoint& p);
// sigma(t) with t = n^2 r^2, composed through jet_r2
ScalarJet2 jet_sigma_t(const SmoothStep& sigma, int n, const ResolvedPoint& p);

// Model for the potential split h = h1 + h2 near the exceptional curve:
// h1 = a u + conj(a u) + b v + conj(b v) with a, b polynomials in (z, zbar),
// h2 = P(z,zbar)(|u|^2+|v|^2) + 2 Re(Q(z,zbar) u vbar) so that h2 = O(r^2)
// and its first fiber derivatives vanish on the zero section.
struct ScenarioH {
  PolyZ a, b;
  PolyZ h2_p;  // real-valued
  PolyZ h2_q;
  double ambient_scale = 1.0;  // kappa in the model ambient w^2 = kappa 2 sum(L_ii)
  double fs_scale = 1.0;       // scale of the model base form Gamma^{-4} l_{1 1b}

  static ScenarioH trivial();
  static ScenarioH default_scenario();
  static ScenarioH random_scenario(std::mt19937_64& rng);

  double h1(const ResolvedPoint& p) const;
  double h2(const ResolvedPoint& p) const;
  ScalarJet2 jet_h1(const ResolvedPoint& p) const;
  ScalarJet2 jet_h2(const ResolvedPoint& p) const;
};

// ---------------------------------------------------------------------------

struct BaseForms {
  FrameForm ddbar_r2;   // i ddbar r^2
  FrameForm dr2_wedge;  // i dr^2 ^ dbar r^2
  FrameForm omega_co0;  // i ddbar f0, f0 = (3/2)(r^2)^{2/3}
  FrameForm omega_co;   // smooth resolved CO metric, adds Gamma^{-4} l_{1 1b}
};

BaseForms base_forms(const ResolvedPoint& p);

// Glued (2,2)-form Phi = chi'(s)(i ddbar f0)^2
//   + (2/3) n^{4/3} (r^2)^{-2/3} chi''(s) (i dr^2 ^ dbar r^2) ^ (i ddbar f0),
// s = n^{4/3} (r^2)^{2/3}.  Reduces to omega_co0^2 wherever chi' = 1.
FrameForm phi_form(int n, const ChiSpec& chi, const ResolvedPoint& p);

// Measured constant in n^{2/3} Phi >= -C2 n^{-1} sum_{k != j} l_kk ^ l_jj
// over r in [2/n, r_max) at z = 0.
double measure_c2_hat(int n, const ChiSpec& chi, int grid_points = 400,
                      double r_max = 0.999);

// ---------------------------------------------------------------------------

struct CoefficientBlock {
  Eigen::Matrix3cd c = Eigen::Matrix3cd::Zero();      // c_{i jb}
  Eigen::Vector3cd d = Eigen::Vector3cd::Zero();      // d_{1 2b}, d_{2 2b}, d_{3 2b}
  Eigen::Matrix3cd alpha = Eigen::Matrix3cd::Zero();  // alpha_{i jb}
};

// c and d blocks only (the alpha entries need n and sigma)
CoefficientBlock coefficients_cd(const ScenarioH& s, const ResolvedPoint& p);

// full block on the annulus r in [1/n, 2/n]
CoefficientBlock alpha_matrix(const ScenarioH& s, int n,
                              const SmoothStep& sigma, const ResolvedPoint& p);

// Direct wedge expansion of
//   -i(h1 ddbar sigma(t) + dsigma(t) ^ dbar h1 + dh1 ^ dbar sigma(t)) ^ i ddbar h1
// in the Lambda basis; the alpha-assembled right-hand side must reproduce it.
Lambda22 expansion_208(const ScenarioH& s, int n, const SmoothStep& sigma,
                       const ResolvedPoint& p);

// n sum_{l=2,3} (a_1l L_1l + a_l1 L_l1) + sum_{k,l=2,3} a_kl L_kl
Lambda22 alpha_assembled_rhs(const CoefficientBlock& blk, int n);

// The h2 part of the glued form: the (1,1) combination of h2 with sigma(t)
// wedged against (2 omega_E + i ddbar(2 h1 + h2)); its Lambda matrix feeds
// the measured C3.
Lambda22 h2_third_term(const ScenarioH& s, int n, const SmoothStep& sigma,
                       const ResolvedPoint& p);

// 3x3 matrix of the positivity certificate, entries exactly as the glued-form
// lower bound prescribes on the annulus
Lambda22 e_matrix(const ScenarioH& s, double C0, int n, const ChiSpec& chi,
                  const SmoothStep& sigma, const ResolvedPoint& p,
                  double C3_hat);

// ---------------------------------------------------------------------------

struct AnnulusGrid {
  int n_z = 5;      // per axis over the chart square |Re z|,|Im z| <= 2
  int n_r = 3;      // radii across [1/n, 2/n]
  int n_dir = 3;    // mixing angle between |u| and |v|
  int n_phase = 4;  // phases of u and v
  std::vector<ResolvedPoint> points(int n) const;
};

struct PositivitySearchResult {
  std::vector<int> n_list;
  std::vector<double> c0_star;  // per n; smallest C0 with all minors positive
  std::vector<double> c3_hat;   // measured per n
  double c2_hat = 0.0;
  bool monotone_nonincreasing = false;
  bool outer_check_ok = false;
  double outer_margin = 0.0;  // min eigenvalue of the outer-region bound
};

// Bisection on C0 for each n over the annulus grid; also checks the outer
// region bound w^2 - 3 C0 C2 n^{-1} omega_co^2 > 0 for the model ambient form.
PositivitySearchResult positivity_search(const ScenarioH& s,
                                         const std::vector<int>& n_list,
                                         const AnnulusGrid& grid,
                                         double c0_max = 1e6, int jobs = 1);

}  // namespace conifold
