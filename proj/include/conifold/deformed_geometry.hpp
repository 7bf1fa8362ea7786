#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "conifold/errors.hpp"
#include "conifold/frame_algebra.hpp"

namespace conifold {

// Special point q = (sqrt((r^2-t)/2), i sqrt((r^2-t)/2), 0, sqrt(t)) on the
// deformed conifold {sum w_i^2 = t}; homogeneity makes it sufficient for all
// curvature statements.
struct QPoint {
  double t = 0.0, r2 = 0.0;
  std::array<cplx, 4> w{};
  double constraint_residual = 0.0;  // |sum w^2 - t| / t
  double radius_residual = 0.0;      // |sum |w|^2 - r^2| / r^2
};

QPoint q_point(double t, double r2);

// Holomorphic chart (z1,z2,z3) centered at q in which the CO metric is the
// identity: z-offsets map through the diagonal scalings and the u-shear to
// (w1,w2,w3), and w4 rides on the branch through +sqrt(t).
struct ChartMap {
  double t = 0.0, r2_q = 0.0, eta_q = 0.0;
  double scale1 = 0.0, scale2 = 0.0, scale3 = 0.0;
  std::array<cplx, 4> w_q{};

  std::array<cplx, 4> w_of(const std::array<cplx, 3>& zeta) const;
  double r2_of(const std::array<cplx, 3>& zeta) const;
  // exact Wirtinger derivatives of r^2 through the chart
  Eigen::Vector3cd dr2(const std::array<cplx, 3>& zeta) const;
  Eigen::Matrix3cd dr2_mixed(const std::array<cplx, 3>& zeta) const;   // d_i dbar_j
  Eigen::Matrix3cd dr2_holo2(const std::array<cplx, 3>& zeta) const;  // d_i d_j
};

ChartMap chart_at(const QPoint& q);

// Partial derivatives of r^2 at q in the z chart, to fourth order; the
// analytic entries are the appendix closed forms, cross-checked against the
// chart finite-difference oracle.
struct PartialTable {
  double t = 0.0, r2 = 0.0, eta = 0.0, eps = 0.0;
  Eigen::Vector3cd d1;      // (r2)_i
  Eigen::Matrix3cd mixed;   // (r2)_{i jbar}
  Eigen::Matrix3cd holo2;   // (r2)_{i j}
  cplx d3[3][3][3];         // (r2)_{i k qbar}, symmetric in (i,k)
  cplx d4[3][3][3][3];      // (r2)_{i jbar k lbar} as [i][k][j][l], symmetric
                            // in (i,k) and (j,l)

  cplx third(int i, int k, int qbar) const { return d3[i][k][qbar]; }
  cplx fourth(int i, int jbar, int k, int lbar) const {
    return d4[i][k][jbar][lbar];
  }
};

PartialTable r2_partials(double t, double r2, bool fd_verify = true);

struct MetricAtQ {
  Eigen::Matrix3cd g;          // f' (r2)_{i jb} + f'' (r2)_i (r2)_jb
  Eigen::Matrix3cd ddbar_r2;   // the Euclidean pullback (r2)_{i jb}
  Eigen::Matrix3cd dr2_outer;  // (r2)_i (r2)_jb
  double max_dev_from_identity = 0.0;
};

MetricAtQ metric_at_q(double t, double r2);

struct CurvatureTensor {
  double t = 0.0, r2 = 0.0;
  cplx R[3][3][3][3];  // R_{i jbar k lbar}

  double scale() const;          // r^{-4/3} = (r^2)^{-2/3}
  double max_abs() const;
  double kahler_symmetry_dev() const;  // relative, over R_ijkl = R_kjil = R_ilkj
  double conj_symmetry_dev() const;    // conj(R_ijkl) = R_jilk
  double ricci_trace_max() const;      // max_i |sum_j R_{i ib j jb}| etc.
};

// analytic assembly: curvature of i ddbar f_t at q through the chain rule
// over the partial table
CurvatureTensor curvature_at_q(double t, double r2);

// independent finite-difference oracle: the metric field g(z) from exact
// chart derivatives of r^2 and the scalar f_t, differentiated numerically
CurvatureTensor curvature_fd_oracle(double t, double r2);

struct CurvatureComparison {
  double max_rel_dev_dominant = 0.0;  // on components >= dominance_cut * max
  double dominance_cut = 0.1;
  double max_abs_dev = 0.0;
};

CurvatureComparison compare_curvature(const CurvatureTensor& a,
                                      const CurvatureTensor& b,
                                      double dominance_cut = 0.1);

struct VolumeGradient {
  double vol_ratio = 0.0;   // det(g_co) / det(g_e);  vol_ratio * r^2 = 2/3
  double grad_const = 0.0;  // max generalized eigenvalue, |grad f|_e^2 <= C r^{-2/3} |grad f|_co^2
};

VolumeGradient volume_and_gradient_comparison(double t, double r2);

// Tangent eigenvalues of the CO metric on {r^2 = const} against the
// left-invariant sphere normalization, extrapolated to the tip; the limit is
// (1/2)(2 t^2/3)^{1/3}.
struct S3LimitRow {
  double eps = 0.0;
  std::array<double, 5> eigenvalues{};
};

struct S3Limit {
  std::vector<S3LimitRow> rows;
  double extrapolated = 0.0;
  double formula_value = 0.0;  // (1/2)(2 t^2 / 3)^{1/3}
};

S3Limit s3_limit(double t, const std::vector<double>& eps_list);

}  // namespace conifold
