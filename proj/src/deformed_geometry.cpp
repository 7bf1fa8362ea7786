#include "conifold/deformed_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "conifold/radial_profiles.hpp"

namespace conifold {

namespace {

constexpr cplx kI{0.0, 1.0};

double sq(double x) { return x * x; }

}  // namespace

QPoint q_point(double t, double r2) {
  if (!(t > 0.0) || !(r2 >= t))
    throw domain_error("q_point: need r2 >= t > 0");
  QPoint q;
  q.t = t;
  q.r2 = r2;
  double a = std::sqrt(0.5 * (r2 - t));
  q.w = {cplx(a, 0), cplx(0, a), cplx(0, 0), cplx(std::sqrt(t), 0)};
  cplx sum2 = 0.0;
  double raw = 0.0;
  for (const cplx& w : q.w) {
    sum2 += w * w;
    raw += std::norm(w);
  }
  q.constraint_residual = std::abs(sum2 - t) / t;
  q.radius_residual = std::abs(raw - r2) / r2;
  return q;
}

ChartMap chart_at(const QPoint& q) {
  ChartMap c;
  c.t = q.t;
  c.r2_q = q.r2;
  c.eta_q = eta(Profile::deformed(q.t), q.r2);
  double r2 = q.r2, t = q.t;
  c.scale1 = std::sqrt(2.0 * t * c.eta_q / (r2 * (r2 + t)));
  c.scale2 = std::sqrt(4.0 * r2 * r2 / (3.0 * sq(c.eta_q) * (r2 + t)));
  c.scale3 = std::sqrt(c.eta_q / r2);
  c.w_q = q.w;
  return c;
}

namespace {

// constant Jacobian dw_a/dzeta_j for a = 0..2 (w4 handled implicitly)
Eigen::Matrix3cd chart_jacobian(const ChartMap& c) {
  Eigen::Matrix3cd J = Eigen::Matrix3cd::Zero();
  double r2 = c.r2_q, t = c.t;
  J(0, 0) = (2.0 * t / (r2 + t)) / c.scale1;
  J(0, 1) = -kI * ((r2 - t) / (r2 + t)) / c.scale2;
  J(1, 1) = 1.0 / c.scale2;
  J(2, 2) = 1.0 / c.scale3;
  return J;
}

}  // namespace

std::array<cplx, 4> ChartMap::w_of(const std::array<cplx, 3>& zeta) const {
  Eigen::Matrix3cd J = chart_jacobian(*this);
  std::array<cplx, 4> w;
  for (int a = 0; a < 3; ++a) {
    w[a] = w_q[a];
    for (int j = 0; j < 3; ++j) w[a] += J(a, j) * zeta[j];
  }
  cplx arg = t - w[0] * w[0] - w[1] * w[1] - w[2] * w[2];
  w[3] = std::sqrt(arg);  // principal branch passes through +sqrt(t)
  return w;
}

double ChartMap::r2_of(const std::array<cplx, 3>& zeta) const {
  std::array<cplx, 4> w = w_of(zeta);
  return std::norm(w[0]) + std::norm(w[1]) + std::norm(w[2]) + std::norm(w[3]);
}

Eigen::Vector3cd ChartMap::dr2(const std::array<cplx, 3>& zeta) const {
  Eigen::Matrix3cd J = chart_jacobian(*this);
  std::array<cplx, 4> w = w_of(zeta);
  Eigen::Vector3cd out = Eigen::Vector3cd::Zero();
  for (int j = 0; j < 3; ++j) {
    cplx dw4 = 0.0;
    for (int a = 0; a < 3; ++a) dw4 += w[a] * J(a, j);
    dw4 = -dw4 / w[3];
    cplx acc = std::conj(w[3]) * dw4;
    for (int a = 0; a < 3; ++a) acc += std::conj(w[a]) * J(a, j);
    out(j) = acc;
  }
  return out;
}

Eigen::Matrix3cd ChartMap::dr2_mixed(const std::array<cplx, 3>& zeta) const {
  Eigen::Matrix3cd J = chart_jacobian(*this);
  std::array<cplx, 4> w = w_of(zeta);
  Eigen::Vector3cd dw4;
  for (int j = 0; j < 3; ++j) {
    cplx acc = 0.0;
    for (int a = 0; a < 3; ++a) acc += w[a] * J(a, j);
    dw4(j) = -acc / w[3];
  }
  // pullback Euclidean metric: sum_a (dw_a/dz_i) conj(dw_a/dz_j)
  Eigen::Matrix3cd m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      cplx acc = dw4(i) * std::conj(dw4(j));
      for (int a = 0; a < 3; ++a) acc += J(a, i) * std::conj(J(a, j));
      m(i, j) = acc;
    }
  return m;
}

Eigen::Matrix3cd ChartMap::dr2_holo2(const std::array<cplx, 3>& zeta) const {
  Eigen::Matrix3cd J = chart_jacobian(*this);
  std::array<cplx, 4> w = w_of(zeta);
  Eigen::Vector3cd dw4;
  for (int j = 0; j < 3; ++j) {
    cplx acc = 0.0;
    for (int a = 0; a < 3; ++a) acc += w[a] * J(a, j);
    dw4(j) = -acc / w[3];
  }
  Eigen::Matrix3cd m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      cplx jj = 0.0;
      for (int a = 0; a < 3; ++a) jj += J(a, i) * J(a, j);
      cplx d2w4 = -(jj + dw4(i) * dw4(j)) / w[3];
      m(i, j) = std::conj(w[3]) * d2w4;
    }
  return m;
}

// ---------------------------------------------------------------------------

namespace {

struct FdSteps {
  double h = 1e-4;
};

// keep the stencil well inside the branch of w4
FdSteps fd_steps(const ChartMap& c) {
  Eigen::Matrix3cd J = chart_jacobian(c);
  double lin = 0.0, quad = 0.0;
  for (int j = 0; j < 3; ++j) {
    cplx acc = 0.0;
    cplx jj = 0.0;
    for (int a = 0; a < 3; ++a) {
      acc += c.w_q[a] * J(a, j);
      jj += J(a, j) * J(a, j);
    }
    lin = std::max(lin, 2.0 * std::abs(acc));
    quad = std::max(quad, std::abs(jj));
  }
  double margin = c.t;
  double h_lin = lin > 0 ? margin / lin : 1e9;
  double h_quad = quad > 0 ? std::sqrt(margin / quad) : 1e9;
  FdSteps s;
  s.h = std::min({1e-4, 0.02 * h_lin, 0.02 * h_quad});
  return s;
}

// single Wirtinger derivative of a complex-valued function of zeta, central
// differences with one Richardson step
template <class F>
cplx wirt_fd(const F& f, std::array<cplx, 3> zeta, int j, bool bar, double h) {
  auto d = [&](double hh) {
    std::array<cplx, 3> zp = zeta, zm = zeta, zpi = zeta, zmi = zeta;
    zp[j] += hh;
    zm[j] -= hh;
    zpi[j] += cplx(0, hh);
    zmi[j] -= cplx(0, hh);
    cplx dx = (f(zp) - f(zm)) / (2.0 * hh);
    cplx dy = (f(zpi) - f(zmi)) / (2.0 * hh);
    return bar ? 0.5 * (dx + kI * dy) : 0.5 * (dx - kI * dy);
  };
  cplx d1 = d(h), d2 = d(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace

PartialTable r2_partials(double t, double r2, bool fd_verify) {
  if (!(r2 > t) || !(t > 0.0))
    throw domain_error("r2_partials: need r2 > t > 0");
  PartialTable tab;
  tab.t = t;
  tab.r2 = r2;
  tab.eta = eta(Profile::deformed(t), r2);
  tab.eps = t / r2;
  const double e = tab.eta, eps = tab.eps;
  const double r = std::sqrt(r2);
  const double omf = std::sqrt(1.0 - eps), opf = std::sqrt(1.0 + eps);

  tab.d1.setZero();
  tab.d1(1) = -0.5 * std::sqrt(6.0) * kI * std::sqrt(r2 - t) *
              std::sqrt(r2 + t) * e / r2;

  tab.mixed.setZero();
  tab.mixed(0, 0) = r2 / e;
  tab.mixed(2, 2) = r2 / e;
  tab.mixed(1, 1) = 1.5 * e * e / r2;

  tab.holo2.setZero();
  tab.holo2(0, 0) = -r2 / e;
  tab.holo2(2, 2) = -r2 / e;
  tab.holo2(1, 1) = -1.5 * e * e / r2 * eps;

  for (auto& pl : tab.d3)
    for (auto& row : pl)
      for (cplx& v : row) v = 0.0;
  const double r3 = r * r2;  // r^3
  cplx v111 = r3 * omf / (std::sqrt(t) * std::pow(e, 1.5) * opf);
  cplx v121 = -kI * 0.5 * std::sqrt(6.0) * omf / opf;
  cplx v212 = 1.5 * std::sqrt(t) * std::pow(e, 1.5) * omf / (r3 * opf);
  cplx v222 = -kI * 0.75 * std::sqrt(6.0) * t * e * e * e * omf /
              (r3 * r3 * opf);
  tab.d3[0][0][0] = v111;  // (r2)_{1 1b 1}
  tab.d3[0][0][1] = v121;  // (r2)_{1 2b 1}
  tab.d3[1][1][0] = v212;  // (r2)_{2 1b 2}
  tab.d3[1][1][1] = v222;  // (r2)_{2 2b 2}
  tab.d3[2][2][0] = v111;  // (r2)_{3 1b 3}
  tab.d3[2][2][1] = v121;  // (r2)_{3 2b 3}

  for (auto& a : tab.d4)
    for (auto& b : a)
      for (auto& c : b)
        for (cplx& v : c) v = 0.0;
  double q4 = r2 * r2 / (t * e * e);
  double q22 = 1.5 * e / r2;
  double q2222 = 2.25 * t * std::pow(e, 4.0) / std::pow(r2, 4.0);
  tab.d4[0][0][0][0] = q4;     // (r2)_{1 1b 1 1b}
  tab.d4[0][0][1][1] = q22;    // (r2)_{1 2b 1 2b}
  tab.d4[1][1][0][0] = q22;    // (r2)_{2 1b 2 1b}
  tab.d4[1][1][1][1] = q2222;  // (r2)_{2 2b 2 2b}
  tab.d4[0][0][2][2] = q4;     // (r2)_{1 3b 1 3b}
  tab.d4[2][2][0][0] = q4;     // (r2)_{3 1b 3 1b}
  tab.d4[2][2][2][2] = q4;     // (r2)_{3 3b 3 3b}
  tab.d4[1][1][2][2] = q22;    // (r2)_{2 3b 2 3b}
  tab.d4[2][2][1][1] = q22;    // (r2)_{3 2b 3 2b}

  if (fd_verify) {
    ChartMap chart = chart_at(q_point(t, r2));
    FdSteps st = fd_steps(chart);
    std::array<cplx, 3> zero{};

    // center-point identities: the exact chart derivatives must reproduce
    // the analytic table before any differencing
    Eigen::Vector3cd d1c = chart.dr2(zero);
    Eigen::Matrix3cd mixc = chart.dr2_mixed(zero);
    Eigen::Matrix3cd holc = chart.dr2_holo2(zero);
    double s1 = tab.d1.cwiseAbs().maxCoeff();
    double s2 = tab.mixed.cwiseAbs().maxCoeff();
    if ((d1c - tab.d1).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + s1) ||
        (mixc - tab.mixed).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + s2) ||
        (holc - tab.holo2).cwiseAbs().maxCoeff() > 1e-9 * (1.0 + s2))
      throw verification_error("r2_partials: chart derivatives disagree");

    // order 1 and 2 by pure differencing of r^2 itself
    auto r2f = [&](const std::array<cplx, 3>& z) {
      return cplx(chart.r2_of(z), 0.0);
    };
    for (int j = 0; j < 3; ++j) {
      cplx fd = wirt_fd(r2f, zero, j, false, st.h);
      if (std::abs(fd - tab.d1(j)) > 1e-5 * (1.0 + s1))
        throw verification_error("r2_partials: FD mismatch at order 1");
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        auto di = [&](const std::array<cplx, 3>& z) {
          return chart.dr2(z)(i);
        };
        cplx fd = wirt_fd(di, zero, j, true, st.h);
        if (std::abs(fd - tab.mixed(i, j)) > 1e-5 * (1.0 + s2))
          throw verification_error("r2_partials: FD mismatch at order 2");
        cplx fdh = wirt_fd(di, zero, j, false, st.h);
        if (std::abs(fdh - tab.holo2(i, j)) > 1e-5 * (1.0 + s2))
          throw verification_error("r2_partials: FD mismatch at order 2 holo");
      }

    // order 3: differentiate the exact mixed table once holomorphically
    double s3 = 0.0;
    for (const auto& pl : tab.d3)
      for (const auto& row : pl)
        for (const cplx& v : row) s3 = std::max(s3, std::abs(v));
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int q = 0; q < 3; ++q) {
          auto mkq = [&](const std::array<cplx, 3>& z) {
            return chart.dr2_mixed(z)(k, q);
          };
          cplx fd = wirt_fd(mkq, zero, i, false, st.h);
          if (std::abs(fd - tab.d3[i][k][q]) > 1e-3 * (1.0 + s3))
            throw verification_error("r2_partials: FD mismatch at order 3");
        }

    // order 4: two derivatives on the exact mixed table
    double s4 = 0.0;
    for (const auto& a : tab.d4)
      for (const auto& b : a)
        for (const auto& c : b)
          for (const cplx& v : c) s4 = std::max(s4, std::abs(v));
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k)
        for (int j = 0; j < 3; ++j)
          for (int l = 0; l < 3; ++l) {
            auto mkl = [&](const std::array<cplx, 3>& z) {
              return chart.dr2_mixed(z)(k, l);
            };
            auto once = [&](const std::array<cplx, 3>& z) {
              return wirt_fd(mkl, z, i, false, st.h);
            };
            cplx fd = wirt_fd(once, zero, j, true, st.h);
            if (std::abs(fd - tab.d4[i][k][j][l]) > 1e-3 * (1.0 + s4))
              throw verification_error("r2_partials: FD mismatch at order 4");
          }
  }
  return tab;
}

// ---------------------------------------------------------------------------

MetricAtQ metric_at_q(double t, double r2) {
  PartialTable tab = r2_partials(t, r2, false);
  ProfileEval pe = derivatives(Profile::deformed(t), r2, false);
  MetricAtQ m;
  m.ddbar_r2 = tab.mixed;
  m.dr2_outer = tab.d1 * tab.d1.adjoint();
  m.g = pe.f1 * m.ddbar_r2 + pe.f2 * m.dr2_outer;
  m.max_dev_from_identity =
      (m.g - Eigen::Matrix3cd::Identity()).cwiseAbs().maxCoeff();
  if (m.max_dev_from_identity > 1e-8)
    throw verification_error("metric_at_q: chart is not orthonormal");
  return m;
}

double CurvatureTensor::scale() const { return std::pow(r2, -2.0 / 3.0); }

double CurvatureTensor::max_abs() const {
  double mx = 0.0;
  for (const auto& a : R)
    for (const auto& b : a)
      for (const auto& c : b)
        for (const cplx& v : c) mx = std::max(mx, std::abs(v));
  return mx;
}

double CurvatureTensor::kahler_symmetry_dev() const {
  double mx = max_abs(), dev = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          dev = std::max(dev, std::abs(R[i][j][k][l] - R[k][j][i][l]));
          dev = std::max(dev, std::abs(R[i][j][k][l] - R[i][l][k][j]));
        }
  return mx > 0 ? dev / mx : 0.0;
}

double CurvatureTensor::conj_symmetry_dev() const {
  double mx = max_abs(), dev = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          dev = std::max(dev, std::abs(std::conj(R[i][j][k][l]) -
                                       R[j][i][l][k]));
  return mx > 0 ? dev / mx : 0.0;
}

double CurvatureTensor::ricci_trace_max() const {
  // Ricci at the identity-metric point: sum_k R_{i jbar k kbar}
  double mx = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      cplx tr = 0.0;
      for (int k = 0; k < 3; ++k) tr += R[i][j][k][k];
      mx = std::max(mx, std::abs(tr));
    }
  return mx;
}

CurvatureTensor curvature_at_q(double t, double r2) {
  if (!(r2 >= t * (1.0 + 1e-3) * (1.0 - 1e-12)))
    throw domain_error("curvature_at_q: r2/t below the 1+1e-3 guard");
  PartialTable tb = r2_partials(t, r2, false);
  ProfileEval pe = derivatives(Profile::deformed(t), r2, false);
  const double f1 = pe.f1, f2 = pe.f2, f3 = pe.f3, f4 = pe.f4;

  auto d1 = [&](int i) { return tb.d1(i); };
  auto d1b = [&](int j) { return std::conj(tb.d1(j)); };
  auto mx = [&](int i, int j) { return tb.mixed(i, j); };
  auto hol = [&](int i, int k) { return tb.holo2(i, k); };
  auto hob = [&](int j, int l) { return std::conj(tb.holo2(j, l)); };
  auto d3 = [&](int i, int k, int q) { return tb.d3[i][k][q]; };
  // (r2)_{i jbar lbar} = conj((r2)_{j l ibar})
  auto d3b = [&](int i, int j, int l) { return std::conj(tb.d3[j][l][i]); };

  // third derivatives of f(r2): (f)_{i k qbar}
  cplx T3[3][3][3];
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int q = 0; q < 3; ++q) {
        T3[i][k][q] = f3 * d1(i) * d1(k) * d1b(q) +
                      f2 * (hol(i, k) * d1b(q) + mx(i, q) * d1(k) +
                            mx(k, q) * d1(i)) +
                      f1 * d3(i, k, q);
      }

  CurvatureTensor out;
  out.t = t;
  out.r2 = r2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          // fourth derivative (f)_{i jbar k lbar}: sum over set partitions
          cplx F4 = f4 * d1(i) * d1b(j) * d1(k) * d1b(l);
          F4 += f3 * (mx(i, j) * d1(k) * d1b(l) + mx(i, l) * d1(k) * d1b(j) +
                      mx(k, j) * d1(i) * d1b(l) + mx(k, l) * d1(i) * d1b(j) +
                      hol(i, k) * d1b(j) * d1b(l) + hob(j, l) * d1(i) * d1(k));
          F4 += f2 * (mx(i, j) * mx(k, l) + mx(i, l) * mx(k, j) +
                      hol(i, k) * hob(j, l));
          F4 += f2 * (d3(i, k, j) * d1b(l) + d3(i, k, l) * d1b(j) +
                      d3b(i, j, l) * d1(k) + d3b(k, j, l) * d1(i));
          F4 += f1 * tb.fourth(i, j, k, l);

          cplx prod = 0.0;
          for (int q = 0; q < 3; ++q)
            prod += T3[i][k][q] * std::conj(T3[j][l][q]);
          out.R[i][j][k][l] = -F4 + prod;
        }
  return out;
}

CurvatureTensor curvature_fd_oracle(double t, double r2) {
  if (!(r2 >= t * (1.0 + 1e-3) * (1.0 - 1e-12)))
    throw domain_error("curvature_fd_oracle: r2/t below the guard");
  ChartMap chart = chart_at(q_point(t, r2));
  Profile prof = Profile::deformed(t);

  auto metric = [&](const std::array<cplx, 3>& z) {
    double s = chart.r2_of(z);
    ProfileEval pe = derivatives(prof, s, false);
    Eigen::Vector3cd d = chart.dr2(z);
    Eigen::Matrix3cd g = pe.f2 * (d * d.adjoint()) + pe.f1 * chart.dr2_mixed(z);
    return g;
  };

  FdSteps st = fd_steps(chart);
  std::array<cplx, 3> zero{};
  Eigen::Matrix3cd g0 = metric(zero);
  Eigen::Matrix3cd ginv = g0.inverse();

  auto curvature_at_step = [&](double h) {
    // dg[k](i,q) = d_k g_{i qbar};  ddg[k][l](i,j) = d_k dbar_l g_{i jbar}
    std::array<Eigen::Matrix3cd, 3> dg;
    for (int k = 0; k < 3; ++k) {
      Eigen::Matrix3cd m;
      for (int i = 0; i < 3; ++i)
        for (int q = 0; q < 3; ++q) {
          auto entry = [&](const std::array<cplx, 3>& z) {
            return metric(z)(i, q);
          };
          m(i, q) = wirt_fd(entry, zero, k, false, h);
        }
      dg[k] = m;
    }
    CurvatureTensor out;
    out.t = t;
    out.r2 = r2;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        Eigen::Matrix3cd ddg;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            auto entry = [&](const std::array<cplx, 3>& z) {
              auto once = [&](const std::array<cplx, 3>& zz) {
                return metric(zz)(i, j);
              };
              return wirt_fd(once, z, k, false, h);
            };
            ddg(i, j) = wirt_fd(entry, zero, l, true, h);
          }
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) {
            cplx corr = 0.0;
            for (int p = 0; p < 3; ++p)
              for (int q = 0; q < 3; ++q)
                corr += ginv(q, p) * dg[k](i, q) *
                        std::conj(dg[l](j, p));
            out.R[i][j][k][l] = -ddg(i, j) + corr;
          }
      }
    return out;
  };

  // one more Richardson level on top of the per-derivative extrapolation
  CurvatureTensor ch = curvature_at_step(st.h);
  CurvatureTensor ch2 = curvature_at_step(0.5 * st.h);
  CurvatureTensor out;
  out.t = t;
  out.r2 = r2;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          out.R[i][j][k][l] =
              (16.0 * ch2.R[i][j][k][l] - ch.R[i][j][k][l]) / 15.0;
  return out;
}

CurvatureComparison compare_curvature(const CurvatureTensor& a,
                                      const CurvatureTensor& b,
                                      double dominance_cut) {
  CurvatureComparison cmp;
  cmp.dominance_cut = dominance_cut;
  double mx = a.max_abs();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double dev = std::abs(a.R[i][j][k][l] - b.R[i][j][k][l]);
          cmp.max_abs_dev = std::max(cmp.max_abs_dev, dev);
          if (std::abs(a.R[i][j][k][l]) >= dominance_cut * mx)
            cmp.max_rel_dev_dominant =
                std::max(cmp.max_rel_dev_dominant,
                         dev / std::abs(a.R[i][j][k][l]));
        }
  return cmp;
}

VolumeGradient volume_and_gradient_comparison(double t, double r2) {
  MetricAtQ m = metric_at_q(t, r2);
  VolumeGradient out;
  double det_co = m.g.determinant().real();
  double det_e = m.ddbar_r2.determinant().real();
  out.vol_ratio = det_co / det_e;
  if (std::abs(out.vol_ratio * r2 - 2.0 / 3.0) > 1e-10)
    throw verification_error("volume comparison: vol_co != (2/3) r^-2 vol_e");
  // smallest C with |grad f|_e^2 <= C r^{-2/3} |grad f|_co^2
  Eigen::Matrix3cd A = m.ddbar_r2.inverse();
  Eigen::Matrix3cd B = std::pow(r2, -1.0 / 3.0) * m.g.inverse();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3cd> ges(
      0.5 * (A + A.adjoint()), 0.5 * (B + B.adjoint()),
      Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  out.grad_const = ges.eigenvalues().maxCoeff();
  return out;
}

namespace {

// real 6x6 quadratic form of a Hermitian matrix: Q(xi) = zeta^dag H zeta
Eigen::Matrix<double, 6, 6> herm_quadratic(const Eigen::Matrix3cd& H) {
  Eigen::Matrix3d S = H.real();
  Eigen::Matrix3d A = H.imag();
  Eigen::Matrix<double, 6, 6> Q;
  Q.topLeftCorner<3, 3>() = S;
  Q.bottomRightCorner<3, 3>() = S;
  Q.topRightCorner<3, 3>() = -A;
  Q.bottomLeftCorner<3, 3>() = A;
  return 0.5 * (Q + Q.transpose());
}

}  // namespace

S3Limit s3_limit(double t, const std::vector<double>& eps_list) {
  if (eps_list.empty()) throw domain_error("s3_limit: empty eps list");
  S3Limit out;
  out.formula_value = 0.5 * std::cbrt(2.0 * t * t / 3.0);
  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw domain_error("s3_limit: eps must be positive");
    double r2 = t * (1.0 + eps);
    MetricAtQ m = metric_at_q(t, r2);
    PartialTable tab = r2_partials(t, r2, false);

    // real tangent 5-plane of {r^2 = const}: kernel of dr^2 on real vectors
    Eigen::Matrix<double, 1, 6> row;
    for (int i = 0; i < 3; ++i) {
      row(0, i) = 2.0 * tab.d1(i).real();
      row(0, 3 + i) = -2.0 * tab.d1(i).imag();
    }
    Eigen::JacobiSVD<Eigen::Matrix<double, 1, 6>> svd(
        row, Eigen::ComputeFullV);
    Eigen::Matrix<double, 6, 5> basis =
        svd.matrixV().rightCols<5>();  // null space of the constraint row

    // CO metric against the left-invariant sphere frame normalization
    Eigen::Matrix<double, 6, 6> Qco = 2.0 * herm_quadratic(m.g);
    Eigen::Matrix<double, 6, 6> Qsph =
        (4.0 / t) * herm_quadratic(m.ddbar_r2);
    Eigen::Matrix<double, 5, 5> A = basis.transpose() * Qco * basis;
    Eigen::Matrix<double, 5, 5> B = basis.transpose() * Qsph * basis;
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix<double, 5, 5>> ges(
        A, B, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    S3LimitRow rowout;
    rowout.eps = eps;
    for (int i = 0; i < 5; ++i) rowout.eigenvalues[i] = ges.eigenvalues()(i);
    out.rows.push_back(rowout);
  }

  // Neville extrapolation of the mean eigenvalue to eps = 0
  std::vector<double> x, y;
  for (const auto& r : out.rows) {
    double mean = 0.0;
    for (double v : r.eigenvalues) mean += v / 5.0;
    x.push_back(r.eps);
    y.push_back(mean);
  }
  std::vector<double> p = y;
  for (std::size_t m = 1; m < p.size(); ++m)
    for (std::size_t i = 0; i + m < p.size(); ++i)
      p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
  out.extrapolated = p[0];
  return out;
}

}  // namespace conifold
