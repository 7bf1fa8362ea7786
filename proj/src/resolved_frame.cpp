#include "conifold/resolved_frame.hpp"

#include <algorithm>
#include <cmath>

#include "conifold/parallel.hpp"
#include "conifold/radial_profiles.hpp"

namespace conifold {

namespace {
constexpr cplx kI{0.0, 1.0};
}

// ---------------------------------------------------------------------------
// PolyZ

cplx PolyZ::eval(cplx z) const {
  cplx zb = std::conj(z);
  cplx acc = 0.0;
  cplx zm = 1.0;
  for (int m = 0; m <= deg; ++m) {
    cplx zn = 1.0;
    for (int n = 0; n <= deg; ++n) {
      acc += coef[m][n] * zm * zn;
      zn *= zb;
    }
    zm *= z;
  }
  return acc;
}

PolyZ PolyZ::dz() const {
  PolyZ out;
  for (int m = 1; m <= deg; ++m)
    for (int n = 0; n <= deg; ++n)
      out.coef[m - 1][n] = coef[m][n] * static_cast<double>(m);
  return out;
}

PolyZ PolyZ::dzbar() const {
  PolyZ out;
  for (int m = 0; m <= deg; ++m)
    for (int n = 1; n <= deg; ++n)
      out.coef[m][n - 1] = coef[m][n] * static_cast<double>(n);
  return out;
}

bool PolyZ::is_zero() const {
  for (int m = 0; m <= deg; ++m)
    for (int n = 0; n <= deg; ++n)
      if (coef[m][n] != 0.0) return false;
  return true;
}

PolyZ PolyZ::real_poly(double c00, cplx c10, cplx c11) {
  PolyZ p;
  p.coef[0][0] = c00;
  p.coef[1][0] = c10;
  p.coef[0][1] = std::conj(c10);
  p.coef[1][1] = c11;  // must be real for reality; callers pass real c11
  return p;
}

// ---------------------------------------------------------------------------
// lambda-frame conversion

namespace {

// rows: coordinate differentials dz, du, dv; columns: l1, l2, l3
Eigen::Matrix3cd coord_to_frame(const ResolvedPoint& p) {
  double rho = p.rho();
  Eigen::Matrix3cd T = Eigen::Matrix3cd::Zero();
  T(0, 0) = 1.0;                       // dz = l1
  T(1, 1) = p.u / rho;                 // du = (u l2 + vb l3)/rho
  T(1, 2) = std::conj(p.v) / rho;
  T(2, 1) = p.v / rho;                 // dv = (v l2 - ub l3)/rho
  T(2, 2) = -std::conj(p.u) / rho;
  return T;
}

}  // namespace

FrameForm partial_form(const ScalarJet2& jet, const ResolvedPoint& p) {
  Eigen::Matrix3cd T = coord_to_frame(p);
  Eigen::Vector3cd lam = T.transpose() * jet.d;  // coefficients on l1,l2,l3
  FrameForm f;
  for (int k = 0; k < 3; ++k) f += lam(k) * FrameForm::lambda(k + 1);
  return f;
}

FrameForm partial_bar_form(const ScalarJet2& jet, const ResolvedPoint& p) {
  // for a real scalar, dbar F = conj(dF)
  Eigen::Matrix3cd T = coord_to_frame(p);
  Eigen::Vector3cd lam = T.transpose() * jet.d;
  FrameForm f;
  for (int k = 0; k < 3; ++k)
    f += std::conj(lam(k)) * FrameForm::lambda_bar(k + 1);
  return f;
}

FrameForm i_ddbar_form(const ScalarJet2& jet, const ResolvedPoint& p) {
  Eigen::Matrix3cd T = coord_to_frame(p);
  // i ddbar F = sum_ab F_{a bbar} i da ^ dbbar -> frame matrix T^T M conj(T)
  Eigen::Matrix3cd M = T.transpose() * jet.mixed * T.conjugate();
  return from_one_one(M);
}

ScalarJet2 jet_r2(const ResolvedPoint& p) {
  ScalarJet2 j;
  double rho2 = std::norm(p.u) + std::norm(p.v);
  double g2 = 1.0 + std::norm(p.z);
  j.value = g2 * rho2;
  j.d(0) = std::conj(p.z) * rho2;
  j.d(1) = g2 * std::conj(p.u);
  j.d(2) = g2 * std::conj(p.v);
  j.mixed(0, 0) = rho2;
  j.mixed(0, 1) = std::conj(p.z) * p.u;
  j.mixed(0, 2) = std::conj(p.z) * p.v;
  j.mixed(1, 0) = p.z * std::conj(p.u);
  j.mixed(2, 0) = p.z * std::conj(p.v);
  j.mixed(1, 1) = g2;
  j.mixed(2, 2) = g2;
  return j;
}

ScalarJet2 jet_sigma_t(const SmoothStep& sigma, int n, const ResolvedPoint& p) {
  ScalarJet2 r2 = jet_r2(p);
  double n2 = static_cast<double>(n) * n;
  double t = n2 * r2.value;
  double s1 = smoothstep_eval(sigma, t, 1);
  double s2 = smoothstep_eval(sigma, t, 2);
  ScalarJet2 j;
  j.value = smoothstep_eval(sigma, t, 0);
  j.d = s1 * n2 * r2.d;
  j.mixed = s1 * n2 * r2.mixed +
            s2 * n2 * n2 * (r2.d * r2.d.adjoint()).eval();
  return j;
}

// ---------------------------------------------------------------------------
// ScenarioH

ScenarioH ScenarioH::trivial() { return ScenarioH{}; }

ScenarioH ScenarioH::default_scenario() {
  ScenarioH s;
  s.a.coef[0][0] = 0.3;
  s.a.coef[1][0] = 0.1;
  s.b.coef[0][0] = 0.2;
  s.b.coef[0][1] = -0.05;
  s.h2_p = PolyZ::real_poly(0.1, 0.005, 0.0);  // 0.1 (1 + 0.1 Re z)
  return s;
}

ScenarioH ScenarioH::random_scenario(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  auto rc = [&] { return cplx(dist(rng), dist(rng)); };
  ScenarioH s;
  // low-degree terms including a z zbar piece so that c_{1 1b} is exercised
  s.a.coef[0][0] = rc();
  s.a.coef[1][0] = rc();
  s.a.coef[0][1] = rc();
  s.a.coef[1][1] = 0.5 * rc();
  s.b.coef[0][0] = rc();
  s.b.coef[1][0] = rc();
  s.b.coef[0][1] = rc();
  s.b.coef[1][1] = 0.5 * rc();
  s.h2_p = PolyZ::real_poly(0.05 + 0.1 * std::abs(dist(rng)), 0.1 * rc(), 0.0);
  s.h2_q.coef[0][0] = 0.1 * rc();
  return s;
}

double ScenarioH::h1(const ResolvedPoint& p) const {
  return 2.0 * std::real(a.eval(p.z) * p.u + b.eval(p.z) * p.v);
}

double ScenarioH::h2(const ResolvedPoint& p) const {
  double rho2 = std::norm(p.u) + std::norm(p.v);
  return std::real(h2_p.eval(p.z)) * rho2 +
         2.0 * std::real(h2_q.eval(p.z) * p.u * std::conj(p.v));
}

ScalarJet2 ScenarioH::jet_h1(const ResolvedPoint& p) const {
  ScalarJet2 j;
  cplx av = a.eval(p.z), bv = b.eval(p.z);
  cplx az = a.dz().eval(p.z), bz = b.dz().eval(p.z);
  cplx azb = a.dzbar().eval(p.z), bzb = b.dzbar().eval(p.z);
  cplx azzb = a.dz().dzbar().eval(p.z), bzzb = b.dz().dzbar().eval(p.z);
  j.value = 2.0 * std::real(av * p.u + bv * p.v);
  j.d(0) = az * p.u + bz * p.v + std::conj(azb) * std::conj(p.u) +
           std::conj(bzb) * std::conj(p.v);
  j.d(1) = av;
  j.d(2) = bv;
  j.mixed(0, 0) = azzb * p.u + bzzb * p.v +
                  std::conj(azzb * p.u + bzzb * p.v);
  j.mixed(0, 1) = std::conj(azb);  // d_z d_ubar
  j.mixed(0, 2) = std::conj(bzb);
  j.mixed(1, 0) = azb;
  j.mixed(2, 0) = bzb;
  return j;
}

ScalarJet2 ScenarioH::jet_h2(const ResolvedPoint& p) const {
  ScalarJet2 j;
  double rho2 = std::norm(p.u) + std::norm(p.v);
  cplx uvb = p.u * std::conj(p.v);
  cplx P = h2_p.eval(p.z), Pz = h2_p.dz().eval(p.z),
       Pzzb = h2_p.dz().dzbar().eval(p.z);
  cplx Q = h2_q.eval(p.z), Qz = h2_q.dz().eval(p.z),
       Qzb = h2_q.dzbar().eval(p.z), Qzzb = h2_q.dz().dzbar().eval(p.z);
  j.value = std::real(P) * rho2 + 2.0 * std::real(Q * uvb);
  j.d(0) = Pz * rho2 + Qz * uvb + std::conj(Qzb * uvb);
  j.d(1) = P * std::conj(p.u) + Q * std::conj(p.v);
  j.d(2) = P * std::conj(p.v) + std::conj(Q) * std::conj(p.u);
  j.mixed(0, 0) = Pzzb * rho2 + Qzzb * uvb + std::conj(Qzzb * uvb);
  j.mixed(0, 1) = Pz * p.u + std::conj(Qzb) * p.v;   // d_z d_ubar
  j.mixed(0, 2) = Pz * p.v + Qz * p.u;               // d_z d_vbar
  j.mixed(1, 0) = std::conj(j.mixed(0, 1));
  j.mixed(2, 0) = std::conj(j.mixed(0, 2));
  j.mixed(1, 1) = P;
  j.mixed(1, 2) = Q;
  j.mixed(2, 1) = std::conj(Q);
  j.mixed(2, 2) = P;
  return j;
}

// ---------------------------------------------------------------------------
// base forms and Phi

BaseForms base_forms(const ResolvedPoint& p) {
  BaseForms out;
  ScalarJet2 r2 = jet_r2(p);
  out.ddbar_r2 = i_ddbar_form(r2, p);
  out.dr2_wedge =
      kI * wedge(partial_form(r2, p), partial_bar_form(r2, p));
  double s = r2.value;
  double f0p = std::pow(s, -1.0 / 3.0);
  double f0pp = -std::pow(s, -4.0 / 3.0) / 3.0;
  out.omega_co0 = cplx(f0p, 0) * out.ddbar_r2 + cplx(f0pp, 0) * out.dr2_wedge;

  Profile res = Profile::resolved();
  double e = eta(res, s);
  double ep = eta_prime(res, s);
  double fp = e / s, fpp = (ep - fp) / s;
  double g4 = std::pow(p.gamma(), -4.0);
  out.omega_co = cplx(fp, 0) * out.ddbar_r2 + cplx(fpp, 0) * out.dr2_wedge +
                 cplx(g4, 0) * FrameForm::lambda_pair(1, 1);
  return out;
}

FrameForm phi_form(int n, const ChiSpec& chi, const ResolvedPoint& p) {
  double r2 = p.r2();
  // chi is constant past s = c4 (r^2 = 1), so Phi vanishes there; allow a
  // margin beyond the unit bundle to make the zero tail observable
  if (!(r2 > 0.0) || r2 >= 1.5)
    throw domain_error("phi_form: point outside the chart");
  BaseForms bf = base_forms(p);
  double n43 = std::pow(static_cast<double>(n), 4.0 / 3.0);
  double s = n43 * std::pow(r2, 2.0 / 3.0);
  double c1 = chi_eval(chi, s, 1);
  double c2 = chi_eval(chi, s, 2);
  FrameForm phi = cplx(c1, 0) * wedge(bf.omega_co0, bf.omega_co0);
  if (c2 != 0.0)
    phi += cplx((2.0 / 3.0) * n43 * std::pow(r2, -2.0 / 3.0) * c2, 0) *
           wedge(bf.dr2_wedge, bf.omega_co0);
  return phi;
}

double measure_c2_hat(int n, const ChiSpec& chi, int grid_points,
                      double r_max) {
  // Phi is negative only where chi' or 2 chi' + s chi'' dip below zero, so
  // sample in s: logarithmically over [c1, c3] and uniformly over the short
  // tail window [c3, c4].  r = s^{3/4} / n.
  double worst = 0.0;
  double n23 = std::pow(double(n), 2.0 / 3.0);
  double s_cap = std::pow(r_max * n, 4.0 / 3.0);
  auto probe = [&](double s) {
    if (s > s_cap) return;
    ResolvedPoint p{0.0, std::pow(s, 0.75) / n, 0.0};
    Lambda22 e = to_lambda22(phi_form(n, chi, p));
    // at z = 0 the matrix is diagonal; bound against 2 sum(L_kk)
    double mn = std::min({e(0, 0).real(), e(1, 1).real(), e(2, 2).real()});
    double deficit = std::max(0.0, -mn * n23);
    worst = std::max(worst, deficit * n / 2.0);
  };
  for (int i = 0; i <= grid_points; ++i)
    probe(chi.c1 * std::pow(chi.c3 / chi.c1, double(i) / grid_points));
  for (int i = 0; i <= grid_points; ++i)
    probe(chi.c3 + (chi.c4 - chi.c3) * double(i) / grid_points);
  return worst;
}

// ---------------------------------------------------------------------------
// coefficient blocks

CoefficientBlock coefficients_cd(const ScenarioH& s, const ResolvedPoint& p) {
  CoefficientBlock blk;
  double r = p.r();
  double G = p.gamma();
  cplx av = s.a.eval(p.z), bv = s.b.eval(p.z);
  cplx az = s.a.dz().eval(p.z), bz = s.b.dz().eval(p.z);
  cplx azb = s.a.dzbar().eval(p.z), bzb = s.b.dzbar().eval(p.z);
  cplx azzb = s.a.dz().dzbar().eval(p.z), bzzb = s.b.dz().dzbar().eval(p.z);

  blk.c(0, 0) = 2.0 * std::real((azzb * p.u + bzzb * p.v) / r);
  blk.c(1, 0) = G * (azb * p.u + bzb * p.v) / r;
  blk.c(0, 1) = std::conj(blk.c(1, 0));
  blk.c(2, 0) = G * (azb * std::conj(p.v) - bzb * std::conj(p.u)) / r;
  blk.c(0, 2) = std::conj(blk.c(2, 0));

  blk.d(0) = (az * p.u + bz * p.v + std::conj(azb) * std::conj(p.u) +
              std::conj(bzb) * std::conj(p.v)) /
             r;
  blk.d(1) = G * (av * p.u + bv * p.v) / r;
  blk.d(2) = G * (av * std::conj(p.v) - bv * std::conj(p.u)) / r;
  return blk;
}

CoefficientBlock alpha_matrix(const ScenarioH& s, int n,
                              const SmoothStep& sigma, const ResolvedPoint& p) {
  double r = p.r();
  if (r * n < 1.0 - 1e-12 || r * n > 2.0 + 1e-12)
    throw domain_error("alpha_matrix: point outside the annulus [1/n, 2/n]");
  CoefficientBlock blk = coefficients_cd(s, p);
  double G = p.gamma();
  double t = double(n) * n * r * r;
  double sp = smoothstep_eval(sigma, t, 1);
  double spp = smoothstep_eval(sigma, t, 2);
  double h1 = s.h1(p);
  double st = std::sqrt(t);
  cplx z = p.z, zb = std::conj(z);
  const Eigen::Matrix3cd& c = blk.c;
  const Eigen::Vector3cd& d = blk.d;
  cplx c11 = c(0, 0), c21 = c(1, 0), c12 = c(0, 1), c31 = c(2, 0),
       c13 = c(0, 2);
  cplx d12 = d(0), d22 = d(1), d32 = d(2);

  Eigen::Matrix3cd& a = blk.alpha;
  a(0, 1) = -n * h1 * sp * G * G * c21 + st * sp * G * c31 * std::conj(d32);
  a(1, 0) = std::conj(a(0, 1));
  a(1, 1) = -n * h1 * st * sp * G * G * c11 +
            2.0 * t * sp / (G * G) * std::real(z * c13 * d32);
  a(1, 2) = n * h1 * st * (sp + t * spp) / G * zb * c31 +
            t * sp / (G * G) * (zb * c31 * std::conj(d22) + z * c12 * d32) +
            t * sp * G * (c31 * d12 - c11 * d32);
  a(2, 1) = std::conj(a(1, 2));
  a(0, 2) = -n * h1 * (sp + t * spp) * G * G * c31 -
            st * sp * G * (2.0 * c31 * std::real(d22) - c21 * d32);
  a(2, 0) = std::conj(a(0, 2));
  a(2, 2) = -n * h1 * st * (sp + t * spp) *
                (G * G * c11 - 2.0 / G * std::real(z * c12)) -
            2.0 * t * sp * G *
                (c11 * std::real(d22) - std::real(c21 * d12) -
                 std::real(z * c12 * d22) / (G * G * G));
  return blk;
}

Lambda22 expansion_208(const ScenarioH& s, int n, const SmoothStep& sigma,
                       const ResolvedPoint& p) {
  ScalarJet2 jh1 = s.jet_h1(p);
  ScalarJet2 jsig = jet_sigma_t(sigma, n, p);
  FrameForm G = cplx(-jh1.value, 0) * i_ddbar_form(jsig, p) -
                kI * wedge(partial_form(jsig, p), partial_bar_form(jh1, p)) -
                kI * wedge(partial_form(jh1, p), partial_bar_form(jsig, p));
  return to_lambda22(wedge(G, i_ddbar_form(jh1, p)));
}

Lambda22 alpha_assembled_rhs(const CoefficientBlock& blk, int n) {
  Lambda22 m = Lambda22::Zero();
  for (int l = 1; l < 3; ++l) {
    m(0, l) = double(n) * blk.alpha(0, l);
    m(l, 0) = double(n) * blk.alpha(l, 0);
  }
  for (int k = 1; k < 3; ++k)
    for (int l = 1; l < 3; ++l) m(k, l) = blk.alpha(k, l);
  return m;
}

Lambda22 h2_third_term(const ScenarioH& s, int n, const SmoothStep& sigma,
                       const ResolvedPoint& p) {
  ScalarJet2 jh1 = s.jet_h1(p);
  ScalarJet2 jh2 = s.jet_h2(p);
  ScalarJet2 jsig = jet_sigma_t(sigma, n, p);
  FrameForm first =
      cplx(-jh2.value, 0) * i_ddbar_form(jsig, p) -
      kI * wedge(partial_form(jsig, p), partial_bar_form(jh2, p)) -
      kI * wedge(partial_form(jh2, p), partial_bar_form(jsig, p));
  double g4 = std::pow(p.gamma(), -4.0);
  FrameForm second =
      cplx(2.0 * s.fs_scale * g4, 0) * FrameForm::lambda_pair(1, 1) +
      cplx(2.0, 0) * i_ddbar_form(jh1, p) + i_ddbar_form(jh2, p);
  return to_lambda22(wedge(first, second));
}

Lambda22 e_matrix(const ScenarioH& s, double C0, int n, const ChiSpec& chi,
                  const SmoothStep& sigma, const ResolvedPoint& p,
                  double C3_hat) {
  (void)chi;  // the annulus sits on the identity segment of chi by design
  CoefficientBlock blk = alpha_matrix(s, n, sigma, p);
  double G = p.gamma();
  double t = double(n) * n * p.r2();
  double z2 = std::norm(p.z);
  cplx z = p.z, zb = std::conj(z);
  Lambda22 e;
  double t16 = std::pow(t, 1.0 / 6.0);
  double t13 = std::cbrt(t);
  e(0, 0) = 4.0 * G * G * G * G * n * n / (3.0 * std::pow(t, 2.0 / 3.0)) * C0 -
            C3_hat;
  e(0, 1) = double(n) * (4.0 * G * z / (3.0 * t16) * C0 + blk.alpha(0, 1));
  e(1, 0) = double(n) * (4.0 * G * zb / (3.0 * t16) * C0 + blk.alpha(1, 0));
  e(0, 2) = double(n) * blk.alpha(0, 2);
  e(2, 0) = double(n) * blk.alpha(2, 0);
  e(1, 1) = 2.0 * t13 * (1.0 - z2 / (3.0 * G * G)) * C0 - C3_hat +
            blk.alpha(1, 1).real();
  e(1, 2) = blk.alpha(1, 2);
  e(2, 1) = blk.alpha(2, 1);
  e(2, 2) = (4.0 / 3.0) * t13 * (1.0 - z2 / (G * G)) * C0 - C3_hat +
            blk.alpha(2, 2).real();
  return e;
}

// ---------------------------------------------------------------------------
// grids and the positivity search

std::vector<ResolvedPoint> AnnulusGrid::points(int n) const {
  std::vector<ResolvedPoint> pts;
  const double pi = 3.14159265358979323846;
  for (int iz = 0; iz < n_z; ++iz) {
    for (int jz = 0; jz < n_z; ++jz) {
      double x = n_z == 1 ? 0.0 : -2.0 + 4.0 * iz / (n_z - 1);
      double y = n_z == 1 ? 0.0 : -2.0 + 4.0 * jz / (n_z - 1);
      cplx z(x, y);
      if (std::abs(z) > 2.0 + 1e-12) continue;  // chart D
      for (int ir = 0; ir < n_r; ++ir) {
        double r = (1.0 + (n_r == 1 ? 0.5 : double(ir) / (n_r - 1))) / n;
        double rho = r / std::sqrt(1.0 + std::norm(z));
        for (int id = 0; id < n_dir; ++id) {
          double theta = 0.5 * pi * (id + 0.5) / n_dir;
          for (int p1 = 0; p1 < n_phase; ++p1) {
            for (int p2 = 0; p2 < n_phase; ++p2) {
              double ph1 = 2.0 * pi * p1 / n_phase;
              double ph2 = 2.0 * pi * p2 / n_phase;
              ResolvedPoint pt;
              pt.z = z;
              pt.u = std::polar(rho * std::cos(theta), ph1);
              pt.v = std::polar(rho * std::sin(theta), ph2);
              pts.push_back(pt);
            }
          }
        }
      }
    }
  }
  return pts;
}

namespace {

double measure_c3_hat(const ScenarioH& s, int n, const SmoothStep& sigma,
                      const std::vector<ResolvedPoint>& pts, int jobs) {
  std::vector<double> local(pts.size(), 0.0);
  parallel_for(pts.size(), jobs, [&](std::size_t i) {
    const ResolvedPoint& p = pts[i];
    CoefficientBlock blk = alpha_matrix(s, n, sigma, p);
    double m = std::max(blk.c.cwiseAbs().maxCoeff(),
                        blk.d.cwiseAbs().maxCoeff());
    m = std::max(m, blk.alpha.cwiseAbs().maxCoeff());
    Lambda22 third = h2_third_term(s, n, sigma, p);
    Eigen::SelfAdjointEigenSolver<Lambda22> es(
        (0.5 * (third + third.adjoint())).eval(), Eigen::EigenvaluesOnly);
    m = std::max(m, -es.eigenvalues().minCoeff());
    local[i] = m;
  });
  double worst = 0.0;
  for (double v : local) worst = std::max(worst, v);
  return worst;
}

bool all_minors_positive(const ScenarioH& s, double C0, int n,
                         const ChiSpec& chi, const SmoothStep& sigma,
                         const std::vector<ResolvedPoint>& pts, double c3,
                         int jobs) {
  std::vector<char> ok(pts.size(), 1);
  parallel_for(pts.size(), jobs, [&](std::size_t i) {
    Lambda22 e = e_matrix(s, C0, n, chi, sigma, pts[i], c3);
    ok[i] = positivity(e).cls == Positivity::positive ? 1 : 0;
  });
  for (char v : ok)
    if (!v) return false;
  return true;
}

}  // namespace

PositivitySearchResult positivity_search(const ScenarioH& s,
                                         const std::vector<int>& n_list,
                                         const AnnulusGrid& grid,
                                         double c0_max, int jobs) {
  PositivitySearchResult out;
  out.n_list = n_list;
  SmoothStep sigma = SmoothStep::sigma();
  for (int n : n_list) {
    ChiSpec chi = build_chi(n);
    std::vector<ResolvedPoint> pts = grid.points(n);
    double c3 = measure_c3_hat(s, n, sigma, pts, jobs);
    out.c3_hat.push_back(c3);

    auto feasible = [&](double C0) {
      return all_minors_positive(s, C0, n, chi, sigma, pts, c3, jobs);
    };
    double hi = 1.0;
    while (!feasible(hi)) {
      hi *= 2.0;
      if (hi > c0_max)
        throw search_error("positivity_search: no C0 below the cap");
    }
    double lo = 0.0;
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
    out.c0_star.push_back(hi);
  }
  out.monotone_nonincreasing = true;
  for (std::size_t i = 1; i < out.c0_star.size(); ++i)
    if (out.c0_star[i] > out.c0_star[i - 1] * (1.0 + 1e-9))
      out.monotone_nonincreasing = false;

  // outer region: w^2 - 3 C0 C2 n^{-1} omega_co^2 with w^2 = kappa 2 sum L_kk
  int n_ref = n_list.back();
  ChiSpec chi_ref = build_chi(n_ref);
  out.c2_hat = measure_c2_hat(n_ref, chi_ref);
  double C0 = out.c0_star.back();
  double margin = std::numeric_limits<double>::infinity();
  for (int iz = 0; iz < 5; ++iz) {
    cplx z = cplx(0.4 * iz, 0.3 * iz);
    if (std::abs(z) > 2.0) continue;
    for (int ir = 0; ir <= 40; ++ir) {
      double r = (2.0 / n_ref) *
                 std::pow(0.999 * n_ref / 2.0, double(ir) / 40.0);
      double rho = r / std::sqrt(1.0 + std::norm(z));
      ResolvedPoint p{z, std::polar(rho, 0.3), std::polar(rho, 0.0)};
      p.u *= std::sqrt(0.5);
      p.v *= std::sqrt(0.5);
      Lambda22 co2 = to_lambda22(
          wedge(base_forms(p).omega_co, base_forms(p).omega_co));
      Lambda22 bound = s.ambient_scale * 2.0 * Lambda22::Identity() -
                       (3.0 * C0 * out.c2_hat / n_ref) * co2;
      Eigen::SelfAdjointEigenSolver<Lambda22> es(
          (0.5 * (bound + bound.adjoint())).eval(), Eigen::EigenvaluesOnly);
      margin = std::min(margin, es.eigenvalues().minCoeff());
    }
  }
  out.outer_margin = margin;
  out.outer_check_ok = margin > 0.0;
  return out;
}

}  // namespace conifold
