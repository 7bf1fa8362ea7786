#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "conifold/radial_profiles.hpp"
#include "conifold/resolved_frame.hpp"

using namespace conifold;

namespace {

constexpr cplx kI{0.0, 1.0};

ResolvedPoint sample_point() {
  ResolvedPoint p;
  p.z = cplx(0.6, -0.3);
  p.u = cplx(0.11, 0.07);
  p.v = cplx(-0.04, 0.09);
  return p;
}

// finite-difference Wirtinger derivative of a real scalar in coordinates
// (z,u,v), followed by the change of basis to the lambda frame; this is the
// coordinate-basis oracle for the analytic jets
template <class F>
cplx fd_wirtinger(const F& f, const ResolvedPoint& p, int var, bool bar,
                  double h = 1e-6) {
  auto shift = [&](double dx, double dy) {
    ResolvedPoint q = p;
    cplx d(dx, dy);
    if (var == 0) q.z += d;
    if (var == 1) q.u += d;
    if (var == 2) q.v += d;
    return q;
  };
  auto dx = [&](double hh) {
    return (f(shift(hh, 0)) - f(shift(-hh, 0))) / (2.0 * hh);
  };
  auto dy = [&](double hh) {
    return (f(shift(0, hh)) - f(shift(0, -hh))) / (2.0 * hh);
  };
  auto richardson = [](auto g, double hh) {
    return (4.0 * g(hh / 2) - g(hh)) / 3.0;
  };
  double rx = richardson(dx, h), ry = richardson(dy, h);
  return bar ? 0.5 * cplx(rx, ry) : 0.5 * cplx(rx, -ry);
}

Eigen::Matrix3cd frame_T(const ResolvedPoint& p) {
  double rho = p.rho();
  Eigen::Matrix3cd T = Eigen::Matrix3cd::Zero();
  T(0, 0) = 1.0;
  T(1, 1) = p.u / rho;
  T(1, 2) = std::conj(p.v) / rho;
  T(2, 1) = p.v / rho;
  T(2, 2) = -std::conj(p.u) / rho;
  return T;
}

}  // namespace

TEST_CASE("base forms at z = 0 match the displayed formulas") {
  ResolvedPoint p{0.0, cplx(0.2, 0.1), cplx(-0.05, 0.15)};
  double r2 = p.r2();
  BaseForms bf = base_forms(p);

  FrameForm expect_ddbar = cplx(r2, 0) * FrameForm::lambda_pair(1, 1) +
                           FrameForm::lambda_pair(2, 2) +
                           FrameForm::lambda_pair(3, 3);
  CHECK((bf.ddbar_r2 - expect_ddbar).max_abs_coeff() < 1e-14);

  FrameForm expect_wedge = cplx(r2, 0) * FrameForm::lambda_pair(2, 2);
  CHECK((bf.dr2_wedge - expect_wedge).max_abs_coeff() < 1e-14);

  FrameForm expect_co0 =
      cplx(std::pow(r2, 2.0 / 3.0), 0) * FrameForm::lambda_pair(1, 1) +
      cplx(2.0 / 3.0 * std::pow(r2, -1.0 / 3.0), 0) *
          FrameForm::lambda_pair(2, 2) +
      cplx(std::pow(r2, -1.0 / 3.0), 0) * FrameForm::lambda_pair(3, 3);
  CHECK((bf.omega_co0 - expect_co0).max_abs_coeff() < 1e-13);

  // smooth CO metric: (eta+1) l11 + (2/3) sqrt(eta+3/2)/(eta+1) l22
  //                   + (eta+3/2)^{-1/2} l33
  double e = eta(Profile::resolved(), r2);
  Eigen::Matrix3cd g = to_one_one(bf.omega_co);
  CHECK(g(0, 0).real() == doctest::Approx(e + 1.0).epsilon(1e-12));
  CHECK(g(1, 1).real() ==
        doctest::Approx(2.0 / 3.0 * std::sqrt(e + 1.5) / (e + 1.0))
            .epsilon(1e-12));
  CHECK(g(2, 2).real() ==
        doctest::Approx(1.0 / std::sqrt(e + 1.5)).epsilon(1e-12));
}

TEST_CASE("i ddbar r^2 at general z") {
  ResolvedPoint p = sample_point();
  double r2 = p.r2(), r = p.r(), G = p.gamma();
  Eigen::Matrix3cd m = to_one_one(base_forms(p).ddbar_r2);
  CHECK(m(0, 0).real() == doctest::Approx(r2 / (G * G)).epsilon(1e-13));
  CHECK(m(1, 1).real() == doctest::Approx(G * G).epsilon(1e-13));
  CHECK(m(2, 2).real() == doctest::Approx(G * G).epsilon(1e-13));
  CHECK(std::abs(m(0, 1) - r / G * std::conj(p.z)) < 1e-13);
  CHECK(std::abs(m(1, 0) - r / G * p.z) < 1e-13);
  CHECK(std::abs(m(0, 2)) < 1e-14);
  CHECK(std::abs(m(1, 2)) < 1e-14);

  // d r^2 = Gamma^{-2} r^2 zbar l1 + Gamma r l2
  ScalarJet2 j = jet_r2(p);
  FrameForm df = partial_form(j, p);
  CHECK(std::abs(df.coeff(0b000001) - r2 * std::conj(p.z) / (G * G)) < 1e-13);
  CHECK(std::abs(df.coeff(0b000010) - G * r) < 1e-13);
  CHECK(std::abs(df.coeff(0b000100)) < 1e-14);
}

TEST_CASE("omega_co^2 >= (1/3) sum_{k!=j} l_kk l_jj at z = 0") {
  for (double r : {0.05, 0.3, 0.7, 0.99}) {
    ResolvedPoint p{0.0, r, 0.0};
    BaseForms bf = base_forms(p);
    Lambda22 m = to_lambda22(wedge(bf.omega_co, bf.omega_co));
    Lambda22 bound = m - (2.0 / 3.0) * Lambda22::Identity();
    PositivityResult pr = positivity(bound);
    CHECK(pr.cls != Positivity::indefinite);
  }
}

TEST_CASE("scenario jets match the coordinate finite-difference oracle") {
  std::mt19937_64 rng(23);
  ScenarioH sc = ScenarioH::random_scenario(rng);
  ResolvedPoint p = sample_point();

  auto h1f = [&](const ResolvedPoint& q) { return sc.h1(q); };
  auto h2f = [&](const ResolvedPoint& q) { return sc.h2(q); };
  ScalarJet2 j1 = sc.jet_h1(p);
  ScalarJet2 j2 = sc.jet_h2(p);
  for (int var = 0; var < 3; ++var) {
    CHECK(std::abs(j1.d(var) - fd_wirtinger(h1f, p, var, false)) < 1e-9);
    CHECK(std::abs(j2.d(var) - fd_wirtinger(h2f, p, var, false)) < 1e-9);
  }
  // mixed second derivatives via nested FD on the first Wirtinger derivative
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      auto first = [&](const ResolvedPoint& q) {
        ScalarJet2 jj = sc.jet_h1(q);
        return jj.d(a);
      };
      auto dxr = [&](double hh) {
        ResolvedPoint qp = p, qm = p;
        (b == 0 ? qp.z : b == 1 ? qp.u : qp.v) += hh;
        (b == 0 ? qm.z : b == 1 ? qm.u : qm.v) -= hh;
        return (first(qp) - first(qm)) / (2.0 * hh);
      };
      auto dyr = [&](double hh) {
        ResolvedPoint qp = p, qm = p;
        (b == 0 ? qp.z : b == 1 ? qp.u : qp.v) += cplx(0, hh);
        (b == 0 ? qm.z : b == 1 ? qm.u : qm.v) -= cplx(0, hh);
        return (first(qp) - first(qm)) / (2.0 * hh);
      };
      cplx mixed = 0.5 * (dxr(1e-6) + kI * dyr(1e-6));
      CHECK(std::abs(j1.mixed(a, b) - mixed) < 1e-8);
    }
}

TEST_CASE("coefficients_cd: trivial scenario and direct substitution") {
  ResolvedPoint p = sample_point();
  CoefficientBlock z = coefficients_cd(ScenarioH::trivial(), p);
  CHECK(z.c.cwiseAbs().maxCoeff() == 0.0);
  CHECK(z.d.cwiseAbs().maxCoeff() == 0.0);

  // a = 1, b = 0, z = 0, u = r, v = 0: d_22 = 1
  ScenarioH sc;
  sc.a.coef[0][0] = 1.0;
  ResolvedPoint q{0.0, 0.25, 0.0};
  CoefficientBlock blk = coefficients_cd(sc, q);
  CHECK(std::abs(blk.d(1) - 1.0) < 1e-14);
  CHECK(std::abs(blk.d(0)) < 1e-14);
  CHECK(std::abs(blk.d(2)) < 1e-14);
}

TEST_CASE("d and c blocks assemble dh1 and i ddbar h1") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 5; ++it) {
    ScenarioH sc = ScenarioH::random_scenario(rng);
    ResolvedPoint p = sample_point();
    p.u *= (0.7 + 0.1 * it);
    CoefficientBlock blk = coefficients_cd(sc, p);
    double r = p.r();

    // dh1 = r d12 l1 + d22 l2 + d32 l3
    FrameForm dh1 = partial_form(sc.jet_h1(p), p);
    CHECK(std::abs(dh1.coeff(0b000001) - r * blk.d(0)) < 1e-13);
    CHECK(std::abs(dh1.coeff(0b000010) - blk.d(1)) < 1e-13);
    CHECK(std::abs(dh1.coeff(0b000100) - blk.d(2)) < 1e-13);

    // i ddbar h1 = r c11 l11 + c21 l21 + c12 l12 + c31 l31 + c13 l13
    Eigen::Matrix3cd m = to_one_one(i_ddbar_form(sc.jet_h1(p), p));
    CHECK(std::abs(m(0, 0) - r * blk.c(0, 0)) < 1e-13);
    CHECK(std::abs(m(1, 0) - blk.c(1, 0)) < 1e-13);
    CHECK(std::abs(m(0, 1) - blk.c(0, 1)) < 1e-13);
    CHECK(std::abs(m(2, 0) - blk.c(2, 0)) < 1e-13);
    CHECK(std::abs(m(0, 2) - blk.c(0, 2)) < 1e-13);
    CHECK(std::abs(m(1, 1)) < 1e-14);
    CHECK(std::abs(m(2, 2)) < 1e-14);
    CHECK(std::abs(m(1, 2)) < 1e-14);
  }
}

TEST_CASE("phi_form: identity segment reproduces omega_co0^2") {
  int n = 40;
  ChiSpec chi = build_chi(n);
  for (double rfrac : {0.3, 0.9, 1.9}) {
    ResolvedPoint p{cplx(0.4, 0.2), 0.0, 0.0};
    double rho = rfrac / (n * p.gamma());
    p.u = std::polar(rho * 0.8, 0.4);
    p.v = std::polar(rho * 0.6, -1.1);
    FrameForm phi = phi_form(n, chi, p);
    FrameForm co0sq =
        wedge(base_forms(p).omega_co0, base_forms(p).omega_co0);
    CHECK((phi - co0sq).max_abs_coeff() <
          1e-12 * (1.0 + co0sq.max_abs_coeff()));
  }
}

TEST_CASE("phi_form: vanishing tail past s = c4") {
  int n = 12;
  ChiSpec chi = build_chi(n);
  ResolvedPoint p{0.0, 1.05, 0.0};  // r^2 = 1.1 > 1, s > c4
  CHECK(phi_form(n, chi, p).max_abs_coeff() < 1e-15);
}

TEST_CASE("phi_form on the annulus matches the printed Lambda matrix") {
  int n = 25;
  ChiSpec chi = build_chi(n);
  ResolvedPoint p{cplx(-0.8, 0.5), 0.0, 0.0};
  double rho = 1.45 / (n * p.gamma());
  p.u = std::polar(rho * 0.55, 2.2);
  p.v = std::polar(rho * std::sqrt(1.0 - 0.55 * 0.55), -0.7);
  double G = p.gamma();
  double t = double(n) * n * p.r2();
  double z2 = std::norm(p.z);
  Lambda22 e = std::pow(double(n), 2.0 / 3.0) *
               to_lambda22(phi_form(n, chi, p));
  CHECK(e(0, 0).real() == doctest::Approx(4.0 / 3.0 * std::pow(t, -2.0 / 3.0) *
                                          std::pow(G, 4.0) * n * n)
                              .epsilon(1e-11));
  cplx e12_expect = 4.0 / 3.0 * std::pow(t, -1.0 / 6.0) * double(n) * G * p.z;
  CHECK(std::abs(e(0, 1) - e12_expect) < 1e-10 * std::abs(e12_expect));
  CHECK(std::abs(e(1, 0) - std::conj(e12_expect)) <
        1e-10 * std::abs(e12_expect));
  CHECK(e(1, 1).real() ==
        doctest::Approx(2.0 * std::cbrt(t) * (1.0 - z2 / (3.0 * G * G)))
            .epsilon(1e-11));
  CHECK(e(2, 2).real() ==
        doctest::Approx(4.0 / 3.0 * std::cbrt(t) * (1.0 - z2 / (G * G)))
            .epsilon(1e-11));
  CHECK(std::abs(e(0, 2)) < 1e-12);
  CHECK(std::abs(e(1, 2)) < 1e-12);
}

TEST_CASE("phi square root consistency with omega_co0") {
  int n = 30;
  ChiSpec chi = build_chi(n);
  ResolvedPoint p{cplx(0.1, -0.2), 0.0, 0.0};
  double rho = 1.2 / (n * p.gamma());
  p.u = std::polar(rho * 0.9, 0.15);
  p.v = std::polar(rho * std::sqrt(1.0 - 0.81), 1.9);
  FrameForm root = form_square_root(phi_form(n, chi, p));
  CHECK((root - base_forms(p).omega_co0).max_abs_coeff() < 1e-9);
}

TEST_CASE("measured C2 is stable in n and under refinement") {
  std::vector<double> vals;
  for (int n : {50, 100, 200}) {
    ChiSpec chi = build_chi(n);
    vals.push_back(measure_c2_hat(n, chi));
  }
  for (double v : vals) CHECK(v > 0.0);
  double mx = *std::max_element(vals.begin(), vals.end());
  double mn = *std::min_element(vals.begin(), vals.end());
  CHECK((mx - mn) / mx < 0.2);
  ChiSpec chi = build_chi(100);
  double coarse = measure_c2_hat(100, chi, 400);
  double fine = measure_c2_hat(100, chi, 800);
  CHECK(std::abs(fine - coarse) < 0.05 * std::abs(fine));
}

TEST_CASE("expansion 208: alpha assembly reproduces the direct wedge") {
  SmoothStep sigma = SmoothStep::sigma();
  std::mt19937_64 rng(41);
  int n = 60;
  for (int it = 0; it < 8; ++it) {
    ScenarioH sc =
        (it == 0) ? ScenarioH::default_scenario() : ScenarioH::random_scenario(rng);
    std::uniform_real_distribution<double> zd(-1.2, 1.2), rd(1.05, 1.95),
        th(0.2, 1.3), ph(0.0, 6.28);
    ResolvedPoint p;
    p.z = cplx(zd(rng), zd(rng));
    double r = rd(rng) / n;
    double rho = r / std::sqrt(1.0 + std::norm(p.z));
    double theta = th(rng);
    p.u = std::polar(rho * std::cos(theta), ph(rng));
    p.v = std::polar(rho * std::sin(theta), ph(rng));

    Lambda22 lhs = expansion_208(sc, n, sigma, p);
    CoefficientBlock blk = alpha_matrix(sc, n, sigma, p);
    Lambda22 rhs = alpha_assembled_rhs(blk, n);
    double scale = std::max(1.0, lhs.cwiseAbs().maxCoeff());
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-8 * scale);
    // reality of the form
    CHECK((lhs - lhs.adjoint()).cwiseAbs().maxCoeff() < 1e-10 * scale);
    // no Lambda_{1 1b} component
    CHECK(std::abs(lhs(0, 0)) < 1e-10 * scale);
  }
}

TEST_CASE("expansion 208: trivial scenario and flat sigma vanish") {
  SmoothStep sigma = SmoothStep::sigma();
  int n = 50;
  ResolvedPoint p{cplx(0.3, 0.3), 0.0, 0.0};
  double rho = 1.5 / (n * p.gamma());
  p.u = std::polar(rho * 0.7, 0.5);
  p.v = std::polar(rho * std::sqrt(1.0 - 0.49), -0.4);
  CHECK(expansion_208(ScenarioH::trivial(), n, sigma, p)
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  CHECK(alpha_matrix(ScenarioH::trivial(), n, sigma, p)
            .alpha.cwiseAbs()
            .maxCoeff() == 0.0);
  // sigma' = sigma'' = 0 wipes every alpha entry: use a step whose ramp
  // sits outside [1, 4] so the annulus sees a constant sigma
  SmoothStep flat{10.0, 11.0};
  CHECK(alpha_matrix(ScenarioH::default_scenario(), n, flat, p)
            .alpha.cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("h2 third term: Hermitian, trivial scenario vanishes") {
  SmoothStep sigma = SmoothStep::sigma();
  int n = 45;
  ResolvedPoint p{cplx(-0.2, 0.9), 0.0, 0.0};
  double rho = 1.3 / (n * p.gamma());
  p.u = std::polar(rho * 0.6, 1.0);
  p.v = std::polar(rho * 0.8, 2.0);
  Lambda22 t3 = h2_third_term(ScenarioH::default_scenario(), n, sigma, p);
  CHECK((t3 - t3.adjoint()).cwiseAbs().maxCoeff() <
        1e-12 * (1.0 + t3.cwiseAbs().maxCoeff()));
  Lambda22 z3 = h2_third_term(ScenarioH::trivial(), n, sigma, p);
  CHECK(z3.cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("e_matrix: C0 limits") {
  SmoothStep sigma = SmoothStep::sigma();
  int n = 80;
  ChiSpec chi = build_chi(n);
  ScenarioH sc = ScenarioH::default_scenario();
  ResolvedPoint p{cplx(1.0, -0.6), 0.0, 0.0};
  double rho = 1.5 / (n * p.gamma());
  p.u = std::polar(rho * 0.75, 0.3);
  p.v = std::polar(rho * std::sqrt(1.0 - 0.5625), -2.5);

  Lambda22 big = e_matrix(sc, 1e4, n, chi, sigma, p, 5.0);
  CHECK(positivity(big).cls == Positivity::positive);
  Lambda22 zero = e_matrix(sc, 0.0, n, chi, sigma, p, 1.0);
  CHECK(zero(0, 0).real() < 0.0);
  CHECK(positivity(zero).cls == Positivity::indefinite);
  // conjugate-pair structure
  Lambda22 e = e_matrix(sc, 7.0, n, chi, sigma, p, 0.5);
  CHECK((e - e.adjoint()).cwiseAbs().maxCoeff() <
        1e-10 * e.cwiseAbs().maxCoeff());
}

TEST_CASE("positivity search: trivial scenario needs no C0") {
  AnnulusGrid grid;
  grid.n_z = 3;
  grid.n_r = 2;
  grid.n_dir = 2;
  grid.n_phase = 2;
  PositivitySearchResult res =
      positivity_search(ScenarioH::trivial(), {60}, grid);
  CHECK(res.c3_hat[0] == 0.0);
  // "zero plus": with no alpha or C3 terms any positive C0 works; the search
  // stops where the minors clear the positivity zero-tolerance
  CHECK(res.c0_star[0] < 1e-3);
  CHECK(res.outer_check_ok);
}

TEST_CASE("positivity search: default scenario frontier") {
  AnnulusGrid grid;  // default density
  PositivitySearchResult res =
      positivity_search(ScenarioH::default_scenario(), {100, 200, 400}, grid);
  CHECK(res.monotone_nonincreasing);
  CHECK(res.c0_star.back() < 1e3);
  CHECK(res.outer_check_ok);
  // classification is stable when the grid density doubles
  AnnulusGrid dense = grid;
  dense.n_z = 2 * grid.n_z;
  dense.n_r = 2 * grid.n_r;
  PositivitySearchResult res2 =
      positivity_search(ScenarioH::default_scenario(), {400}, dense);
  CHECK(res2.c0_star[0] < 1e3);
  double rel = std::abs(res2.c0_star[0] - res.c0_star[2]) /
               std::max(1e-12, res.c0_star[2]);
  CHECK(rel < 0.5);  // same order; grid minima move the threshold slightly
}

TEST_CASE("homogeneity: (u,v) -> (cu,cv) scales phi coefficient-wise") {
  int n = 35;
  ChiSpec chi = build_chi(n);
  ResolvedPoint p{cplx(0.2, 0.4), 0.0, 0.0};
  double rho = 0.4 / (n * p.gamma());
  p.u = std::polar(rho * 0.6, 0.7);
  p.v = std::polar(rho * 0.8, -0.2);
  double c = 1.5;
  ResolvedPoint q = p;
  q.u *= c;
  q.v *= c;
  // on the identity segment Phi = omega_co0^2 whose Lambda matrix scales as
  // diag block structure: L11 like r^{-4/3}... check against direct scaling
  Lambda22 e1 = to_lambda22(phi_form(n, chi, p));
  Lambda22 e2 = to_lambda22(phi_form(n, chi, q));
  double r2 = p.r2();
  double s = std::pow(c, 2.0);  // r^2 scales by c^2
  (void)r2;
  CHECK(std::abs(e2(0, 0) - e1(0, 0) * std::pow(s, -2.0 / 3.0)) <
        1e-11 * std::abs(e1(0, 0)));
  CHECK(std::abs(e2(1, 1) - e1(1, 1) * std::pow(s, 1.0 / 3.0)) <
        1e-11 * std::abs(e1(1, 1)));
  CHECK(std::abs(e2(2, 2) - e1(2, 2) * std::pow(s, 1.0 / 3.0)) <
        1e-11 * std::abs(e1(2, 2)));
}
