#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conifold/cutoffs.hpp"

using namespace conifold;

TEST_CASE("build_chi: breakpoints and the c2 quadratic") {
  ChiSpec sp = build_chi(100);
  CHECK(sp.c1 == doctest::Approx(std::pow(2.0, 4.0 / 3.0)).epsilon(1e-15));
  // quadratic-formula oracle for the root of 2 phi' + s phi''
  CHECK(sp.x2 == doctest::Approx(0.12071712202143150).epsilon(1e-13));
  CHECK(sp.c2 == doctest::Approx(2.6405592218111778).epsilon(1e-13));
  CHECK(sp.tau_const == doctest::Approx(6.6677278335856794).epsilon(1e-13));
  CHECK(sp.c1 < sp.c2);
  CHECK(sp.c2 < sp.c3);
  CHECK(sp.c3 < sp.c4);
  // a0 = tau c3^{-2} with tau = c2^2 (1 - 3 (c2-c1)^2)
  CHECK(sp.a0 == doctest::Approx(sp.tau_const / (sp.c3 * sp.c3)).epsilon(1e-14));
  CHECK_THROWS_AS(build_chi(3), domain_error);
}

TEST_CASE("chi_eval: identity segment and constant tail") {
  ChiSpec sp = build_chi(50);
  CHECK(chi_eval(sp, 1.0, 0) == 1.0);
  CHECK(chi_eval(sp, sp.c1, 1) == 1.0);
  CHECK(chi_eval(sp, sp.c4 + 1.0, 1) == 0.0);
  CHECK(chi_eval(sp, sp.c4 + 5.0, 2) == 0.0);
  CHECK(chi_eval(sp, sp.c4 + 5.0, 0) == sp.final_value);
}

TEST_CASE("chi: C1 continuity at all breakpoints, C2 at c1 and c2") {
  for (int n : {10, 50, 1000}) {
    ChiSpec sp = build_chi(n);
    const double eps = 1e-9;
    for (double b : {sp.c1, sp.c2, sp.c3, sp.c4}) {
      for (int d : {0, 1}) {
        double left = chi_eval(sp, b * (1.0 - eps), d);
        double right = chi_eval(sp, b * (1.0 + eps), d);
        CHECK(std::abs(left - right) <
              1e-6 * (1.0 + std::abs(left)));  // continuity up to FD slack
      }
    }
    // exact joins evaluated at the breakpoints themselves
    double x = sp.c2 - sp.c1;
    CHECK(chi_eval(sp, sp.c2, 1) ==
          doctest::Approx(1.0 - 3.0 * x * x).epsilon(1e-13));
    CHECK(chi_eval(sp, sp.c2 + 1e-12, 1) ==
          doctest::Approx(1.0 - 3.0 * x * x).epsilon(1e-9));
    // chi'' continuous at c1 and c2
    CHECK(chi_eval(sp, sp.c1 * (1 - eps), 2) ==
          doctest::Approx(chi_eval(sp, sp.c1 * (1 + eps), 2)).epsilon(1e-5));
    double l2 = chi_eval(sp, sp.c2 * (1 - eps), 2);
    double r2 = chi_eval(sp, sp.c2 * (1 + eps), 2);
    CHECK(std::abs(l2 - r2) < 1e-6 * (1.0 + std::abs(l2)));
  }
}

TEST_CASE("chi: inverse-law segment satisfies 2 chi' + s chi'' = 0") {
  ChiSpec sp = build_chi(200);
  for (int i = 0; i <= 50; ++i) {
    double s = sp.c2 + (sp.c3 - sp.c2) * i / 50.0;
    double v = 2.0 * chi_eval(sp, s, 1) + s * chi_eval(sp, s, 2);
    CHECK(std::abs(v) < 1e-12 * (1.0 + std::abs(chi_eval(sp, s, 1))));
  }
}

TEST_CASE("chi: psi joins chi' at c3 and dies at c4") {
  ChiSpec sp = build_chi(77);
  CHECK(sp.a0 == doctest::Approx(chi_eval(sp, sp.c3, 1)).epsilon(1e-12));
  CHECK(sp.a1 == doctest::Approx(chi_eval(sp, sp.c3, 2)).epsilon(1e-12));
  double D = sp.c4 - sp.c3;
  double psi_c4 = sp.a0 + sp.a1 * D + sp.a2 * D * D + sp.a3 * D * D * D;
  double dpsi_c4 = sp.a1 + 2.0 * sp.a2 * D + 3.0 * sp.a3 * D * D;
  CHECK(std::abs(psi_c4) < 1e-10 * (1.0 + sp.a0));
  CHECK(std::abs(dpsi_c4) < 1e-10 * (1.0 + std::abs(sp.a1)));
}

namespace {
// closed-form minimization oracle for the cubic psi and for 2 psi + s psi'
double min_cubic_on(const ChiSpec& sp, bool combined) {
  // scan critical points of the (low-degree) polynomial exactly
  double best = std::numeric_limits<double>::infinity();
  auto value = [&](double s) {
    double x = s - sp.c3;
    double psi = sp.a0 + sp.a1 * x + sp.a2 * x * x + sp.a3 * x * x * x;
    double dpsi = sp.a1 + 2.0 * sp.a2 * x + 3.0 * sp.a3 * x * x;
    return combined ? 2.0 * psi + s * dpsi : psi;
  };
  best = std::min(value(sp.c3), value(sp.c4));
  if (!combined) {
    // psi' = a1 + 2 a2 x + 3 a3 x^2 = 0
    double A = 3.0 * sp.a3, B = 2.0 * sp.a2, C = sp.a1;
    double disc = B * B - 4.0 * A * C;
    if (disc >= 0.0) {
      for (double sgn : {-1.0, 1.0}) {
        double x = (-B + sgn * std::sqrt(disc)) / (2.0 * A);
        double s = sp.c3 + x;
        if (s > sp.c3 && s < sp.c4) best = std::min(best, value(s));
      }
    }
  } else {
    // d/ds (2 psi + s psi') = 3 psi' + s psi'' is quadratic in x
    double A = 3.0 * 3.0 * sp.a3 + 6.0 * sp.a3;  // x^2 terms of 3psi' + s psi''... expanded below
    // expand q(x) = 3(a1 + 2a2 x + 3a3 x^2) + (c3 + x)(2a2 + 6a3 x)
    double q2 = 9.0 * sp.a3 + 6.0 * sp.a3;
    double q1 = 6.0 * sp.a2 + 2.0 * sp.a2 + 6.0 * sp.a3 * sp.c3;
    double q0 = 3.0 * sp.a1 + 2.0 * sp.a2 * sp.c3;
    (void)A;
    double disc = q1 * q1 - 4.0 * q2 * q0;
    if (disc >= 0.0 && q2 != 0.0) {
      for (double sgn : {-1.0, 1.0}) {
        double x = (-q1 + sgn * std::sqrt(disc)) / (2.0 * q2);
        double s = sp.c3 + x;
        if (s > sp.c3 && s < sp.c4) best = std::min(best, value(s));
      }
    }
  }
  return best;
}
}  // namespace

TEST_CASE("verify_chi_bounds: fitted constant stable, signs per the lemma") {
  ChiBoundsReport rep = verify_chi_bounds({50, 100, 500, 1000}, 2000);
  CHECK(rep.mid_nonnegative);
  CHECK(rep.a2_negative);
  CHECK(rep.a3_positive);
  CHECK(rep.bounded);
  CHECK(rep.variation < 0.20);
  for (const auto& row : rep.per_n) {
    ChiSpec sp = build_chi(row.n);
    // grid minima against the closed-form oracle
    CHECK(row.min_chi1_tail ==
          doctest::Approx(min_cubic_on(sp, false)).epsilon(1e-6));
    // the grid minimum can only overshoot the continuum minimum
    double oracle_comb = min_cubic_on(sp, true);
    CHECK(row.min_comb_tail >= oracle_comb - 1e-12);
    CHECK(row.min_comb_tail <= oracle_comb + 1e-4 * std::abs(oracle_comb) + 1e-12);
  }
  CHECK_THROWS_AS(verify_chi_bounds({5}), domain_error);
}

TEST_CASE("smoothstep: plateaus, monotonicity, C2 joins") {
  SmoothStep sig = SmoothStep::sigma();
  CHECK(smoothstep_eval(sig, 0.5, 0) == 1.0);
  CHECK(smoothstep_eval(sig, 5.0, 0) == 0.0);
  CHECK(smoothstep_eval(sig, 1.0, 1) == 0.0);
  CHECK(smoothstep_eval(sig, 4.0, 1) == 0.0);
  double prev = 1.0;
  for (int i = 1; i <= 100; ++i) {
    double s = 1.0 + 3.0 * i / 100.0;
    double v = smoothstep_eval(sig, s, 0);
    CHECK(v <= prev + 1e-15);
    CHECK(smoothstep_eval(sig, s, 1) <= 1e-15);
    prev = v;
  }
  // sign oracle: derivative of the quintic is -30 u^2 (1-u)^2 / w <= 0
  for (double s : {1.2, 2.0, 3.9}) {
    double u = (s - sig.lo) / (sig.hi - sig.lo);
    double expect = -30.0 * u * u * (1 - u) * (1 - u) / (sig.hi - sig.lo);
    CHECK(smoothstep_eval(sig, s, 1) == doctest::Approx(expect).epsilon(1e-13));
  }
}
