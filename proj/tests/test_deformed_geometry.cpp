#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conifold/deformed_geometry.hpp"
#include "conifold/radial_profiles.hpp"

using namespace conifold;

TEST_CASE("q_point: constraint residuals") {
  QPoint q = q_point(1.0, 2.0);
  CHECK(q.constraint_residual < 1e-14);
  CHECK(q.radius_residual < 1e-14);
  CHECK(q.w[2] == cplx(0.0, 0.0));
  QPoint tip = q_point(1.0, 1.0);  // degenerate boundary accepted as limit
  CHECK(std::abs(tip.w[3] - 1.0) < 1e-15);
  QPoint small = q_point(0.01, 0.5);
  CHECK(small.constraint_residual < 1e-14);
  CHECK(small.radius_residual < 1e-14);
  CHECK_THROWS_AS(q_point(1.0, 0.5), domain_error);
}

TEST_CASE("chart: scales positive, base point reproduced") {
  ChartMap c = chart_at(q_point(0.7, 1.9));
  CHECK(c.scale1 > 0.0);
  CHECK(c.scale2 > 0.0);
  CHECK(c.scale3 > 0.0);
  std::array<cplx, 3> zero{};
  CHECK(c.r2_of(zero) == doctest::Approx(1.9).epsilon(1e-13));
  std::array<cplx, 4> w = c.w_of(zero);
  for (int a = 0; a < 4; ++a) CHECK(std::abs(w[a] - c.w_q[a]) < 1e-14);
}

TEST_CASE("partial table: frozen values at t=1, r2=2") {
  PartialTable tb = r2_partials(1.0, 2.0);
  CHECK(tb.eta == doctest::Approx(1.4896688617259771).epsilon(1e-13));
  CHECK(std::abs(tb.d1(0)) == 0.0);
  CHECK(std::abs(tb.d1(2)) == 0.0);
  CHECK(tb.d1(1).imag() ==
        doctest::Approx(-1.5800324307733258).epsilon(1e-13));
  CHECK(tb.mixed(0, 0).real() ==
        doctest::Approx(1.3425802548378014).epsilon(1e-13));
  CHECK(tb.mixed(1, 1).real() ==
        doctest::Approx(1.6643349881969763).epsilon(1e-13));
  CHECK(tb.d3[0][0][0].real() ==
        doctest::Approx(0.89815182420221189).epsilon(1e-12));
  CHECK(tb.d4[0][0][0][0].real() ==
        doctest::Approx(1.8025217406803359).epsilon(1e-12));
  // conjugation symmetry of the printed pairs
  CHECK(tb.d4[0][0][1][1].real() == doctest::Approx(1.5 * tb.eta / 2.0));
}

TEST_CASE("partial table: FD oracle passes across the sampled family") {
  for (double t : {1.0, 0.1, 0.01}) {
    for (double ratio : {1.001, 1.5, 40.0, 1000.0}) {
      CHECK_NOTHROW(r2_partials(t, t * ratio, true));
    }
  }
}

TEST_CASE("metric at q is the identity") {
  for (double t : {1.0, 0.05}) {
    for (double ratio : {1.001, 2.0, 100.0}) {
      MetricAtQ m = metric_at_q(t, t * ratio);
      CHECK(m.max_dev_from_identity < 1e-10);
    }
  }
}

TEST_CASE("auxiliary forms at q match the printed diagonals") {
  double t = 0.3, r2 = 0.75;
  MetricAtQ m = metric_at_q(t, r2);
  double e = eta(Profile::deformed(t), r2);
  double h = e * e * e / (r2 * r2);
  double mu = std::cbrt(r2) * std::cbrt(r2 * r2 / (e * e * e));
  CHECK(m.ddbar_r2(0, 0).real() == doctest::Approx(mu).epsilon(1e-12));
  CHECK(m.ddbar_r2(1, 1).real() ==
        doctest::Approx(1.5 * h * mu).epsilon(1e-12));
  CHECK(m.ddbar_r2(2, 2).real() == doctest::Approx(mu).epsilon(1e-12));
  // dr2 ^ dbar r2 coefficient on dz2 dz2bar:
  // (3/2) (r2)^{4/3} h^{2/3} (1 - t^2/r^4)
  double expect = 1.5 * std::pow(r2, 4.0 / 3.0) * std::pow(h, 2.0 / 3.0) *
                  (1.0 - t * t / (r2 * r2));
  CHECK(m.dr2_outer(1, 1).real() == doctest::Approx(expect).epsilon(1e-12));
  CHECK(std::abs(m.dr2_outer(0, 0)) < 1e-15);
  // det of ddbar r^2 = (3/2) r^2
  CHECK(m.ddbar_r2.determinant().real() ==
        doctest::Approx(1.5 * r2).epsilon(1e-12));
}

TEST_CASE("curvature: symmetries, Ricci flatness, printed sub-identity") {
  for (double t : {1.0, 0.01}) {
    for (double ratio : {1.001, 3.0, 200.0}) {
      double r2 = t * ratio;
      CurvatureTensor R = curvature_at_q(t, r2);
      CHECK(R.kahler_symmetry_dev() < 1e-10);
      CHECK(R.conj_symmetry_dev() < 1e-10);
      CHECK(R.ricci_trace_max() < 1e-8 * R.scale());

      // combined second and third items of the R_{1 3b 1 3b} computation:
      // -f' (r2)_{1 3b 1 3b} + (f')^2 (r2)_{1 1 1b} (r2)_{3b 3b 1}
      PartialTable tb = r2_partials(t, r2, false);
      ProfileEval pe = derivatives(Profile::deformed(t), r2, false);
      cplx combined = -pe.f1 * tb.fourth(0, 2, 0, 2) +
                      pe.f1 * pe.f1 * tb.d3[0][0][0] *
                          std::conj(tb.d3[2][2][0]);
      double expect = -2.0 * r2 / (tb.eta * (r2 + t));
      CHECK(combined.real() == doctest::Approx(expect).epsilon(1e-10));
      CHECK(std::abs(combined.imag()) < 1e-10 * std::abs(expect));
    }
  }
}

TEST_CASE("curvature: FD oracle agreement on dominant components") {
  for (double t : {1.0, 0.05}) {
    for (double ratio : {1.001, 2.0, 50.0}) {
      CurvatureTensor a = curvature_at_q(t, t * ratio);
      CurvatureTensor b = curvature_fd_oracle(t, t * ratio);
      CurvatureComparison cmp = compare_curvature(a, b);
      CHECK(cmp.max_rel_dev_dominant < 1e-3);
    }
  }
}

TEST_CASE("curvature bound r^{4/3}|R| is stable across the family") {
  double lo = 1e9, hi = 0.0;
  for (double t : {1e-3, 1e-2, 1e-1, 1.0}) {
    for (double ratio : {1.001, 1.1, 3.0, 30.0, 1000.0}) {
      CurvatureTensor R = curvature_at_q(t, t * ratio);
      double scaled = R.max_abs() / R.scale();
      lo = std::min(lo, scaled);
      hi = std::max(hi, scaled);
    }
  }
  CHECK(hi < 10.0);   // finite constant
  CHECK(lo > 0.01);   // and genuinely two-sided
}

TEST_CASE("volume and gradient comparison") {
  for (double t : {1.0, 0.02}) {
    for (double ratio : {1.01, 2.0, 1000.0}) {
      VolumeGradient vg = volume_and_gradient_comparison(t, t * ratio);
      CHECK(vg.vol_ratio * t * ratio == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
      CHECK(vg.grad_const > 0.5);
      CHECK(vg.grad_const < 1.0 + 1e-9);
    }
  }
  // cone limit: h -> 1 makes the constant approach 1
  VolumeGradient far = volume_and_gradient_comparison(1e-3, 1.0);
  CHECK(far.grad_const == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("s3 limit: tip eigenvalues extrapolate to (1/2)(2t^2/3)^{1/3}") {
  for (double t : {1.0, 0.1}) {
    S3Limit lim = s3_limit(t, {0.04, 0.02, 0.01, 0.005});
    double expect = 0.5 * std::cbrt(2.0 * t * t / 3.0);
    CHECK(lim.formula_value == doctest::Approx(expect).epsilon(1e-15));
    CHECK(std::abs(lim.extrapolated - expect) < 1e-3 * expect);
    // at eps = 1e-2 every eigenvalue is already within a few percent
    for (double v : lim.rows[2].eigenvalues)
      CHECK(std::abs(v - expect) < 0.05 * expect);
  }
  // homogeneity of the limit in t
  S3Limit l1 = s3_limit(1.0, {0.02, 0.01});
  S3Limit l2 = s3_limit(0.3, {0.02, 0.01});
  CHECK(l2.extrapolated / l1.extrapolated ==
        doctest::Approx(std::pow(0.3, 2.0 / 3.0)).epsilon(1e-6));
}
