#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "conifold/numerics.hpp"
#include "conifold/radial_profiles.hpp"

using namespace conifold;

namespace {

// independent oracle: composite Simpson at fixed resolution, doubled until
// two consecutive levels agree
double simpson_oracle(const std::function<double(double)>& f, double a,
                      double b, int n0 = 64) {
  auto simpson = [&](int n) {
    double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
  };
  double prev = simpson(n0);
  for (int n = 2 * n0; n <= (1 << 22); n *= 2) {
    double cur = simpson(n);
    if (std::abs(cur - prev) < 1e-11 * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  return prev;
}

double def_integrand(double tau) {
  return std::cbrt(sinh_minus_lin(2.0 * tau));
}

}  // namespace

TEST_CASE("eta: cone closed form") {
  CHECK(eta(Profile::cone(), 8.0) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("eta: resolved solves the cubic") {
  // eta = 1 at r^4 = 5/2
  double r2 = std::sqrt(2.5);
  CHECK(eta(Profile::resolved(), r2) == doctest::Approx(1.0).epsilon(1e-13));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(0.01, 50.0);
  for (int i = 0; i < 200; ++i) {
    double s = dist(rng);
    double e = eta(Profile::resolved(), s);
    CHECK(std::abs(e * e * (e + 1.5) - s * s) / (s * s) < 1e-13);
  }
}

TEST_CASE("eta: deformed closed form at the reference point") {
  // frozen from 40-digit evaluation of the closed form
  double v = eta(Profile::deformed(1.0), std::cosh(1.0));
  CHECK(v == doctest::Approx(1.2256971095453988).epsilon(1e-14));
}

TEST_CASE("eta: domain errors") {
  CHECK_THROWS_AS(eta(Profile::cone(), -1.0), domain_error);
  CHECK_THROWS_AS(eta(Profile::deformed(1.0), 0.5), domain_error);
  CHECK_THROWS_AS(eta(Profile::deformed(1.0), 1.0), domain_error);
  CHECK_THROWS_AS(Profile::deformed(0.0), domain_error);
}

TEST_CASE("eta_prime: series and closed-form branches agree at the switch") {
  double t = 0.37;
  for (double tau : {0.05, 0.0999, 0.1001, 0.2}) {
    double r2 = t * std::cosh(tau);
    double ep = eta_prime(Profile::deformed(t), r2);
    double fd = fd_derivative(
        [&](double x) { return eta(Profile::deformed(t), x); }, r2, r2 * 1e-6);
    CHECK(ep == doctest::Approx(fd).epsilon(1e-9));
  }
}

TEST_CASE("f_value: cone and empty deformed interval") {
  CHECK(f_value(Profile::cone(), 1.0) == doctest::Approx(1.5).epsilon(1e-15));
  double t = 0.25;
  CHECK(f_value(Profile::deformed(t), t * (1.0 + 1e-11)) ==
        doctest::Approx(0.0).epsilon(1e-8));
}

TEST_CASE("f_value: deformed against frozen oracle and Simpson") {
  double v = f_value(Profile::deformed(0.1), 0.5);
  // frozen from 40-digit quadrature
  CHECK(v == doctest::Approx(0.58989065157329347).epsilon(1e-12));
  double T = std::acosh(0.5 / 0.1);
  double o = simpson_oracle(def_integrand, 0.0, T) *
             std::pow(0.1, 2.0 / 3.0) / std::cbrt(2.0);
  CHECK(std::abs(v - o) < 1e-10);
}

TEST_CASE("f_value: resolved anchored at f(1) = 0") {
  CHECK(f_value(Profile::resolved(), 1.0) == 0.0);
  double v = f_value(Profile::resolved(), 2.0);
  double o = simpson_oracle(
      [](double x) { return eta(Profile::resolved(), x) / x; }, 1.0, 2.0);
  CHECK(std::abs(v - o) < 1e-10);
}

TEST_CASE("derivatives: cone exact values") {
  ProfileEval e = derivatives(Profile::cone(), 1.0);
  CHECK(e.f1 == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e.f2 == doctest::Approx(-1.0 / 3.0).epsilon(1e-13));
  CHECK(e.f3 == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
  // fourth derivative of (3/2) s^{2/3}
  CHECK(e.f4 == doctest::Approx(-28.0 / 27.0).epsilon(1e-13));
  CHECK(e.ode_residual < 1e-14);
}

TEST_CASE("derivatives: deformed reference point and ODE residual") {
  Profile p = Profile::deformed(1.0);
  ProfileEval e = derivatives(p, std::cosh(1.0));
  CHECK(e.f1 == doctest::Approx(0.79431825005836718).epsilon(1e-13));
  CHECK(e.ode_residual < 1e-12);
  CHECK(e.f1 * std::cosh(1.0) == doctest::Approx(e.eta).epsilon(1e-15));
}

TEST_CASE("derivatives: resolved frozen higher derivatives") {
  ProfileEval e = derivatives(Profile::resolved(), 1.7);
  CHECK(e.eta == doctest::Approx(1.0620705755994612).epsilon(1e-13));
  CHECK(e.f1 == doctest::Approx(0.62474739741144778).epsilon(1e-13));
  CHECK(e.f2 == doctest::Approx(-0.063093429033729244).epsilon(1e-12));
  CHECK(e.f3 == doctest::Approx(0.028577310914240261).epsilon(1e-11));
  CHECK(e.f4 == doctest::Approx(-0.023776834274298885).epsilon(1e-10));
}

TEST_CASE("derivatives: ODE residual over random deformed samples") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> td(-3.0, 0.0), rd(0.01, 3.0);
  for (int i = 0; i < 100; ++i) {
    double t = std::pow(10.0, td(rng));
    double ratio = 1.001 + std::pow(10.0, rd(rng));
    Profile p = Profile::deformed(t);
    CHECK(ode_residual(p, t * ratio) < 1e-9);
  }
}

TEST_CASE("derivatives: f' equals finite difference of f on [1.01 t, 10 t]") {
  Profile p = Profile::deformed(0.3);
  for (double m : {1.01, 1.5, 3.0, 10.0}) {
    double s = 0.3 * m;
    ProfileEval e = derivatives(p, s, false);
    double fd = fd_derivative([&](double x) { return f_value(p, x); }, s,
                              std::min(s * 1e-5, (s - 0.3) * 0.25));
    CHECK(e.f1 == doctest::Approx(fd).epsilon(1e-8));
  }
}

TEST_CASE("h: limits and exact-rewrite consistency") {
  CHECK(std::abs(static_cast<double>(h_of_tau(1e-3L)) - 2.0 / 3.0) < 1e-5);
  CHECK(std::abs(static_cast<double>(h_of_tau(20.0L)) - 1.0) < 1e-8);
  // the two evaluation branches agree near the switch
  for (double tau : {0.4999, 0.5001, 0.3, 0.7}) {
    long double direct = 0.5L * std::cosh((long double)tau) *
                         sinh_minus_lin(2.0L * (long double)tau) /
                         std::pow(std::sinh((long double)tau), 3.0L);
    CHECK(std::abs(static_cast<double>(h_of_tau(tau) - direct)) < 1e-15);
  }
}

TEST_CASE("h1: positivity, frozen value, and the appendix series for h1'") {
  CHECK(static_cast<double>(h1_of_tau(1.0L)) ==
        doctest::Approx(0.64381015862620662).epsilon(1e-13));
  // h1'(tau) = 4 tau sum_{n>=1} (2tau)^{2n+1} n / ((2n+1)! (n+1))
  for (double tau : {0.2, 0.45, 1.0, 2.0}) {
    double series = 0.0, pw = std::pow(2.0 * tau, 3.0), fact = 6.0;
    for (int n = 1; n < 40; ++n) {
      series += pw * n / (fact * (n + 1.0));
      pw *= 4.0 * tau * tau;
      fact *= (2.0 * n + 2.0) * (2.0 * n + 3.0);
    }
    series *= 4.0 * tau;
    double fd = (static_cast<double>(h1_of_tau(tau + 1e-5)) -
                 static_cast<double>(h1_of_tau(tau - 1e-5))) /
                2e-5;
    CHECK(fd == doctest::Approx(series).epsilon(1e-8));
  }
}

TEST_CASE("monotonicity witness on the acceptance grid") {
  std::vector<double> grid;
  int N = 1000;
  for (int i = 0; i < N; ++i)
    grid.push_back(1e-3 * std::pow(20.0 / 1e-3, double(i) / (N - 1)));
  MonotoneWitness w = monotonicity_witness(grid);
  CHECK(w.h_strictly_increasing);
  CHECK(w.h1_positive);
}

TEST_CASE("convergence table: k = 0,1,2 decreasing in t") {
  std::vector<double> ts{1e-1, 1e-2, 1e-3, 1e-4};
  for (int k = 0; k <= 2; ++k) {
    ConvergenceTable tab = convergence_table(k, 0.25, ts, 40);
    CHECK(tab.strictly_decreasing);
    CHECK(tab.sup_errors.back() >= 0.0);
  }
  // t = 0 column: identical profiles
  ConvergenceTable z = convergence_table(0, 0.5, {0.0}, 10);
  CHECK(z.sup_errors[0] == 0.0);
}

TEST_CASE("ratio bounds: small t holds, near-delta' t reported honestly") {
  RatioBounds rb = ratio_bounds(0.05, 0.2, 1e-4, 60);
  CHECK(rb.f1_band_holds);
  CHECK(rb.f2_band_holds);
  CHECK(rb.alpha_estimate > 1e-4);
  CHECK(rb.alpha_estimate < 0.05);
  // pass/fail agrees on a 10x finer grid
  RatioBounds fine = ratio_bounds(0.05, 0.2, 1e-4, 600);
  CHECK(fine.f1_band_holds == rb.f1_band_holds);
  CHECK(fine.f2_band_holds == rb.f2_band_holds);

  // t close to delta': the f'' ratio approaches its infimum
  // (3/5)(2/3)^{1/3} = 0.5243 as s -> t, still inside the band
  RatioBounds close = ratio_bounds(0.05, 0.2, 0.049, 60);
  CHECK(close.f2_band_holds);
  CHECK(close.f2_ratio_min > 0.5);
  CHECK(close.f2_ratio_min < 0.56);
  CHECK(close.first_failure_s == 0.0);
}

TEST_CASE("asymptotic constants: unit-interval law and stability") {
  double t = 0.05;
  auto grid = [&](double hi) {
    std::vector<double> g;
    for (int i = 0; i < 60; ++i)
      g.push_back(t * (10.0 * std::pow(hi / 10.0, double(i) / 59)));
    return g;
  };
  AsymptoticConstants a = asymptotic_constants(t, grid(1e4));
  CHECK(a.eta_prime_in_unit_interval);
  AsymptoticConstants b = asymptotic_constants(t, grid(1e6));
  for (int k = 0; k < 4; ++k) {
    CHECK(b.sup_scaled[k] <= a.sup_scaled[k] * 1.10);
    CHECK(b.sup_scaled[k] >= a.sup_scaled[k] * 0.90);
  }
  // cone exact check: |f''| r^{8/3} = 1/3
  ProfileEval e = derivatives(Profile::cone(), 3.7);
  CHECK(std::abs(e.f2) * std::pow(3.7, 4.0 / 3.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}
