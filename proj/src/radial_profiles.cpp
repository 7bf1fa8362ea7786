#include "conifold/radial_profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "conifold/numerics.hpp"

namespace conifold {

namespace {

// The deformed-profile chain stacks several cancellations near the tip
// (the f'' bracket is O(tau^2) out of O(1) terms, and each further
// derivative divides by s - t again), so the scalar chain runs in long
// double and results are narrowed on return.
using ldbl = long double;

// tau below which the eta'(s) Taylor branch is used; both branches agree to
// ~1e-13 there (checked in the tests)
constexpr ldbl kEtaPrimeSeriesTau = 0.1L;

ldbl tau_of_l(ldbl t, ldbl r2) {
  ldbl d = (r2 - t) / t;
  if (d < 0.0L) throw domain_error("tau_of: r2 < t");
  return std::asinh(std::sqrt(d * (2.0L + d)));
}

double tau_of(double t, double r2) {
  return static_cast<double>(tau_of_l(t, r2));
}

ldbl eta_deformed_l(ldbl t, ldbl r2) {
  ldbl tau = tau_of_l(t, r2);
  ldbl g = std::cbrt(0.5L * sinh_minus_lin(2.0L * tau));
  // cbrt(sml)/tanh is finite as tau -> 0: sml ~ (4/3) tau^3
  return std::pow(t, 2.0L / 3.0L) * g / std::tanh(tau);
}

double eta_deformed(double t, double r2) {
  return static_cast<double>(eta_deformed_l(t, r2));
}

// d eta / ds from the ODE, s (s^2-t^2) (eta^3)' + 3 t^2 eta^3 = 2 s^4;
// Taylor branch in tau near the tip where the quotient is 0/0.
ldbl eta_prime_deformed_l(ldbl t, ldbl r2, ldbl eta_val) {
  ldbl tau = tau_of_l(t, r2);
  if (tau < kEtaPrimeSeriesTau) {
    ldbl t2 = tau * tau;
    ldbl series =
        4.0L / 5.0L +
        t2 * (-22.0L / 175.0L +
              t2 * (23.0L / 1050.0L +
                    t2 * (-71.0L / 19404.0L +
                          t2 * (713081.0L / 1261260000.0L))));
    return std::cbrt(2.0L / 3.0L) * series / std::cbrt(t);
  }
  ldbl s = r2;
  ldbl e3 = eta_val * eta_val * eta_val;
  return (2.0L * s * s * s * s - 3.0L * t * t * e3) /
         (3.0L * s * (s * s - t * t) * eta_val * eta_val);
}

double eta_prime_deformed(double t, double r2, double /*eta_val*/) {
  ldbl e = eta_deformed_l(t, r2);
  return static_cast<double>(eta_prime_deformed_l(t, r2, e));
}

double eta_resolved(double s) {
  // eta^2 (eta + 3/2) = s^2, started from the large-r asymptote eta = s^{2/3};
  // g is increasing and convex on eta > 0, so Newton from above is monotone
  double target = s * s;
  auto g = [&](double e) { return e * e * (e + 1.5) - target; };
  auto dg = [&](double e) { return 3.0 * e * e + 3.0 * e; };
  double x0 = std::pow(s, 2.0 / 3.0);
  return newton_safeguarded(g, dg, x0, 0.0, x0 + 2.0, 1e-14, 100);
}

double deformed_integrand(double tau) {
  return std::cbrt(sinh_minus_lin(2.0 * tau));
}

}  // namespace

Profile Profile::deformed(double t) {
  if (!(t > 0.0)) throw domain_error("Profile::deformed requires t > 0");
  return {ProfileKind::deformed, t};
}

RadialSample make_sample(const Profile& p, double r2, double guard) {
  if (!(r2 > 0.0)) throw domain_error("make_sample: r2 must be positive");
  RadialSample s;
  s.r2 = r2;
  if (p.kind == ProfileKind::deformed) {
    if (!(r2 > p.t * (1.0 + guard)))
      throw domain_error("make_sample: deformed profile needs r2 > t");
    s.tau = tau_of(p.t, r2);
    s.eps = p.t / r2;
  }
  return s;
}

double eta(const Profile& p, double r2) {
  make_sample(p, r2);
  switch (p.kind) {
    case ProfileKind::cone:
      return std::pow(r2, 2.0 / 3.0);
    case ProfileKind::resolved:
      return eta_resolved(r2);
    case ProfileKind::deformed:
      return eta_deformed(p.t, r2);
  }
  throw domain_error("eta: bad kind");
}

double eta_prime(const Profile& p, double r2) {
  make_sample(p, r2);
  switch (p.kind) {
    case ProfileKind::cone:
      return (2.0 / 3.0) * std::pow(r2, -1.0 / 3.0);
    case ProfileKind::resolved: {
      double e = eta_resolved(r2);
      return 2.0 * r2 / (3.0 * e * (e + 1.0));
    }
    case ProfileKind::deformed:
      return eta_prime_deformed(p.t, r2, eta_deformed(p.t, r2));
  }
  throw domain_error("eta_prime: bad kind");
}

double f_value(const Profile& p, double s, double abs_tol) {
  make_sample(p, s);
  switch (p.kind) {
    case ProfileKind::cone:
      return 1.5 * std::pow(s, 2.0 / 3.0);
    case ProfileKind::resolved: {
      // anchor f(1) = 0
      if (s == 1.0) return 0.0;
      return integrate_gk([](double x) { return eta_resolved(x) / x; },
                          1.0, s, abs_tol);
    }
    case ProfileKind::deformed: {
      double T = tau_of(p.t, s);
      if (T == 0.0) return 0.0;
      double I = integrate_gk(deformed_integrand, 0.0, T, abs_tol);
      return std::pow(p.t, 2.0 / 3.0) / std::cbrt(2.0) * I;
    }
  }
  throw domain_error("f_value: bad kind");
}

double ode_residual(const Profile& p, double s) {
  double e = eta(p, s);
  if (p.kind == ProfileKind::resolved) {
    return std::abs(e * e * (e + 1.5) - s * s) / (s * s);
  }
  double ep = eta_prime(p, s);
  double t = p.t;
  double e3p = 3.0 * e * e * ep;  // (eta^3)'
  double s4 = s * s * s * s;
  double lhs = s * (s * s - t * t) * e3p + 3.0 * t * t * e * e * e;
  return std::abs(lhs - 2.0 * s4) / (2.0 * s4);
}

namespace {

// f'' .. f'''' for cone/deformed from the closed second-derivative law
//   f'' = (-f'/s + (2/3) s^{-2} f'^{-2}) * B,  B = (1 - t^2/s^2)^{-1},
// differentiated twice more in closed form.
struct Chain {
  double f2, f3, f4;
};

Chain chain_derivatives(ldbl t, ldbl s, ldbl f1) {
  ldbl B = (t == 0.0L) ? 1.0L : (s * s) / ((s - t) * (s + t));
  ldbl f2 = (-f1 / s + (2.0L / 3.0L) / (s * s * f1 * f1)) * B;
  ldbl t2 = t * t;
  ldbl Ap = -f2 / s + f1 / (s * s) - (4.0L / 3.0L) / (s * s * s * f1 * f1) -
            (4.0L / 3.0L) * f2 / (s * s * f1 * f1 * f1);
  ldbl f3 = B * (Ap - 2.0L * t2 * f2 / (s * s * s));
  ldbl App = -f3 / s + 2.0L * f2 / (s * s) - 2.0L * f1 / (s * s * s) +
             4.0L / (s * s * s * s * f1 * f1) +
             (16.0L / 3.0L) * f2 / (s * s * s * f1 * f1 * f1) +
             4.0L * f2 * f2 / (s * s * f1 * f1 * f1 * f1) -
             (4.0L / 3.0L) * f3 / (s * s * f1 * f1 * f1);
  ldbl f4 = B * (App + 6.0L * t2 * f2 / (s * s * s * s) -
                 4.0L * t2 * f3 / (s * s * s));
  return {static_cast<double>(f2), static_cast<double>(f3),
          static_cast<double>(f4)};
}

// resolved-side eta derivatives from eta^2(eta+3/2) = s^2
struct ResolvedEtaDerivs {
  double e, e1, e2, e3;
};

ResolvedEtaDerivs resolved_eta_derivs(double s) {
  double e = eta_resolved(s);
  double P = 3.0 * e * e + 3.0 * e;
  double e1 = 2.0 * s / P;
  double Ps = (6.0 * e + 3.0) * e1;
  double e2 = 2.0 / P - 2.0 * s * (6.0 * e + 3.0) * e1 / (P * P);
  double e3v = -2.0 * Ps / (P * P) - 2.0 * (6.0 * e + 3.0) * e1 / (P * P) -
               2.0 * s * (6.0 * e1 * e1 + (6.0 * e + 3.0) * e2) / (P * P) +
               4.0 * s * (6.0 * e + 3.0) * e1 * Ps / (P * P * P);
  return {e, e1, e2, e3v};
}

}  // namespace

ProfileEval derivatives(const Profile& p, double s, bool fd_verify) {
  make_sample(p, s);
  ProfileEval out;
  out.f = f_value(p, s);
  switch (p.kind) {
    case ProfileKind::cone: {
      out.eta = std::pow(s, 2.0 / 3.0);
      out.eta_prime = (2.0 / 3.0) * std::pow(s, -1.0 / 3.0);
      out.f1 = out.eta / s;
      Chain c = chain_derivatives(0.0, s, out.f1);
      out.f2 = c.f2;
      out.f3 = c.f3;
      out.f4 = c.f4;
      break;
    }
    case ProfileKind::resolved: {
      ResolvedEtaDerivs d = resolved_eta_derivs(s);
      out.eta = d.e;
      out.eta_prime = d.e1;
      out.f1 = d.e / s;
      // from eta = s f': f^{(k+1)} = (eta^{(k)} - k f^{(k)}) / s
      out.f2 = (d.e1 - out.f1) / s;
      out.f3 = (d.e2 - 2.0 * out.f2) / s;
      out.f4 = (d.e3 - 3.0 * out.f3) / s;
      break;
    }
    case ProfileKind::deformed: {
      ldbl e_l = eta_deformed_l(p.t, s);
      ldbl f1_l = e_l / static_cast<ldbl>(s);
      out.eta = static_cast<double>(e_l);
      out.eta_prime =
          static_cast<double>(eta_prime_deformed_l(p.t, s, e_l));
      out.f1 = static_cast<double>(f1_l);
      Chain c = chain_derivatives(p.t, s, f1_l);
      out.f2 = c.f2;
      out.f3 = c.f3;
      out.f4 = c.f4;
      break;
    }
  }
  out.ode_residual = ode_residual(p, s);

  if (fd_verify) {
    const double h = s * 1e-5;
    auto check = [&](double analytic, double fd, const char* name) {
      double scale = std::max({std::abs(analytic), std::abs(fd), 1e-30});
      if (std::abs(analytic - fd) > 1e-6 * scale)
        throw verification_error(std::string("derivatives: FD mismatch on ") +
                                 name);
    };
    // the quadrature error enters the difference quotient divided by h, so
    // the integration tolerance has to track the stencil width
    double quad_tol = std::max(1e-16, 1e-8 * std::abs(out.f1) * h);
    check(out.f1,
          fd_derivative([&](double x) { return f_value(p, x, quad_tol); }, s,
                        h),
          "f'");
    check(out.f2,
          fd_derivative([&](double x) { return derivatives(p, x, false).f1; },
                        s, h),
          "f''");
    check(out.f3,
          fd_derivative([&](double x) { return derivatives(p, x, false).f2; },
                        s, h),
          "f'''");
    check(out.f4,
          fd_derivative([&](double x) { return derivatives(p, x, false).f3; },
                        s, h),
          "f''''");
    check(out.eta_prime,
          fd_derivative([&](double x) { return eta(p, x); }, s, h), "eta'");
  }
  return out;
}

// ---------------------------------------------------------------------------

long double h_of_tau(long double tau) {
  if (!(tau > 0.0L)) throw domain_error("h_of_tau: tau must be positive");
  if (tau < 0.5L) {
    long double sml = sinh_minus_lin(2.0L * tau);
    long double sh = std::sinh(tau);
    return 0.5L * std::cosh(tau) * sml / (sh * sh * sh);
  }
  // exact rewrite in x = exp(-2 tau); cancellation-free for large tau
  long double x = std::exp(-2.0L * tau);
  long double om = 1.0L - x;
  return (1.0L + x) * (1.0L - x * x - 4.0L * tau * x) / (om * om * om);
}

long double h1_of_tau(long double tau) {
  if (!(tau > 0.0L)) throw domain_error("h1_of_tau: tau must be positive");
  if (tau >= 0.5L)
    return 4.0L * tau + std::exp(2.0L * tau) * (tau - 1.5L) +
           std::exp(-2.0L * tau) * (tau + 1.5L);
  // h1 = sum_{k>=2} (2 tau)^{2k+1} (2k-2) / (2k+1)!
  long double x = 2.0L * tau;
  long double x2 = x * x;
  long double pw = x2 * x2 * x;  // x^5
  long double fact = 120.0L;     // 5!
  long double sum = 0.0L;
  for (int k = 2; k < 40; ++k) {
    long double term = pw * (2.0L * k - 2.0L) / fact;
    sum += term;
    if (term < 1e-25L * sum) break;
    pw *= x2;
    fact *= (2.0L * k + 2.0L) * (2.0L * k + 3.0L);
  }
  return sum;
}

MonotoneWitness monotonicity_witness(const std::vector<double>& tau_grid) {
  MonotoneWitness w;
  w.tau_grid = tau_grid;
  if (tau_grid.empty()) throw domain_error("monotonicity_witness: empty grid");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > 0.0))
      throw domain_error("monotonicity_witness: tau must be positive");
    if (i > 0 && !(tau_grid[i] > tau_grid[i - 1]))
      throw domain_error("monotonicity_witness: grid not increasing");
    w.h_values.push_back(h_of_tau(tau_grid[i]));
    w.h1_values.push_back(h1_of_tau(tau_grid[i]));
  }
  w.h_strictly_increasing = true;
  for (std::size_t i = 1; i < w.h_values.size(); ++i)
    if (!(w.h_values[i] > w.h_values[i - 1])) w.h_strictly_increasing = false;
  w.h1_positive = true;
  for (long double v : w.h1_values)
    if (!(v > 0.0L)) w.h1_positive = false;
  return w;
}

// ---------------------------------------------------------------------------

ConvergenceTable convergence_table(int k, double delta,
                                   const std::vector<double>& t_list,
                                   int grid_size) {
  if (k < 0 || k > 2) throw domain_error("convergence_table: k in 0..2");
  if (!(delta > 0.0 && delta < 1.0))
    throw domain_error("convergence_table: delta in (0,1)");
  if (grid_size < 2) throw domain_error("convergence_table: grid too small");
  ConvergenceTable tab;
  tab.k = k;
  tab.delta = delta;
  tab.t_list = t_list;
  Profile cone = Profile::cone();
  for (double t : t_list) {
    if (!(t >= 0.0 && t < delta))
      throw domain_error("convergence_table: need 0 <= t < delta");
    Profile pt = (t == 0.0) ? cone : Profile::deformed(t);
    double sup = 0.0;
    for (int i = 0; i < grid_size; ++i) {
      double s = delta + (1.0 - delta) * i / (grid_size - 1);
      double a, b;
      if (k == 0) {
        a = f_value(pt, s);
        b = f_value(cone, s);
      } else {
        ProfileEval ea = derivatives(pt, s, false);
        ProfileEval eb = derivatives(cone, s, false);
        a = (k == 1) ? ea.f1 : ea.f2;
        b = (k == 1) ? eb.f1 : eb.f2;
      }
      sup = std::max(sup, std::abs(a - b));
    }
    tab.sup_errors.push_back(sup);
  }
  tab.strictly_decreasing = true;
  for (std::size_t i = 1; i < tab.sup_errors.size(); ++i) {
    // t_list is expected decreasing; a zero column (t = 0) stays admissible
    if (tab.t_list[i] < tab.t_list[i - 1] &&
        !(tab.sup_errors[i] < tab.sup_errors[i - 1]) &&
        tab.sup_errors[i - 1] != 0.0)
      tab.strictly_decreasing = false;
  }
  return tab;
}

namespace {

RatioBounds ratio_bounds_once(double delta_prime, double delta, double t,
                              int grid_size) {
  RatioBounds rb;
  rb.f1_ratio_min = rb.f2_ratio_min = std::numeric_limits<double>::infinity();
  rb.f1_ratio_max = rb.f2_ratio_max = -rb.f1_ratio_min;
  rb.f1_band_holds = rb.f2_band_holds = true;
  Profile cone = Profile::cone();
  Profile pt = Profile::deformed(t);
  for (int i = 0; i < grid_size; ++i) {
    double s = delta_prime + (delta - delta_prime) * i / (grid_size - 1);
    ProfileEval et = derivatives(pt, s, false);
    ProfileEval e0 = derivatives(cone, s, false);
    double r1 = et.f1 / e0.f1;
    double r2 = et.f2 / e0.f2;
    rb.f1_ratio_min = std::min(rb.f1_ratio_min, r1);
    rb.f1_ratio_max = std::max(rb.f1_ratio_max, r1);
    rb.f2_ratio_min = std::min(rb.f2_ratio_min, r2);
    rb.f2_ratio_max = std::max(rb.f2_ratio_max, r2);
    bool ok1 = r1 >= 0.5 && r1 <= 2.0;
    bool ok2 = r2 >= 0.5 && r2 <= 2.0;
    if (!ok1) rb.f1_band_holds = false;
    if (!ok2) rb.f2_band_holds = false;
    if ((!ok1 || !ok2) && rb.first_failure_s == 0.0) rb.first_failure_s = s;
  }
  return rb;
}

}  // namespace

RatioBounds ratio_bounds(double delta_prime, double delta, double t,
                         int grid_size) {
  if (!(0.0 < delta_prime && delta_prime < delta && delta < 0.25))
    throw domain_error("ratio_bounds: need 0 < delta' < delta < 1/4");
  if (!(t > 0.0 && t < delta_prime))
    throw domain_error("ratio_bounds: need 0 < t < delta'");
  RatioBounds rb = ratio_bounds_once(delta_prime, delta, t, grid_size);

  // empirical alpha_{delta'}: bisect for the largest admissible t
  double lo = 0.0, hi = delta_prime * (1.0 - 1e-9);
  auto holds = [&](double tt) {
    if (tt <= 0.0) return true;
    RatioBounds r = ratio_bounds_once(delta_prime, delta, tt, grid_size);
    return r.f1_band_holds && r.f2_band_holds;
  };
  if (holds(hi)) {
    rb.alpha_estimate = hi;
  } else {
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      (holds(mid) ? lo : hi) = mid;
    }
    rb.alpha_estimate = lo;
  }
  return rb;
}

AsymptoticConstants asymptotic_constants(double t,
                                         const std::vector<double>& r2_grid) {
  AsymptoticConstants out;
  out.min_r23_eta_prime = std::numeric_limits<double>::infinity();
  out.max_r23_eta_prime = -out.min_r23_eta_prime;
  Profile p = Profile::deformed(t);
  for (double r2 : r2_grid) {
    double eps = t / r2;
    if (eps > 1.0 - 1e-3)
      throw domain_error("asymptotic_constants: grid too close to the tip");
    ProfileEval e = derivatives(p, r2, false);
    double r13 = std::pow(r2, 1.0 / 3.0);   // r^{2/3}
    double ome = 1.0 - eps;
    out.sup_scaled[0] = std::max(out.sup_scaled[0], std::abs(e.f1) * r13);
    out.sup_scaled[1] =
        std::max(out.sup_scaled[1], std::abs(e.f2) * std::pow(r2, 4.0 / 3.0));
    out.sup_scaled[2] = std::max(
        out.sup_scaled[2], std::abs(e.f3) * std::pow(r2, 7.0 / 3.0) * ome);
    out.sup_scaled[3] =
        std::max(out.sup_scaled[3],
                 std::abs(e.f4) * std::pow(r2, 10.0 / 3.0) * ome * ome);
    double g = r13 * e.eta_prime;
    out.min_r23_eta_prime = std::min(out.min_r23_eta_prime, g);
    out.max_r23_eta_prime = std::max(out.max_r23_eta_prime, g);
  }
  out.eta_prime_in_unit_interval =
      out.min_r23_eta_prime > 0.0 && out.max_r23_eta_prime < 1.0;
  return out;
}

}  // namespace conifold
