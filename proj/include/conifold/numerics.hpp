#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "conifold/errors.hpp"

namespace conifold {

// sinh(x) - x without cancellation.  The direct difference loses half the
// mantissa below x ~ 1; the Taylor sum x^3/3! + x^5/5! + ... converges fast
// and is exact to rounding for |x| < 1.
template <class Real>
Real sinh_minus_lin(Real x) {
  Real ax = x < 0 ? -x : x;
  if (ax >= Real(1)) return std::sinh(x) - x;
  Real x2 = x * x;
  Real term = x * x2 / Real(6);
  Real sum = term;
  for (int k = 2; k < 40; ++k) {
    term *= x2 / Real((2 * k) * (2 * k + 1));
    sum += term;
    if (term < std::numeric_limits<Real>::epsilon() * sum) break;
  }
  return sum;
}

// acosh(1 + d) via asinh, accurate for d near 0 where std::acosh loses digits
inline double acosh1p(double d) {
  if (d < 0) throw domain_error("acosh1p: negative argument");
  return std::asinh(std::sqrt(d * (2.0 + d)));
}

// ---------------------------------------------------------------------------
// Gauss(7)-Kronrod(15) adaptive quadrature, absolute-tolerance driven.

namespace detail {
// nodes on [0,1] side of the symmetric rule; columns: node, G7 weight, K15 weight
inline constexpr double gk15[8][3] = {
    {0.000000000000000000, 0.417959183673469388, 0.209482141084727828},
    {0.405845151377397167, 0.381830050505118945, 0.190350578064785410},
    {0.741531185599394440, 0.279705391489276668, 0.140653259715525919},
    {0.949107912342758525, 0.129484966168869693, 0.063092092629978554},
    {0.207784955007898468, 0.0,                  0.204432940075298892},
    {0.586087235467691130, 0.0,                  0.169004726639267903},
    {0.864864423359769073, 0.0,                  0.104790010322250184},
    {0.991455371120812639, 0.0,                  0.022935322010529225},
};

template <class F>
void gk15_panel(const F& f, double a, double b, double& k15, double& err) {
  const double c = 0.5 * (a + b);
  const double m = 0.5 * (b - a);
  double y0 = f(c);
  double g7 = gk15[0][1] * y0;
  double k = gk15[0][2] * y0;
  for (int i = 1; i < 8; ++i) {
    double dx = m * gk15[i][0];
    double yi = f(c + dx) + f(c - dx);
    g7 += gk15[i][1] * yi;
    k += gk15[i][2] * yi;
  }
  k15 = k * m;
  err = std::abs((k - g7) * m);
}
}  // namespace detail

// Integrate f over [a,b] to absolute tolerance abs_tol.  Deterministic: the
// subdivision order depends only on (f, a, b, abs_tol).
template <class F>
double integrate_gk(const F& f, double a, double b, double abs_tol,
                    int max_intervals = 4000) {
  if (a == b) return 0.0;
  struct Seg {
    double a, b, val, err;
  };
  std::vector<Seg> stack;
  stack.reserve(64);
  double v, e;
  detail::gk15_panel(f, a, b, v, e);
  stack.push_back({a, b, v, e});
  double total = v;
  double total_err = e;
  int used = 1;
  while (total_err > abs_tol) {
    // split the worst segment
    std::size_t worst = 0;
    for (std::size_t i = 1; i < stack.size(); ++i)
      if (stack[i].err > stack[worst].err) worst = i;
    Seg s = stack[worst];
    if (used >= max_intervals || s.b - s.a < 1e-15 * std::abs(b - a))
      throw quadrature_error("integrate_gk: tolerance not reached");
    double mid = 0.5 * (s.a + s.b);
    Seg l{s.a, mid, 0, 0}, r{mid, s.b, 0, 0};
    detail::gk15_panel(f, l.a, l.b, l.val, l.err);
    detail::gk15_panel(f, r.a, r.b, r.val, r.err);
    total += l.val + r.val - s.val;
    total_err += l.err + r.err - s.err;
    stack[worst] = l;
    stack.push_back(r);
    ++used;
  }
  return total;
}

// Fixed composite 16-point Gauss-Legendre.  Spectrally accurate for smooth
// integrands and, unlike the adaptive rule, varies smoothly with the
// endpoints; finite-difference oracles built on integrals use this one.
namespace detail {
inline constexpr double gl16_x[8] = {
    0.095012509837637440185, 0.281603550779258913230, 0.458016777657227386342,
    0.617876244402643748447, 0.755404408355003033895, 0.865631202387831743880,
    0.944575023073232576078, 0.989400934991649932596};
inline constexpr double gl16_w[8] = {
    0.189450610455068496285, 0.182603415044923588867, 0.169156519395002538189,
    0.149595988816576732081, 0.124628971255533872052, 0.095158511682492784810,
    0.062253523938647892863, 0.027152459411754094852};
}  // namespace detail

template <class F>
double integrate_gl16(const F& f, double a, double b, int panels) {
  double sum = 0.0;
  const double w = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * w;
    const double m = 0.5 * w;
    double s = 0.0;
    for (int i = 0; i < 8; ++i) {
      double dx = m * detail::gl16_x[i];
      s += detail::gl16_w[i] * (f(c + dx) + f(c - dx));
    }
    sum += s * m;
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Safeguarded Newton: bisection fallback on a bracketing interval.

template <class F, class DF>
double newton_safeguarded(const F& f, const DF& df, double x0, double lo,
                          double hi, double rel_tol, int max_iter = 100) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw domain_error("newton_safeguarded: interval does not bracket a root");
  double x = x0;
  if (x < lo || x > hi) x = 0.5 * (lo + hi);
  for (int it = 0; it < max_iter; ++it) {
    double fx = f(x);
    if (fx == 0.0) return x;
    if ((fx > 0) == (fhi > 0))
      hi = x;
    else
      lo = x;
    double d = df(x);
    double step = (d != 0.0) ? fx / d : std::numeric_limits<double>::infinity();
    double xn = x - step;
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);  // bisect
    if (std::abs(xn - x) <= rel_tol * std::abs(xn)) return xn;
    x = xn;
  }
  throw convergence_error("newton_safeguarded: no convergence");
}

// ---------------------------------------------------------------------------
// Central difference with one Richardson step: O(h^4) truncation.

template <class F>
double fd_derivative(const F& f, double x, double h) {
  auto d = [&](double hh) { return (f(x + hh) - f(x - hh)) / (2.0 * hh); };
  double d1 = d(h), d2 = d(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

}  // namespace conifold
