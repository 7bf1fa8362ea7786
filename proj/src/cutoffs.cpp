#include "conifold/cutoffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace conifold {

ChiSpec build_chi(int n) {
  if (n < 4) throw domain_error("build_chi: n >= 4 required");
  ChiSpec sp;
  sp.n = n;
  sp.c1 = std::pow(2.0, 4.0 / 3.0);
  sp.c3 = std::pow(n - 1.0, 4.0 / 3.0);
  sp.c4 = std::pow(static_cast<double>(n), 4.0 / 3.0);
  // 2 phi' + s phi'' = 0 with x = s - c1 reads 12 x^2 + 6 c1 x - 2 = 0
  sp.x2 = (-6.0 * sp.c1 + std::sqrt(36.0 * sp.c1 * sp.c1 + 96.0)) / 24.0;
  sp.c2 = sp.c1 + sp.x2;
  double chi1_c2 = 1.0 - 3.0 * sp.x2 * sp.x2;  // phi'(c2)
  sp.tau_const = sp.c2 * sp.c2 * chi1_c2;
  sp.chi_c2 = sp.c1 + sp.x2 - sp.x2 * sp.x2 * sp.x2;
  sp.chi_c3 = sp.chi_c2 + sp.c2 * chi1_c2 - sp.tau_const / sp.c3;

  double tau = sp.tau_const, c3 = sp.c3, c4 = sp.c4, D = c4 - c3;
  sp.a0 = tau / (c3 * c3);
  sp.a1 = -2.0 * tau / (c3 * c3 * c3);
  sp.a2 = tau * (4.0 * c4 - 7.0 * c3) / (c3 * c3 * c3 * D * D);
  sp.a3 = 2.0 * tau * (2.0 * c3 - c4) / (c3 * c3 * c3 * D * D * D);
  sp.final_value = sp.chi_c3 + sp.a0 * D + sp.a1 * D * D / 2.0 +
                   sp.a2 * D * D * D / 3.0 + sp.a3 * D * D * D * D / 4.0;
  return sp;
}

double chi_eval(const ChiSpec& sp, double s, int deriv) {
  if (s < 0.0) throw domain_error("chi_eval: s must be nonnegative");
  if (deriv < 0 || deriv > 2) throw domain_error("chi_eval: deriv in 0..2");
  if (s <= sp.c1) {
    if (deriv == 0) return s;
    return deriv == 1 ? 1.0 : 0.0;
  }
  if (s <= sp.c2) {
    double x = s - sp.c1;
    if (deriv == 0) return sp.c1 + x - x * x * x;
    if (deriv == 1) return 1.0 - 3.0 * x * x;
    return -6.0 * x;
  }
  if (s <= sp.c3) {
    if (deriv == 0)
      return sp.chi_c2 + sp.c2 * (1.0 - 3.0 * sp.x2 * sp.x2) -
             sp.tau_const / s;
    if (deriv == 1) return sp.tau_const / (s * s);
    return -2.0 * sp.tau_const / (s * s * s);
  }
  if (s <= sp.c4) {
    double x = s - sp.c3;
    if (deriv == 0)
      return sp.chi_c3 + sp.a0 * x + sp.a1 * x * x / 2.0 +
             sp.a2 * x * x * x / 3.0 + sp.a3 * x * x * x * x / 4.0;
    if (deriv == 1)
      return sp.a0 + sp.a1 * x + sp.a2 * x * x + sp.a3 * x * x * x;
    return sp.a1 + 2.0 * sp.a2 * x + 3.0 * sp.a3 * x * x;
  }
  return deriv == 0 ? sp.final_value : 0.0;
}

double smoothstep_eval(const SmoothStep& st, double s, int deriv) {
  if (!(st.lo < st.hi)) throw domain_error("smoothstep_eval: lo < hi required");
  if (deriv < 0 || deriv > 2)
    throw domain_error("smoothstep_eval: deriv in 0..2");
  const double w = st.hi - st.lo;
  if (s <= st.lo) return deriv == 0 ? 1.0 : 0.0;
  if (s >= st.hi) return 0.0;
  double u = (s - st.lo) / w;
  switch (deriv) {
    case 0:
      return 1.0 - u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
    case 1:
      return -30.0 * u * u * (1.0 - u) * (1.0 - u) / w;
    default:
      return (-60.0 * u + 180.0 * u * u - 120.0 * u * u * u) / (w * w);
  }
}

ChiBoundsReport verify_chi_bounds(const std::vector<int>& n_list,
                                  int grid_points) {
  if (n_list.empty()) throw domain_error("verify_chi_bounds: empty n list");
  ChiBoundsReport rep;
  rep.a2_negative = rep.a3_positive = rep.mid_nonnegative = true;
  double c1_min = std::numeric_limits<double>::infinity();
  double c1_max = 0.0;
  for (int n : n_list) {
    if (n < 10) throw domain_error("verify_chi_bounds: n >= 10 required");
    ChiSpec sp = build_chi(n);
    ChiBoundsReport::PerN row;
    row.n = n;
    row.a2 = sp.a2;
    row.a3 = sp.a3;
    auto scan = [&](double lo, double hi, double& min_c1, double& min_comb) {
      min_c1 = std::numeric_limits<double>::infinity();
      min_comb = min_c1;
      for (int i = 0; i <= grid_points; ++i) {
        double s = lo + (hi - lo) * i / grid_points;
        double d1 = chi_eval(sp, s, 1);
        double d2 = chi_eval(sp, s, 2);
        min_c1 = std::min(min_c1, d1);
        min_comb = std::min(min_comb, 2.0 * d1 + s * d2);
      }
    };
    scan(sp.c1, sp.c3, row.min_chi1_mid, row.min_comb_mid);
    scan(sp.c3, sp.c4, row.min_chi1_tail, row.min_comb_tail);
    if (row.min_chi1_mid < -1e-12 || row.min_comb_mid < -1e-12)
      rep.mid_nonnegative = false;
    if (!(sp.a2 < 0.0)) rep.a2_negative = false;
    if (!(sp.a3 > 0.0)) rep.a3_positive = false;

    double p113 = std::pow(n, 11.0 / 3.0);
    double p53 = std::pow(n, 5.0 / 3.0);
    double p103 = std::pow(n, 10.0 / 3.0);
    double deficit_mid = std::max(
        {0.0, -row.min_chi1_mid, -row.min_comb_mid});
    double deficit_tail = std::max(
        {0.0, -row.min_chi1_tail, -row.min_comb_tail});
    row.c1_hat = std::max({p113 * deficit_mid, p53 * deficit_tail,
                           p103 * std::abs(sp.a2), p113 * sp.a3});
    c1_min = std::min(c1_min, row.c1_hat);
    c1_max = std::max(c1_max, row.c1_hat);
    rep.per_n.push_back(row);
  }
  rep.c1_hat = c1_max;
  rep.variation = c1_max > 0.0 ? (c1_max - c1_min) / c1_max : 0.0;
  rep.bounded = rep.variation < 0.20 && rep.mid_nonnegative;
  // a scaled deficit growing with n would mean the lemma's powers are wrong
  if (rep.per_n.size() >= 2) {
    bool growing = true;
    for (std::size_t i = 1; i < rep.per_n.size(); ++i)
      if (rep.per_n[i].c1_hat <= rep.per_n[i - 1].c1_hat) growing = false;
    if (growing && rep.per_n.back().c1_hat > 1.5 * rep.per_n.front().c1_hat)
      throw verification_error("verify_chi_bounds: scaled deficit grows with n");
  }
  return rep;
}

}  // namespace conifold
