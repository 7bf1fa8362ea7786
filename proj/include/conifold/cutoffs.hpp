#pragma once

#include <vector>

#include "conifold/errors.hpp"

namespace conifold {

// Piecewise cutoff chi on [0, inf), C^2 except for chi'' jumps at c3 and c4:
//   [0,  c1]  chi(s) = s,                      c1 = 2^{4/3}
//   [c1, c2]  phi(s) = c1 + (s-c1) - (s-c1)^3
//   [c2, c3]  chi(c2) + c2 chi'(c2) - c2^2 chi'(c2) / s   (2 chi' + s chi'' = 0)
//   [c3, c4]  chi' = psi, the cubic joining chi'(c3), chi''(c3) to (0, 0) at c4
//   [c4, inf) constant
// c2 is the smallest root of 2 phi' + s phi'' on [c1, inf); c3 = (n-1)^{4/3},
// c4 = n^{4/3}; tau_const = c2^2 chi'(c2).
struct ChiSpec {
  int n = 0;
  double c1 = 0, c2 = 0, c3 = 0, c4 = 0;
  double x2 = 0;         // c2 - c1, positive root of 12 x^2 + 6 c1 x - 2 = 0
  double tau_const = 0;  // c2^2 chi'(c2)
  double a0 = 0, a1 = 0, a2 = 0, a3 = 0;  // psi coefficients in (s - c3)
  double chi_c2 = 0, chi_c3 = 0;
  double final_value = 0;  // chi on [c4, inf)
};

ChiSpec build_chi(int n);  // n >= 4 so that c3 > c2

// deriv in 0..2; ties at breakpoints take the left piece
double chi_eval(const ChiSpec& spec, double s, int deriv);

// Quintic smoothstep plateau cutoff: 1 for s <= lo, 0 for s >= hi, monotone
// decreasing, C^2 at the joins.  sigma: lo=1, hi=4.  rho: lo=5/8, hi=7/8.
struct SmoothStep {
  double lo = 0, hi = 1;
  static SmoothStep sigma() { return {1.0, 4.0}; }
  static SmoothStep rho() { return {0.625, 0.875}; }
};

double smoothstep_eval(const SmoothStep& step, double s, int deriv);

// Grid certificates for the chi derivative bounds; the deficits scale as
// n^{-11/3} on [c1, c3] and n^{-5/3} on [c3, c4], and a2, a3 as n^{-10/3},
// n^{-11/3}.  c1_hat(n) is the fitted constant covering all six quantities.
struct ChiBoundsReport {
  struct PerN {
    int n = 0;
    double min_chi1_mid = 0, min_comb_mid = 0;    // on [c1, c3]
    double min_chi1_tail = 0, min_comb_tail = 0;  // on [c3, c4]
    double a2 = 0, a3 = 0;
    double c1_hat = 0;
  };
  std::vector<PerN> per_n;
  double c1_hat = 0;      // max over n
  double variation = 0;   // (max - min) / max of c1_hat(n)
  bool a2_negative = false, a3_positive = false;
  bool mid_nonnegative = false;  // exact law: deficits on [c1,c3] vanish
  bool bounded = false;          // variation below 20%
};

ChiBoundsReport verify_chi_bounds(const std::vector<int>& n_list,
                                  int grid_points = 4000);

}  // namespace conifold
