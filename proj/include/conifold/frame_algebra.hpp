#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

#include "conifold/errors.hpp"

namespace conifold {

using cplx = std::complex<double>;

// Exterior algebra over the complex coframe {l1, l2, l3, lb1, lb2, lb3}.
// A monomial is a 6-bit mask: bits 0..2 are l1..l3, bits 3..5 are lb1..lb3;
// the stored coefficient refers to the factors multiplied in ascending bit
// order.  Wedge products reorder with the usual sign.
class FrameForm {
 public:
  FrameForm() : c_{} {}

  static FrameForm zero() { return FrameForm(); }
  static FrameForm scalar(cplx v) {
    FrameForm f;
    f.c_[0] = v;
    return f;
  }
  static FrameForm lambda(int i);       // l_i, i in 1..3
  static FrameForm lambda_bar(int i);   // conj(l_i)
  static FrameForm lambda_pair(int k, int l);  // l_{k lbar} = i l_k ^ lb_l

  cplx coeff(unsigned mask) const { return c_[mask]; }
  void set_coeff(unsigned mask, cplx v) { c_[mask] = v; }

  FrameForm& operator+=(const FrameForm& o);
  FrameForm& operator-=(const FrameForm& o);
  FrameForm& operator*=(cplx s);
  friend FrameForm operator+(FrameForm a, const FrameForm& b) { return a += b; }
  friend FrameForm operator-(FrameForm a, const FrameForm& b) { return a -= b; }
  friend FrameForm operator*(FrameForm a, cplx s) { return a *= s; }
  friend FrameForm operator*(cplx s, FrameForm a) { return a *= s; }

  FrameForm conjugated() const;
  bool is_zero(double tol = 0.0) const;
  bool is_real(double tol = 1e-12) const;
  // pure (p,q) type; throws type_error when the form mixes degrees
  void type(int& p, int& q) const;
  bool is_pure(int p, int q) const;
  double max_abs_coeff() const;

 private:
  std::array<cplx, 64> c_;
};

// graded product; throws degree_error past the top degree 6
FrameForm wedge(const FrameForm& a, const FrameForm& b);

// The nine real-basis (2,2)-forms L_{i jbar} built from
//   L_{i jbar} = l_{k kbar} ^ l_{l1 l2bar},  {i,k,l1} = {j,k,l2} = {1,2,3};
// for i = j the two admissible assignments agree and k = min({1,2,3}\{i}).
FrameForm lambda_capital(int i, int j);  // i, j in 1..3

using Lambda22 = Eigen::Matrix3cd;

// exact change of basis for pure (2,2) forms; round-trips with from_lambda22
Lambda22 to_lambda22(const FrameForm& f);
FrameForm from_lambda22(const Lambda22& e);

// (1,1) forms as 3x3 matrices: F = sum g_{ij} l_{i jbar}
FrameForm from_one_one(const Eigen::Matrix3cd& g);
Eigen::Matrix3cd to_one_one(const FrameForm& f);

enum class Positivity { positive, semidefinite, indefinite };

struct PositivityResult {
  Positivity cls = Positivity::indefinite;
  std::array<double, 3> minors{};  // leading principal minors of [e_ij]
  double min_eigenvalue = 0.0;
};

// Sylvester test on the associated Hermitian matrix; zero tolerance 1e-12
// relative to the matrix scale
PositivityResult positivity(const Lambda22& e);
PositivityResult positivity(const FrameForm& f);  // real (2,2) forms

// Pointwise square root: the positive (1,1) form w with w ^ w = Omega.
// Newton iteration on the nine real parameters of the Hermitian coefficient
// matrix, seeded from the square root of the diagonal of [e_ij].
FrameForm form_square_root(const FrameForm& Omega, double tol = 1e-12,
                           int max_iter = 100);

}  // namespace conifold
