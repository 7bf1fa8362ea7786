#include "conifold/frame_algebra.hpp"

#include <bit>
#include <cmath>

namespace conifold {

namespace {

constexpr cplx kI{0.0, 1.0};

int degree_of(unsigned mask) { return std::popcount(mask); }

// sign of merging two ascending factor lists: parity of crossings
int merge_sign(unsigned a, unsigned b) {
  int inversions = 0;
  for (int bit = 0; bit < 6; ++bit)
    if (b & (1u << bit)) inversions += std::popcount(a >> (bit + 1));
  return (inversions & 1) ? -1 : 1;
}

}  // namespace

FrameForm FrameForm::lambda(int i) {
  if (i < 1 || i > 3) throw domain_error("FrameForm::lambda: index in 1..3");
  FrameForm f;
  f.c_[1u << (i - 1)] = 1.0;
  return f;
}

FrameForm FrameForm::lambda_bar(int i) {
  if (i < 1 || i > 3)
    throw domain_error("FrameForm::lambda_bar: index in 1..3");
  FrameForm f;
  f.c_[1u << (i + 2)] = 1.0;
  return f;
}

FrameForm FrameForm::lambda_pair(int k, int l) {
  return wedge(lambda(k), lambda_bar(l)) * kI;
}

FrameForm& FrameForm::operator+=(const FrameForm& o) {
  for (int m = 0; m < 64; ++m) c_[m] += o.c_[m];
  return *this;
}

FrameForm& FrameForm::operator-=(const FrameForm& o) {
  for (int m = 0; m < 64; ++m) c_[m] -= o.c_[m];
  return *this;
}

FrameForm& FrameForm::operator*=(cplx s) {
  for (int m = 0; m < 64; ++m) c_[m] *= s;
  return *this;
}

FrameForm FrameForm::conjugated() const {
  FrameForm out;
  for (unsigned m = 0; m < 64; ++m) {
    if (c_[m] == 0.0) continue;
    unsigned holo = m & 7u, anti = (m >> 3) & 7u;
    unsigned cm = (anti) | (holo << 3);
    int p = std::popcount(holo), q = std::popcount(anti);
    double sign = ((p * q) & 1) ? -1.0 : 1.0;
    out.c_[cm] += sign * std::conj(c_[m]);
  }
  return out;
}

bool FrameForm::is_zero(double tol) const {
  for (const cplx& v : c_)
    if (std::abs(v) > tol) return false;
  return true;
}

bool FrameForm::is_real(double tol) const {
  FrameForm d = conjugated();
  d -= *this;
  return d.is_zero(tol * (1.0 + max_abs_coeff()));
}

void FrameForm::type(int& p, int& q) const {
  p = -1;
  q = -1;
  for (unsigned m = 0; m < 64; ++m) {
    if (c_[m] == 0.0) continue;
    int mp = std::popcount(m & 7u), mq = std::popcount((m >> 3) & 7u);
    if (p < 0) {
      p = mp;
      q = mq;
    } else if (p != mp || q != mq) {
      throw type_error("FrameForm::type: mixed type");
    }
  }
  if (p < 0) p = q = 0;  // zero form
}

bool FrameForm::is_pure(int p, int q) const {
  for (unsigned m = 0; m < 64; ++m) {
    if (c_[m] == 0.0) continue;
    if (std::popcount(m & 7u) != p || std::popcount((m >> 3) & 7u) != q)
      return false;
  }
  return true;
}

double FrameForm::max_abs_coeff() const {
  double mx = 0.0;
  for (const cplx& v : c_) mx = std::max(mx, std::abs(v));
  return mx;
}

FrameForm wedge(const FrameForm& a, const FrameForm& b) {
  FrameForm out;
  for (unsigned ma = 0; ma < 64; ++ma) {
    cplx ca = a.coeff(ma);
    if (ca == 0.0) continue;
    for (unsigned mb = 0; mb < 64; ++mb) {
      cplx cb = b.coeff(mb);
      if (cb == 0.0) continue;
      if (degree_of(ma) + degree_of(mb) > 6)
        throw degree_error("wedge: degree exceeds 6");
      if (ma & mb) continue;  // repeated factor
      out.set_coeff(ma | mb, out.coeff(ma | mb) +
                                 static_cast<double>(merge_sign(ma, mb)) * ca *
                                     cb);
    }
  }
  return out;
}

FrameForm lambda_capital(int i, int j) {
  if (i < 1 || i > 3 || j < 1 || j > 3)
    throw domain_error("lambda_capital: indices in 1..3");
  int k, l1, l2;
  if (i == j) {
    k = (i == 1) ? 2 : 1;
    l1 = l2 = 6 - i - k;
  } else {
    k = 6 - i - j;
    l1 = j;
    l2 = i;
  }
  return wedge(FrameForm::lambda_pair(k, k), FrameForm::lambda_pair(l1, l2));
}

namespace {

struct LambdaTable {
  unsigned mask[3][3];
  cplx coeff[3][3];
  LambdaTable() {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        FrameForm f = lambda_capital(i + 1, j + 1);
        unsigned found = 0;
        int count = 0;
        for (unsigned m = 0; m < 64; ++m)
          if (f.coeff(m) != 0.0) {
            found = m;
            ++count;
          }
        // each capital Lambda is a single signed monomial
        if (count != 1) throw verification_error("LambdaTable: not monomial");
        mask[i][j] = found;
        coeff[i][j] = f.coeff(found);
      }
  }
};

const LambdaTable& lambda_table() {
  static const LambdaTable table;
  return table;
}

}  // namespace

Lambda22 to_lambda22(const FrameForm& f) {
  if (!f.is_pure(2, 2)) throw type_error("to_lambda22: not a pure (2,2) form");
  const LambdaTable& tab = lambda_table();
  Lambda22 e = Lambda22::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      e(i, j) = f.coeff(tab.mask[i][j]) / tab.coeff[i][j];
  return e;
}

FrameForm from_lambda22(const Lambda22& e) {
  const LambdaTable& tab = lambda_table();
  FrameForm f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      f.set_coeff(tab.mask[i][j],
                  f.coeff(tab.mask[i][j]) + e(i, j) * tab.coeff[i][j]);
  return f;
}

FrameForm from_one_one(const Eigen::Matrix3cd& g) {
  FrameForm f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (g(i, j) == 0.0) continue;
      f += g(i, j) * FrameForm::lambda_pair(i + 1, j + 1);
    }
  return f;
}

Eigen::Matrix3cd to_one_one(const FrameForm& f) {
  if (!f.is_pure(1, 1)) throw type_error("to_one_one: not a pure (1,1) form");
  Eigen::Matrix3cd g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      unsigned mask = (1u << i) | (1u << (j + 3));
      // l_{i jbar} = i l_i ^ lb_j has canonical coefficient i
      g(i, j) = f.coeff(mask) / kI;
    }
  return g;
}

PositivityResult positivity(const Lambda22& e) {
  double scale = e.cwiseAbs().maxCoeff();
  double herm_dev = (e - e.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-10 * (1.0 + scale))
    throw type_error("positivity: coefficient matrix is not Hermitian");
  // Pairing the form against i l_j ^ lb_k relative to the volume form flips
  // the sign of the off-diagonal Lambda coefficients; the Sylvester test runs
  // on that Gram matrix.  For a square w^2 it equals 2 adj(g)^T exactly.
  Lambda22 h = 0.5 * (e + e.adjoint());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) h(i, j) = -h(i, j);

  PositivityResult out;
  out.minors[0] = h(0, 0).real();
  out.minors[1] = (h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)).real();
  out.minors[2] = h.determinant().real();
  Eigen::SelfAdjointEigenSolver<Lambda22> es(h, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();

  const double tol = 1e-12 * (1.0 + scale);
  if (out.minors[0] > tol && out.minors[1] > tol && out.minors[2] > tol)
    out.cls = Positivity::positive;
  else if (out.min_eigenvalue >= -tol)
    out.cls = Positivity::semidefinite;
  else
    out.cls = Positivity::indefinite;
  return out;
}

PositivityResult positivity(const FrameForm& f) {
  if (!f.is_real(1e-10)) throw type_error("positivity: form is not real");
  return positivity(to_lambda22(f));
}

namespace {

Eigen::Matrix3cd hermitian_from_params(const Eigen::Matrix<double, 9, 1>& x) {
  Eigen::Matrix3cd g;
  g(0, 0) = x(0);
  g(1, 1) = x(1);
  g(2, 2) = x(2);
  g(0, 1) = cplx(x(3), x(4));
  g(1, 0) = std::conj(g(0, 1));
  g(0, 2) = cplx(x(5), x(6));
  g(2, 0) = std::conj(g(0, 2));
  g(1, 2) = cplx(x(7), x(8));
  g(2, 1) = std::conj(g(1, 2));
  return g;
}

Eigen::Matrix<double, 9, 1> params_from_lambda22(const Lambda22& e) {
  Eigen::Matrix<double, 9, 1> r;
  r(0) = e(0, 0).real();
  r(1) = e(1, 1).real();
  r(2) = e(2, 2).real();
  r(3) = e(0, 1).real();
  r(4) = e(0, 1).imag();
  r(5) = e(0, 2).real();
  r(6) = e(0, 2).imag();
  r(7) = e(1, 2).real();
  r(8) = e(1, 2).imag();
  return r;
}

}  // namespace

FrameForm form_square_root(const FrameForm& Omega, double tol, int max_iter) {
  PositivityResult pos = positivity(Omega);
  if (pos.cls != Positivity::positive)
    throw positivity_error("form_square_root: input form is not positive");
  Lambda22 target = to_lambda22(Omega);
  const double scale = target.cwiseAbs().maxCoeff();

  // Seed from the adjugate identity: the Gram matrix of w^2 is 2 adj(g)^T,
  // and adj(adj(M)) = det(M) M in dimension 3, so the root is available in
  // closed form up to rounding.  Newton below certifies the coefficient-wise
  // tolerance.
  Lambda22 gram = target;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) gram(i, j) = -gram(i, j);
  Eigen::Matrix3cd N = 0.5 * gram.transpose();
  double detN = N.determinant().real();
  if (!(detN > 0.0))
    throw positivity_error("form_square_root: degenerate input");
  Eigen::Matrix3cd g =
      (N.determinant() * N.inverse()) / std::sqrt(detN);

  auto q_of = [](const Eigen::Matrix3cd& m) {
    FrameForm w = from_one_one(m);
    return to_lambda22(wedge(w, w));
  };

  Eigen::Matrix<double, 9, 1> basis_unit;
  double resid = (q_of(g) - target).cwiseAbs().maxCoeff();
  for (int it = 0; it < max_iter; ++it) {
    if (resid <= tol * (1.0 + scale)) {
      FrameForm w = from_one_one(g);
      if (positivity(wedge(w, w)).cls != Positivity::positive ||
          g.selfadjointView<Eigen::Lower>().eigenvalues().real().minCoeff() <=
              0.0)
        throw convergence_error("form_square_root: converged outside the positive cone");
      return w;
    }
    // Newton: dQ(g)[H] = 2 Lambda(w_g ^ w_H), solved on 9 real parameters
    FrameForm wg = from_one_one(g);
    Eigen::Matrix<double, 9, 9> J;
    for (int k = 0; k < 9; ++k) {
      basis_unit.setZero();
      basis_unit(k) = 1.0;
      Eigen::Matrix3cd H = hermitian_from_params(basis_unit);
      Lambda22 col = 2.0 * to_lambda22(wedge(wg, from_one_one(H)));
      J.col(k) = params_from_lambda22(col);
    }
    Eigen::Matrix<double, 9, 1> rhs = params_from_lambda22(target - q_of(g));
    Eigen::Matrix<double, 9, 1> step = J.colPivHouseholderQr().solve(rhs);
    // backtracking on the residual
    double lam = 1.0;
    for (int bt = 0; bt < 30; ++bt) {
      Eigen::Matrix3cd gn =
          g + hermitian_from_params((lam * step).eval());
      double rn = (q_of(gn) - target).cwiseAbs().maxCoeff();
      if (rn < resid) {
        g = gn;
        resid = rn;
        break;
      }
      lam *= 0.5;
      if (bt == 29)
        throw convergence_error("form_square_root: line search stalled");
    }
  }
  throw convergence_error("form_square_root: no convergence");
}

}  // namespace conifold
