#include "mixplast/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace mixplast {

namespace {

void check_dim(int dim) {
  if (dim != 1 && dim != 2 && dim != 3)
    throw std::invalid_argument("SymTensor2: dim must be 1, 2 or 3");
}

// Contraction weights per Voigt slot.
const double* weights(int dim) {
  static const double w1[1] = {1.0};
  static const double w2[4] = {1.0, 1.0, 1.0, 2.0};
  static const double w3[6] = {1.0, 1.0, 1.0, 2.0, 2.0, 2.0};
  return dim == 1 ? w1 : (dim == 2 ? w2 : w3);
}

int normal_count(int dim) { return dim == 1 ? 1 : 3; }

}  // namespace

SymTensor2::SymTensor2(int dim) : dim_(dim) {
  check_dim(dim);
  v_.fill(0.0);
}

SymTensor2::SymTensor2(int dim, std::span<const double> voigt) : SymTensor2(dim) {
  if (static_cast<int>(voigt.size()) != size())
    throw std::invalid_argument("SymTensor2: wrong Voigt length");
  for (int i = 0; i < size(); ++i) v_[static_cast<std::size_t>(i)] = voigt[static_cast<std::size_t>(i)];
}

SymTensor2 SymTensor2::identity(int dim) {
  SymTensor2 t(dim);
  for (int i = 0; i < (dim == 1 ? 1 : dim); ++i) t[i] = 1.0;
  return t;
}

Eigen::VectorXd SymTensor2::voigt() const {
  Eigen::VectorXd v(size());
  for (int i = 0; i < size(); ++i) v[i] = v_[static_cast<std::size_t>(i)];
  return v;
}

SymTensor2 SymTensor2::from_voigt(int dim, const Eigen::VectorXd& v) {
  SymTensor2 t(dim);
  if (v.size() != t.size()) throw std::invalid_argument("SymTensor2: wrong Voigt length");
  for (int i = 0; i < t.size(); ++i) t[i] = v[i];
  return t;
}

double SymTensor2::trace() const {
  if (dim_ == 1) return 0.0;
  return v_[0] + v_[1] + v_[2];
}

SymTensor2& SymTensor2::operator+=(const SymTensor2& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("SymTensor2: dimension mismatch");
  for (int i = 0; i < size(); ++i) v_[static_cast<std::size_t>(i)] += o.v_[static_cast<std::size_t>(i)];
  return *this;
}

SymTensor2& SymTensor2::operator-=(const SymTensor2& o) {
  if (dim_ != o.dim_) throw std::invalid_argument("SymTensor2: dimension mismatch");
  for (int i = 0; i < size(); ++i) v_[static_cast<std::size_t>(i)] -= o.v_[static_cast<std::size_t>(i)];
  return *this;
}

SymTensor2& SymTensor2::operator*=(double s) {
  for (int i = 0; i < size(); ++i) v_[static_cast<std::size_t>(i)] *= s;
  return *this;
}

double double_contract(const SymTensor2& a, const SymTensor2& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("double_contract: dimension mismatch");
  const double* w = weights(a.dim());
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
  return s;
}

double norm(const SymTensor2& a) { return std::sqrt(double_contract(a, a)); }

SymTensor2 deviator(const SymTensor2& a) {
  if (a.dim() == 1) return a;
  SymTensor2 d = a;
  const double t = a.trace() / 3.0;
  d[0] -= t;
  d[1] -= t;
  d[2] -= t;
  return d;
}

SymTensor2 tensor_sign(const SymTensor2& a, double tol) {
  if (tol <= 0.0) throw std::invalid_argument("tensor_sign: tol must be > 0");
  const double n = norm(a);
  if (n <= tol) return SymTensor2::zero(a.dim());
  return a * (1.0 / n);
}

Stiffness4::Stiffness4(int dim, Eigen::MatrixXd voigt_matrix) : dim_(dim), m_(std::move(voigt_matrix)) {
  check_dim(dim);
  const int n = voigt_size(dim);
  if (m_.rows() != n || m_.cols() != n)
    throw std::invalid_argument("Stiffness4: wrong Voigt matrix size");
}

Stiffness4 Stiffness4::isotropic(int dim, double kappa3, double mu2) {
  check_dim(dim);
  const int n = voigt_size(dim);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (dim == 1) {
    m(0, 0) = mu2;
  } else {
    const int nn = normal_count(dim);
    for (int i = 0; i < nn; ++i)
      for (int j = 0; j < nn; ++j) m(i, j) = kappa3 / 3.0 - mu2 / 3.0 + (i == j ? mu2 : 0.0);
    for (int i = nn; i < n; ++i) m(i, i) = mu2;
  }
  Stiffness4 c(dim, std::move(m));
  c.iso_ = true;
  c.kappa3_ = kappa3;
  c.mu2_ = mu2;
  return c;
}

SymTensor2 Stiffness4::apply(const SymTensor2& a) const {
  if (a.dim() != dim_) throw std::invalid_argument("Stiffness4: dimension mismatch");
  if (iso_) {
    SymTensor2 r = deviator(a) * mu2_;
    if (dim_ > 1) {
      const double p = kappa3_ * a.trace() / 3.0;
      r[0] += p;
      r[1] += p;
      r[2] += p;
    }
    return r;
  }
  return SymTensor2::from_voigt(dim_, m_ * a.voigt());
}

Stiffness4 Stiffness4::inverse() const {
  if (iso_) return isotropic(dim_, 1.0 / kappa3_, 1.0 / mu2_);
  return Stiffness4(dim_, m_.inverse());
}

double Stiffness4::min_eigenvalue() const {
  if (iso_) return dim_ == 1 ? mu2_ : std::min(kappa3_, mu2_);
  const int n = voigt_size(dim_);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = weights(dim_)[i];
  // quadratic form x:C:x = x^T W C x; eigenvalues of the similar symmetric
  // matrix W^{1/2} C W^{-1/2} symmetrized
  Eigen::MatrixXd s = w.cwiseSqrt().asDiagonal() * m_ * w.cwiseSqrt().cwiseInverse().asDiagonal();
  s = 0.5 * (s + s.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  return es.eigenvalues().minCoeff();
}

Eigen::Matrix3d Stiffness4::in_plane_engineering() const {
  if (dim_ != 2) throw std::logic_error("in_plane_engineering: dim 2 only");
  const int idx[3] = {0, 1, 3};  // xx, yy, xy
  Eigen::Matrix3d d;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) d(r, c) = m_(idx[r], idx[c]) * (c == 2 ? 0.5 : 1.0);
  return d;
}

double quad_form(const SymTensor2& a, const Stiffness4& c, const SymTensor2& b) {
  return double_contract(a, c.apply(b));
}

Stiffness4 isotropic_stiffness(double E, double nu, int dim) {
  check_dim(dim);
  if (E <= 0.0) throw std::invalid_argument("isotropic_stiffness: E must be > 0");
  if (!(nu > -1.0 && nu < 0.5)) throw std::invalid_argument("isotropic_stiffness: nu out of (-1, 0.5)");
  if (dim == 1) return Stiffness4::isotropic(1, E, E);
  const double kappa3 = E / (1.0 - 2.0 * nu);
  const double mu2 = E / (1.0 + nu);
  return Stiffness4::isotropic(dim, kappa3, mu2);
}

}  // namespace mixplast
