#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mixplast {

// Symmetric second-order tensors in Voigt storage.
//
// Component order per spatial dimension:
//   dim 1: (xx)                       scalar deviatoric idealization
//   dim 2: (xx, yy, zz, xy)           plane strain; the out-of-plane normal
//                                     component is stored so that plastic
//                                     incompressibility tr(eps_p) = 0 holds
//                                     in the 3D sense
//   dim 3: (xx, yy, zz, xy, yz, xz)
//
// Shear components store the tensor value (eps_xy, not the engineering
// 2*eps_xy). double_contract() applies the weight 2 on shear slots; this is
// the single place where the factor two lives.
//
// dim 1 conventions: trace() is defined as 0 and deviator() is the identity.
// The single component is read as the amplitude of a purely deviatoric mode,
// which is what makes the scalar kinematic-hardening model expressible.

inline constexpr int voigt_size(int dim) { return dim == 1 ? 1 : (dim == 2 ? 4 : 6); }

class SymTensor2 {
 public:
  SymTensor2() = default;
  explicit SymTensor2(int dim);
  SymTensor2(int dim, std::span<const double> voigt);

  static SymTensor2 zero(int dim) { return SymTensor2(dim); }
  // In-plane identity: ones on the first `dim` diagonal slots (zz = 0 in 2D).
  static SymTensor2 identity(int dim);

  int dim() const { return dim_; }
  int size() const { return voigt_size(dim_); }

  double operator[](int i) const { return v_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return v_[static_cast<std::size_t>(i)]; }

  Eigen::VectorXd voigt() const;
  static SymTensor2 from_voigt(int dim, const Eigen::VectorXd& v);

  // xx + yy + zz (0 by convention in dim 1).
  double trace() const;

  SymTensor2& operator+=(const SymTensor2& o);
  SymTensor2& operator-=(const SymTensor2& o);
  SymTensor2& operator*=(double s);

  friend SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
  friend SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return a -= b; }
  friend SymTensor2 operator*(SymTensor2 a, double s) { return a *= s; }
  friend SymTensor2 operator*(double s, SymTensor2 a) { return a *= s; }
  friend SymTensor2 operator-(SymTensor2 a) { return a *= -1.0; }

  bool operator==(const SymTensor2& o) const = default;

 private:
  int dim_ = 3;
  std::array<double, 6> v_{};  // unused slots stay zero
};

// A : B with weight 2 on shear components.
double double_contract(const SymTensor2& a, const SymTensor2& b);

// sqrt(A : A)
double norm(const SymTensor2& a);

// A - tr(A)/3 * I3 (identity in dim 1; tracks zz in dim 2).
SymTensor2 deviator(const SymTensor2& a);

// A / ||A|| when ||A|| > tol, zero tensor otherwise.
SymTensor2 tensor_sign(const SymTensor2& a, double tol);

// Fourth-order stiffness with major and minor symmetries, stored as the
// Voigt matrix acting on tensor-component vectors (so the shear diagonal of
// an isotropic tensor is 2*mu, and apply() is a plain matrix-vector
// product). Isotropic instances also carry their (3K, 2mu) eigenvalues; all
// stiffnesses built from isotropic_stiffness and Reuss mixtures of them stay
// isotropic, and those paths then cost O(1) instead of a matrix solve.
class Stiffness4 {
 public:
  Stiffness4() = default;
  Stiffness4(int dim, Eigen::MatrixXd voigt_matrix);

  static Stiffness4 isotropic(int dim, double kappa3, double mu2);

  int dim() const { return dim_; }
  const Eigen::MatrixXd& matrix() const { return m_; }

  bool is_isotropic() const { return iso_; }
  double kappa3() const { return kappa3_; }  // 3K (volumetric eigenvalue)
  double mu2() const { return mu2_; }        // 2mu (deviatoric eigenvalue)

  SymTensor2 apply(const SymTensor2& a) const;
  Stiffness4 inverse() const;

  // min eigenvalue of the tensor operator restricted to symmetric tensors
  // (weighted representation; > 0 means positive definite).
  double min_eigenvalue() const;
  bool is_positive_definite() const { return min_eigenvalue() > 0.0; }

  // In-plane 3x3 engineering-convention matrix (xx, yy, xy with gamma = 2
  // eps_xy), the form FEM B-matrix assembly expects. dim 2 only.
  Eigen::Matrix3d in_plane_engineering() const;

 private:
  int dim_ = 3;
  Eigen::MatrixXd m_;
  bool iso_ = false;
  double kappa3_ = 0.0;
  double mu2_ = 0.0;
};

// A : C : B (Voigt weights included).
double quad_form(const SymTensor2& a, const Stiffness4& c, const SymTensor2& b);

// Standard isotropic stiffness from Young's modulus and Poisson ratio.
// dim 1 returns the 1x1 matrix [E] (nu ignored); dim 2 is the plane-strain
// restriction of the 3D tensor on (xx, yy, zz, xy).
Stiffness4 isotropic_stiffness(double E, double nu, int dim);

}  // namespace mixplast
